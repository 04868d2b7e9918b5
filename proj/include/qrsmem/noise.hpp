#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace qrsmem {

struct InstructionRates {
    double p_half = 1.7e-7;
    double p_whole = 1.6e-6;
    double p_inter = 2.8e-6;
    double p_idle = 1.5848931924611134e-9;  // 10^-8.8
    double tau_meas = 120.0;  // timesteps per measurement instruction
    double tau_idle = 8.0;    // timesteps per idle round
};

// Post-selection rates of one condition, per instruction class.
struct ClassRates {
    double half = 0.0;
    double whole = 0.0;
    double inter = 0.0;
};

// Piecewise-linear map from post-selection rate to error-rate multiplier.
// Empty means no reduction (multiplier 1); outside the points the end values hold.
struct ReductionCurve {
    std::vector<std::pair<double, double>> points;
    double at(double rate) const;
};

// Conditions 1..3 with per-class reduction curves; default is trivial.
struct PostSelection {
    ClassRates c1, c2, c3;
    ReductionCurve half, whole, inter;

    const ClassRates& condition(int i) const;
    bool trivial() const;
};

// Mean instruction counts of a compiled operation and its duration in units of tau_meas.
struct OpStats {
    double half;
    double whole;
    double inter;
    double duration;
};

inline constexpr OpStats kQuditZZ{34.0, 12.0, 11.0, 34.0};
inline constexpr OpStats kQuditZaZb{73.05, 56.53, 11.0, 117.58};
inline constexpr double kZaZbLayerDuration = 125.0;

// Probability of any fault in the operation; condition 0 means no post-selection.
double composite_rate(const OpStats& s, const InstructionRates& r, const PostSelection& ps, int condition);
// Probability that the operation survives post-selection at the given rates.
double survival_probability(const OpStats& s, const ClassRates& c);
// Survival of a layer of n qudit ZZ measurements.
double zz_layer_survival(std::size_t n, const ClassRates& c);

// Expected completion time (in units of one successful task) of N parallel
// retryable tasks with success probability p, failures costing half a unit.
// Throws DegenerateP for p <= 0 or p > 1.
double expected_parallel_time(std::size_t n_tasks, double p);
// The same quantity evaluated term by term as an alternating sum (small N only).
double expected_parallel_time_alternating(std::size_t n_tasks, double p);

struct CatTiming {
    double one_layer = 0;   // tau for one layer of offline Z^a Z^b measurements
    double non_ft_cat = 0;  // tau for the non-fault-tolerant preparation
    double cat = 0;         // tau for a verified cat state
    double second_layer_success = 1;
    double zz_layer_success = 1;
};

CatTiming cat_time(std::size_t n, std::size_t rounds, const PostSelection& ps, const InstructionRates& r);

struct CatErrors {
    double p_zz = 0;          // any fault in a qudit ZZ (or XX), no post-selection
    double p_zz_c2 = 0;       // same under condition 2
    double p_zazb_c1 = 0;
    double p_zazb_c3 = 0;
    double p_ft_link = 0;     // any fault surviving in the fault-tolerant link routine
    double weight_bound[4] = {0, 0, 0, 0};  // index w: C(n,w) p_zz_c2^w for w = 1..3
    double cat_state_failure = 0;
    double cat_creation = 0;
    double cat_consumption = 0;
    double cat = 0;
};

CatErrors cat_error_distribution(std::size_t n, std::size_t rounds, const PostSelection& ps, const InstructionRates& r);

// Idle rounds per outer round. Throws DivergentRetry if (d-1+M) p_cat >= 1.
double outer_round_length(std::size_t m, std::size_t d, std::size_t extra_checks, double tau_cat, double p_cat,
                          const InstructionRates& r);

}  // namespace qrsmem
