#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "qrsmem/decode.hpp"
#include "qrsmem/grs.hpp"
#include "qrsmem/noise.hpp"

namespace qrsmem {

// Number of full-support vectors of length k in the kernel of an M-row MDS
// check matrix; 0 for k <= M.
BigInt d_k(std::size_t k, std::size_t M, std::uint64_t q);

// Exact rational check of the identity linking consecutive normalized D_k.
bool d_k_recurrence_check(std::size_t k, std::size_t M, std::uint64_t q);

// Time-like bounds; all require 1 <= M <= d-2.
double tlf_case1(std::size_t n, std::size_t d, std::size_t M, std::uint64_t q, double p_xx);
double tlf_case2(std::size_t n, std::size_t d, std::size_t M, std::uint64_t q, double p_xx);
double tlf_case3(std::size_t d, std::size_t M, std::uint64_t q, double p_cat);

// Extra-check coefficient matrix: an M x (d-1) block beta with [beta | I] of
// distance M+1, columns scaled by nu when given. Throws ReductionFailure if
// the right block of the reduced matrix is singular.
Matrix build_time_like_matrix(const FieldPtr& ctx, std::size_t d, std::size_t M, const Vec* nu, Rng& rng);
// Smallest number of linearly dependent columns (the distance of the code
// with this check matrix), by subset rank checks up to max_weight.
std::size_t check_matrix_distance(const FieldCtx& f, const Matrix& h, std::size_t max_weight);

// Ordered Bell (Fubini) number.
double ordered_bell(std::size_t b);

// Bound on the probability of a weight-e Z error on the block.
double slf_weight_prob(std::size_t e, std::size_t n, double p_static, double p_z_round, double p_x_round);

// Collision-fraction masses sum_k k/(k+1) F_k per (n, d, e), from Monte
// Carlo tables or, when allowed, the expected-collision fallback.
class FractionSource {
public:
    void add(const FractionTable& t);
    bool allow_fallback = false;
    const FractionTable* find(std::size_t n, std::size_t d, std::size_t e) const;
    // Throws MissingFractions if absent and no fallback is allowed.
    double weighted_mass(std::size_t n, std::size_t d, std::size_t e, std::uint64_t q) const;
    std::string origin(std::size_t n, std::size_t d, std::size_t e) const;

private:
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, FractionTable> tables_;
};

struct SpaceLikeRates {
    double p_static = 0;
    double p_z_round = 0;
    double p_x_round = 0;
};

struct SpaceLikeResult {
    double value = 0;
    double truncation_error = 0;  // first omitted tail term
    std::map<std::string, double> terms;
};

// Sum of weight probabilities from weight w upward, stopping once a term falls
// below 1e-3 of the running total; the stopping term is reported, not added.
double slf_tail(std::size_t w, std::size_t n, const SpaceLikeRates& r, double* truncation_error);

// Space-like bound for outer distance d in 3..9.
SpaceLikeResult slf_total(std::size_t n, std::size_t d, std::uint64_t q, const SpaceLikeRates& r,
                          const FractionSource& fractions);

struct MemoryParams {
    std::size_t n = 40;
    std::size_t m = 20;
    std::size_t d = 5;
    std::size_t M = 1;  // extra checks per round
    std::size_t R = 1;  // verification rounds per cat
    std::uint64_t q = 2048;
};

void validate(const MemoryParams& p);

struct FailureBreakdown {
    MemoryParams params;
    double tlf1 = 0, tlf2 = 0, tlf3 = 0, slf = 0, cat_burst = 0;
    double total = 0;
    double ler_per_lqr = 0;
    double slf_truncation_error = 0;
    // Intermediate quantities for auditing.
    double p_zz = 0, p_zz_c2 = 0, p_cat = 0, p_cat_state_failure = 0;
    double tau_cat = 0, n_outer_round = 0;
    SpaceLikeRates space_rates;
    std::map<std::string, double> slf_terms;

    nlohmann::json to_json() const;
};

FailureBreakdown total_failure(const MemoryParams& p, const InstructionRates& rates, const PostSelection& ps,
                               const FractionSource& fractions);

}  // namespace qrsmem
