#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qrsmem/errors.hpp"
#include "qrsmem/noise.hpp"
#include "qrsmem/rng.hpp"

using namespace qrsmem;

namespace {

PostSelection nontrivial_ps() {
    PostSelection ps;
    ps.c1 = {0.003, 0.002, 0.001};
    ps.c2 = {0.0005, 0.0004, 0.0002};
    ps.c3 = {0.002, 0.001, 0.0005};
    ps.half.points = {{0.0, 1.0}, {0.01, 0.5}};
    ps.whole.points = {{0.0, 1.0}, {0.01, 0.6}};
    ps.inter.points = {{0.0, 1.0}, {0.01, 0.8}};
    return ps;
}

// Retry process: every task retries until success, a failure costing half a unit.
double simulate_parallel(std::size_t n, double p, Rng& rng) {
    std::geometric_distribution<int> failures(p);
    int worst = 0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, failures(rng));
    return 1.0 + 0.5 * worst;
}

// Event simulation of verified cat preparation with restarts.
double simulate_cat(std::size_t n, std::size_t rounds, const PostSelection& ps, const InstructionRates& r, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double layer = 125.0 * r.tau_meas, tau_zz = 34.0 * r.tau_meas;
    const double p1 = std::pow(1 - ps.c1.half, 73.05) * std::pow(1 - ps.c1.whole, 56.53) * std::pow(1 - ps.c1.inter, 11.0);
    const double p3 = std::pow(1 - ps.c3.half, 73.05) * std::pow(1 - ps.c3.whole, 56.53) * std::pow(1 - ps.c3.inter, 11.0);
    const double p2 = std::pow(1 - ps.c2.half, 34.0 * n) * std::pow(1 - ps.c2.whole, 12.0 * n) *
                      std::pow(1 - ps.c2.inter, 11.0 * n);
    auto first_layer = [&] { return layer * simulate_parallel(n / 2, p1, rng); };
    double t = 0;
    while (true) {
        // Unverified cat: first layer then an all-or-nothing second layer.
        while (true) {
            t += first_layer();
            bool ok = true;
            for (std::size_t i = 0; i < n / 2 && ok; ++i) ok = u(rng) < p3;
            t += ok ? layer : layer / 2;
            if (ok) break;
        }
        bool ok = true;
        for (std::size_t k = 0; k < 2 * rounds && ok; ++k) {
            t += first_layer();
            ok = u(rng) < p2;
            t += ok ? tau_zz : tau_zz / 2;
        }
        if (ok) return t;
    }
}

}  // namespace

TEST(Noise, CompositeRatesAtDefaults) {
    const InstructionRates r;
    const PostSelection ps;
    EXPECT_NEAR(composite_rate(kQuditZZ, r, ps, 0), 5.578e-5, 1e-12);
    EXPECT_NEAR(composite_rate(kQuditZaZb, r, ps, 0), 1.336665e-4, 1e-12);
    EXPECT_NEAR(composite_rate(kQuditZaZb, r, ps, 0), 1.337e-4, 5e-8);
    for (int c = 1; c <= 3; ++c) EXPECT_DOUBLE_EQ(composite_rate(kQuditZZ, r, ps, c), composite_rate(kQuditZZ, r, ps, 0));
    InstructionRates zero{0, 0, 0, 0, 120, 8};
    EXPECT_EQ(composite_rate(kQuditZaZb, zero, ps, 1), 0.0);
}

TEST(Noise, PostSelectionScalesRates) {
    const InstructionRates r;
    const PostSelection ps = nontrivial_ps();
    // c2 half rate 0.0005 sits 5% along the half curve: multiplier 0.975.
    const double expect = 34 * r.p_half * 0.975 + 12 * r.p_whole * (1 - 0.4 * 0.04) + 11 * r.p_inter * (1 - 0.2 * 0.02);
    EXPECT_NEAR(composite_rate(kQuditZZ, r, ps, 2), expect, 1e-15);
    EXPECT_DOUBLE_EQ(ps.half.at(1.0), 0.5);
    EXPECT_DOUBLE_EQ(ReductionCurve{}.at(0.3), 1.0);
    EXPECT_THROW(ps.condition(4), BadParameters);
    EXPECT_FALSE(ps.trivial());
    EXPECT_TRUE(PostSelection{}.trivial());
}

TEST(Noise, SurvivalProbability) {
    EXPECT_EQ(survival_probability(kQuditZaZb, {}), 1.0);
    EXPECT_NEAR(survival_probability(kQuditZaZb, {0.01, 0, 0}), std::exp(73.05 * std::log(0.99)), 1e-15);
    EXPECT_NEAR(survival_probability(kQuditZaZb, {0.01, 0, 0}), 0.4797, 5e-4);
    double prev = 1.0;
    for (double rate : {0.001, 0.002, 0.005}) {
        const double s = survival_probability(kQuditZaZb, {0, rate, 0});
        EXPECT_LT(s, prev);
        prev = s;
    }
    EXPECT_NEAR(zz_layer_survival(2, {0.01, 0, 0}), std::pow(0.99, 68.0), 1e-15);
}

TEST(Noise, ExpectedParallelTimeClosedForms) {
    EXPECT_EQ(expected_parallel_time(20, 1.0), 1.0);
    EXPECT_NEAR(expected_parallel_time(1, 0.5), 1.5, 1e-12);
    for (double p : {0.1, 0.37, 0.8}) EXPECT_NEAR(expected_parallel_time(1, p), 1 + (1 - p) / (2 * p), 1e-12);
    for (std::size_t n : {2u, 3u, 5u, 10u, 20u})
        for (double p : {0.3, 0.6, 0.95, 0.999})
            EXPECT_NEAR(expected_parallel_time(n, p), expected_parallel_time_alternating(n, p), 1e-9) << n << " " << p;
    EXPECT_THROW(expected_parallel_time(3, 0.0), DegenerateP);
    EXPECT_THROW(expected_parallel_time(3, -0.2), DegenerateP);
    EXPECT_THROW(expected_parallel_time_alternating(3, 0.0), DegenerateP);
    // Monotone in N and in p.
    EXPECT_LT(expected_parallel_time(5, 0.9), expected_parallel_time(6, 0.9));
    EXPECT_GT(expected_parallel_time(5, 0.8), expected_parallel_time(5, 0.9));
}

TEST(Noise, ExpectedParallelTimeMatchesRetrySimulation) {
    Rng rng = derive_rng(11, {1});
    const std::size_t trials = 1000000;
    double sum = 0, sum2 = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double t = simulate_parallel(3, 0.9, rng);
        sum += t;
        sum2 += t * t;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
    EXPECT_LT(std::abs(mean - expected_parallel_time(3, 0.9)), 3 * se);
}

TEST(Noise, CatTimeWithoutPostSelection) {
    const InstructionRates r;
    const PostSelection ps;
    const CatTiming t1 = cat_time(40, 1, ps, r);
    EXPECT_DOUBLE_EQ(t1.one_layer, 125 * 120.0);
    EXPECT_DOUBLE_EQ(t1.non_ft_cat, 2 * 125 * 120.0);
    EXPECT_DOUBLE_EQ(t1.cat, t1.non_ft_cat + 2 * (t1.one_layer + 34 * 120.0));
    EXPECT_DOUBLE_EQ(t1.cat, 68160.0);
    const CatTiming t0 = cat_time(40, 0, ps, r);
    EXPECT_DOUBLE_EQ(t0.cat, t0.non_ft_cat);
    EXPECT_DOUBLE_EQ(cat_time(40, 0, nontrivial_ps(), r).cat, cat_time(40, 0, nontrivial_ps(), r).non_ft_cat);
}

TEST(Noise, CatTimeMatchesEventSimulation) {
    const InstructionRates r;
    const PostSelection ps = nontrivial_ps();
    for (std::size_t rounds : {1u, 2u}) {
        const double model = cat_time(20, rounds, ps, r).cat;
        Rng rng = derive_rng(12, {rounds});
        const std::size_t trials = 200000;
        double sum = 0, sum2 = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            const double t = simulate_cat(20, rounds, ps, r, rng);
            sum += t;
            sum2 += t * t;
        }
        const double mean = sum / trials;
        const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
        EXPECT_LT(std::abs(mean - model), 4 * se) << rounds << " model " << model << " sim " << mean;
    }
}

TEST(Noise, CatTimeMonotoneInPostSelection) {
    const InstructionRates r;
    PostSelection ps;
    double prev = cat_time(30, 2, ps, r).cat;
    for (double rate : {1e-4, 5e-4, 1e-3, 3e-3}) {
        ps.c1 = ps.c2 = ps.c3 = {rate, rate, rate};
        const double t = cat_time(30, 2, ps, r).cat;
        EXPECT_GT(t, prev);
        prev = t;
    }
}

TEST(Noise, CatErrorDistributionAtDefaults) {
    const InstructionRates r;
    const PostSelection ps;
    const CatErrors e = cat_error_distribution(40, 1, ps, r);
    EXPECT_NEAR(e.cat_consumption, 2.2312e-3, 1e-9);
    EXPECT_NEAR(e.weight_bound[1], 40 * e.p_zz_c2, 1e-18);
    EXPECT_NEAR(e.weight_bound[1], 2.231e-3, 1e-6);
    EXPECT_NEAR(e.weight_bound[2], 780 * e.p_zz_c2 * e.p_zz_c2, 1e-18);
    EXPECT_NEAR(e.weight_bound[3], 9880 * std::pow(e.p_zz_c2, 3), 1e-20);
    EXPECT_NEAR(e.p_ft_link, e.p_zazb_c1 + 2 * e.p_zz_c2, 1e-18);
    EXPECT_NEAR(e.cat_creation, 20 * e.p_zazb_c1 + 20 * e.p_zazb_c3 + 39 * e.p_ft_link, 1e-15);
    EXPECT_NEAR(e.cat, e.cat_creation + 40 * 5.578e-5, 1e-15);
    EXPECT_NEAR(e.cat_state_failure, 40 * e.p_zazb_c1 * e.p_ft_link, 1e-20);
    // More rounds suppress the unverified-cat failure geometrically.
    const CatErrors e3 = cat_error_distribution(40, 3, ps, r);
    EXPECT_NEAR(e3.cat_state_failure / e.cat_state_failure, e.p_ft_link * e.p_ft_link, 1e-12);
}

TEST(Noise, ZeroRatesGiveZeroProbabilities) {
    const InstructionRates zero{0, 0, 0, 0, 120, 8};
    const CatErrors e = cat_error_distribution(40, 2, nontrivial_ps(), zero);
    for (double v : {e.p_zz, e.p_zz_c2, e.p_zazb_c1, e.p_zazb_c3, e.p_ft_link, e.cat_state_failure, e.cat_creation,
                     e.cat_consumption, e.cat})
        EXPECT_EQ(v, 0.0);
    const double tau_zz = 34 * 120.0;
    EXPECT_DOUBLE_EQ(outer_round_length(20, 5, 1, 68160, e.cat, zero),
                     18.0 / 8.0 * (6 * tau_zz + 2 * 5 * (tau_zz + 68160)));
}

TEST(Noise, DerivedRatesMonotoneInBaseRates) {
    const PostSelection ps = nontrivial_ps();
    const InstructionRates base;
    const CatErrors e0 = cat_error_distribution(40, 2, ps, base);
    for (int k = 0; k < 3; ++k) {
        InstructionRates r = base;
        (k == 0 ? r.p_half : k == 1 ? r.p_whole : r.p_inter) *= 2;
        const CatErrors e = cat_error_distribution(40, 2, ps, r);
        EXPECT_GT(e.p_zz, e0.p_zz);
        EXPECT_GT(e.p_zazb_c1, e0.p_zazb_c1);
        EXPECT_GT(e.cat_state_failure, e0.cat_state_failure);
        EXPECT_GT(e.cat_creation, e0.cat_creation);
        EXPECT_GT(e.cat, e0.cat);
    }
}

TEST(Noise, OuterRoundLength) {
    const InstructionRates r;
    const PostSelection ps;
    const double tau_cat = cat_time(40, 1, ps, r).cat;
    const double p_cat = cat_error_distribution(40, 1, ps, r).cat;
    const double n_outer = outer_round_length(20, 5, 1, tau_cat, p_cat, r);
    const double tau_zz = 34 * 120.0;
    EXPECT_NEAR(n_outer, 18.0 / 8.0 * (6 * tau_zz + 10 * (tau_zz + tau_cat) / (1 - 5 * p_cat)), 1e-9);
    EXPECT_NEAR(n_outer, 1.832849937e6, 1.0);
    EXPECT_NEAR(outer_round_length(38, 5, 1, tau_cat, p_cat, r), 2 * n_outer, 1e-6);
    EXPECT_THROW(outer_round_length(20, 5, 1, tau_cat, 0.2, r), DivergentRetry);
    EXPECT_THROW(outer_round_length(20, 5, 1, tau_cat, 0.25, r), DivergentRetry);
    EXPECT_LT(outer_round_length(20, 5, 1, tau_cat, 0.0, r), n_outer);
}

TEST(Noise, OuterRoundMatchesEventSimulation) {
    const InstructionRates r;
    const double tau_zz = 34 * r.tau_meas;
    for (double p_cat : {cat_error_distribution(40, 1, PostSelection{}, r).cat, 0.05}) {
        const double tau_cat = 68160;
        const std::size_t m = 20, checks = 5;
        const double model = outer_round_length(m, 5, 1, tau_cat, p_cat, r);
        Rng rng = derive_rng(13, {static_cast<std::uint64_t>(p_cat * 1e9)});
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t trials = 20000;
        double sum = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            // Each of the m-2 syndrome blocks: fixed ZZ work plus two sectors
            // of check rounds, each repeated until no cat in the round fails.
            double steps = 0;
            for (std::size_t blk = 0; blk + 2 < m; ++blk) {
                steps += 6 * tau_zz;
                for (int sector = 0; sector < 2; ++sector) {
                    while (true) {
                        steps += checks * (tau_zz + tau_cat);
                        if (u(rng) >= checks * p_cat) break;
                    }
                }
            }
            sum += steps / r.tau_idle;
        }
        EXPECT_NEAR(sum / trials, model, 0.01 * model) << p_cat;
    }
}
