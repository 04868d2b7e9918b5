#include <gtest/gtest.h>

#include <cmath>

#include "qrsmem/errors.hpp"
#include "qrsmem/failure.hpp"
#include "oracles.hpp"

using namespace qrsmem;

namespace {

using oracle::full_support_kernel_count;
using oracle::full_support_scan;
using oracle::gf;

// Minimum weight of the code with check matrix h, by enumerating codewords.
std::size_t distance_by_codewords(const FieldCtx& f, const Matrix& h) {
    const Matrix basis = nullspace(f, h);
    std::size_t best = h.cols + 1;
    Vec coefs(basis.rows, 0);
    while (true) {
        std::size_t i = 0;
        while (i < basis.rows && ++coefs[i] == f.q()) coefs[i++] = 0;
        if (i == basis.rows) break;
        Vec v(h.cols, 0);
        for (std::size_t r = 0; r < basis.rows; ++r)
            for (std::size_t c = 0; c < h.cols; ++c) v[c] ^= f.mul(coefs[r], basis(r, c));
        best = std::min(best, weight(v));
    }
    return best;
}

Matrix with_identity(const Matrix& beta) {
    Matrix full(beta.rows, beta.cols + beta.rows);
    for (std::size_t r = 0; r < beta.rows; ++r) {
        for (std::size_t c = 0; c < beta.cols; ++c) full(r, c) = beta(r, c);
        full(r, beta.cols + r) = 1;
    }
    return full;
}

// Weight probability via exponential generating functions: e! [x^e] of
// exp(s x) * G(z x) * G(c x), with G(x) = 1/(2 - e^x) the ordered Bell EGF.
double weight_prob_by_series(std::size_t e, std::size_t n, double s, double z, double c) {
    const std::size_t len = e + 1;
    std::vector<double> fact(len, 1.0);
    for (std::size_t i = 1; i < len; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
    // G = 1 + (e^x - 1) G solved term by term.
    std::vector<double> g(len, 0.0);
    g[0] = 1.0;
    for (std::size_t i = 1; i < len; ++i)
        for (std::size_t j = 1; j <= i; ++j) g[i] += g[i - j] / fact[j];
    auto scaled = [&](const std::vector<double>& a, double t) {
        std::vector<double> out(len);
        for (std::size_t i = 0; i < len; ++i) out[i] = a[i] * std::pow(t, static_cast<double>(i));
        return out;
    };
    auto product = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> out(len, 0.0);
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t j = 0; i + j < len; ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    std::vector<double> ex(len);
    for (std::size_t i = 0; i < len; ++i) ex[i] = 1.0 / fact[i];
    const auto total = product(product(scaled(ex, s), scaled(g, z)), scaled(g, c));
    double binom = 1.0;
    for (std::size_t i = 1; i <= e; ++i) binom = binom * static_cast<double>(n - e + i) / static_cast<double>(i);
    return binom * fact[e] * total[e];
}

}  // namespace

TEST(Failure, DkSmallValues) {
    for (std::uint64_t q : {8u, 2048u}) {
        for (std::size_t M = 1; M <= 4; ++M)
            for (std::size_t k = 0; k <= M; ++k) EXPECT_EQ(d_k(k, M, q), 0);
        EXPECT_EQ(d_k(3, 2, q), BigInt(q - 1));
        for (std::size_t M = 1; M <= 6; ++M)
            for (std::size_t k = M + 1; k <= 10; ++k) EXPECT_EQ(d_k(k, M, q), mds_weight_count(k, M + 1, k, q));
    }
}

TEST(Failure, DkMatchesKernelEnumeration) {
    Rng rng = derive_rng(21, {});
    for (int s : {3, 4}) {
        const FieldPtr f = gf(s);
        for (std::size_t k = 1; k <= 6; ++k)
            for (std::size_t M = 1; M <= std::min<std::size_t>(4, k); ++M) {
                const Matrix h = GrsCode(f, M, random_alpha(*f, k, rng), random_nonzero(*f, k, rng)).generator_matrix();
                const std::uint64_t count = s == 3 ? full_support_scan(*f, h) : full_support_kernel_count(*f, h);
                EXPECT_EQ(BigInt(count), d_k(k, M, f->q())) << "q=" << f->q() << " k=" << k << " M=" << M;
            }
    }
    // Worked case: q = 8, M = 2, k = 4 by both counting methods.
    const FieldPtr f8 = gf(3);
    const Matrix h = GrsCode(f8, 2, random_alpha(*f8, 4, rng), random_nonzero(*f8, 4, rng)).generator_matrix();
    EXPECT_EQ(full_support_scan(*f8, h), full_support_kernel_count(*f8, h));
    EXPECT_EQ(BigInt(full_support_scan(*f8, h)), d_k(4, 2, 8));
}

TEST(Failure, RecurrenceHoldsExactly) {
    for (std::uint64_t q : {8u, 2048u})
        for (std::size_t M = 1; M <= 8; ++M)
            for (std::size_t k = 1; k <= 10; ++k) EXPECT_TRUE(d_k_recurrence_check(k, M, q)) << q << " " << k << " " << M;
    EXPECT_THROW(d_k_recurrence_check(0, 1, 8), BadParameters);
}

TEST(Failure, TimeLikeCase1) {
    const double p = 5.578e-5;
    const double Q = 2047.0;
    for (std::size_t d = 3; d <= 9; ++d) EXPECT_EQ(tlf_case1(40, d, d - 2, 2048, p), 0.0);
    EXPECT_NEAR(tlf_case1(20, 5, 2, 2048, p), 20 * p / (Q * Q), 1e-25);
    for (std::size_t d = 4; d <= 9; ++d)
        for (std::size_t M = 1; M + 3 <= d; ++M) {
            const double exact = tlf_case1(40, d, M, 2048, p);
            const double lead = p * 40 * static_cast<double>(d - 2 - M) / std::pow(Q, static_cast<double>(M));
            EXPECT_GE(exact / lead, 0.5) << d << " " << M;
            EXPECT_LE(exact / lead, 2.0) << d << " " << M;
        }
    EXPECT_THROW(tlf_case1(40, 5, 4, 2048, p), BadParameters);
    EXPECT_THROW(tlf_case1(40, 5, 0, 2048, p), BadParameters);
}

TEST(Failure, TimeLikeCase2) {
    const double p = 5.578e-5;
    const double Q = 2047.0;
    for (std::size_t d = 3; d <= 9; ++d)
        for (std::size_t M = 1; M + 2 <= d; ++M) {
            const double c1 = tlf_case1(40, d, M, 2048, p), c2 = tlf_case2(40, d, M, 2048, p);
            EXPECT_GE(c2, c1);
            const double lead = 2 * p * 40 * static_cast<double>(d - 1 - M) / std::pow(Q, static_cast<double>(M));
            EXPECT_GE(c2 / lead, 0.5) << d << " " << M;
            EXPECT_LE(c2 / lead, 2.0) << d << " " << M;
        }
    // d = M + 2: only k = d-1 contributes.
    const double single = p * 40 *
                          (static_cast<double>(d_k(4, 3, 2048)) / std::pow(Q, 4.0) + 1.0 / std::pow(Q, 3.0));
    EXPECT_NEAR(tlf_case2(40, 5, 3, 2048, p), single, 1e-25);
    // d = 5, M = 1 by hand: D_2 = Q, D_3 = Q(q-2), and C(k-2, 0) = 1.
    const double hand = p * 40 *
                        ((1 / Q + 1 / Q) + (2046 / (Q * Q) + 1 / (Q * Q)) +
                         (static_cast<double>(d_k(4, 1, 2048)) / std::pow(Q, 4) + 1 / std::pow(Q, 3)));
    EXPECT_NEAR(tlf_case2(40, 5, 1, 2048, p), hand, 1e-15);
}

TEST(Failure, TimeLikeCase3) {
    const double Q = 2047.0, pc = 0.017;
    EXPECT_NEAR(tlf_case3(5, 1, 2048, pc), 10 / Q * pc * pc, 1e-18);
    EXPECT_NEAR(tlf_case3(5, 2, 2048, pc), 4 / Q * pc * pc * pc, 1e-18);
    EXPECT_EQ(tlf_case3(7, 3, 2048, 0.0), 0.0);
    EXPECT_NEAR(tlf_case3(9, 4, 2048, pc), 8 / Q * std::pow(pc, 5), 1e-22);
}

TEST(Failure, QubitAlphabetGivesNoSuppression) {
    // Leading case-1 term at q = 2 is at least the base rate.
    const double p = 1e-3;
    for (std::size_t n = 2; n <= 10; ++n)
        for (std::size_t d = 4; d <= 9; ++d)
            for (std::size_t M = 1; M + 3 <= d; ++M)
                EXPECT_GE(static_cast<double>(n * (d - 2 - M)) / std::pow(1.0, static_cast<double>(M)) * p, p);
}

TEST(Failure, TimeLikeMatrixSingleRow) {
    Rng rng = derive_rng(22, {});
    const FieldPtr f = FieldCtx::gf2048();
    const Matrix beta = build_time_like_matrix(f, 6, 1, nullptr, rng);
    ASSERT_EQ(beta.rows, 1u);
    ASSERT_EQ(beta.cols, 5u);
    for (std::size_t c = 0; c < 5; ++c) EXPECT_NE(beta(0, c), 0);
    EXPECT_EQ(check_matrix_distance(*f, with_identity(beta), 4), 2u);
}

TEST(Failure, TimeLikeMatrixDistanceByCodewords) {
    Rng rng = derive_rng(23, {});
    const FieldPtr f = gf(4);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix beta = build_time_like_matrix(f, 5, 2, nullptr, rng);
        EXPECT_EQ(distance_by_codewords(*f, with_identity(beta)), 3u);
        const Vec nu = random_nonzero(*f, 4, rng);
        const Matrix scaled = build_time_like_matrix(f, 5, 2, &nu, rng);
        EXPECT_EQ(distance_by_codewords(*f, with_identity(scaled)), 3u);
    }
    for (std::size_t d = 4; d <= 7; ++d)
        for (std::size_t M = 1; M + 2 <= d && d <= 6; ++M) {
            const Matrix beta = build_time_like_matrix(f, d, M, nullptr, rng);
            EXPECT_EQ(distance_by_codewords(*f, with_identity(beta)), M + 1) << d << " " << M;
        }
}

TEST(Failure, ColumnDistanceMatchesCodewordOracle) {
    Rng rng = derive_rng(24, {});
    const FieldPtr f = gf(3);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix h(3, 6);
        for (auto& v : h.data) v = static_cast<Elem>(uniform_below(rng, 3) ? uniform_below(rng, 8) : 0);
        if (rank(*f, h) == 0) continue;
        const std::size_t oracle = distance_by_codewords(*f, h);
        EXPECT_EQ(check_matrix_distance(*f, h, 6), std::min<std::size_t>(oracle, 7));
    }
}

TEST(Failure, TimeLikeMatrixRejectsBadInput) {
    Rng rng = derive_rng(25, {});
    const FieldPtr f = gf(3);
    EXPECT_THROW(build_time_like_matrix(f, 5, 4, nullptr, rng), BadParameters);
    EXPECT_THROW(build_time_like_matrix(f, 8, 2, nullptr, rng), BadParameters);
    const Vec nu{1, 2};
    EXPECT_THROW(build_time_like_matrix(f, 5, 2, &nu, rng), DimensionMismatch);
    const Vec zero_nu{1, 0, 2, 3};
    EXPECT_THROW(build_time_like_matrix(f, 5, 2, &zero_nu, rng), ZeroCoefficient);
}

TEST(Failure, OrderedBellNumbers) {
    const double expect[] = {1, 1, 3, 13, 75, 541, 4683, 47293};
    for (std::size_t b = 0; b < 8; ++b) EXPECT_EQ(ordered_bell(b), expect[b]);
    EXPECT_EQ(ordered_bell(10), 102247563.0);
}

TEST(Failure, WeightProbability) {
    const double s = 3e-3, z = 2e-3, c = 1e-3;
    EXPECT_EQ(slf_weight_prob(0, 40, s, z, c), 1.0);
    EXPECT_NEAR(slf_weight_prob(1, 40, s, z, c), 40 * (s + z + c), 1e-15);
    const double two = 780 * (s * s + 3 * z * z + 3 * c * c + 2 * s * z + 2 * s * c + 2 * z * c);
    EXPECT_NEAR(slf_weight_prob(2, 40, s, z, c), two, 1e-15);
    for (std::size_t e = 0; e <= 9; ++e) {
        const double v = slf_weight_prob(e, 60, s, z, c);
        EXPECT_NEAR(v, weight_prob_by_series(e, 60, s, z, c), 1e-10 * v) << e;
    }
    EXPECT_EQ(slf_weight_prob(41, 40, s, z, c), 0.0);
}

TEST(Failure, TailTruncation) {
    const SpaceLikeRates zero;
    double err = -1;
    EXPECT_EQ(slf_tail(2, 40, zero, &err), 0.0);
    EXPECT_EQ(err, 0.0);
    const SpaceLikeRates r{3e-3, 2e-3, 1e-3};
    const double tail = slf_tail(3, 40, r, &err);
    double exact = 0;
    for (std::size_t e = 3; e <= 40; ++e) exact += slf_weight_prob(e, 40, r.p_static, r.p_z_round, r.p_x_round);
    EXPECT_GT(err, 0.0);
    EXPECT_LE(exact - tail, 2 * err);
    EXPECT_LT((exact - tail) / exact, 2e-3);
}

TEST(Failure, SpaceLikeComposition) {
    const SpaceLikeRates r{3e-3, 2e-3, 1e-3};
    FractionSource none;
    EXPECT_THROW(slf_total(40, 4, 2048, r, none), MissingFractions);
    EXPECT_THROW(slf_total(40, 7, 2048, r, none), MissingFractions);
    EXPECT_NO_THROW(slf_total(40, 3, 2048, r, none));
    EXPECT_NO_THROW(slf_total(40, 8, 2048, r, none));
    EXPECT_NO_THROW(slf_total(40, 9, 2048, r, none));
    EXPECT_EQ(none.origin(40, 4, 2), "missing");

    FractionSource fb;
    fb.allow_fallback = true;
    EXPECT_EQ(slf_total(40, 5, 2048, SpaceLikeRates{}, fb).value, 0.0);
    EXPECT_NEAR(fb.weighted_mass(40, 4, 2, 2048), analytic_uncorrectable_fraction(40, 4, 2, 2048), 1e-15);

    // d = 3 at small rates: dominated by the weight-2 term.
    const SpaceLikeRates tiny{1e-7, 1e-7, 1e-7};
    const double p2 = slf_weight_prob(2, 40, 1e-7, 1e-7, 1e-7);
    EXPECT_NEAR(slf_total(40, 3, 2048, tiny, fb).value / p2, 1.0, 1e-4);
    EXPECT_NEAR(p2, 780 * 13 * 1e-14, 1e-20);

    // A supplied table replaces the fallback.
    FractionTable t;
    t.n = 40;
    t.d = 4;
    t.e = 2;
    t.samples = 1000;
    t.counts = {{0, 990}, {1, 10}};
    fb.add(t);
    EXPECT_EQ(fb.origin(40, 4, 2), "table");
    const auto s4 = slf_total(40, 4, 2048, r, fb);
    double err = 0;
    const double tail = slf_tail(3, 40, r, &err);
    EXPECT_NEAR(s4.value, 0.005 * slf_weight_prob(2, 40, r.p_static, r.p_z_round, r.p_x_round) + tail, 1e-15);

    // d = 5 adds the collision-with-lower-weight term.
    const double q1 = 2047.0;
    const auto s5 = slf_total(40, 5, 2048, r, fb);
    const double coef5 = 37.0 * 36.0 / (2 * q1 * q1) + fb.weighted_mass(40, 5, 3, 2048);
    EXPECT_NEAR(s5.terms.at("coef_w3"), coef5, 1e-15);

    // d = 8 and 9 use closed forms only.
    const auto s9 = slf_total(40, 9, 2048, r, none);
    EXPECT_NEAR(s9.terms.at("coef_w5"), analytic_uncorrectable_fraction(40, 9, 5, 2048), 1e-18);
    EXPECT_THROW(slf_total(40, 10, 2048, r, fb), BadParameters);
}

TEST(Failure, TotalFailureZeroNoise) {
    const InstructionRates zero{0, 0, 0, 0, 120, 8};
    FractionSource fb;
    fb.allow_fallback = true;
    const FailureBreakdown b = total_failure({40, 20, 5, 1, 1, 2048}, zero, PostSelection{}, fb);
    for (double v : {b.tlf1, b.tlf2, b.tlf3, b.slf, b.cat_burst, b.total, b.ler_per_lqr}) EXPECT_EQ(v, 0.0);
    EXPECT_GT(b.n_outer_round, 0.0);
}

TEST(Failure, TotalFailureRegression) {
    const InstructionRates r;
    FractionSource fb;
    fb.allow_fallback = true;
    const MemoryParams p{40, 20, 5, 1, 1, 2048};
    const FailureBreakdown b = total_failure(p, r, PostSelection{}, fb);

    // Hand evaluation of every sub-term.
    const double Q = 2047.0;
    const double pzz = 34 * 1.7e-7 + 12 * 1.6e-6 + 11 * 2.8e-6;
    const double pzazb = 73.05 * 1.7e-7 + 56.53 * 1.6e-6 + 11 * 2.8e-6;
    const double pft = pzazb + 2 * pzz;
    const double pcat = 20 * pzazb + 20 * pzazb + 39 * pft + 40 * pzz;
    const double tau_zz = 34 * 120.0, tau_cat = 68160.0;
    const double n_outer = 18.0 / 8.0 * (6 * tau_zz + 10 * (tau_zz + tau_cat) / (1 - 5 * pcat));
    EXPECT_NEAR(b.p_cat, pcat, 1e-15);
    EXPECT_NEAR(b.n_outer_round, n_outer, 1e-6);
    EXPECT_NEAR(b.tlf1, pzz * 40 * (1 / Q + 2046 / (Q * Q)), 1e-18);
    EXPECT_NEAR(b.tlf3, 10 / Q * pcat * pcat, 1e-18);
    EXPECT_NEAR(b.cat_burst, 2 * 5 * (40 * pzazb * pft), 1e-18);
    const double ps = 7 * pzz + n_outer * std::pow(10.0, -8.8);
    EXPECT_NEAR(b.space_rates.p_static, ps, 1e-15);
    EXPECT_NEAR(b.space_rates.p_z_round, 5 * 2 * pzz, 1e-15);
    EXPECT_NEAR(b.space_rates.p_x_round, 5 * pzz, 1e-15);
    EXPECT_NEAR(b.total, 2 * (b.tlf1 + b.tlf2 + b.tlf3 + b.slf + b.cat_burst), 1e-18);
    EXPECT_NEAR(b.ler_per_lqr, b.total / (11 * 32 * n_outer), 1e-25);

    // Golden values from the first evaluation.
    EXPECT_NEAR(b.total, 1.7251684739555e-3, 1e-15);
    EXPECT_NEAR(b.ler_per_lqr, 2.6740033117051e-12, 1e-23);
    EXPECT_NEAR(b.tlf2, 4.359409418473e-6, 1e-17);
    EXPECT_NEAR(b.slf, 8.414985070792e-4, 1e-15);
    const nlohmann::json j = b.to_json();
    for (const char* key : {"tlf1", "tlf2", "tlf3", "slf", "cat_burst", "total", "ler_per_lqr", "n_outer_round",
                            "p_static", "slf_terms", "slf_truncation_error"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Failure, TotalFailureMonotoneInBaseRates) {
    FractionSource fb;
    fb.allow_fallback = true;
    const InstructionRates base;
    for (std::size_t n : {20u, 45u, 80u})
        for (std::size_t d = 3; d <= 9; ++d)
            for (std::size_t M = 1; M <= 2 && M + 2 <= d; ++M) {
                if (2 * (d - 1) >= n) continue;
                const MemoryParams p{n, 10, d, M, 1, 2048};
                const double t0 = total_failure(p, base, PostSelection{}, fb).total;
                for (int k = 0; k < 4; ++k) {
                    InstructionRates r = base;
                    (k == 0 ? r.p_half : k == 1 ? r.p_whole : k == 2 ? r.p_inter : r.p_idle) *= 1.5;
                    EXPECT_GE(total_failure(p, r, PostSelection{}, fb).total, t0) << n << " " << d << " " << M << " " << k;
                }
            }
}

TEST(Failure, ParameterValidation) {
    FractionSource fb;
    fb.allow_fallback = true;
    const InstructionRates r;
    EXPECT_THROW(total_failure({8, 10, 5, 1, 1, 2048}, r, {}, fb), BadParameters);
    EXPECT_THROW(total_failure({40, 2, 5, 1, 1, 2048}, r, {}, fb), BadParameters);
    EXPECT_THROW(total_failure({40, 10, 5, 4, 1, 2048}, r, {}, fb), BadParameters);
    EXPECT_THROW(total_failure({40, 10, 10, 1, 1, 2048}, r, {}, fb), BadParameters);
    InstructionRates bad = r;
    bad.p_inter = 2e-3;
    EXPECT_THROW(total_failure({80, 10, 9, 2, 2, 2048}, bad, {}, fb), DivergentRetry);
}
