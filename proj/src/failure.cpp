#include "qrsmem/failure.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <boost/multiprecision/cpp_int.hpp>

#include "qrsmem/errors.hpp"

namespace qrsmem {

namespace {

using Rational = boost::multiprecision::cpp_rational;

BigInt ipow(std::uint64_t base, std::size_t e) { return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e)); }

BigInt binom(long long a, long long b) { return binomial(a, b); }

double binom_d(std::size_t a, std::size_t b) {
    if (b > a) return 0.0;
    b = std::min(b, a - b);
    double r = 1.0;
    for (std::size_t i = 1; i <= b; ++i) r = r * static_cast<double>(a - b + i) / static_cast<double>(i);
    return r;
}

// D_k / (q-1)^k as an exact rational.
Rational normalized_d(std::size_t k, std::size_t M, std::uint64_t q) {
    return Rational(d_k(k, M, q), ipow(q - 1, k));
}

void check_time_like(std::size_t d, std::size_t M) {
    if (M < 1 || d < 3 || M > d - 2) throw BadParameters("time-like bounds need 1 <= M <= d-2");
}

}  // namespace

BigInt d_k(std::size_t k, std::size_t M, std::uint64_t q) {
    if (k <= M) return 0;
    BigInt sum = 0;
    for (std::size_t t = 0; t + M < k; ++t) {
        BigInt term = binom(static_cast<long long>(k), static_cast<long long>(t)) * (ipow(q, k - M - t) - 1);
        if (t % 2) sum -= term;
        else sum += term;
    }
    return sum;
}

bool d_k_recurrence_check(std::size_t k, std::size_t M, std::uint64_t q) {
    if (k < 1 || M < 1) throw BadParameters("recurrence needs k >= 1 and M >= 1");
    const Rational lhs = k == 1 ? Rational(0) : normalized_d(k - 1, M, q);
    const long long kk = static_cast<long long>(k), mm = static_cast<long long>(M);
    const bool odd = ((kk > mm ? kk - mm : mm - kk) % 2) != 0;
    Rational extra(binom(kk - 2, mm - 1), ipow(q - 1, k - 1));
    if (odd) extra = -extra;
    return lhs == normalized_d(k, M, q) + extra;
}

double tlf_case1(std::size_t n, std::size_t d, std::size_t M, std::uint64_t q, double p_xx) {
    check_time_like(d, M);
    Rational sum = 0;
    for (std::size_t k = M + 1; k + 2 <= d; ++k) sum += normalized_d(k, M, q);
    return p_xx * static_cast<double>(n) * static_cast<double>(sum);
}

double tlf_case2(std::size_t n, std::size_t d, std::size_t M, std::uint64_t q, double p_xx) {
    check_time_like(d, M);
    Rational sum = 0;
    for (std::size_t k = M + 1; k + 1 <= d; ++k)
        sum += normalized_d(k, M, q) +
               Rational(binom(static_cast<long long>(k) - 2, static_cast<long long>(M) - 1), ipow(q - 1, k - 1));
    return p_xx * static_cast<double>(n) * static_cast<double>(sum);
}

double tlf_case3(std::size_t d, std::size_t M, std::uint64_t q, double p_cat) {
    check_time_like(d, M);
    const double qm1 = static_cast<double>(q - 1);
    if (M == 1) return binom_d(d, 2) / qm1 * p_cat * p_cat;
    return static_cast<double>(d - 1) / qm1 * std::pow(p_cat, static_cast<double>(M + 1));
}

std::size_t check_matrix_distance(const FieldCtx& f, const Matrix& h, std::size_t max_weight) {
    const std::size_t n = h.cols;
    for (std::size_t w = 1; w <= std::min(max_weight, n); ++w) {
        std::vector<std::size_t> idx(w);
        for (std::size_t i = 0; i < w; ++i) idx[i] = i;
        while (true) {
            if (rank(f, select_columns(h, idx)) < w) return w;
            std::size_t i = w;
            while (i > 0 && idx[i - 1] == n - w + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < w; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return std::min(max_weight, n) + 1;
}

Matrix build_time_like_matrix(const FieldPtr& ctx, std::size_t d, std::size_t M, const Vec* nu, Rng& rng) {
    const FieldCtx& f = *ctx;
    check_time_like(d, M);
    const std::size_t len = d - 1 + M;
    if (len > f.q() - 1) throw BadParameters("code length exceeds the number of nonzero field elements");
    if (nu && nu->size() != d - 1) throw DimensionMismatch("nu needs d-1 entries");
    const Matrix h = GrsCode(ctx, M, random_alpha(f, len, rng), random_nonzero(f, len, rng)).generator_matrix();
    std::vector<std::size_t> left(d - 1), right(M);
    for (std::size_t i = 0; i < d - 1; ++i) left[i] = i;
    for (std::size_t i = 0; i < M; ++i) right[i] = d - 1 + i;
    const auto inv = inverse(f, select_columns(h, right));
    if (!inv) throw ReductionFailure("right block of the check matrix is singular");
    Matrix beta = multiply(f, *inv, select_columns(h, left));
    if (nu) {
        for (std::size_t c = 0; c < d - 1; ++c) {
            if ((*nu)[c] == 0) throw ZeroCoefficient("nu entries must be nonzero");
            for (std::size_t r = 0; r < M; ++r) beta(r, c) = f.mul(beta(r, c), (*nu)[c]);
        }
    }
    if (len <= 12) {
        Matrix full(M, len);
        for (std::size_t r = 0; r < M; ++r) {
            for (std::size_t c = 0; c < d - 1; ++c) full(r, c) = beta(r, c);
            full(r, d - 1 + r) = 1;
        }
        if (check_matrix_distance(f, full, M) != M + 1) throw ReductionFailure("reduced matrix lost distance M+1");
    }
    return beta;
}

double ordered_bell(std::size_t b) {
    static std::vector<double> cache{1.0};
    static std::mutex lock;
    std::lock_guard<std::mutex> g(lock);
    while (cache.size() <= b) {
        const std::size_t m = cache.size();
        double v = 0;
        for (std::size_t k = 1; k <= m; ++k) v += binom_d(m, k) * cache[m - k];
        cache.push_back(v);
    }
    return cache[b];
}

double slf_weight_prob(std::size_t e, std::size_t n, double p_static, double p_z_round, double p_x_round) {
    if (e > n) return 0.0;
    double sum = 0;
    for (std::size_t a = 0; a <= e; ++a)
        for (std::size_t b = 0; a + b <= e; ++b) {
            const std::size_t c = e - a - b;
            const double ways = binom_d(e, a) * binom_d(e - a, b);
            sum += ways * std::pow(p_static, static_cast<double>(a)) * ordered_bell(b) *
                   std::pow(p_z_round, static_cast<double>(b)) * ordered_bell(c) *
                   std::pow(p_x_round, static_cast<double>(c));
        }
    return binom_d(n, e) * sum;
}

void FractionSource::add(const FractionTable& t) { tables_[{t.n, t.d, t.e}] = t; }

const FractionTable* FractionSource::find(std::size_t n, std::size_t d, std::size_t e) const {
    auto it = tables_.find({n, d, e});
    return it == tables_.end() ? nullptr : &it->second;
}

double FractionSource::weighted_mass(std::size_t n, std::size_t d, std::size_t e, std::uint64_t q) const {
    if (const FractionTable* t = find(n, d, e)) return t->weighted_mass();
    if (!allow_fallback)
        throw MissingFractions("no fraction table for n=" + std::to_string(n) + " d=" + std::to_string(d) +
                               " e=" + std::to_string(e));
    return std::min(1.0, expected_same_weight_collisions(n, d, e, q));
}

std::string FractionSource::origin(std::size_t n, std::size_t d, std::size_t e) const {
    if (find(n, d, e)) return "table";
    return allow_fallback ? "expected-collisions" : "missing";
}

double slf_tail(std::size_t w, std::size_t n, const SpaceLikeRates& r, double* truncation_error) {
    double total = 0, omitted = 0;
    for (std::size_t e = w; e <= n; ++e) {
        const double term = slf_weight_prob(e, n, r.p_static, r.p_z_round, r.p_x_round);
        if (term == 0.0 && total == 0.0) break;
        if (total > 0 && term < 1e-3 * total) {
            omitted = term;
            break;
        }
        total += term;
    }
    if (truncation_error) *truncation_error = omitted;
    return total;
}

SpaceLikeResult slf_total(std::size_t n, std::size_t d, std::uint64_t q, const SpaceLikeRates& r,
                          const FractionSource& fractions) {
    if (d < 3 || d > 9) throw BadParameters("space-like bound covers distances 3..9");
    SpaceLikeResult out;
    auto p = [&](std::size_t e) { return slf_weight_prob(e, n, r.p_static, r.p_z_round, r.p_x_round); };
    auto weighted = [&](std::size_t e, double coef) {
        const double v = coef * p(e);
        out.terms["coef_w" + std::to_string(e)] = coef;
        out.terms["P_w" + std::to_string(e)] = p(e);
        out.value += v;
    };
    std::size_t tail_from = 0;
    switch (d) {
        case 3: tail_from = 2; break;
        case 4:
            weighted(2, fractions.weighted_mass(n, 4, 2, q));
            tail_from = 3;
            break;
        case 5:
            weighted(3, analytic_uncorrectable_fraction(n, 5, 3, q) + fractions.weighted_mass(n, 5, 3, q));
            tail_from = 4;
            break;
        case 6:
            weighted(3, fractions.weighted_mass(n, 6, 3, q));
            tail_from = 4;
            break;
        case 7:
            weighted(4, analytic_uncorrectable_fraction(n, 7, 4, q) + fractions.weighted_mass(n, 7, 4, q));
            tail_from = 5;
            break;
        case 8:
            weighted(4, analytic_uncorrectable_fraction(n, 8, 4, q));
            weighted(5, analytic_uncorrectable_fraction(n, 8, 5, q));
            tail_from = 6;
            break;
        case 9:
            weighted(5, analytic_uncorrectable_fraction(n, 9, 5, q));
            tail_from = 6;
            break;
    }
    const double tail = slf_tail(tail_from, n, r, &out.truncation_error);
    out.terms["tail_from_w" + std::to_string(tail_from)] = tail;
    out.value += tail;
    return out;
}

void validate(const MemoryParams& p) {
    if (p.d < 3 || p.d > 9) throw BadParameters("d must lie in 3..9");
    if (p.M < 1 || p.M > p.d - 2) throw BadParameters("M must satisfy 1 <= M <= d-2");
    if (2 * (p.d - 1) >= p.n) throw BadParameters("need 2(d-1) < n");
    if (p.m < 3) throw BadParameters("need m >= 3");
    if (p.n + p.M > p.q) throw BadParameters("code length exceeds the field size");
}

FailureBreakdown total_failure(const MemoryParams& p, const InstructionRates& rates, const PostSelection& ps,
                               const FractionSource& fractions) {
    validate(p);
    FailureBreakdown b;
    b.params = p;
    const CatErrors ce = cat_error_distribution(p.n, p.R, ps, rates);
    const CatTiming ct = cat_time(p.n, p.R, ps, rates);
    b.p_zz = ce.p_zz;
    b.p_zz_c2 = ce.p_zz_c2;
    b.p_cat = ce.cat;
    b.p_cat_state_failure = ce.cat_state_failure;
    b.tau_cat = ct.cat;
    b.n_outer_round = outer_round_length(p.m, p.d, p.M, ct.cat, ce.cat, rates);

    b.tlf1 = tlf_case1(p.n, p.d, p.M, p.q, ce.p_zz);
    b.tlf2 = tlf_case2(p.n, p.d, p.M, p.q, ce.p_zz);
    b.tlf3 = tlf_case3(p.d, p.M, p.q, ce.cat);

    const double checks = static_cast<double>(p.d - 1 + p.M);
    b.space_rates.p_static = ce.p_zz + b.n_outer_round * rates.p_idle + 6.0 * ce.p_zz;
    b.space_rates.p_z_round = checks * (ce.p_zz_c2 + ce.p_zz);
    b.space_rates.p_x_round = checks * ce.p_zz;
    const SpaceLikeResult s = slf_total(p.n, p.d, p.q, b.space_rates, fractions);
    b.slf = s.value;
    b.slf_truncation_error = s.truncation_error;
    b.slf_terms = s.terms;

    b.cat_burst = 2.0 * checks * ce.cat_state_failure;
    b.total = 2.0 * (b.tlf1 + b.tlf2 + b.tlf3 + b.slf + b.cat_burst);
    const double logical = 11.0 * static_cast<double>(p.n - 2 * (p.d - 1));
    b.ler_per_lqr = b.total / (logical * b.n_outer_round);
    return b;
}

nlohmann::json FailureBreakdown::to_json() const {
    nlohmann::json j;
    j["params"] = {{"n", params.n}, {"m", params.m}, {"d", params.d}, {"M", params.M}, {"R", params.R}, {"q", params.q}};
    j["tlf1"] = tlf1;
    j["tlf2"] = tlf2;
    j["tlf3"] = tlf3;
    j["slf"] = slf;
    j["cat_burst"] = cat_burst;
    j["total"] = total;
    j["ler_per_lqr"] = ler_per_lqr;
    j["slf_truncation_error"] = slf_truncation_error;
    j["p_zz"] = p_zz;
    j["p_zz_c2"] = p_zz_c2;
    j["p_cat"] = p_cat;
    j["p_cat_state_failure"] = p_cat_state_failure;
    j["tau_cat"] = tau_cat;
    j["n_outer_round"] = n_outer_round;
    j["p_static"] = space_rates.p_static;
    j["p_z_round"] = space_rates.p_z_round;
    j["p_x_round"] = space_rates.p_x_round;
    j["slf_terms"] = slf_terms;
    return j;
}

}  // namespace qrsmem
