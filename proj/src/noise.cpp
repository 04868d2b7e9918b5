#include "qrsmem/noise.hpp"

#include <algorithm>
#include <cmath>

#include "qrsmem/errors.hpp"

namespace qrsmem {

double ReductionCurve::at(double rate) const {
    if (points.empty()) return 1.0;
    if (rate <= points.front().first) return points.front().second;
    if (rate >= points.back().first) return points.back().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& [r1, m1] = points[i];
        if (rate > r1) continue;
        const auto& [r0, m0] = points[i - 1];
        if (r1 == r0) return m1;
        return m0 + (m1 - m0) * (rate - r0) / (r1 - r0);
    }
    return points.back().second;
}

const ClassRates& PostSelection::condition(int i) const {
    switch (i) {
        case 1: return c1;
        case 2: return c2;
        case 3: return c3;
    }
    throw BadParameters("post-selection condition must be 1, 2 or 3");
}

bool PostSelection::trivial() const {
    for (const ClassRates* c : {&c1, &c2, &c3})
        if (c->half != 0 || c->whole != 0 || c->inter != 0) return false;
    return true;
}

double composite_rate(const OpStats& s, const InstructionRates& r, const PostSelection& ps, int condition) {
    double mh = 1, mw = 1, mi = 1;
    if (condition != 0) {
        const ClassRates& c = ps.condition(condition);
        mh = ps.half.at(c.half);
        mw = ps.whole.at(c.whole);
        mi = ps.inter.at(c.inter);
    }
    return s.half * r.p_half * mh + s.whole * r.p_whole * mw + s.inter * r.p_inter * mi;
}

double survival_probability(const OpStats& s, const ClassRates& c) {
    return std::pow(1.0 - c.half, s.half) * std::pow(1.0 - c.whole, s.whole) * std::pow(1.0 - c.inter, s.inter);
}

double zz_layer_survival(std::size_t n, const ClassRates& c) {
    const double nn = static_cast<double>(n);
    return std::pow(1.0 - c.half, kQuditZZ.half * nn) * std::pow(1.0 - c.whole, kQuditZZ.whole * nn) *
           std::pow(1.0 - c.inter, kQuditZZ.inter * nn);
}

double expected_parallel_time(std::size_t n_tasks, double p) {
    if (!(p > 0.0) || p > 1.0) throw DegenerateP("success probability must lie in (0, 1]");
    if (p == 1.0 || n_tasks == 0) return 1.0;
    // Sum over k >= 1 of P[max failures >= k] = 1 - (1 - (1-p)^k)^N.
    const double lq = std::log1p(-p);
    const double nn = static_cast<double>(n_tasks);
    double sum = 0.0;
    for (std::size_t k = 1; k < 100000000; ++k) {
        const double fk = std::exp(lq * static_cast<double>(k));
        const double term = -std::expm1(nn * std::log1p(-fk));
        sum += term;
        if (term < 1e-17 * std::max(sum, 1.0)) break;
    }
    return 1.0 + 0.5 * sum;
}

double expected_parallel_time_alternating(std::size_t n_tasks, double p) {
    if (!(p > 0.0) || p > 1.0) throw DegenerateP("success probability must lie in (0, 1]");
    double sum = 0.0, binom = 1.0;
    for (std::size_t j = 1; j <= n_tasks; ++j) {
        binom = binom * static_cast<double>(n_tasks - j + 1) / static_cast<double>(j);
        const double fj = std::pow(1.0 - p, static_cast<double>(j));
        sum += (j % 2 ? 1.0 : -1.0) * binom * fj / (1.0 - fj);
    }
    return 1.0 + 0.5 * sum;
}

CatTiming cat_time(std::size_t n, std::size_t rounds, const PostSelection& ps, const InstructionRates& r) {
    CatTiming t;
    const double layer = kZaZbLayerDuration * r.tau_meas;
    const double tau_zz = kQuditZZ.duration * r.tau_meas;
    const double p1 = survival_probability(kQuditZaZb, ps.c1);
    t.one_layer = layer * expected_parallel_time(n / 2, p1);
    const double q = std::pow(survival_probability(kQuditZaZb, ps.c3), static_cast<double>(n) / 2.0);
    if (!(q > 0.0)) throw DegenerateP("second layer never succeeds");
    t.second_layer_success = q;
    t.non_ft_cat = t.one_layer / q + (1.0 + q) / (2.0 * q) * layer;
    const double p2 = zz_layer_survival(n, ps.c2);
    if (!(p2 > 0.0)) throw DegenerateP("verification layer never succeeds");
    t.zz_layer_success = p2;
    const std::size_t layers = 2 * rounds;
    if (p2 == 1.0) {
        t.cat = t.non_ft_cat + static_cast<double>(layers) * (t.one_layer + tau_zz);
    } else {
        // (1 - p2^L) / (1 - p2) as a geometric sum.
        double geo = 0.0, pk = 1.0;
        for (std::size_t k = 0; k < layers; ++k) {
            geo += pk;
            pk *= p2;
        }
        t.cat = (t.non_ft_cat + (t.one_layer + (1.0 + p2) / 2.0 * tau_zz) * geo) / pk;
    }
    return t;
}

CatErrors cat_error_distribution(std::size_t n, std::size_t rounds, const PostSelection& ps, const InstructionRates& r) {
    CatErrors e;
    const double nn = static_cast<double>(n);
    const double rr = static_cast<double>(rounds);
    e.p_zz = composite_rate(kQuditZZ, r, ps, 0);
    e.p_zz_c2 = composite_rate(kQuditZZ, r, ps, 2);
    e.p_zazb_c1 = composite_rate(kQuditZaZb, r, ps, 1);
    e.p_zazb_c3 = composite_rate(kQuditZaZb, r, ps, 3);
    e.p_ft_link = e.p_zazb_c1 + 2.0 * e.p_zz_c2;
    double binom = 1.0;
    for (int w = 1; w <= 3; ++w) {
        binom = binom * (nn - w + 1) / w;
        e.weight_bound[w] = n >= static_cast<std::size_t>(w) ? binom * std::pow(e.p_zz_c2, w) : 0.0;
    }
    const double ft_pow = std::pow(e.p_ft_link, rr);
    e.cat_state_failure = nn / 2.0 * e.p_zazb_c1 * ft_pow + nn / 2.0 * e.p_zazb_c3 * ft_pow;
    e.cat_creation = nn / 2.0 * e.p_zazb_c1 + nn / 2.0 * e.p_zazb_c3 + rr * (nn - 1.0) * e.p_ft_link;
    e.cat_consumption = nn * e.p_zz;
    e.cat = e.cat_creation + e.cat_consumption;
    return e;
}

double outer_round_length(std::size_t m, std::size_t d, std::size_t extra_checks, double tau_cat, double p_cat,
                          const InstructionRates& r) {
    if (m < 2 || d < 1) throw BadParameters("need m >= 2 and d >= 1");
    const double checks = static_cast<double>(d - 1 + extra_checks);
    const double denom = 1.0 - checks * p_cat;
    if (!(denom > 0.0)) throw DivergentRetry("expected number of round attempts diverges");
    const double tau_zz = kQuditZZ.duration * r.tau_meas;
    return static_cast<double>(m - 2) / r.tau_idle * (6.0 * tau_zz + 2.0 * checks * (tau_zz + tau_cat) / denom);
}

}  // namespace qrsmem
