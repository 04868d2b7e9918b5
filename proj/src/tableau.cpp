#include "qrsmem/tableau.hpp"

#include <algorithm>

#include "qrsmem/errors.hpp"

namespace qrsmem {

QuditPauli::QuditPauli(Vec xs, Vec zs) : x(std::move(xs)), z(std::move(zs)) {
    if (x.size() != z.size()) throw DimensionMismatch("pauli x and z parts differ in length");
}

QuditPauli QuditPauli::x_type(Vec g) {
    const std::size_t n = g.size();
    return QuditPauli(std::move(g), Vec(n, 0));
}

QuditPauli QuditPauli::z_type(Vec g) {
    const std::size_t n = g.size();
    return QuditPauli(Vec(n, 0), std::move(g));
}

QuditPauli QuditPauli::single_x(std::size_t n, std::size_t q, Elem a) {
    QuditPauli p(n);
    p.x.at(q) = a;
    return p;
}

QuditPauli QuditPauli::single_z(std::size_t n, std::size_t q, Elem a) {
    QuditPauli p(n);
    p.z.at(q) = a;
    return p;
}

bool QuditPauli::is_identity() const { return is_x_type() && is_z_type(); }
bool QuditPauli::is_x_type() const { return std::all_of(z.begin(), z.end(), [](Elem e) { return e == 0; }); }
bool QuditPauli::is_z_type() const { return std::all_of(x.begin(), x.end(), [](Elem e) { return e == 0; }); }

std::size_t QuditPauli::weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x.size(); ++i) w += (x[i] || z[i]) ? 1 : 0;
    return w;
}

std::size_t QuditPauli::x_weight() const { return qrsmem::weight(x); }
std::size_t QuditPauli::z_weight() const { return qrsmem::weight(z); }

Elem symplectic(const FieldCtx& f, const QuditPauli& p, const QuditPauli& q) {
    if (p.size() != q.size()) throw DimensionMismatch("symplectic product of different lengths");
    Elem acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.x[i] && q.z[i]) acc ^= f.mul(p.x[i], q.z[i]);
        if (q.x[i] && p.z[i]) acc ^= f.mul(q.x[i], p.z[i]);
    }
    return acc;
}

void add_scaled(const FieldCtx& f, QuditPauli& acc, Elem c, const QuditPauli& p) {
    if (acc.size() != p.size()) throw DimensionMismatch("pauli sum of different lengths");
    if (c == 0) return;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.x[i]) acc.x[i] ^= f.mul(c, p.x[i]);
        if (p.z[i]) acc.z[i] ^= f.mul(c, p.z[i]);
    }
}

QuditPauli scaled(const FieldCtx& f, Elem c, const QuditPauli& p) {
    QuditPauli out(p.size());
    add_scaled(f, out, c, p);
    return out;
}

Tableau::Tableau(FieldPtr ctx, std::size_t n) : ctx_(std::move(ctx)), n_(n), values_(n, 0) {
    for (std::size_t i = 0; i < n; ++i) {
        stab_.push_back(QuditPauli::single_z(n, i, 1));
        destab_.push_back(QuditPauli::single_x(n, i, 1));
    }
}

Tableau Tableau::from_generators(FieldPtr ctx, std::vector<QuditPauli> stabilizers, Vec values) {
    const std::size_t n = stabilizers.size();
    if (values.size() != n) throw BadParameters("one value per stabilizer row is required");
    const FieldCtx& f = *ctx;
    for (const auto& s : stabilizers) {
        if (s.size() != n) throw BadParameters("need exactly as many rows as qudits");
        if (!s.is_x_type() && !s.is_z_type()) throw BadParameters("rows must be pure X or pure Z type");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (symplectic(f, stabilizers[i], stabilizers[j])) throw BadParameters("rows do not commute");
    // Destabilizer j solves <D_j, S_k> = delta_jk; the unknown is (D.x | D.z).
    Matrix a(n, 2 * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            a(k, i) = stabilizers[k].z[i];
            a(k, n + i) = stabilizers[k].x[i];
        }
    Tableau t;
    t.ctx_ = std::move(ctx);
    t.n_ = n;
    t.values_ = std::move(values);
    for (std::size_t j = 0; j < n; ++j) {
        Vec e(n, 0);
        e[j] = 1;
        const auto sol = solve(f, a, e);
        if (!sol) throw BadParameters("rows are not independent");
        QuditPauli d(n);
        for (std::size_t i = 0; i < n; ++i) {
            d.x[i] = (*sol)[i];
            d.z[i] = (*sol)[n + i];
        }
        t.destab_.push_back(std::move(d));
    }
    t.stab_ = std::move(stabilizers);
    return t;
}

std::optional<Elem> Tableau::expectation(const QuditPauli& p) const {
    const FieldCtx& f = *ctx_;
    Elem out = 0;
    for (std::size_t k = 0; k < n_; ++k) {
        if (symplectic(f, stab_[k], p)) return std::nullopt;
        const Elem a = symplectic(f, destab_[k], p);
        if (a && values_[k]) out ^= f.mul(a, values_[k]);
    }
    return out;
}

void Tableau::row_add(std::size_t k, std::size_t p, Elem lambda) {
    const FieldCtx& f = *ctx_;
    add_scaled(f, stab_[k], lambda, stab_[p]);
    values_[k] ^= f.mul(lambda, values_[p]);
    add_scaled(f, destab_[p], lambda, destab_[k]);
}

Tableau::Measurement Tableau::measure(const QuditPauli& p, std::optional<Elem> forced, Rng* rng) {
    const FieldCtx& f = *ctx_;
    if (p.size() != n_) throw DimensionMismatch("measured operator has the wrong length");
    if (!p.is_x_type() && !p.is_z_type()) throw BadParameters("only pure X or pure Z operators can be measured");
    if (p.is_identity()) throw BadParameters("cannot measure the identity");
    Vec c(n_);
    std::size_t pivot = n_;
    for (std::size_t k = 0; k < n_; ++k) {
        c[k] = symplectic(f, stab_[k], p);
        if (c[k] && pivot == n_) pivot = k;
    }
    if (pivot == n_) return {*expectation(p), false};

    Elem outcome;
    if (forced) {
        if (!f.contains(*forced)) throw OutOfRange("forced outcome outside the field");
        outcome = *forced;
    } else {
        if (!rng) throw BadParameters("random measurement needs an rng or a forced outcome");
        outcome = static_cast<Elem>(uniform_below(*rng, f.q()));
    }
    const Elem cp_inv = f.inv(c[pivot]);
    for (std::size_t k = 0; k < n_; ++k)
        if (k != pivot && c[k]) row_add(k, pivot, f.mul(c[k], cp_inv));
    QuditPauli d_new = scaled(f, cp_inv, stab_[pivot]);
    for (std::size_t j = 0; j < n_; ++j) {
        if (j == pivot) continue;
        const Elem mu = symplectic(f, destab_[j], p);
        if (mu) add_scaled(f, destab_[j], mu, d_new);
    }
    destab_[pivot] = std::move(d_new);
    stab_[pivot] = p;
    values_[pivot] = outcome;
    return {outcome, true};
}

void Tableau::apply(const QuditPauli& e) {
    const FieldCtx& f = *ctx_;
    if (e.size() != n_) throw DimensionMismatch("applied operator has the wrong length");
    for (std::size_t k = 0; k < n_; ++k) values_[k] ^= symplectic(f, stab_[k], e);
}

Elem Tableau::reset_to(std::size_t q, bool plus, std::optional<Elem> forced, Rng* rng) {
    const FieldCtx& f = *ctx_;
    if (q >= n_) throw OutOfRange("reset qudit index");
    const QuditPauli p = plus ? QuditPauli::single_x(n_, q, 1) : QuditPauli::single_z(n_, q, 1);
    const Elem m = measure(p, forced, rng).outcome;
    // Make some row equal to p: p = sum_k a_k S_k with a_k = <D_k, p>.
    Vec a(n_);
    std::size_t row = n_;
    for (std::size_t k = 0; k < n_; ++k) {
        a[k] = symplectic(f, destab_[k], p);
        if (a[k] && row == n_) row = k;
    }
    if (row == n_) throw BadParameters("measured operator is not in the stabilizer group");
    {
        const Elem s = a[row];
        const Elem s_inv = f.inv(s);
        for (std::size_t i = 0; i < n_; ++i) {
            stab_[row].x[i] = f.mul(s, stab_[row].x[i]);
            stab_[row].z[i] = f.mul(s, stab_[row].z[i]);
            destab_[row].x[i] = f.mul(s_inv, destab_[row].x[i]);
            destab_[row].z[i] = f.mul(s_inv, destab_[row].z[i]);
        }
        values_[row] = f.mul(s, values_[row]);
    }
    for (std::size_t k = 0; k < n_; ++k)
        if (k != row && a[k]) row_add(row, k, a[k]);
    // Remove the qudit from every other row.
    for (std::size_t k = 0; k < n_; ++k) {
        if (k == row) continue;
        const Elem coef = plus ? stab_[k].x[q] : stab_[k].z[q];
        if (coef) row_add(k, row, coef);
    }
    if (m) apply(plus ? QuditPauli::single_z(n_, q, m) : QuditPauli::single_x(n_, q, m));
    return m;
}

Elem Tableau::reset_zero(std::size_t q, std::optional<Elem> forced, Rng* rng) { return reset_to(q, false, forced, rng); }
Elem Tableau::reset_plus(std::size_t q, std::optional<Elem> forced, Rng* rng) { return reset_to(q, true, forced, rng); }

bool Tableau::invariants_hold() const {
    const FieldCtx& f = *ctx_;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (j > i && symplectic(f, stab_[i], stab_[j])) return false;
            if (symplectic(f, destab_[j], stab_[i]) != (i == j ? 1 : 0)) return false;
        }
    }
    return true;
}

std::vector<QuditPauli> cat_generators(const FieldCtx& f, const Vec& gammas, const std::vector<std::size_t>& qudits,
                                       std::size_t n) {
    (void)f;
    if (gammas.size() != qudits.size() || gammas.empty()) throw BadParameters("one gamma per cat qudit is required");
    for (Elem g : gammas)
        if (g == 0) throw ZeroCoefficient("cat coefficients must be nonzero");
    std::vector<QuditPauli> rows;
    QuditPauli xrow(n);
    for (std::size_t i = 0; i < qudits.size(); ++i) xrow.x.at(qudits[i]) = gammas[i];
    rows.push_back(std::move(xrow));
    for (std::size_t i = 1; i < qudits.size(); ++i) {
        QuditPauli link(n);
        link.z.at(qudits[i - 1]) = gammas[i];
        link.z.at(qudits[i]) = gammas[i - 1];
        rows.push_back(std::move(link));
    }
    return rows;
}

Tableau prepare_cat(const FieldPtr& ctx, const Vec& gammas) {
    std::vector<std::size_t> qs(gammas.size());
    for (std::size_t i = 0; i < qs.size(); ++i) qs[i] = i;
    auto rows = cat_generators(*ctx, gammas, qs, gammas.size());
    return Tableau::from_generators(ctx, std::move(rows), Vec(gammas.size(), 0));
}

QuditPauli clean_z_error(const FieldCtx& f, const Vec& gammas, const QuditPauli& err) {
    if (err.size() != gammas.size()) throw DimensionMismatch("error and cat lengths differ");
    QuditPauli out = err;
    for (std::size_t i = gammas.size(); i-- > 1;) {
        if (!out.z[i]) continue;
        const Elem a = f.div(out.z[i], gammas[i - 1]);
        out.z[i] = 0;
        out.z[i - 1] ^= f.mul(a, gammas[i]);
    }
    return out;
}

QuditPauli pauli_with_syndrome(const FieldCtx& f, const std::vector<QuditPauli>& rows, const Vec& values) {
    if (rows.size() != values.size()) throw DimensionMismatch("one value per row is required");
    const std::size_t n = rows.empty() ? 0 : rows[0].size();
    Matrix a(rows.size(), 2 * n);
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) {
            a(k, i) = rows[k].z[i];
            a(k, n + i) = rows[k].x[i];
        }
    const auto sol = solve(f, a, values);
    if (!sol) throw BadParameters("rows are dependent and the values inconsistent");
    QuditPauli e(n);
    for (std::size_t i = 0; i < n; ++i) {
        e.x[i] = (*sol)[i];
        e.z[i] = (*sol)[n + i];
    }
    return e;
}

}  // namespace qrsmem
