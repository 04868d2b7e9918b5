#pragma once

#include <optional>
#include <vector>

#include "qrsmem/linalg.hpp"
#include "qrsmem/rng.hpp"

namespace qrsmem {

// X^x Z^z on a register of qudits; phases are not tracked.
struct QuditPauli {
    Vec x;
    Vec z;

    QuditPauli() = default;
    explicit QuditPauli(std::size_t n) : x(n, 0), z(n, 0) {}
    QuditPauli(Vec xs, Vec zs);

    static QuditPauli x_type(Vec g);
    static QuditPauli z_type(Vec g);
    static QuditPauli single_x(std::size_t n, std::size_t q, Elem a);
    static QuditPauli single_z(std::size_t n, std::size_t q, Elem a);

    std::size_t size() const { return x.size(); }
    bool is_identity() const;
    bool is_x_type() const;  // z part zero
    bool is_z_type() const;  // x part zero
    std::size_t weight() const;
    std::size_t x_weight() const;
    std::size_t z_weight() const;
    bool operator==(const QuditPauli& o) const = default;
};

// Sum over qudits of x_P z_Q + x_Q z_P; zero iff the F_q-families commute.
Elem symplectic(const FieldCtx& f, const QuditPauli& p, const QuditPauli& q);
// acc += c * p
void add_scaled(const FieldCtx& f, QuditPauli& acc, Elem c, const QuditPauli& p);
QuditPauli scaled(const FieldCtx& f, Elem c, const QuditPauli& p);

// Stabilizer state of n Galois qudits kept as n pure-type stabilizer rows with
// their measured values and n destabilizer rows with <D_j, S_k> = delta_jk.
// Measuring S_k yields values()[k]; applying a Pauli E adds <S_k, E>.
class Tableau {
public:
    // All qudits in |0>: rows Z_i with value 0.
    Tableau(FieldPtr ctx, std::size_t n);
    // Complete commuting independent set of pure X- or Z-type rows.
    // Throws BadParameters otherwise.
    static Tableau from_generators(FieldPtr ctx, std::vector<QuditPauli> stabilizers, Vec values);

    const FieldCtx& field() const { return *ctx_; }
    const FieldPtr& field_ptr() const { return ctx_; }
    std::size_t n_qudits() const { return n_; }
    const std::vector<QuditPauli>& stabilizers() const { return stab_; }
    const std::vector<QuditPauli>& destabilizers() const { return destab_; }
    const Vec& values() const { return values_; }

    // Outcome of measuring p if determined by the state.
    std::optional<Elem> expectation(const QuditPauli& p) const;

    struct Measurement {
        Elem outcome = 0;
        bool random = false;
    };
    // p must be pure X- or Z-type (BadParameters otherwise). A random outcome
    // is drawn from rng unless forced; a forced value is ignored when the
    // outcome is determined.
    Measurement measure(const QuditPauli& p, std::optional<Elem> forced, Rng* rng);

    void apply(const QuditPauli& e);
    // Measure and correct so the qudit ends in |0> or |+>, with no other row touching it.
    Elem reset_zero(std::size_t q, std::optional<Elem> forced, Rng* rng);
    Elem reset_plus(std::size_t q, std::optional<Elem> forced, Rng* rng);

    // Rows commute, are independent and the destabilizers are dual to them.
    bool invariants_hold() const;

private:
    Tableau() = default;
    // S_k += lambda * S_p keeping the dual destabilizer relation.
    void row_add(std::size_t k, std::size_t p, Elem lambda);
    Elem reset_to(std::size_t q, bool plus, std::optional<Elem> forced, Rng* rng);

    FieldPtr ctx_;
    std::size_t n_ = 0;
    std::vector<QuditPauli> stab_;
    std::vector<QuditPauli> destab_;
    Vec values_;
};

// Cat(gamma) generators on the listed qudits of an n-qudit register:
// X^gamma and Z_{i-1}^{gamma_i} Z_i^{gamma_{i-1}}. Throws ZeroCoefficient.
std::vector<QuditPauli> cat_generators(const FieldCtx& f, const Vec& gammas, const std::vector<std::size_t>& qudits,
                                       std::size_t n);
Tableau prepare_cat(const FieldPtr& ctx, const Vec& gammas);

// Equivalent error (err times cat stabilizers Z_{i-1}^{A gamma_i} Z_i^{A gamma_{i-1}})
// whose Z support on the cat qudits has weight at most one.
QuditPauli clean_z_error(const FieldCtx& f, const Vec& gammas, const QuditPauli& err);

// Pauli E with <S_k, E> = values[k] for the given independent rows.
QuditPauli pauli_with_syndrome(const FieldCtx& f, const std::vector<QuditPauli>& rows, const Vec& values);

}  // namespace qrsmem
