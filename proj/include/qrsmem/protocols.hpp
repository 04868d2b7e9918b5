#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrsmem/tableau.hpp"

namespace qrsmem {

enum class PauliType { X, Z };
inline PauliType other(PauliType t) { return t == PauliType::X ? PauliType::Z : PauliType::X; }

// Pure-type operator on an n-qudit register from (qudit, coefficient) terms.
QuditPauli pauli_on(std::size_t n, PauliType t, const std::vector<std::pair<std::size_t, Elem>>& terms);

// Linear combination of recorded outcomes, indexed by step.
struct LinearForm {
    std::vector<std::pair<std::size_t, Elem>> terms;

    void add(const FieldCtx& f, std::size_t step, Elem c);
    void add(const FieldCtx& f, const LinearForm& other, Elem c);
    Elem eval(const FieldCtx& f, const Vec& outcomes) const;
};

enum class OpKind { ResetZero, ResetPlus, Measure };

struct Op {
    OpKind kind = OpKind::Measure;
    std::vector<std::size_t> touched;
    QuditPauli observable;  // measured operator (Measure only)
    QuditPauli correction;  // applied as reported_outcome * correction; empty for none
    std::string label;
};

struct NamedForm {
    std::string label;
    std::string group;  // e.g. "cat" or "consistency" for checks
    LinearForm form;
};

// Straight-line protocol: every step records one outcome; acceptance requires
// every check form to evaluate to zero.
struct Script {
    FieldPtr ctx;
    std::size_t n_qudits = 0;
    std::string name;
    std::vector<Op> ops;
    std::vector<NamedForm> checks;
    std::vector<NamedForm> outputs;

    Script(FieldPtr c, std::size_t n, std::string nm) : ctx(std::move(c)), n_qudits(n), name(std::move(nm)) {}
    std::size_t reset(std::size_t q, PauliType basis, const std::string& label);
    std::size_t measure(QuditPauli p, QuditPauli correction, const std::string& label);
};

// Pauli applied on the touched qudits right after the step, plus an additive
// error on the reported outcome of a measurement.
struct FaultEvent {
    std::size_t step = 0;
    QuditPauli pauli;
    Elem flip = 0;
};

enum class OutcomeMode { Random, Zero };

struct Transcript {
    Vec outcomes;  // reported, one per step
    Vec check_values;
    Vec output_values;
    bool accepted = true;
    std::vector<bool> random_step;
    std::optional<Tableau> state;
};

// Throws InvalidFaultLocation for steps out of range, Paulis on untouched
// qudits or flips on reset steps.
void validate_faults(const Script& s, const std::vector<FaultEvent>& faults);
Transcript run_script(const Script& s, Tableau initial, const std::vector<FaultEvent>& faults, Rng* rng,
                      OutcomeMode mode = OutcomeMode::Random);
// One JSON object per line: step, op, outcome, fault, then a summary line.
std::string transcript_jsonl(const Script& s, const Transcript& t, const std::vector<FaultEvent>& faults);

struct CatPrepOptions {
    std::size_t rounds = 1;          // verification rounds R
    bool check_odd_layers = true;    // reject on nonzero odd-layer outcomes as well
};

// Cat state on cat_qudits using anc_qudits, all qudits of one register.
// type X prepares Cat(gamma) with stabilizer X^gamma; type Z the dual state.
void append_cat_preparation(Script& s, const Vec& gammas, const std::vector<std::size_t>& cat,
                            const std::vector<std::size_t>& anc, PauliType type, const CatPrepOptions& opt);
// Fault-tolerant link measurement of type-dual Z^alpha Z^beta on (c1, c2)
// via ancillas; returns the outcome form alpha*eta1 + beta*eta2.
LinearForm append_ft_link(Script& s, std::size_t c1, std::size_t c2, std::size_t a1, std::size_t a2, Elem alpha,
                          Elem beta, PauliType type, const std::string& label);
// Consumes the cat to measure the type-X (or Z) stabilizer with coefficients
// gammas on data; returns the syndrome form sum gamma_i eta_i.
LinearForm append_cat_consumption(Script& s, const Vec& gammas, const std::vector<std::size_t>& cat,
                                  const std::vector<std::size_t>& data, PauliType type);
// Moves the block on data to a2 using a1; leaves data and a1 entangled.
void append_teleport(Script& s, const std::vector<std::size_t>& data, const std::vector<std::size_t>& a1,
                     const std::vector<std::size_t>& a2);

Script cat_preparation_script(const FieldPtr& ctx, const Vec& gammas, const CatPrepOptions& opt);

// Data block 0..n-1, cat row n..2n-1, ancilla row 2n..3n-1. Measures the rows
// of hx then beta*hx (X type), then hz and beta_z*hz (Z type). Outputs are
// labelled y_x/i, z_x/j, y_z/i, z_z/j; consistency checks compare z with beta*y.
Script extraction_round_script(const FieldPtr& ctx, const Matrix& hx, const Matrix& hz, const Matrix& beta_x,
                               const Matrix& beta_z, const CatPrepOptions& opt);

// Rows for the code state: hx rows (X type) and a basis of ker(hx) (Z type).
std::vector<QuditPauli> code_state_generators(const FieldCtx& f, const Matrix& hx);

// Embeds rows of a smaller register at the given positions of an n-qudit register.
QuditPauli embed(const QuditPauli& p, const std::vector<std::size_t>& positions, std::size_t n);
QuditPauli restrict_to(const QuditPauli& p, const std::vector<std::size_t>& positions);

struct CatResidual {
    Vec x;            // X error, minimum-weight representative
    Elem z0 = 0;      // Z error on the first cat qudit after cleaning
    std::size_t x_weight = 0;
    std::size_t z_weight = 0;
};

// Residual relative to Cat(gamma) (type X) given the measured link values
// (size C-1) and the value of the X^gamma row.
CatResidual cat_residual_from_values(const FieldCtx& f, const Vec& gammas, const Vec& link_values, Elem x_value);
// Reads those values off a tableau; throws BadParameters if not determined.
CatResidual cat_residual(const Tableau& t, const Vec& gammas, const std::vector<std::size_t>& cat);
// Values of the cat rows (links then X^gamma) as read from a tableau.
Vec cat_values(const Tableau& t, const Vec& gammas, const std::vector<std::size_t>& cat);

// True if x + lambda*gamma is supported inside `allowed` for some lambda.
bool x_support_within(const FieldCtx& f, const Vec& x, const Vec& gammas, const std::vector<std::size_t>& allowed);

}  // namespace qrsmem
