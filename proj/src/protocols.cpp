#include "qrsmem/protocols.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "qrsmem/errors.hpp"

namespace qrsmem {

QuditPauli pauli_on(std::size_t n, PauliType t, const std::vector<std::pair<std::size_t, Elem>>& terms) {
    QuditPauli p(n);
    Vec& part = t == PauliType::X ? p.x : p.z;
    for (const auto& [q, c] : terms) part.at(q) ^= c;
    return p;
}

void LinearForm::add(const FieldCtx& f, std::size_t step, Elem c) {
    if (!c) return;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        if (it->first != step) continue;
        it->second ^= c;
        if (!it->second) terms.erase(it);
        return;
    }
    (void)f;
    terms.emplace_back(step, c);
}

void LinearForm::add(const FieldCtx& f, const LinearForm& other, Elem c) {
    for (const auto& [step, coef] : other.terms) add(f, step, f.mul(c, coef));
}

Elem LinearForm::eval(const FieldCtx& f, const Vec& outcomes) const {
    Elem acc = 0;
    for (const auto& [step, coef] : terms) acc ^= f.mul(coef, outcomes.at(step));
    return acc;
}

namespace {

std::vector<std::size_t> support(const QuditPauli& p) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.x[i] || p.z[i]) out.push_back(i);
    return out;
}

const char* kind_name(OpKind k) {
    switch (k) {
        case OpKind::ResetZero: return "reset_zero";
        case OpKind::ResetPlus: return "reset_plus";
        case OpKind::Measure: return "measure";
    }
    return "?";
}

nlohmann::json pauli_json(const QuditPauli& p) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.x[i] || p.z[i]) j.push_back({{"qudit", i}, {"x", p.x[i]}, {"z", p.z[i]}});
    return j;
}

}  // namespace

std::size_t Script::reset(std::size_t q, PauliType basis, const std::string& label) {
    if (q >= n_qudits) throw OutOfRange("reset qudit outside the register");
    Op op;
    op.kind = basis == PauliType::X ? OpKind::ResetPlus : OpKind::ResetZero;
    op.touched = {q};
    op.label = label;
    ops.push_back(std::move(op));
    return ops.size() - 1;
}

std::size_t Script::measure(QuditPauli p, QuditPauli correction, const std::string& label) {
    if (p.size() != n_qudits) throw DimensionMismatch("measured operator has the wrong length");
    if (!correction.x.empty() && correction.size() != n_qudits)
        throw DimensionMismatch("correction has the wrong length");
    Op op;
    op.kind = OpKind::Measure;
    op.touched = support(p);
    op.observable = std::move(p);
    op.correction = std::move(correction);
    op.label = label;
    ops.push_back(std::move(op));
    return ops.size() - 1;
}

void validate_faults(const Script& s, const std::vector<FaultEvent>& faults) {
    for (const auto& fe : faults) {
        if (fe.step >= s.ops.size()) throw InvalidFaultLocation("fault after step " + std::to_string(fe.step));
        const Op& op = s.ops[fe.step];
        if (!fe.pauli.x.empty()) {
            if (fe.pauli.size() != s.n_qudits) throw InvalidFaultLocation("fault Pauli has the wrong length");
            for (std::size_t q : support(fe.pauli))
                if (std::find(op.touched.begin(), op.touched.end(), q) == op.touched.end())
                    throw InvalidFaultLocation("fault on qudit " + std::to_string(q) + " untouched by step " +
                                               std::to_string(fe.step));
        }
        if (fe.flip && op.kind != OpKind::Measure)
            throw InvalidFaultLocation("outcome flip on a reset step");
        if (!s.ctx->contains(fe.flip)) throw InvalidFaultLocation("flip outside the field");
    }
}

Transcript run_script(const Script& s, Tableau initial, const std::vector<FaultEvent>& faults, Rng* rng,
                      OutcomeMode mode) {
    validate_faults(s, faults);
    if (initial.n_qudits() != s.n_qudits) throw DimensionMismatch("initial state does not match the script register");
    const FieldCtx& f = *s.ctx;
    std::multimap<std::size_t, const FaultEvent*> at;
    for (const auto& fe : faults) at.emplace(fe.step, &fe);
    const std::optional<Elem> forced = mode == OutcomeMode::Zero ? std::optional<Elem>(0) : std::nullopt;

    Transcript tr;
    Tableau t = std::move(initial);
    tr.outcomes.resize(s.ops.size());
    tr.random_step.resize(s.ops.size());
    for (std::size_t i = 0; i < s.ops.size(); ++i) {
        const Op& op = s.ops[i];
        Elem flip = 0;
        auto range = at.equal_range(i);
        for (auto it = range.first; it != range.second; ++it) flip ^= it->second->flip;
        if (op.kind == OpKind::Measure) {
            const auto m = t.measure(op.observable, forced, rng);
            const Elem reported = m.outcome ^ flip;
            tr.outcomes[i] = reported;
            tr.random_step[i] = m.random;
            if (reported && !op.correction.x.empty()) t.apply(scaled(f, reported, op.correction));
        } else {
            const QuditPauli obs = op.kind == OpKind::ResetPlus ? QuditPauli::single_x(s.n_qudits, op.touched[0], 1)
                                                                 : QuditPauli::single_z(s.n_qudits, op.touched[0], 1);
            tr.random_step[i] = !t.expectation(obs).has_value();
            tr.outcomes[i] = op.kind == OpKind::ResetPlus ? t.reset_plus(op.touched[0], forced, rng)
                                                          : t.reset_zero(op.touched[0], forced, rng);
        }
        for (auto it = range.first; it != range.second; ++it)
            if (!it->second->pauli.x.empty()) t.apply(it->second->pauli);
    }
    for (const auto& c : s.checks) {
        tr.check_values.push_back(c.form.eval(f, tr.outcomes));
        if (tr.check_values.back()) tr.accepted = false;
    }
    for (const auto& o : s.outputs) tr.output_values.push_back(o.form.eval(f, tr.outcomes));
    tr.state = std::move(t);
    return tr;
}

std::string transcript_jsonl(const Script& s, const Transcript& t, const std::vector<FaultEvent>& faults) {
    std::string out;
    for (std::size_t i = 0; i < s.ops.size(); ++i) {
        const Op& op = s.ops[i];
        nlohmann::json j{{"step", i},
                         {"op", kind_name(op.kind)},
                         {"label", op.label},
                         {"qudits", op.touched},
                         {"outcome", t.outcomes.at(i)},
                         {"random", static_cast<bool>(t.random_step.at(i))}};
        if (op.kind == OpKind::Measure) j["observable"] = pauli_json(op.observable);
        nlohmann::json fj = nlohmann::json::array();
        for (const auto& fe : faults)
            if (fe.step == i)
                fj.push_back({{"pauli", fe.pauli.x.empty() ? nlohmann::json::array() : pauli_json(fe.pauli)},
                              {"flip", fe.flip}});
        if (!fj.empty()) j["faults"] = fj;
        out += j.dump() + "\n";
    }
    nlohmann::json summary{{"script", s.name}, {"accepted", t.accepted}};
    nlohmann::json checks = nlohmann::json::array();
    for (std::size_t i = 0; i < s.checks.size(); ++i)
        checks.push_back({{"label", s.checks[i].label}, {"group", s.checks[i].group}, {"value", t.check_values.at(i)}});
    summary["checks"] = checks;
    nlohmann::json outputs = nlohmann::json::object();
    for (std::size_t i = 0; i < s.outputs.size(); ++i) outputs[s.outputs[i].label] = t.output_values.at(i);
    summary["outputs"] = outputs;
    out += summary.dump() + "\n";
    return out;
}

LinearForm append_ft_link(Script& s, std::size_t c1, std::size_t c2, std::size_t a1, std::size_t a2, Elem alpha,
                          Elem beta, PauliType type, const std::string& label) {
    const FieldCtx& f = *s.ctx;
    const std::size_t n = s.n_qudits;
    const PauliType lt = other(type);
    s.reset(a1, type, label + "/reset_a1");
    s.reset(a2, type, label + "/reset_a2");
    s.measure(pauli_on(n, lt, {{a1, alpha}, {a2, beta}}), pauli_on(n, type, {{a2, f.inv(beta)}}), label + "/anc_link");
    const std::size_t eta1 = s.measure(pauli_on(n, lt, {{c1, 1}, {a1, 1}}), QuditPauli(), label + "/couple_1");
    const std::size_t eta2 = s.measure(pauli_on(n, lt, {{c2, 1}, {a2, 1}}), QuditPauli(), label + "/couple_2");
    s.measure(pauli_on(n, type, {{a1, 1}}), pauli_on(n, lt, {{c1, 1}}), label + "/release_1");
    s.measure(pauli_on(n, type, {{a2, 1}}), pauli_on(n, lt, {{c2, 1}}), label + "/release_2");
    LinearForm form;
    form.add(f, eta1, alpha);
    form.add(f, eta2, beta);
    return form;
}

void append_cat_preparation(Script& s, const Vec& gammas, const std::vector<std::size_t>& cat,
                            const std::vector<std::size_t>& anc, PauliType type, const CatPrepOptions& opt) {
    const FieldCtx& f = *s.ctx;
    const std::size_t n = s.n_qudits;
    const std::size_t c = cat.size();
    if (gammas.size() != c || anc.size() != c) throw BadParameters("cat, ancilla and coefficient sizes differ");
    for (Elem g : gammas)
        if (!g) throw ZeroCoefficient("cat coefficients must be nonzero");
    const PauliType lt = other(type);
    const std::string tag = s.name + (type == PauliType::X ? "/catx" : "/catz");

    for (std::size_t i = 0; i < c; ++i) s.reset(cat[i], type, tag + "/init");
    // Link j joins cat[j-1] and cat[j]; odd j form the first layer, even j the second.
    auto link = [&](std::size_t j) { return pauli_on(n, lt, {{cat[j - 1], gammas[j]}, {cat[j], gammas[j - 1]}}); };
    for (std::size_t j = 1; j < c; j += 2)
        s.measure(link(j), pauli_on(n, type, {{cat[j], f.inv(gammas[j - 1])}}), tag + "/layer1/link" + std::to_string(j));
    for (std::size_t j = 2; j < c; j += 2) {
        const Elem lam = f.inv(f.mul(gammas[j - 1], gammas[j]));
        std::vector<std::pair<std::size_t, Elem>> tail;
        for (std::size_t k = j; k < c; ++k) tail.emplace_back(cat[k], f.mul(lam, gammas[k]));
        s.measure(link(j), pauli_on(n, type, tail), tag + "/layer2/link" + std::to_string(j));
    }
    for (std::size_t r = 0; r < opt.rounds; ++r) {
        for (std::size_t first : {1u, 2u}) {
            for (std::size_t j = first; j < c; j += 2) {
                const std::string lbl = tag + "/round" + std::to_string(r + 1) + "/link" + std::to_string(j);
                auto form = append_ft_link(s, cat[j - 1], cat[j], anc[j - 1], anc[j], gammas[j], gammas[j - 1], type, lbl);
                if (first == 1 || opt.check_odd_layers) s.checks.push_back({lbl, "cat", std::move(form)});
            }
        }
    }
}

LinearForm append_cat_consumption(Script& s, const Vec& gammas, const std::vector<std::size_t>& cat,
                                  const std::vector<std::size_t>& data, PauliType type) {
    const FieldCtx& f = *s.ctx;
    const std::size_t n = s.n_qudits;
    if (gammas.size() != cat.size() || data.size() != cat.size())
        throw BadParameters("cat, data and coefficient sizes differ");
    const PauliType lt = other(type);
    const std::string tag = s.name + (type == PauliType::X ? "/usex" : "/usez");
    LinearForm form;
    for (std::size_t i = 0; i < cat.size(); ++i) {
        const std::size_t eta =
            s.measure(pauli_on(n, type, {{cat[i], 1}, {data[i], 1}}), QuditPauli(), tag + "/pair" + std::to_string(i));
        form.add(f, eta, gammas[i]);
    }
    for (std::size_t i = 0; i < cat.size(); ++i)
        s.measure(pauli_on(n, lt, {{cat[i], 1}}), pauli_on(n, type, {{data[i], 1}}), tag + "/release" + std::to_string(i));
    return form;
}

void append_teleport(Script& s, const std::vector<std::size_t>& data, const std::vector<std::size_t>& a1,
                     const std::vector<std::size_t>& a2) {
    const std::size_t n = s.n_qudits;
    if (a1.size() != data.size() || a2.size() != data.size()) throw BadParameters("teleport rows differ in size");
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::string tag = s.name + "/teleport" + std::to_string(i);
        s.reset(a1[i], PauliType::X, tag + "/reset_a1");
        s.reset(a2[i], PauliType::X, tag + "/reset_a2");
        s.measure(pauli_on(n, PauliType::Z, {{a1[i], 1}, {a2[i], 1}}), pauli_on(n, PauliType::X, {{a2[i], 1}}),
                  tag + "/pair");
        s.measure(pauli_on(n, PauliType::Z, {{data[i], 1}, {a1[i], 1}}), pauli_on(n, PauliType::X, {{a2[i], 1}}),
                  tag + "/bell_z");
        s.measure(pauli_on(n, PauliType::X, {{data[i], 1}, {a1[i], 1}}), pauli_on(n, PauliType::Z, {{a2[i], 1}}),
                  tag + "/bell_x");
    }
}

Script cat_preparation_script(const FieldPtr& ctx, const Vec& gammas, const CatPrepOptions& opt) {
    const std::size_t c = gammas.size();
    Script s(ctx, 2 * c, "cat");
    std::vector<std::size_t> cat(c), anc(c);
    for (std::size_t i = 0; i < c; ++i) {
        cat[i] = i;
        anc[i] = c + i;
    }
    append_cat_preparation(s, gammas, cat, anc, PauliType::X, opt);
    return s;
}

Script extraction_round_script(const FieldPtr& ctx, const Matrix& hx, const Matrix& hz, const Matrix& beta_x,
                               const Matrix& beta_z, const CatPrepOptions& opt) {
    const FieldCtx& f = *ctx;
    const std::size_t n = hx.cols;
    if (hz.cols != n || beta_x.cols != hx.rows || beta_z.cols != hz.rows)
        throw DimensionMismatch("check and redundancy matrices do not fit");
    Script s(ctx, 3 * n, "round");

    auto run_type = [&](const Matrix& h, const Matrix& beta, PauliType type, const std::string& name) {
        const Matrix extra = multiply(f, beta, h);
        std::vector<LinearForm> forms;
        for (std::size_t r = 0; r < h.rows + extra.rows; ++r) {
            const Vec w = r < h.rows ? h.row(r) : extra.row(r - h.rows);
            std::vector<std::size_t> dq, cq, aq;
            Vec g;
            for (std::size_t i = 0; i < n; ++i) {
                if (!w[i]) continue;
                dq.push_back(i);
                cq.push_back(n + i);
                aq.push_back(2 * n + i);
                g.push_back(w[i]);
            }
            if (g.empty()) throw BadParameters("redundant check row is zero");
            const std::string base = s.name;
            s.name = base + "/" + name + std::to_string(r);
            append_cat_preparation(s, g, cq, aq, type, opt);
            forms.push_back(append_cat_consumption(s, g, cq, dq, type));
            s.name = base;
        }
        for (std::size_t i = 0; i < h.rows; ++i) s.outputs.push_back({"y_" + name + "/" + std::to_string(i), "", forms[i]});
        for (std::size_t j = 0; j < beta.rows; ++j) {
            s.outputs.push_back({"z_" + name + "/" + std::to_string(j), "", forms[h.rows + j]});
            LinearForm cons = forms[h.rows + j];
            for (std::size_t k = 0; k < h.rows; ++k) cons.add(f, forms[k], beta(j, k));
            s.checks.push_back({name + "/consistency" + std::to_string(j), "consistency", std::move(cons)});
        }
    };
    run_type(hx, beta_x, PauliType::X, "x");
    run_type(hz, beta_z, PauliType::Z, "z");
    return s;
}

std::vector<QuditPauli> code_state_generators(const FieldCtx& f, const Matrix& hx) {
    std::vector<QuditPauli> rows;
    for (std::size_t r = 0; r < hx.rows; ++r) rows.push_back(QuditPauli::x_type(hx.row(r)));
    const Matrix k = nullspace(f, hx);
    for (std::size_t r = 0; r < k.rows; ++r) rows.push_back(QuditPauli::z_type(k.row(r)));
    return rows;
}

QuditPauli embed(const QuditPauli& p, const std::vector<std::size_t>& positions, std::size_t n) {
    if (positions.size() != p.size()) throw DimensionMismatch("embedding positions do not match the operator");
    QuditPauli out(n);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out.x.at(positions[i]) = p.x[i];
        out.z.at(positions[i]) = p.z[i];
    }
    return out;
}

QuditPauli restrict_to(const QuditPauli& p, const std::vector<std::size_t>& positions) {
    QuditPauli out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out.x[i] = p.x.at(positions[i]);
        out.z[i] = p.z.at(positions[i]);
    }
    return out;
}

CatResidual cat_residual_from_values(const FieldCtx& f, const Vec& gammas, const Vec& link_values, Elem x_value) {
    const std::size_t c = gammas.size();
    if (c == 0 || link_values.size() + 1 != c) throw DimensionMismatch("one link value per adjacent pair");
    CatResidual r;
    r.x.assign(c, 0);
    for (std::size_t j = 1; j < c; ++j)
        r.x[j] = f.div(link_values[j - 1] ^ f.mul(gammas[j], r.x[j - 1]), gammas[j - 1]);
    // x and x + lambda*gamma act identically on the cat; keep the lightest.
    std::map<Elem, std::size_t> ratio_count;
    for (std::size_t j = 0; j < c; ++j) ++ratio_count[f.div(r.x[j], gammas[j])];
    Elem best = 0;
    std::size_t best_count = ratio_count.count(0) ? ratio_count[0] : 0;
    for (const auto& [lam, cnt] : ratio_count)
        if (cnt > best_count) {
            best = lam;
            best_count = cnt;
        }
    for (std::size_t j = 0; j < c; ++j) r.x[j] ^= f.mul(best, gammas[j]);
    r.x_weight = weight(r.x);
    r.z0 = f.div(x_value, gammas[0]);
    r.z_weight = r.z0 ? 1 : 0;
    return r;
}

Vec cat_values(const Tableau& t, const Vec& gammas, const std::vector<std::size_t>& cat) {
    const auto rows = cat_generators(t.field(), gammas, cat, t.n_qudits());
    Vec out;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto v = t.expectation(rows[k]);
        if (!v) throw BadParameters("cat link is not determined by the state");
        out.push_back(*v);
    }
    const auto xv = t.expectation(rows[0]);
    if (!xv) throw BadParameters("cat X row is not determined by the state");
    out.push_back(*xv);
    return out;
}

CatResidual cat_residual(const Tableau& t, const Vec& gammas, const std::vector<std::size_t>& cat) {
    Vec v = cat_values(t, gammas, cat);
    const Elem xv = v.back();
    v.pop_back();
    return cat_residual_from_values(t.field(), gammas, v, xv);
}

bool x_support_within(const FieldCtx& f, const Vec& x, const Vec& gammas, const std::vector<std::size_t>& allowed) {
    std::optional<Elem> lam;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (std::find(allowed.begin(), allowed.end(), j) != allowed.end()) continue;
        const Elem r = f.div(x[j], gammas[j]);
        if (!lam) lam = r;
        else if (*lam != r) return false;
    }
    return true;
}

}  // namespace qrsmem
