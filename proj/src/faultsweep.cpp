#include "qrsmem/faultsweep.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <unordered_map>

#include "qrsmem/errors.hpp"

namespace qrsmem {

std::vector<FaultComponent> fault_components(const Script& s) {
    std::vector<FaultComponent> out;
    for (std::size_t i = 0; i < s.ops.size(); ++i) {
        for (std::size_t q : s.ops[i].touched) {
            out.push_back({i, FaultComponent::Kind::X, q});
            out.push_back({i, FaultComponent::Kind::Z, q});
        }
        if (s.ops[i].kind == OpKind::Measure) out.push_back({i, FaultComponent::Kind::Flip, 0});
    }
    return out;
}

std::vector<FaultEvent> to_events(const Script& s, const std::vector<FaultComponent>& comps, const Vec& coefs) {
    if (comps.size() != coefs.size()) throw DimensionMismatch("one coefficient per fault component");
    std::map<std::size_t, FaultEvent> by_step;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        if (!coefs[k]) continue;
        auto& ev = by_step[comps[k].step];
        ev.step = comps[k].step;
        if (comps[k].kind == FaultComponent::Kind::Flip) {
            ev.flip ^= coefs[k];
            continue;
        }
        if (ev.pauli.x.empty()) ev.pauli = QuditPauli(s.n_qudits);
        (comps[k].kind == FaultComponent::Kind::X ? ev.pauli.x : ev.pauli.z).at(comps[k].qudit) ^= coefs[k];
    }
    std::vector<FaultEvent> out;
    for (auto& [step, ev] : by_step) out.push_back(std::move(ev));
    return out;
}

ResponseModel linear_response(const Script& s, const Tableau& initial, const Observer& observe) {
    ResponseModel m;
    m.components = fault_components(s);
    const auto base = run_script(s, initial, {}, nullptr, OutcomeMode::Zero);
    m.base_checks = base.check_values;
    m.base_observed = observe(*base.state);
    for (const auto& c : m.components) {
        const auto tr = run_script(s, initial, to_events(s, {c}, Vec{1}), nullptr, OutcomeMode::Zero);
        Vec dc = tr.check_values, dv = observe(*tr.state);
        for (std::size_t i = 0; i < dc.size(); ++i) dc[i] ^= m.base_checks[i];
        for (std::size_t i = 0; i < dv.size(); ++i) dv[i] ^= m.base_observed[i];
        m.check_response.push_back(std::move(dc));
        m.observed_response.push_back(std::move(dv));
    }
    return m;
}

std::size_t cat_x_weight(const FieldCtx& f, const Vec& gammas, const Vec& link_values) {
    const std::size_t c = gammas.size();
    std::vector<Elem> ratio(c);
    Elem prev = 0;
    ratio[0] = 0;
    for (std::size_t j = 1; j < c; ++j) {
        const Elem x = f.div(link_values[j - 1] ^ f.mul(gammas[j], prev), gammas[j - 1]);
        ratio[j] = f.div(x, gammas[j]);
        prev = x;
    }
    std::sort(ratio.begin(), ratio.end());
    std::size_t best = 0;
    for (std::size_t i = 0; i < c;) {
        std::size_t j = i;
        while (j < c && ratio[j] == ratio[i]) ++j;
        best = std::max(best, j - i);
        i = j;
    }
    return c - best;
}

namespace {

// Response of one step: its components and the combined (checks | links) vectors.
struct Location {
    std::size_t step = 0;
    std::vector<std::size_t> comp_index;
};

struct VecHash {
    std::size_t operator()(const Vec& v) const {
        std::size_t h = 1469598103934665603ull;
        for (Elem e : v) h = (h ^ e) * 1099511628211ull;
        return h;
    }
};

// Calls fn(coefs, response) for every nonzero coefficient vector over F_q^K.
template <class Fn>
void for_each_combination(const FieldCtx& f, const std::vector<Vec>& resp, std::size_t len, Fn&& fn) {
    const std::size_t k = resp.size();
    Vec coefs(k, 0), acc(len, 0);
    // Odometer over coefficients; acc tracks sum coefs[i] * resp[i].
    while (true) {
        std::size_t i = 0;
        while (i < k) {
            const Elem old = coefs[i];
            const Elem next = static_cast<Elem>(old + 1u == f.q() ? 0u : old + 1u);
            for (std::size_t t = 0; t < len; ++t) acc[t] ^= f.mul(old ^ next, resp[i][t]);
            coefs[i] = next;
            if (next) break;
            ++i;
        }
        if (i == k) return;
        fn(coefs, acc);
    }
}

std::uint64_t count_nonzero(std::uint64_t q, std::size_t k) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < k; ++i) v *= q;
    return v - 1;
}

template <class Fn>
void parallel_indices(std::size_t count, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += jobs) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

SweepReport sweep_cat_preparation(const FieldPtr& ctx, const Vec& gammas, const CatPrepOptions& prep,
                                  const SweepOptions& opt) {
    const FieldCtx& f = *ctx;
    if (opt.max_faults < 1 || opt.max_faults > 2) throw BadParameters("fault sweep supports one or two faults");
    const std::size_t c = gammas.size();
    const Script s = cat_preparation_script(ctx, gammas, prep);
    std::vector<std::size_t> cat(c);
    for (std::size_t i = 0; i < c; ++i) cat[i] = i;
    const Observer observe = [&](const Tableau& t) { return cat_values(t, gammas, cat); };
    const ResponseModel m = linear_response(s, Tableau(ctx, s.n_qudits), observe);
    for (Elem v : m.base_checks)
        if (v) throw BadParameters("faultless preparation rejected");

    const std::size_t nchk = m.base_checks.size();
    const std::size_t len = nchk + (c - 1);
    // Combined response per component: checks then link values.
    std::vector<Vec> comb(m.components.size());
    for (std::size_t k = 0; k < comb.size(); ++k) {
        comb[k] = m.check_response[k];
        comb[k].insert(comb[k].end(), m.observed_response[k].begin(), m.observed_response[k].begin() + (c - 1));
    }
    Vec base_links(m.base_observed.begin(), m.base_observed.begin() + (c - 1));

    std::vector<Location> locs;
    for (std::size_t k = 0; k < m.components.size(); ++k) {
        if (locs.empty() || locs.back().step != m.components[k].step) locs.push_back({m.components[k].step, {}});
        locs.back().comp_index.push_back(k);
    }

    auto is_accepted = [&](const Vec& acc) {
        for (std::size_t t = 0; t < nchk; ++t)
            if (acc[t]) return false;
        return true;
    };
    auto x_weight_of = [&](const Vec& acc) {
        Vec links(base_links);
        for (std::size_t t = 0; t < c - 1; ++t) links[t] ^= acc[nchk + t];
        return cat_x_weight(f, gammas, links);
    };
    auto events_for = [&](const std::vector<std::pair<const Location*, Vec>>& parts) {
        std::vector<FaultComponent> comps;
        Vec coefs;
        for (const auto& [loc, cf] : parts)
            for (std::size_t i = 0; i < loc->comp_index.size(); ++i) {
                comps.push_back(m.components[loc->comp_index[i]]);
                coefs.push_back(cf[i]);
            }
        return to_events(s, comps, coefs);
    };

    SweepReport rep;
    rep.locations = locs.size();
    rep.faults_checked = opt.max_faults;

    // Single faults: every nonzero configuration at every step.
    std::vector<SweepReport> per(locs.size());
    parallel_indices(locs.size(), opt.jobs, [&](std::size_t li) {
        const Location& loc = locs[li];
        std::vector<Vec> resp;
        for (auto k : loc.comp_index) resp.push_back(comb[k]);
        SweepReport& r = per[li];
        for_each_combination(f, resp, len, [&](const Vec& coefs, const Vec& acc) {
            ++r.configurations;
            if (!is_accepted(acc)) return;
            ++r.accepted;
            const std::size_t w = x_weight_of(acc);
            r.max_accepted_x_weight = std::max(r.max_accepted_x_weight, w);
            if (w > 1) {
                if (!r.violations) {
                    r.counterexample = events_for({{&loc, coefs}});
                    r.counterexample_weight = w;
                }
                ++r.violations;
            }
        });
    });

    if (opt.max_faults == 2) {
        // Distinct responses per step, each with one witness configuration.
        std::vector<std::unordered_map<Vec, Vec, VecHash>> images(locs.size());
        parallel_indices(locs.size(), opt.jobs, [&](std::size_t li) {
            std::vector<Vec> resp;
            for (auto k : locs[li].comp_index) resp.push_back(comb[k]);
            for_each_combination(f, resp, len, [&](const Vec& coefs, const Vec& acc) { images[li].try_emplace(acc, coefs); });
        });
        // Group the second step's responses by their check part.
        std::vector<std::unordered_map<Vec, std::vector<const std::pair<const Vec, Vec>*>, VecHash>> by_checks(locs.size());
        for (std::size_t li = 0; li < locs.size(); ++li)
            for (const auto& entry : images[li]) {
                Vec key(entry.first.begin(), entry.first.begin() + nchk);
                by_checks[li][key].push_back(&entry);
            }
        std::vector<SweepReport> pair_rep(locs.size());
        parallel_indices(locs.size(), opt.jobs, [&](std::size_t l1) {
            SweepReport& r = pair_rep[l1];
            const std::uint64_t n1 = count_nonzero(f.q(), locs[l1].comp_index.size());
            for (std::size_t l2 = l1 + 1; l2 < locs.size(); ++l2) {
                r.configurations += n1 * count_nonzero(f.q(), locs[l2].comp_index.size());
                for (const auto& [v1, c1] : images[l1]) {
                    Vec key(v1.begin(), v1.begin() + nchk);
                    auto it = by_checks[l2].find(key);
                    if (it == by_checks[l2].end()) continue;
                    for (const auto* e2 : it->second) {
                        Vec acc = v1;
                        for (std::size_t t = 0; t < len; ++t) acc[t] ^= e2->first[t];
                        ++r.accepted;
                        const std::size_t w = x_weight_of(acc);
                        r.max_accepted_x_weight = std::max(r.max_accepted_x_weight, w);
                        if (w > 2) {
                            if (!r.violations) {
                                r.counterexample = events_for({{&locs[l1], c1}, {&locs[l2], e2->second}});
                                r.counterexample_weight = w;
                            }
                            ++r.violations;
                        }
                    }
                }
            }
        });
        per.insert(per.end(), pair_rep.begin(), pair_rep.end());
    }

    for (const auto& r : per) {
        rep.configurations += r.configurations;
        rep.accepted += r.accepted;
        rep.max_accepted_x_weight = std::max(rep.max_accepted_x_weight, r.max_accepted_x_weight);
        if (r.violations && !rep.violations) {
            rep.counterexample = r.counterexample;
            rep.counterexample_weight = r.counterexample_weight;
        }
        rep.violations += r.violations;
    }
    return rep;
}

}  // namespace qrsmem
