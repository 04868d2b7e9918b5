#include "qrsmem/config.hpp"

#include <cmath>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qrsmem/errors.hpp"
#include "qrsmem/io.hpp"

namespace qrsmem {

namespace {

namespace pt = boost::property_tree;

pt::ptree parse_ini(const std::string& text) {
    std::istringstream in(text);
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    return tree;
}

double to_double(const std::string& key, const std::string& raw) {
    const std::string s = boost::trim_copy(raw);
    if (s.empty()) throw ConfigError("required key " + key + " has no value");
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError("trailing characters in " + key);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("not a number for " + key + ": " + s);
    }
}

std::size_t to_size(const std::string& key, const std::string& raw) {
    const double v = to_double(key, raw);
    if (v < 0 || v != std::floor(v)) throw ConfigError("not a nonnegative integer for " + key);
    return static_cast<std::size_t>(v);
}

double required(const pt::ptree& t, const std::string& key) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) throw ConfigError("missing required key " + key);
    return to_double(key, *v);
}

double optional(const pt::ptree& t, const std::string& key, double fallback) {
    const auto v = t.get_optional<std::string>(key);
    return v ? to_double(key, *v) : fallback;
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> parts;
    boost::split(parts, raw, boost::is_any_of(","));
    std::vector<std::string> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

void check_probability(const std::string& key, double v) {
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError(key + " must lie in [0, 1)");
}

ReductionCurve parse_curve(const std::string& key, const std::string& raw) {
    ReductionCurve c;
    for (const auto& item : split_list(raw)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(key + " entries must be rate:multiplier");
        const double r = to_double(key, item.substr(0, colon));
        const double m = to_double(key, item.substr(colon + 1));
        check_probability(key, r);
        if (!(m > 0.0 && m <= 1.0)) throw ConfigError(key + " multipliers must lie in (0, 1]");
        if (!c.points.empty() && r <= c.points.back().first) throw ConfigError(key + " rates must increase");
        c.points.emplace_back(r, m);
    }
    return c;
}

}  // namespace

NoiseConfig parse_noise_config(const std::string& text) {
    const pt::ptree t = parse_ini(text);
    NoiseConfig c;
    InstructionRates& r = c.rates;
    r.p_half = required(t, "rates.p_half");
    r.p_whole = required(t, "rates.p_whole");
    r.p_inter = required(t, "rates.p_inter");
    const bool has_idle = t.get_optional<std::string>("rates.p_idle").has_value();
    const bool has_log = t.get_optional<std::string>("rates.p_idle_log10").has_value();
    if (has_idle == has_log) throw ConfigError("give exactly one of rates.p_idle and rates.p_idle_log10");
    r.p_idle = has_idle ? required(t, "rates.p_idle") : std::pow(10.0, required(t, "rates.p_idle_log10"));
    for (auto [key, v] : {std::pair{"p_half", r.p_half}, {"p_whole", r.p_whole}, {"p_inter", r.p_inter}, {"p_idle", r.p_idle}})
        check_probability(std::string("rates.") + key, v);
    r.tau_meas = optional(t, "timing.tau_meas", r.tau_meas);
    r.tau_idle = optional(t, "timing.tau_idle", r.tau_idle);
    if (!(r.tau_meas > 0) || !(r.tau_idle > 0)) throw ConfigError("timing values must be positive");

    ClassRates* conds[] = {&c.ps.c1, &c.ps.c2, &c.ps.c3};
    for (int i = 0; i < 3; ++i) {
        const std::string p = "post_selection.c" + std::to_string(i + 1) + "_";
        conds[i]->half = optional(t, p + "half", 0.0);
        conds[i]->whole = optional(t, p + "whole", 0.0);
        conds[i]->inter = optional(t, p + "inter", 0.0);
        for (double v : {conds[i]->half, conds[i]->whole, conds[i]->inter}) check_probability(p + "*", v);
    }
    if (auto v = t.get_optional<std::string>("reduction.half")) c.ps.half = parse_curve("reduction.half", *v);
    if (auto v = t.get_optional<std::string>("reduction.whole")) c.ps.whole = parse_curve("reduction.whole", *v);
    if (auto v = t.get_optional<std::string>("reduction.inter")) c.ps.inter = parse_curve("reduction.inter", *v);
    return c;
}

NoiseConfig load_noise_config(const std::filesystem::path& path) { return parse_noise_config(read_text_file(path)); }

GridConfig parse_grid_config(const std::string& text, const std::filesystem::path& base_dir) {
    const pt::ptree t = parse_ini(text);
    GridConfig g;
    auto size_key = [&](const std::string& key, std::size_t fallback) {
        const auto v = t.get_optional<std::string>(key);
        return v ? to_size(key, *v) : fallback;
    };
    auto size_list = [&](const std::string& key, std::vector<std::size_t> fallback) {
        const auto v = t.get_optional<std::string>(key);
        if (!v) return fallback;
        std::vector<std::size_t> out;
        for (const auto& s : split_list(*v)) out.push_back(to_size(key, s));
        if (out.empty()) throw ConfigError(key + " is empty");
        return out;
    };
    g.n_min = size_key("grid.n_min", g.n_min);
    g.n_max = size_key("grid.n_max", g.n_max);
    g.m_min = size_key("grid.m_min", g.m_min);
    g.m_max = size_key("grid.m_max", g.m_max);
    g.d_min = size_key("grid.d_min", g.d_min);
    g.d_max = size_key("grid.d_max", g.d_max);
    g.extra_checks = size_list("grid.extra_checks", g.extra_checks);
    g.rounds = size_list("grid.rounds", g.rounds);
    g.max_physical_qubits = optional(t, "grid.max_physical_qubits", g.max_physical_qubits);
    if (g.n_min > g.n_max || g.m_min > g.m_max || g.d_min > g.d_max) throw ConfigError("empty grid range");
    if (g.m_min < 3) throw ConfigError("grid.m_min must be at least 3");
    if (g.d_min < 3 || g.d_max > 9) throw ConfigError("grid distances must lie in 3..9");

    g.fractions_dir = base_dir / t.get<std::string>("fractions.dir", "fractions");
    g.alpha_dir = base_dir / t.get<std::string>("fractions.alpha_dir", "alpha");
    const std::string fb = t.get<std::string>("fractions.fallback", "none");
    if (fb == "expected-collisions") g.allow_fallback = true;
    else if (fb != "none") throw ConfigError("fractions.fallback must be none or expected-collisions");

    const std::string search = t.get<std::string>("post_selection_search.enabled", "false");
    if (search != "true" && search != "false") throw ConfigError("post_selection_search.enabled must be true or false");
    g.search_post_selection = search == "true";
    if (auto v = t.get_optional<std::string>("post_selection_search.rates")) {
        g.search_rates.clear();
        for (const auto& s : split_list(*v)) {
            g.search_rates.push_back(to_double("post_selection_search.rates", s));
            check_probability("post_selection_search.rates", g.search_rates.back());
        }
    }
    return g;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
    return parse_grid_config(read_text_file(path), path.parent_path());
}

CodeSpec load_code_spec(const FieldCtx& f, const std::filesystem::path& path) {
    const pt::ptree t = parse_ini(read_text_file(path));
    CodeSpec c;
    const auto d = t.get_optional<std::string>("d");
    const auto alpha = t.get_optional<std::string>("alpha");
    if (!d || !alpha) throw ConfigError("code spec needs d and alpha");
    c.d = to_size("d", *d);
    auto elems = [&](const std::string& key, const std::string& raw) {
        std::istringstream in(raw);
        Vec out;
        std::string tok;
        while (in >> tok) {
            try {
                out.push_back(f.parse(tok));
            } catch (const Error& e) {
                throw ConfigError(key + ": " + e.what());
            }
        }
        return out;
    };
    c.alpha = elems("alpha", *alpha);
    if (auto v = t.get_optional<std::string>("v")) c.v = elems("v", *v);
    else c.v = Vec(c.alpha.size(), 1);
    if (c.v.size() != c.alpha.size()) throw ConfigError("v and alpha lengths differ");
    return c;
}

}  // namespace qrsmem
