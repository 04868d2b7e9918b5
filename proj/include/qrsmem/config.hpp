#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qrsmem/gf.hpp"
#include "qrsmem/linalg.hpp"
#include "qrsmem/noise.hpp"

namespace qrsmem {

// INI file, sections:
//   [rates]           p_half, p_whole, p_inter (required); p_idle or p_idle_log10 (required)
//   [timing]          tau_meas, tau_idle (optional)
//   [post_selection]  c1_half ... c3_inter (optional, default 0)
//   [reduction]       half, whole, inter as "rate:multiplier, ..." (optional)
// Throws ConfigError.
struct NoiseConfig {
    InstructionRates rates;
    PostSelection ps;
};
NoiseConfig parse_noise_config(const std::string& text);
NoiseConfig load_noise_config(const std::filesystem::path& path);

// INI file, sections:
//   [grid]      n_min, n_max, m_min, m_max, d_min, d_max, extra_checks, rounds, max_physical_qubits
//   [fractions] dir, alpha_dir, fallback (paths relative to the file)
//   [post_selection_search] enabled, rates
struct GridConfig {
    std::size_t n_min = 20, n_max = 80;
    std::size_t m_min = 3, m_max = 50;
    std::size_t d_min = 3, d_max = 9;
    std::vector<std::size_t> extra_checks{1, 2};
    std::vector<std::size_t> rounds{1, 2};
    double max_physical_qubits = 500000;
    std::filesystem::path fractions_dir;
    std::filesystem::path alpha_dir;
    bool allow_fallback = false;
    bool search_post_selection = false;
    std::vector<double> search_rates{0.0, 1e-4, 3e-4, 1e-3, 3e-3};
};
GridConfig parse_grid_config(const std::string& text, const std::filesystem::path& base_dir);
GridConfig load_grid_config(const std::filesystem::path& path);

// Keyed text: d, alpha (space separated), optional v (default all ones).
struct CodeSpec {
    std::size_t d = 0;
    Vec alpha;
    Vec v;
};
CodeSpec load_code_spec(const FieldCtx& f, const std::filesystem::path& path);

}  // namespace qrsmem
