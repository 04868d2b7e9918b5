#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrsmem/decode.hpp"
#include "qrsmem/failure.hpp"

namespace qrsmem {

// (d, e) pairs whose collision fractions enter the space-like bound.
const std::vector<std::pair<std::size_t, std::size_t>>& model_fraction_keys();

// Directory of fraction tables, one CSV per (n, d, e), each file name
// carrying the CRC of the evaluation-point file it was estimated from.
class FractionCache {
public:
    FractionCache(std::filesystem::path dir, std::filesystem::path alpha_dir);

    std::filesystem::path alpha_path(std::size_t n) const;
    std::filesystem::path table_path(std::size_t n, std::size_t d, std::size_t e) const;
    std::optional<FractionTable> load(std::size_t n, std::size_t d, std::size_t e) const;
    void store(const FractionTable& t) const;

    // Loads the table or estimates and stores it; the estimator derives its
    // streams from (seed, n, d, e).
    FractionTable ensure(const FieldPtr& ctx, std::size_t n, std::size_t d, std::size_t e, std::uint64_t samples,
                         std::uint64_t seed, unsigned jobs) const;

    // Every cached model table for the given lengths.
    FractionSource source(const std::vector<std::size_t>& ns, bool allow_fallback) const;

private:
    std::filesystem::path dir_;
    std::filesystem::path alpha_dir_;
};

// Check matrix of the distance-d GRS code on the given points, unit multipliers.
Matrix fraction_check_matrix(const FieldPtr& ctx, const Vec& alpha, std::size_t d);

}  // namespace qrsmem
