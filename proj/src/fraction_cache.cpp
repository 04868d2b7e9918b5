#include "qrsmem/fraction_cache.hpp"

#include "qrsmem/errors.hpp"
#include "qrsmem/io.hpp"

namespace qrsmem {

const std::vector<std::pair<std::size_t, std::size_t>>& model_fraction_keys() {
    static const std::vector<std::pair<std::size_t, std::size_t>> keys{{4, 2}, {5, 3}, {6, 3}, {7, 4}};
    return keys;
}

FractionCache::FractionCache(std::filesystem::path dir, std::filesystem::path alpha_dir)
    : dir_(std::move(dir)), alpha_dir_(std::move(alpha_dir)) {}

std::filesystem::path FractionCache::alpha_path(std::size_t n) const {
    return alpha_dir_ / ("alpha_" + std::to_string(n) + ".txt");
}

std::filesystem::path FractionCache::table_path(std::size_t n, std::size_t d, std::size_t e) const {
    const std::string key = "n" + std::to_string(n) + "_d" + std::to_string(d) + "_e" + std::to_string(e);
    return dir_ / (key + "_" + file_crc32_hex(alpha_path(n)) + ".csv");
}

std::optional<FractionTable> FractionCache::load(std::size_t n, std::size_t d, std::size_t e) const {
    const auto path = table_path(n, d, e);
    if (!std::filesystem::exists(path)) return std::nullopt;
    const auto tables = FractionTable::from_csv(read_text_file(path));
    if (tables.size() != 1 || tables[0].n != n || tables[0].d != d || tables[0].e != e)
        throw ParseError("fraction cache entry does not match its key: " + path.string());
    return tables[0];
}

void FractionCache::store(const FractionTable& t) const { write_file_atomic(table_path(t.n, t.d, t.e), t.to_csv()); }

Matrix fraction_check_matrix(const FieldPtr& ctx, const Vec& alpha, std::size_t d) {
    return GrsCode(ctx, d - 1, alpha, Vec(alpha.size(), 1)).generator_matrix();
}

FractionTable FractionCache::ensure(const FieldPtr& ctx, std::size_t n, std::size_t d, std::size_t e,
                                    std::uint64_t samples, std::uint64_t seed, unsigned jobs) const {
    if (auto t = load(n, d, e)) return *t;
    const Vec alpha = load_alpha(*ctx, alpha_path(n).string());
    FractionTable t = estimate_fraction_table(*ctx, fraction_check_matrix(ctx, alpha, d), d, e, samples, seed, jobs);
    store(t);
    return t;
}

FractionSource FractionCache::source(const std::vector<std::size_t>& ns, bool allow_fallback) const {
    FractionSource src;
    src.allow_fallback = allow_fallback;
    for (std::size_t n : ns) {
        if (!std::filesystem::exists(alpha_path(n))) continue;
        for (const auto& [d, e] : model_fraction_keys())
            if (auto t = load(n, d, e)) src.add(*t);
    }
    return src;
}

}  // namespace qrsmem
