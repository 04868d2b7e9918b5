#include "qrsmem/basis.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qrsmem/errors.hpp"
#include "qrsmem/linalg.hpp"

namespace qrsmem {

std::size_t gf2_rank(std::vector<std::uint32_t> rows) {
    std::size_t r = 0;
    for (int bit = 31; bit >= 0; --bit) {
        const std::uint32_t mask = 1u << bit;
        std::size_t p = r;
        while (p < rows.size() && !(rows[p] & mask)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && (rows[i] & mask)) rows[i] ^= rows[r];
        ++r;
    }
    return r;
}

QuditBasis::QuditBasis(FieldPtr ctx, std::vector<Elem> elements) : ctx_(std::move(ctx)), elems_(std::move(elements)) {
    const std::size_t s = static_cast<std::size_t>(ctx_->s());
    if (elems_.size() != s) throw DependentBasis("basis needs exactly " + std::to_string(s) + " elements");
    std::vector<std::uint32_t> rows(elems_.begin(), elems_.end());
    for (auto e : elems_)
        if (!ctx_->contains(e)) throw OutOfRange("basis element " + std::to_string(e));
    if (gf2_rank(rows) != s) throw DependentBasis("basis elements are GF(2)-dependent");
    // Dual basis: solve G D = I over GF(2) where G is the trace Gram matrix.
    std::vector<std::uint32_t> gram(s, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            if (ctx_->trace(ctx_->mul(elems_[i], elems_[j]))) gram[i] |= 1u << j;
    // Invert gram over GF(2) by Gauss-Jordan on [gram | I].
    std::vector<std::uint64_t> aug(s);
    for (std::size_t i = 0; i < s; ++i) aug[i] = gram[i] | (std::uint64_t{1} << (s + i));
    for (std::size_t c = 0; c < s; ++c) {
        std::size_t p = c;
        while (p < s && !((aug[p] >> c) & 1u)) ++p;
        if (p == s) throw SingularGram("trace Gram matrix is singular");
        std::swap(aug[p], aug[c]);
        for (std::size_t i = 0; i < s; ++i)
            if (i != c && ((aug[i] >> c) & 1u)) aug[i] ^= aug[c];
    }
    // Gram is symmetric, so dual_j = sum_k (G^-1)_{jk} B_k.
    dual_.assign(s, 0);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t k = 0; k < s; ++k)
            if ((aug[j] >> (s + k)) & 1u) dual_[j] ^= elems_[k];
}

QuditBasis QuditBasis::polynomial(FieldPtr ctx) {
    std::vector<Elem> e;
    for (int i = 0; i < ctx->s(); ++i) e.push_back(static_cast<Elem>(1u << i));
    return QuditBasis(std::move(ctx), std::move(e));
}

QuditBasis QuditBasis::parse(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty basis file");
    int s = 0;
    long long poly = 0;
    if (std::sscanf(header.c_str(), "s=%d poly=%lld", &s, &poly) != 2 || s < 1 || s > 16 || poly <= 0)
        throw ParseError("bad basis header: " + header);
    auto ctx = FieldCtx::make(s, static_cast<std::uint32_t>(poly));
    std::vector<Elem> elems;
    std::string tok;
    while (in >> tok) elems.push_back(ctx->parse(tok));
    if (elems.size() != static_cast<std::size_t>(s))
        throw ParseError("expected " + std::to_string(s) + " basis elements, got " + std::to_string(elems.size()));
    return QuditBasis(ctx, std::move(elems));
}

QuditBasis QuditBasis::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open basis file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string QuditBasis::serialize() const {
    std::string out = "s=" + std::to_string(ctx_->s()) + " poly=" + std::to_string(ctx_->poly()) + "\n";
    for (auto e : elems_) out += std::to_string(e) + "\n";
    return out;
}

bool QuditBasis::is_self_dual() const {
    for (std::size_t i = 0; i < elems_.size(); ++i)
        for (std::size_t j = 0; j < elems_.size(); ++j)
            if (ctx_->trace(ctx_->mul(elems_[i], elems_[j])) != (i == j ? 1 : 0)) return false;
    return true;
}

QuditBasis QuditBasis::dual() const { return QuditBasis(ctx_, dual_); }

Bits QuditBasis::expand(Elem a) const {
    Bits out(elems_.size());
    for (std::size_t i = 0; i < elems_.size(); ++i) out[i] = static_cast<std::uint8_t>(ctx_->trace(ctx_->mul(a, dual_[i])));
    return out;
}

Elem QuditBasis::contract(const Bits& bits) const {
    if (bits.size() != elems_.size()) throw DimensionMismatch("contract: wrong bit count");
    Elem a = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1u) a ^= elems_[i];
    return a;
}

QuditBasis random_basis(const FieldPtr& ctx, Rng& rng) {
    const std::size_t s = static_cast<std::size_t>(ctx->s());
    while (true) {
        std::vector<Elem> e(s);
        for (auto& x : e) x = static_cast<Elem>(uniform_below(rng, ctx->q()));
        std::vector<std::uint32_t> rows(e.begin(), e.end());
        if (gf2_rank(rows) == s) return QuditBasis(ctx, std::move(e));
    }
}

}  // namespace qrsmem
