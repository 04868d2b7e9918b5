#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrsmem/gf.hpp"
#include "qrsmem/rng.hpp"

namespace qrsmem {

using Bits = std::vector<std::uint8_t>;

// Ordered basis B_0..B_{s-1} of GF(2^s) over GF(2).
class QuditBasis {
public:
    // Throws DependentBasis unless the elements are GF(2)-independent.
    QuditBasis(FieldPtr ctx, std::vector<Elem> elements);

    static QuditBasis polynomial(FieldPtr ctx);
    // Reads "s=<int> poly=<int>" followed by s decimal elements.
    static QuditBasis load(const std::string& path);
    static QuditBasis parse(const std::string& text);
    std::string serialize() const;

    const FieldCtx& field() const { return *ctx_; }
    const FieldPtr& field_ptr() const { return ctx_; }
    const std::vector<Elem>& elements() const { return elems_; }
    Elem operator[](std::size_t i) const { return elems_[i]; }
    std::size_t size() const { return elems_.size(); }

    bool is_self_dual() const;
    // Trace-dual basis: Tr(B_i * dual_i') = delta.
    QuditBasis dual() const;
    // Coordinates c with a = sum c_i B_i, computed as Tr(a * dual_i).
    Bits expand(Elem a) const;
    Elem contract(const Bits& bits) const;

    bool operator==(const QuditBasis& o) const { return elems_ == o.elems_ && ctx_->poly() == o.ctx_->poly(); }

private:
    FieldPtr ctx_;
    std::vector<Elem> elems_;
    std::vector<Elem> dual_;
};

// Uniform over ordered bases: rejection sampling of s random elements.
QuditBasis random_basis(const FieldPtr& ctx, Rng& rng);

// Per-coordinate bases, one per code position.
struct MappingSet {
    std::vector<QuditBasis> per_coordinate;
    static MappingSet uniform(const QuditBasis& b, std::size_t n) {
        return MappingSet{std::vector<QuditBasis>(n, b)};
    }
    std::size_t size() const { return per_coordinate.size(); }
};

// GF(2) rank of elements viewed as s-bit vectors.
std::size_t gf2_rank(std::vector<std::uint32_t> rows);

}  // namespace qrsmem
