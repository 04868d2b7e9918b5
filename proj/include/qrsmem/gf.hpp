#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qrsmem {

// Field elements are plain integers whose binary expansion holds the
// polynomial coefficients; every operation goes through a FieldCtx.
using Elem = std::uint16_t;

class FieldCtx {
public:
    // Throws ReducibleModulus if poly is not an irreducible degree-s polynomial.
    FieldCtx(int s, std::uint32_t poly);

    // GF(2^11) with t^11 + t^2 + 1.
    static std::shared_ptr<const FieldCtx> gf2048();
    static std::shared_ptr<const FieldCtx> make(int s, std::uint32_t poly);
    // Smallest irreducible polynomial of degree s (for small test fields).
    static std::uint32_t default_poly(int s);

    int s() const { return s_; }
    std::uint32_t poly() const { return poly_; }
    std::uint32_t q() const { return q_; }

    static Elem add(Elem a, Elem b) { return static_cast<Elem>(a ^ b); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    // Shift-and-reduce product, independent of the tables.
    Elem mul_reference(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;
    int trace(Elem a) const { return trace_[a]; }
    // Trace computed as the sum of Frobenius powers, independent of the table.
    int trace_reference(Elem a) const;

    Elem parse(std::string_view text) const;
    std::string render(Elem a) const;
    bool contains(std::uint64_t v) const { return v < q_; }

    // Tables used by the batched kernels: exp has 2(q-1) entries, log[0] unused.
    const std::int32_t* log_table32() const { return log32_.data(); }
    const std::int32_t* exp_table32() const { return exp32_.data(); }
    Elem generator() const { return gen_; }

private:
    int s_;
    std::uint32_t poly_;
    std::uint32_t q_;
    Elem gen_ = 0;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::int32_t> exp32_;
    std::vector<std::int32_t> log32_;
    std::vector<std::uint8_t> trace_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

bool is_irreducible(int s, std::uint32_t poly);

}  // namespace qrsmem
