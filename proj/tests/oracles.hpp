#pragma once

// Exhaustive reference computations shared by the unit tests and the
// acceptance binary. They use only field arithmetic and plain enumeration.

#include <cstdint>
#include <map>
#include <vector>

#include "qrsmem/gf.hpp"
#include "qrsmem/linalg.hpp"

namespace qrsmem::oracle {

inline FieldPtr gf(int s) { return FieldCtx::make(s, FieldCtx::default_poly(s)); }

// Full-support vectors in the kernel of h, by enumerating the kernel.
inline std::uint64_t full_support_kernel_count(const FieldCtx& f, const Matrix& h) {
    const Matrix basis = nullspace(f, h);
    const std::size_t k = h.cols, dim = basis.rows;
    std::uint64_t count = 0;
    Vec coefs(dim, 0);
    while (true) {
        Vec v(k, 0);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < k; ++c) v[c] ^= f.mul(coefs[r], basis(r, c));
        if (weight(v) == k) ++count;
        std::size_t i = 0;
        while (i < dim && ++coefs[i] == f.q()) coefs[i++] = 0;
        if (i == dim) break;
    }
    return count;
}

// Same count by scanning every full-support vector of GF(q)^k.
inline std::uint64_t full_support_scan(const FieldCtx& f, const Matrix& h) {
    const std::size_t k = h.cols;
    std::uint64_t count = 0;
    Vec v(k, 1);
    while (true) {
        if (weight(mat_vec(f, h, v)) == 0) ++count;
        std::size_t i = 0;
        while (i < k && ++v[i] == f.q()) v[i++] = 1;
        if (i == k) break;
    }
    return count;
}

// Minimum-weight members of every syndrome coset, by scanning GF(q)^n once.
inline std::map<Vec, std::vector<Vec>> coset_leaders(const FieldCtx& f, const Matrix& h) {
    std::map<Vec, std::vector<Vec>> out;
    Vec v(h.cols, 0);
    while (true) {
        const Vec y = mat_vec(f, h, v);
        auto& best = out[y];
        if (best.empty() || weight(v) < weight(best.front())) best = {v};
        else if (weight(v) == weight(best.front())) best.push_back(v);
        std::size_t i = 0;
        while (i < v.size() && ++v[i] == f.q()) v[i++] = 0;
        if (i == v.size()) break;
    }
    return out;
}

}  // namespace qrsmem::oracle
