#pragma once

#include <string>
#include <vector>

#include "qrsmem/basis.hpp"
#include "qrsmem/grs.hpp"

namespace qrsmem {

// CSS code over Galois qudits from the nested GRS pair; parameters [[n, n-2(d-1), d]].
struct QrsCode {
    FieldPtr ctx;
    std::size_t n = 0;
    std::size_t d = 0;
    Vec alpha;
    Vec v;       // multipliers of the X checks
    Vec u;       // dual multipliers, used by the Z checks
    Matrix hx;   // (d-1) x n, row a has v_b * alpha_b^a
    Matrix hz;   // (d-1) x n, row a has u_b * alpha_b^a

    std::size_t logical_qudits() const { return n - 2 * (d - 1); }
    const FieldCtx& field() const { return *ctx; }
};

// Throws BadParameters unless 2(d-1) < n <= q with distinct nonzero alpha and nonzero v.
QrsCode build_qrs(const FieldPtr& ctx, std::size_t n, std::size_t d, const Vec& alpha, const Vec& v);
QrsCode build_qrs(const FieldPtr& ctx, std::size_t d, const Vec& alpha);

using BitRow = std::vector<std::uint8_t>;

struct BinarizedCss {
    std::vector<BitRow> x_rows;
    std::vector<BitRow> z_rows;
    std::size_t s = 0;
};

// X-check row (a, i) has bit (b, k) = Tr(R_i * hx_ab * D_bk) where R is the row
// basis (the first coordinate's basis) and D_b the dual of coordinate b's basis;
// Z-check rows use the primal basis on the column side.
BinarizedCss binarize(const QrsCode& code, const MappingSet& mapping);
BinarizedCss binarize_matrices(const FieldCtx& f, const Matrix& hx, const Matrix& hz, const MappingSet& mapping);

// Listing format: "<1-based index>: [g1 g2 ...]" with s-bit groups.
std::string format_listing(const std::vector<BitRow>& rows, std::size_t s);

// Sum gamma_i * e_i.
Elem qudit_pairing(const FieldCtx& f, const Vec& stab, const Vec& err);

}  // namespace qrsmem
