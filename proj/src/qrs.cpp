#include "qrsmem/qrs.hpp"

#include "qrsmem/errors.hpp"

namespace qrsmem {

QrsCode build_qrs(const FieldPtr& ctx, std::size_t n, std::size_t d, const Vec& alpha, const Vec& v) {
    if (d < 2 || 2 * (d - 1) >= n) throw BadParameters("need 2(d-1) < n");
    if (alpha.size() != n || v.size() != n) throw BadParameters("alpha and v must have length n");
    GrsCode xcode(ctx, d - 1, alpha, v);
    QrsCode c;
    c.ctx = ctx;
    c.n = n;
    c.d = d;
    c.alpha = alpha;
    c.v = v;
    c.u = xcode.dual_multipliers();
    c.hx = xcode.generator_matrix();
    c.hz = GrsCode(ctx, d - 1, alpha, c.u).generator_matrix();
    if (!is_zero(multiply(*ctx, c.hx, transpose(c.hz)))) throw BadParameters("hx * hz^T != 0");
    return c;
}

QrsCode build_qrs(const FieldPtr& ctx, std::size_t d, const Vec& alpha) {
    return build_qrs(ctx, alpha.size(), d, alpha, Vec(alpha.size(), 1));
}

namespace {

std::vector<BitRow> expand_rows(const FieldCtx& f, const Matrix& h, const QuditBasis& row_basis,
                                const std::vector<QuditBasis>& col_bases) {
    const std::size_t s = static_cast<std::size_t>(f.s());
    std::vector<BitRow> out;
    for (std::size_t a = 0; a < h.rows; ++a) {
        for (std::size_t i = 0; i < s; ++i) {
            BitRow row(s * h.cols, 0);
            for (std::size_t b = 0; b < h.cols; ++b) {
                const Elem base = f.mul(row_basis[i], h(a, b));
                for (std::size_t k = 0; k < s; ++k)
                    row[b * s + k] = static_cast<std::uint8_t>(f.trace(f.mul(base, col_bases[b][k])));
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace

BinarizedCss binarize_matrices(const FieldCtx& f, const Matrix& hx, const Matrix& hz, const MappingSet& mapping) {
    if (mapping.size() != hx.cols || hx.cols != hz.cols) throw BasisMismatch("mapping length must equal n");
    for (const auto& b : mapping.per_coordinate)
        if (b.field().s() != f.s() || b.field().poly() != f.poly()) throw BasisMismatch("basis over a different field");
    std::vector<QuditBasis> duals;
    for (const auto& b : mapping.per_coordinate) duals.push_back(b.dual());
    BinarizedCss out;
    out.s = static_cast<std::size_t>(f.s());
    const QuditBasis& row_basis = mapping.per_coordinate.front();
    out.x_rows = expand_rows(f, hx, row_basis, duals);
    out.z_rows = expand_rows(f, hz, row_basis, mapping.per_coordinate);
    return out;
}

BinarizedCss binarize(const QrsCode& code, const MappingSet& mapping) {
    return binarize_matrices(*code.ctx, code.hx, code.hz, mapping);
}

std::string format_listing(const std::vector<BitRow>& rows, std::size_t s) {
    std::string out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += std::to_string(r + 1) + ": [";
        for (std::size_t j = 0; j < rows[r].size(); ++j) {
            if (j && j % s == 0) out += ' ';
            out += rows[r][j] ? '1' : '0';
        }
        out += "]\n";
    }
    return out;
}

Elem qudit_pairing(const FieldCtx& f, const Vec& stab, const Vec& err) {
    if (stab.size() != err.size()) throw DimensionMismatch("qudit_pairing: lengths differ");
    return dot(f, stab, err);
}

}  // namespace qrsmem
