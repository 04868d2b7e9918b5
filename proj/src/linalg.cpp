#include "qrsmem/linalg.hpp"

#include <algorithm>

#include "qrsmem/errors.hpp"

namespace qrsmem {

Vec Matrix::col(std::size_t c) const {
    Vec v(rows);
    for (std::size_t r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t c = 0; c < a.cols; ++c) t(c, r) = a(r, c);
    return t;
}

Matrix multiply(const FieldCtx& f, const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionMismatch("matrix product");
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Elem aik = a(i, k);
            if (!aik) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out(i, j) ^= f.mul(aik, b(k, j));
        }
    return out;
}

Vec mat_vec(const FieldCtx& f, const Matrix& a, const Vec& x) {
    if (a.cols != x.size()) throw DimensionMismatch("matrix-vector product");
    Vec out(a.rows, 0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Elem acc = 0;
        for (std::size_t j = 0; j < a.cols; ++j) acc ^= f.mul(a(i, j), x[j]);
        out[i] = acc;
    }
    return out;
}

Elem dot(const FieldCtx& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product");
    Elem acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc ^= f.mul(a[i], b[i]);
    return acc;
}

bool is_zero(const Matrix& a) {
    return std::all_of(a.data.begin(), a.data.end(), [](Elem e) { return e == 0; });
}

std::size_t weight(const Vec& v) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Elem e) { return e != 0; }));
}

std::vector<std::size_t> rref(const FieldCtx& f, Matrix& a) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        std::size_t p = r;
        while (p < a.rows && a(p, c) == 0) ++p;
        if (p == a.rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(p, j), a(r, j));
        const Elem iv = f.inv(a(r, c));
        for (std::size_t j = 0; j < a.cols; ++j) a(r, j) = f.mul(a(r, j), iv);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == r) continue;
            const Elem m = a(i, c);
            if (!m) continue;
            for (std::size_t j = 0; j < a.cols; ++j) a(i, j) ^= f.mul(m, a(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(const FieldCtx& f, Matrix a) { return rref(f, a).size(); }

Matrix nullspace(const FieldCtx& f, const Matrix& a) {
    Matrix r = a;
    const auto piv = rref(f, r);
    std::vector<bool> is_piv(a.cols, false);
    for (auto p : piv) is_piv[p] = true;
    Matrix basis(a.cols - piv.size(), a.cols);
    std::size_t b = 0;
    for (std::size_t free = 0; free < a.cols; ++free) {
        if (is_piv[free]) continue;
        basis(b, free) = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) basis(b, piv[i]) = r(i, free);  // char 2: -x = x
        ++b;
    }
    return basis;
}

std::optional<Vec> solve(const FieldCtx& f, const Matrix& a, const Vec& b) {
    if (b.size() != a.rows) throw DimensionMismatch("solve");
    Matrix aug(a.rows, a.cols + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        std::copy(a.row_ptr(i), a.row_ptr(i) + a.cols, aug.row_ptr(i));
        aug(i, a.cols) = b[i];
    }
    const auto piv = rref(f, aug);
    if (!piv.empty() && piv.back() == a.cols) return std::nullopt;
    Vec x(a.cols, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, a.cols);
    return x;
}

std::optional<Matrix> inverse(const FieldCtx& f, const Matrix& a) {
    if (a.rows != a.cols) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = a.rows;
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(a.row_ptr(i), a.row_ptr(i) + n, aug.row_ptr(i));
        aug(i, n + i) = 1;
    }
    const auto piv = rref(f, aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) std::copy(aug.row_ptr(i) + n, aug.row_ptr(i) + 2 * n, inv.row_ptr(i));
    return inv;
}

Matrix select_columns(const Matrix& a, const std::vector<std::size_t>& cols) {
    Matrix out(a.rows, cols.size());
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = a(r, cols[j]);
    return out;
}

}  // namespace qrsmem
