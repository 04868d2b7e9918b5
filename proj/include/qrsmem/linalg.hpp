#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qrsmem/gf.hpp"

namespace qrsmem {

using Vec = std::vector<Elem>;

// Dense row-major matrix over GF(q).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Elem> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    Elem& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    Elem operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const Elem* row_ptr(std::size_t r) const { return data.data() + r * cols; }
    Elem* row_ptr(std::size_t r) { return data.data() + r * cols; }
    Vec row(std::size_t r) const { return Vec(row_ptr(r), row_ptr(r) + cols); }
    Vec col(std::size_t c) const;
    bool operator==(const Matrix& o) const = default;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const FieldCtx& f, const Matrix& a, const Matrix& b);
Vec mat_vec(const FieldCtx& f, const Matrix& a, const Vec& x);
Elem dot(const FieldCtx& f, const Vec& a, const Vec& b);
bool is_zero(const Matrix& a);
std::size_t weight(const Vec& v);

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(const FieldCtx& f, Matrix& a);
std::size_t rank(const FieldCtx& f, Matrix a);
// Basis of {x : a x = 0}, one vector per row of the result.
Matrix nullspace(const FieldCtx& f, const Matrix& a);
// Some solution of a x = b, or nullopt if inconsistent.
std::optional<Vec> solve(const FieldCtx& f, const Matrix& a, const Vec& b);
std::optional<Matrix> inverse(const FieldCtx& f, const Matrix& a);
Matrix select_columns(const Matrix& a, const std::vector<std::size_t>& cols);

}  // namespace qrsmem
