#pragma once

#include <cstddef>
#include <string>

#include "qrsmem/gf.hpp"

namespace qrsmem::kernels {

// acc[j] ^= c * x[j] for j < len.
void axpy_scalar(const FieldCtx& f, Elem c, const Elem* x, Elem* acc, std::size_t len);
#if defined(QRSMEM_WITH_AVX2)
void axpy_avx2(const FieldCtx& f, Elem c, const Elem* x, Elem* acc, std::size_t len);
#endif

bool avx2_available();
// Name of the variant used by axpy(): "avx2" or "scalar".
std::string active_variant();
// Forces the scalar path (used by equivalence tests and benchmarks).
void force_scalar(bool on);

void axpy(const FieldCtx& f, Elem c, const Elem* x, Elem* acc, std::size_t len);

// out[j] = sum_r w[r] * rows[r * stride + j], the dot of w with every column.
void dot_columns(const FieldCtx& f, const Elem* w, std::size_t nrows, const Elem* rows, std::size_t stride,
                 Elem* out, std::size_t len);

}  // namespace qrsmem::kernels
