#include "qrsmem/gf_kernels.hpp"

#include <algorithm>
#include <atomic>

namespace qrsmem::kernels {

namespace {
std::atomic<bool> g_force_scalar{false};
}

void axpy_scalar(const FieldCtx& f, Elem c, const Elem* x, Elem* acc, std::size_t len) {
    if (c == 0) return;
    for (std::size_t j = 0; j < len; ++j) acc[j] ^= f.mul(c, x[j]);
}

bool avx2_available() {
#if defined(QRSMEM_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool has = __builtin_cpu_supports("avx2");
    return has;
#else
    return false;
#endif
}

std::string active_variant() { return (avx2_available() && !g_force_scalar.load()) ? "avx2" : "scalar"; }

void force_scalar(bool on) { g_force_scalar.store(on); }

void axpy(const FieldCtx& f, Elem c, const Elem* x, Elem* acc, std::size_t len) {
#if defined(QRSMEM_WITH_AVX2)
    if (avx2_available() && !g_force_scalar.load(std::memory_order_relaxed)) {
        axpy_avx2(f, c, x, acc, len);
        return;
    }
#endif
    axpy_scalar(f, c, x, acc, len);
}

void dot_columns(const FieldCtx& f, const Elem* w, std::size_t nrows, const Elem* rows, std::size_t stride,
                 Elem* out, std::size_t len) {
    std::fill(out, out + len, Elem{0});
    for (std::size_t r = 0; r < nrows; ++r) axpy(f, w[r], rows + r * stride, out, len);
}

}  // namespace qrsmem::kernels
