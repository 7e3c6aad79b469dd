#pragma once
// Runtime-dispatched arithmetic kernels.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active variant is chosen once at startup from CPUID;
// the SDDF_SIMD environment variable ("scalar", "avx2", "auto") overrides
// the choice. Scalar and SIMD variants are equivalence-tested against each
// other; results may differ in the last ulps because of FMA contraction.

#include <cstddef>
#include <cstdint>
#include <string>

namespace sddf::simd {

struct KernelTable {
    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // sum_i x[i]^2
    double (*sumsq)(const double* x, std::size_t n);
    // out[r] = offset[r] + dot(A.row(r), x); A row-major, rows x cols
    void (*affine_rows)(const double* a, const double* offset, const double* x,
                        double* out, std::size_t rows, std::size_t cols);
    // min_r (offset[r] + dot(A.row(r), x)); *argmin receives the row index
    double (*envelope_min)(const double* a, const double* offset, const double* x,
                           std::size_t rows, std::size_t cols, std::size_t* argmin);
};

// Active table (set by init on first use, idempotent afterwards).
const KernelTable& active();

// Name of the active variant: "scalar" or "avx2".
const std::string& active_name();

// Force a variant; throws std::invalid_argument for unknown names or when
// the requested variant is unsupported on this CPU. Intended for tests.
void force_variant(const std::string& name);

// Individual variants, exposed for equivalence tests.
const KernelTable& scalar_table();
bool avx2_available();            // compiled in and supported by the CPU
const KernelTable* avx2_table();  // nullptr when unavailable

// Convenience wrappers through the active table.
inline double dot(const double* x, const double* y, std::size_t n) {
    return active().dot(x, y, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
    active().axpy(a, x, y, n);
}
inline double sumsq(const double* x, std::size_t n) {
    return active().sumsq(x, n);
}
inline void affine_rows(const double* a, const double* offset, const double* x,
                        double* out, std::size_t rows, std::size_t cols) {
    active().affine_rows(a, offset, x, out, rows, cols);
}
inline double envelope_min(const double* a, const double* offset, const double* x,
                           std::size_t rows, std::size_t cols, std::size_t* argmin = nullptr) {
    return active().envelope_min(a, offset, x, rows, cols, argmin);
}

} // namespace sddf::simd
