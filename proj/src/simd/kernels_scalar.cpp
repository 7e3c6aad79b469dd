#include "sddf/simd/kernels.hpp"

#include <limits>

namespace sddf::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sumsq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void affine_rows_scalar(const double* a, const double* offset, const double* x,
                        double* out, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        out[r] = offset[r] + dot_scalar(a + r * cols, x, cols);
}

double envelope_min_scalar(const double* a, const double* offset, const double* x,
                           std::size_t rows, std::size_t cols, std::size_t* argmin) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_r = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double v = offset[r] + dot_scalar(a + r * cols, x, cols);
        if (v < best) {
            best = v;
            best_r = r;
        }
    }
    if (argmin) *argmin = best_r;
    return best;
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{dot_scalar, axpy_scalar, sumsq_scalar,
                                   affine_rows_scalar, envelope_min_scalar};
    return table;
}

} // namespace sddf::simd
