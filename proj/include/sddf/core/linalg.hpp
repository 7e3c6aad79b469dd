#pragma once
// Dense row-major matrix and the two factorizations the estimators need:
// Cholesky for SPD systems and an unpivoted LDL^T for the symmetric
// quasi-definite KKT matrices produced by the interior-point solver.
// Inner loops run through the simd kernel layer.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sddf {

using Vec = std::vector<double>;

class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    // y = A x
    Vec matvec(const Vec& x) const;
    // y = A' x
    Vec matvec_t(const Vec& x) const;

    Mat transposed() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    Vec data_;
};

// --- small vector helpers -------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
void axpy(double a, const Vec& x, Vec& y); // y += a*x
Vec operator-(const Vec& a, const Vec& b);
Vec operator+(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double s);

// --- factorizations -------------------------------------------------------

// Cholesky (LL^T) of an SPD matrix. factor() returns false when a pivot
// drops below `min_pivot`, leaving the object unusable.
class Cholesky {
  public:
    bool factor(const Mat& a, double min_pivot = 0.0);
    Vec solve(const Vec& b) const;
    std::size_t size() const { return n_; }

  private:
    std::size_t n_ = 0;
    Mat l_;
};

// Unpivoted LDL^T for symmetric quasi-definite matrices (positive block
// followed by a negative block). Suitable for regularized KKT systems; any
// |d_j| below `min_pivot` aborts the factorization.
class LdltQd {
  public:
    bool factor(const Mat& a, double min_pivot = 1e-300);
    Vec solve(const Vec& b) const;
    std::size_t size() const { return n_; }

  private:
    std::size_t n_ = 0;
    Mat l_;    // unit lower triangle, row-major
    Vec d_;
};

// Solve a small SPD system via Cholesky, adding `ridge` to the diagonal and
// retrying with a stronger ridge when the factorization fails. Throws
// std::runtime_error when the system stays unfactorizable.
Vec solve_spd(const Mat& a, const Vec& b, double ridge = 0.0);

} // namespace sddf
