#include "sddf/core/linalg.hpp"

#include "sddf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sddf {

Vec Mat::matvec(const Vec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(rows_, 0.0);
    if (rows_ == 0 || cols_ == 0) return y;
    for (std::size_t i = 0; i < rows_; ++i) y[i] = simd::dot(row(i), x.data(), cols_);
    return y;
}

Vec Mat::matvec_t(const Vec& x) const {
    if (x.size() != rows_) throw std::invalid_argument("matvec_t: dimension mismatch");
    Vec y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        if (x[i] != 0.0) simd::axpy(x[i], row(i), y.data(), cols_);
    return y;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    return simd::dot(a.data(), b.data(), a.size());
}

double norm2(const Vec& a) { return std::sqrt(simd::sumsq(a.data(), a.size())); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

void axpy(double a, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    simd::axpy(a, x.data(), y.data(), x.size());
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vec scaled(const Vec& a, double s) {
    Vec r(a);
    for (double& v : r) v *= s;
    return r;
}

bool Cholesky::factor(const Mat& a, double min_pivot) {
    n_ = a.rows();
    if (a.cols() != n_) throw std::invalid_argument("Cholesky: matrix not square");
    l_ = a;
    for (std::size_t j = 0; j < n_; ++j) {
        double djj = l_(j, j) - simd::sumsq(l_.row(j), j);
        if (djj <= min_pivot) return false;
        djj = std::sqrt(djj);
        l_(j, j) = djj;
        const double inv = 1.0 / djj;
        const double* lrow_j = l_.row(j);
        for (std::size_t i = j + 1; i < n_; ++i) {
            double v = l_(i, j) - simd::dot(l_.row(i), lrow_j, j);
            l_(i, j) = v * inv;
        }
    }
    return true;
}

Vec Cholesky::solve(const Vec& b) const {
    if (b.size() != n_) throw std::invalid_argument("Cholesky::solve: size mismatch");
    Vec x(b);
    for (std::size_t i = 0; i < n_; ++i)
        x[i] = (x[i] - simd::dot(l_.row(i), x.data(), i)) / l_(i, i);
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n_; ++k) s -= l_(k, ii) * x[k];
        x[ii] = s / l_(ii, ii);
    }
    return x;
}

bool LdltQd::factor(const Mat& a, double min_pivot) {
    n_ = a.rows();
    if (a.cols() != n_) throw std::invalid_argument("LdltQd: matrix not square");
    l_ = a;
    d_.assign(n_, 0.0);
    Vec w(n_, 0.0); // w[k] = L(j,k) * d_k for the current column j
    for (std::size_t j = 0; j < n_; ++j) {
        const double* lj = l_.row(j);
        for (std::size_t k = 0; k < j; ++k) w[k] = lj[k] * d_[k];
        const double dj = l_(j, j) - simd::dot(lj, w.data(), j);
        if (std::fabs(dj) < min_pivot) return false;
        d_[j] = dj;
        const double inv = 1.0 / dj;
        for (std::size_t i = j + 1; i < n_; ++i)
            l_(i, j) = (l_(i, j) - simd::dot(l_.row(i), w.data(), j)) * inv;
    }
    return true;
}

Vec LdltQd::solve(const Vec& b) const {
    if (b.size() != n_) throw std::invalid_argument("LdltQd::solve: size mismatch");
    Vec x(b);
    for (std::size_t i = 0; i < n_; ++i) x[i] -= simd::dot(l_.row(i), x.data(), i);
    for (std::size_t i = 0; i < n_; ++i) x[i] /= d_[i];
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n_; ++k) s -= l_(k, ii) * x[k];
        x[ii] = s;
    }
    return x;
}

Vec solve_spd(const Mat& a, const Vec& b, double ridge) {
    Mat m = a;
    double r = ridge;
    for (int attempt = 0; attempt < 4; ++attempt) {
        if (attempt > 0) {
            r = (r == 0.0) ? 1e-12 : r * 1e4;
            m = a;
        }
        if (r > 0.0)
            for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += r;
        Cholesky chol;
        if (chol.factor(m)) return chol.solve(b);
    }
    throw std::runtime_error("solve_spd: matrix is numerically singular");
}

} // namespace sddf
