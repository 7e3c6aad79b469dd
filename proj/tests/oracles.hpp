#pragma once
// Test-only oracles, kept independent of the library's solve paths.

#include "sddf/core/linalg.hpp"
#include "sddf/qp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Gauss-Jordan with partial pivoting; independent of the library's
// factorizations.
inline sddf::Vec gauss_solve(sddf::Mat a, sddf::Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("gauss_solve: shape");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
        if (std::fabs(a(piv, col)) < 1e-14) throw std::runtime_error("gauss_solve: singular");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
            std::swap(b[col], b[piv]);
        }
        const double inv = 1.0 / a(col, col);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    sddf::Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
    return x;
}

// Exhaustive active-set enumeration for small dense QPs:
//   min 1/2 z'Pz + q'z  s.t.  A z = b,  G z <= h.
// Every subset of inequality rows is treated as active and the resulting
// equality-constrained KKT system solved; the best KKT-feasible candidate
// wins.
inline std::optional<sddf::Vec> enumerate_qp(const sddf::Mat& p, const sddf::Vec& q,
                                             const sddf::Mat& aeq, const sddf::Vec& beq,
                                             const sddf::Mat& g, const sddf::Vec& h,
                                             double tol = 1e-9) {
    const std::size_t nv = q.size(), ne = beq.size(), mi = h.size();
    if (mi > 20) throw std::invalid_argument("enumerate_qp: too many inequality rows");
    std::optional<sddf::Vec> best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (std::size_t{1} << mi); ++mask) {
        std::vector<std::size_t> active;
        for (std::size_t r = 0; r < mi; ++r)
            if (mask & (std::size_t{1} << r)) active.push_back(r);
        const std::size_t nk = nv + ne + active.size();
        sddf::Mat kkt(nk, nk);
        sddf::Vec rhs(nk, 0.0);
        for (std::size_t i = 0; i < nv; ++i) {
            for (std::size_t j = 0; j < nv; ++j) kkt(i, j) = p(i, j);
            rhs[i] = -q[i];
        }
        for (std::size_t r = 0; r < ne; ++r) {
            for (std::size_t j = 0; j < nv; ++j) {
                kkt(nv + r, j) = aeq(r, j);
                kkt(j, nv + r) = aeq(r, j);
            }
            rhs[nv + r] = beq[r];
        }
        for (std::size_t k = 0; k < active.size(); ++k) {
            for (std::size_t j = 0; j < nv; ++j) {
                kkt(nv + ne + k, j) = g(active[k], j);
                kkt(j, nv + ne + k) = g(active[k], j);
            }
            rhs[nv + ne + k] = h[active[k]];
        }
        sddf::Vec sol;
        try {
            sol = gauss_solve(kkt, rhs);
        } catch (const std::runtime_error&) {
            continue;
        }
        const sddf::Vec z(sol.begin(), sol.begin() + nv);
        bool ok = true;
        for (std::size_t r = 0; r < mi && ok; ++r) {
            double gz = 0.0;
            for (std::size_t j = 0; j < nv; ++j) gz += g(r, j) * z[j];
            if (gz > h[r] + tol) ok = false;
        }
        for (std::size_t k = 0; k < active.size() && ok; ++k)
            if (sol[nv + ne + k] < -tol) ok = false; // multiplier sign
        if (!ok) continue;
        double obj = 0.0;
        for (std::size_t i = 0; i < nv; ++i) {
            for (std::size_t j = 0; j < nv; ++j) obj += 0.5 * z[i] * p(i, j) * z[j];
            obj += q[i] * z[i];
        }
        if (obj < best_obj - 1e-12 || !best) {
            best_obj = obj;
            best = z;
        }
    }
    return best;
}

inline double sorted_median(sddf::Vec v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double two_pass_sd(const sddf::Vec& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace oracles
