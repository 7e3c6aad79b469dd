#pragma once
// Dense convex quadratic programming with KKT-certified solutions.
//
//   minimize   1/2 z'Pz + q'z
//   subject to A z  = b
//              G z <= h
//              lb <= z <= ub   (optional, per variable)
//
// P must be symmetric positive semidefinite. The solver is a Mehrotra
// predictor-corrector interior-point method on the regularized KKT system;
// constraint rows are stored row-compressed so the large, very sparse
// Afriat blocks assemble in O(nnz) per iteration.

#include "sddf/core/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sddf {

// Row-compressed matrix for constraint blocks. Rows are appended once and
// never mutated; a dense row constructor drops explicit zeros.
class SparseRows {
  public:
    SparseRows() = default;
    explicit SparseRows(std::size_t cols) : cols_(cols) {}

    static SparseRows from_dense(const Mat& m);

    void push_row(const std::vector<std::uint32_t>& cols, const std::vector<double>& vals);
    void push_dense_row(const double* v, std::size_t n);

    std::size_t rows() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
    std::size_t cols() const { return cols_; }

    double row_dot(std::size_t r, const Vec& z) const;
    Vec matvec(const Vec& z) const;
    // out += coeff * row_r
    void add_row_scaled(std::size_t r, double coeff, Vec& out) const;
    Vec matvec_t(const Vec& w) const;
    // H (lower triangle) += sum_r w[r] * row_r row_r'
    void accumulate_weighted_gram(const Vec& w, Mat& h) const;

    Mat to_dense() const;

  private:
    std::size_t cols_ = 0;
    std::vector<std::uint32_t> idx_;
    std::vector<double> val_;
    std::vector<std::size_t> row_start_{0};
};

struct QpProblem {
    Mat objective_matrix;          // P, symmetric PSD
    Vec objective_vector;          // q
    SparseRows eq_constraints;     // A
    Vec eq_rhs;                    // b
    SparseRows ineq_constraints;   // G
    Vec ineq_rhs;                  // h
    std::optional<Vec> lower_bounds; // -inf entries allowed
    std::optional<Vec> upper_bounds; // +inf entries allowed

    std::size_t num_vars() const { return objective_vector.size(); }

    // Checks symmetry (1e-12), PSD-ness, and dimension consistency.
    // Throws std::invalid_argument on violation.
    void validate() const;

    double objective_value(const Vec& z) const;
};

enum class QpStatus { optimal, max_iters, infeasible };

std::string to_string(QpStatus s);

struct KktReport {
    double stationarity = 0.0;
    double primal_eq = 0.0;
    double primal_ineq = 0.0;
    double dual_nonneg = 0.0;
    double complementarity = 0.0;
    bool ok = false; // all residuals <= tol at verification time

    double max_residual() const;
};

struct QpSolution {
    Vec primal;
    Vec dual_eq;
    Vec dual_ineq;
    Vec dual_lower; // zero-length when the problem has no bounds
    Vec dual_upper;
    QpStatus status = QpStatus::max_iters;
    int iterations = 0;
    KktReport kkt_report;
    double objective = 0.0;
    // Farkas-type certificate residual when status == infeasible.
    double infeasibility_measure = 0.0;
};

struct QpOptions {
    double tol = 1e-8;
    int max_iters = 200;
    double static_regularization = 1e-9;
    int refine_steps = 2;
};

QpSolution solve_qp(const QpProblem& problem, const QpOptions& options = {});
QpSolution solve_qp(const QpProblem& problem, double tol, int max_iters);

// Recomputes all KKT residuals from scratch (independent of solver
// internals); ok is set against `tol`.
KktReport verify_kkt(const QpProblem& problem, const QpSolution& solution, double tol);

} // namespace sddf
