#include "sddf/qp.hpp"

#include "sddf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace sddf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kPolishBudget = 1600;
} // namespace

// --- SparseRows -------------------------------------------------------------

SparseRows SparseRows::from_dense(const Mat& m) {
    SparseRows s(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) s.push_dense_row(m.row(r), m.cols());
    return s;
}

void SparseRows::push_row(const std::vector<std::uint32_t>& cols, const std::vector<double>& vals) {
    if (cols.size() != vals.size()) throw std::invalid_argument("push_row: size mismatch");
    std::vector<std::size_t> order(cols.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cols[a] < cols[b]; });
    for (std::size_t k : order) {
        if (cols[k] >= cols_) throw std::invalid_argument("push_row: column out of range");
        if (vals[k] == 0.0) continue;
        idx_.push_back(cols[k]);
        val_.push_back(vals[k]);
    }
    row_start_.push_back(idx_.size());
}

void SparseRows::push_dense_row(const double* v, std::size_t n) {
    if (n != cols_) throw std::invalid_argument("push_dense_row: size mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] == 0.0) continue;
        idx_.push_back(static_cast<std::uint32_t>(j));
        val_.push_back(v[j]);
    }
    row_start_.push_back(idx_.size());
}

double SparseRows::row_dot(std::size_t r, const Vec& z) const {
    double acc = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += val_[k] * z[idx_[k]];
    return acc;
}

Vec SparseRows::matvec(const Vec& z) const {
    Vec out(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) out[r] = row_dot(r, z);
    return out;
}

void SparseRows::add_row_scaled(std::size_t r, double coeff, Vec& out) const {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) out[idx_[k]] += coeff * val_[k];
}

Vec SparseRows::matvec_t(const Vec& w) const {
    Vec out(cols_, 0.0);
    for (std::size_t r = 0; r < rows(); ++r)
        if (w[r] != 0.0) add_row_scaled(r, w[r], out);
    return out;
}

void SparseRows::accumulate_weighted_gram(const Vec& w, Mat& h) const {
    for (std::size_t r = 0; r < rows(); ++r) {
        const double wr = w[r];
        if (wr == 0.0) continue;
        const std::size_t begin = row_start_[r], end = row_start_[r + 1];
        for (std::size_t a = begin; a < end; ++a) {
            const double wa = wr * val_[a];
            const std::uint32_t ia = idx_[a];
            double* hrow = h.row(ia);
            for (std::size_t b = begin; b <= a; ++b) hrow[idx_[b]] += wa * val_[b];
        }
    }
}

Mat SparseRows::to_dense() const {
    Mat m(rows(), cols_);
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) m(r, idx_[k]) = val_[k];
    return m;
}

// --- QpProblem ---------------------------------------------------------------

void QpProblem::validate() const {
    const std::size_t n = num_vars();
    if (objective_matrix.rows() != n || objective_matrix.cols() != n)
        throw std::invalid_argument("qp: objective matrix/vector dimension mismatch");
    if (eq_constraints.rows() != eq_rhs.size())
        throw std::invalid_argument("qp: equality row count does not match rhs length");
    if (ineq_constraints.rows() != ineq_rhs.size())
        throw std::invalid_argument("qp: inequality row count does not match rhs length");
    if (eq_constraints.rows() > 0 && eq_constraints.cols() != n)
        throw std::invalid_argument("qp: equality column count mismatch");
    if (ineq_constraints.rows() > 0 && ineq_constraints.cols() != n)
        throw std::invalid_argument("qp: inequality column count mismatch");
    if (lower_bounds && lower_bounds->size() != n)
        throw std::invalid_argument("qp: lower bound length mismatch");
    if (upper_bounds && upper_bounds->size() != n)
        throw std::invalid_argument("qp: upper bound length mismatch");

    double asym = 0.0;
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            asym = std::max(asym, std::fabs(objective_matrix(i, j) - objective_matrix(j, i)));
            if (objective_matrix(i, j) != 0.0) diagonal = false;
        }
    if (asym > 1e-12) throw std::invalid_argument("qp: objective matrix is not symmetric");

    if (diagonal) {
        for (std::size_t i = 0; i < n; ++i)
            if (objective_matrix(i, i) < -1e-12)
                throw std::invalid_argument("qp: objective matrix is not positive semidefinite");
        return;
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(objective_matrix(i, i)));
    Mat shifted = objective_matrix;
    const double shift = 1e-10 * std::max(1.0, max_diag);
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += shift;
    Cholesky chol;
    if (!chol.factor(shifted))
        throw std::invalid_argument("qp: objective matrix is not positive semidefinite");
}

double QpProblem::objective_value(const Vec& z) const {
    const Vec pz = objective_matrix.matvec(z);
    return 0.5 * dot(z, pz) + dot(objective_vector, z);
}

double KktReport::max_residual() const {
    return std::max({stationarity, primal_eq, primal_ineq, dual_nonneg, complementarity});
}

std::string to_string(QpStatus s) {
    switch (s) {
        case QpStatus::optimal: return "optimal";
        case QpStatus::max_iters: return "max_iters";
        case QpStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

// --- interior-point solver ----------------------------------------------------

namespace {

// Bounds folded into extra inequality rows; remembers how to split duals back.
struct FoldedIneq {
    SparseRows g;
    Vec h;
    std::size_t user_rows = 0;
    std::vector<std::uint32_t> lb_var, ub_var;
};

FoldedIneq fold_inequalities(const QpProblem& p) {
    FoldedIneq f;
    f.g = p.ineq_constraints.rows() > 0 ? p.ineq_constraints : SparseRows(p.num_vars());
    f.h = p.ineq_rhs;
    f.user_rows = p.ineq_rhs.size();
    if (p.lower_bounds)
        for (std::size_t i = 0; i < p.lower_bounds->size(); ++i) {
            const double lb = (*p.lower_bounds)[i];
            if (lb == -kInf) continue;
            f.g.push_row({static_cast<std::uint32_t>(i)}, {-1.0});
            f.h.push_back(-lb);
            f.lb_var.push_back(static_cast<std::uint32_t>(i));
        }
    if (p.upper_bounds)
        for (std::size_t i = 0; i < p.upper_bounds->size(); ++i) {
            const double ub = (*p.upper_bounds)[i];
            if (ub == kInf) continue;
            f.g.push_row({static_cast<std::uint32_t>(i)}, {1.0});
            f.h.push_back(ub);
            f.ub_var.push_back(static_cast<std::uint32_t>(i));
        }
    return f;
}

class IpmSolver {
  public:
    IpmSolver(const QpProblem& p, const QpOptions& opt)
        : p_(p), opt_(opt), folded_(fold_inequalities(p)),
          nv_(p.num_vars()), ne_(p.eq_rhs.size()), mi_(folded_.h.size()),
          nk_(nv_ + ne_), kkt_(nk_, nk_) {}

    QpSolution run();

  private:
    void assemble(const Vec& w, double delta);
    bool factor_with_retries(const Vec& w, double& delta);
    // Solves the (unregularized) KKT against which refinement is measured:
    //   [P + G'WG  A'] [x1]   [r1]
    //   [A          0] [x2] = [r2]
    void kkt_matvec(const Vec& w, const Vec& x, Vec& out) const;
    Vec solve_kkt(const Vec& w, const Vec& rhs) const;

    QpSolution finish(QpStatus status, int iters, const Vec& z, const Vec& nu, const Vec& mu,
                      double farkas = 0.0) const;

    // Active-set polish: re-solves the KKT system with the active
    // inequalities as equalities. Degenerate problems (flat objectives)
    // reach linear-solve accuracy this way. Updates (z, nu, mu) only when
    // every recovered multiplier is dual-feasible and no inactive row gets
    // violated.
    void polish(Vec& z, Vec& nu, Vec& mu, const Vec& s) const;

    const QpProblem& p_;
    QpOptions opt_;
    FoldedIneq folded_;
    std::size_t nv_, ne_, mi_, nk_;
    Mat kkt_;
    LdltQd fact_;
};

void IpmSolver::assemble(const Vec& w, double delta) {
    for (std::size_t i = 0; i < nk_; ++i)
        for (std::size_t j = 0; j <= i; ++j) kkt_(i, j) = 0.0;
    for (std::size_t i = 0; i < nv_; ++i) {
        const double* prow = p_.objective_matrix.row(i);
        double* krow = kkt_.row(i);
        for (std::size_t j = 0; j <= i; ++j) krow[j] = prow[j];
        krow[i] += delta;
    }
    if (mi_ > 0) folded_.g.accumulate_weighted_gram(w, kkt_);
    for (std::size_t r = 0; r < ne_; ++r) {
        Vec row(nv_, 0.0);
        p_.eq_constraints.add_row_scaled(r, 1.0, row);
        double* krow = kkt_.row(nv_ + r);
        for (std::size_t j = 0; j < nv_; ++j) krow[j] = row[j];
        krow[nv_ + r] = -delta;
    }
}

bool IpmSolver::factor_with_retries(const Vec& w, double& delta) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        assemble(w, delta);
        if (fact_.factor(kkt_)) return true;
        delta *= 100.0;
    }
    return false;
}

void IpmSolver::kkt_matvec(const Vec& w, const Vec& x, Vec& out) const {
    const Vec xz(x.begin(), x.begin() + nv_);
    Vec top = p_.objective_matrix.matvec(xz);
    if (mi_ > 0) {
        Vec gx = folded_.g.matvec(xz);
        for (std::size_t r = 0; r < mi_; ++r) gx[r] *= w[r];
        const Vec gtwgx = folded_.g.matvec_t(gx);
        for (std::size_t i = 0; i < nv_; ++i) top[i] += gtwgx[i];
    }
    if (ne_ > 0) {
        const Vec xnu(x.begin() + nv_, x.end());
        const Vec atnu = p_.eq_constraints.matvec_t(xnu);
        for (std::size_t i = 0; i < nv_; ++i) top[i] += atnu[i];
        const Vec ax = p_.eq_constraints.matvec(xz);
        for (std::size_t r = 0; r < ne_; ++r) out[nv_ + r] = ax[r];
    }
    for (std::size_t i = 0; i < nv_; ++i) out[i] = top[i];
}

Vec IpmSolver::solve_kkt(const Vec& w, const Vec& rhs) const {
    Vec x = fact_.solve(rhs);
    Vec kx(nk_, 0.0), resid(nk_, 0.0);
    for (int step = 0; step < opt_.refine_steps; ++step) {
        kkt_matvec(w, x, kx);
        for (std::size_t i = 0; i < nk_; ++i) resid[i] = rhs[i] - kx[i];
        const Vec corr = fact_.solve(resid);
        for (std::size_t i = 0; i < nk_; ++i) x[i] += corr[i];
    }
    return x;
}

void IpmSolver::polish(Vec& z, Vec& nu, Vec& mu, const Vec& s) const {
    std::vector<char> in_active(mi_, 0);
    const double slack_cut = std::sqrt(opt_.tol);
    std::size_t na0 = 0;
    for (std::size_t r = 0; r < mi_; ++r)
        if (mu[r] > s[r] || s[r] <= slack_cut * (1.0 + std::fabs(folded_.h[r]))) {
            in_active[r] = 1;
            ++na0;
        }
    // Polishing factors a dense bordered system; past this size its cost
    // would dwarf the interior-point iterations, so keep the iterate.
    if (nv_ + ne_ + na0 > kPolishBudget) return;

    const double delta = opt_.static_regularization;
    // Solve with the current active rows as equalities; returns false when
    // the bordered system cannot be factored.
    Vec x;
    std::vector<std::size_t> active;
    auto solve_active = [&]() -> bool {
        active.clear();
        for (std::size_t r = 0; r < mi_; ++r)
            if (in_active[r]) active.push_back(r);
        const std::size_t na = active.size();
        const std::size_t nk = nv_ + ne_ + na;
        Mat kkt(nk, nk);
        Vec rhs(nk, 0.0);
        for (std::size_t i = 0; i < nv_; ++i) {
            const double* prow = p_.objective_matrix.row(i);
            double* krow = kkt.row(i);
            for (std::size_t j = 0; j <= i; ++j) krow[j] = prow[j];
            krow[i] += delta;
            rhs[i] = -p_.objective_vector[i];
        }
        for (std::size_t r = 0; r < ne_; ++r) {
            Vec row(nv_, 0.0);
            p_.eq_constraints.add_row_scaled(r, 1.0, row);
            double* krow = kkt.row(nv_ + r);
            for (std::size_t j = 0; j < nv_; ++j) krow[j] = row[j];
            krow[nv_ + r] = -delta;
            rhs[nv_ + r] = p_.eq_rhs[r];
        }
        for (std::size_t k = 0; k < na; ++k) {
            Vec row(nv_, 0.0);
            folded_.g.add_row_scaled(active[k], 1.0, row);
            double* krow = kkt.row(nv_ + ne_ + k);
            for (std::size_t j = 0; j < nv_; ++j) krow[j] = row[j];
            krow[nv_ + ne_ + k] = -delta;
            rhs[nv_ + ne_ + k] = folded_.h[active[k]];
        }
        LdltQd fact;
        if (!fact.factor(kkt)) return false;
        auto apply = [&](const Vec& v, Vec& out) {
            const Vec xz(v.begin(), v.begin() + nv_);
            Vec top = p_.objective_matrix.matvec(xz);
            if (ne_ > 0) {
                const Vec xnu(v.begin() + nv_, v.begin() + nv_ + ne_);
                const Vec at = p_.eq_constraints.matvec_t(xnu);
                for (std::size_t i = 0; i < nv_; ++i) top[i] += at[i];
                const Vec az = p_.eq_constraints.matvec(xz);
                for (std::size_t r = 0; r < ne_; ++r) out[nv_ + r] = az[r];
            }
            for (std::size_t k = 0; k < na; ++k) {
                folded_.g.add_row_scaled(active[k], v[nv_ + ne_ + k], top);
                out[nv_ + ne_ + k] = folded_.g.row_dot(active[k], xz);
            }
            for (std::size_t i = 0; i < nv_; ++i) out[i] = top[i];
        };
        x = fact.solve(rhs);
        Vec kx(nk, 0.0), resid(nk, 0.0);
        for (int step = 0; step < opt_.refine_steps; ++step) {
            apply(x, kx);
            for (std::size_t i = 0; i < nk; ++i) resid[i] = rhs[i] - kx[i];
            const Vec corr = fact.solve(resid);
            for (std::size_t i = 0; i < nk; ++i) x[i] += corr[i];
        }
        return true;
    };

    for (int round = 0; round < 6; ++round) {
        if (!solve_active()) return;
        const Vec zp(x.begin(), x.begin() + nv_);
        bool grew = false;
        std::size_t count = active.size();
        if (mi_ > 0) {
            const Vec gz = folded_.g.matvec(zp);
            for (std::size_t r = 0; r < mi_; ++r)
                if (!in_active[r] && gz[r] > folded_.h[r] + opt_.tol) {
                    in_active[r] = 1;
                    grew = true;
                    ++count;
                }
        }
        if (!grew) break;
        if (nv_ + ne_ + count > kPolishBudget) return; // grown past the budget
    }
    // Negative multipliers are clamped; the caller keeps the polished
    // candidate only when its verified KKT residual actually improves.
    z.assign(x.begin(), x.begin() + nv_);
    nu.assign(x.begin() + nv_, x.begin() + nv_ + ne_);
    std::fill(mu.begin(), mu.end(), 0.0);
    for (std::size_t k = 0; k < active.size(); ++k)
        mu[active[k]] = std::max(0.0, x[nv_ + ne_ + k]);
}

QpSolution IpmSolver::finish(QpStatus status, int iters, const Vec& z, const Vec& nu,
                             const Vec& mu, double farkas) const {
    QpSolution sol;
    sol.primal = z;
    sol.dual_eq = nu;
    sol.dual_ineq.assign(mu.begin(), mu.begin() + folded_.user_rows);
    if (p_.lower_bounds) sol.dual_lower.assign(p_.num_vars(), 0.0);
    if (p_.upper_bounds) sol.dual_upper.assign(p_.num_vars(), 0.0);
    std::size_t k = folded_.user_rows;
    for (std::uint32_t var : folded_.lb_var) sol.dual_lower[var] = mu[k++];
    for (std::uint32_t var : folded_.ub_var) sol.dual_upper[var] = mu[k++];
    sol.status = status;
    sol.iterations = iters;
    sol.objective = p_.objective_value(z);
    sol.infeasibility_measure = farkas;
    sol.kkt_report = verify_kkt(p_, sol, opt_.tol);
    if (status == QpStatus::optimal && !sol.kkt_report.ok) sol.status = QpStatus::max_iters;
    return sol;
}

QpSolution IpmSolver::run() {
    p_.validate();

    double delta = opt_.static_regularization;
    Vec w(mi_, 1.0);

    // Starting point from the W = I system.
    if (!factor_with_retries(w, delta)) throw std::runtime_error("qp: KKT factorization failed");
    Vec rhs(nk_, 0.0);
    for (std::size_t i = 0; i < nv_; ++i) rhs[i] = -p_.objective_vector[i];
    for (std::size_t r = 0; r < ne_; ++r) rhs[nv_ + r] = p_.eq_rhs[r];
    Vec x = solve_kkt(w, rhs);
    Vec z(x.begin(), x.begin() + nv_);
    Vec nu(x.begin() + nv_, x.end());

    if (mi_ == 0) {
        // Equality-constrained QP: the Newton system is exact.
        return finish(QpStatus::optimal, 1, z, nu, {});
    }

    Vec s = folded_.h;
    {
        Vec gz = folded_.g.matvec(z);
        double smin = kInf;
        for (std::size_t r = 0; r < mi_; ++r) {
            s[r] -= gz[r];
            smin = std::min(smin, s[r]);
        }
        const double shift = (smin < 0.1) ? (0.1 - smin) : 0.0;
        for (double& v : s) v += shift;
    }
    Vec mu(mi_, 1.0);

    Vec r_d(nv_), r_p(ne_), r_g(mi_);
    Vec ds(mi_), dmu(mi_), rc(mi_);

    for (int iter = 1; iter <= opt_.max_iters; ++iter) {
        // Residuals.
        {
            Vec pz = p_.objective_matrix.matvec(z);
            const Vec gtmu = folded_.g.matvec_t(mu);
            const Vec atnu = ne_ ? p_.eq_constraints.matvec_t(nu) : Vec(nv_, 0.0);
            for (std::size_t i = 0; i < nv_; ++i)
                r_d[i] = pz[i] + p_.objective_vector[i] + atnu[i] + gtmu[i];
            const Vec az = ne_ ? p_.eq_constraints.matvec(z) : Vec{};
            for (std::size_t r = 0; r < ne_; ++r) r_p[r] = az[r] - p_.eq_rhs[r];
            const Vec gz = folded_.g.matvec(z);
            for (std::size_t r = 0; r < mi_; ++r) r_g[r] = gz[r] + s[r] - folded_.h[r];
        }
        double comp_max = 0.0, gap = 0.0;
        for (std::size_t r = 0; r < mi_; ++r) {
            comp_max = std::max(comp_max, s[r] * mu[r]);
            gap += s[r] * mu[r];
        }
        gap /= static_cast<double>(mi_);

        if (std::getenv("SDDF_QP_TRACE"))
            std::fprintf(stderr, "iter %d: rd=%.2e rp=%.2e rg=%.2e comp=%.2e gap=%.2e\n", iter,
                         norm_inf(r_d), norm_inf(r_p), norm_inf(r_g), comp_max, gap);
        const bool converged = norm_inf(r_d) <= opt_.tol && norm_inf(r_p) <= opt_.tol &&
                               norm_inf(r_g) <= opt_.tol && comp_max <= opt_.tol;
        const bool near = norm_inf(r_d) <= 1e3 * opt_.tol && norm_inf(r_p) <= 1e3 * opt_.tol &&
                          norm_inf(r_g) <= 1e3 * opt_.tol && comp_max <= 1e4 * opt_.tol;
        if (converged || near) {
            Vec zp = z, nup = nu, mup = mu;
            polish(zp, nup, mup, s);
            const QpSolution polished = finish(QpStatus::optimal, iter - 1, zp, nup, mup);
            if (converged) {
                const QpSolution base = finish(QpStatus::optimal, iter - 1, z, nu, mu);
                return polished.kkt_report.max_residual() <= base.kkt_report.max_residual()
                           ? polished
                           : base;
            }
            if (polished.kkt_report.ok) return polished;
        }

        // Farkas-type certificate for primal infeasibility.
        const double dual_scale = std::max(norm_inf(mu), norm_inf(nu));
        if (dual_scale > 1e9) {
            Vec cert = folded_.g.matvec_t(scaled(mu, 1.0 / dual_scale));
            if (ne_ > 0) {
                const Vec at = p_.eq_constraints.matvec_t(scaled(nu, 1.0 / dual_scale));
                for (std::size_t i = 0; i < nv_; ++i) cert[i] += at[i];
            }
            const double cert_res = norm_inf(cert);
            double value = dot(folded_.h, mu) / dual_scale;
            if (ne_ > 0) value += dot(p_.eq_rhs, nu) / dual_scale;
            if (cert_res <= 1e-6 && value < -1e-6)
                return finish(QpStatus::infeasible, iter, z, nu, mu, cert_res);
        }

        for (std::size_t r = 0; r < mi_; ++r) w[r] = mu[r] / s[r];
        if (!factor_with_retries(w, delta)) throw std::runtime_error("qp: KKT factorization failed");

        auto newton = [&](const Vec& rc_in, Vec& dz_out, Vec& dnu_out) {
            for (std::size_t i = 0; i < nv_; ++i) rhs[i] = -r_d[i];
            Vec tmp(mi_);
            for (std::size_t r = 0; r < mi_; ++r) tmp[r] = (rc_in[r] + mu[r] * r_g[r]) / s[r];
            const Vec gt = folded_.g.matvec_t(tmp);
            for (std::size_t i = 0; i < nv_; ++i) rhs[i] -= gt[i];
            for (std::size_t r = 0; r < ne_; ++r) rhs[nv_ + r] = -r_p[r];
            const Vec sol = solve_kkt(w, rhs);
            dz_out.assign(sol.begin(), sol.begin() + nv_);
            dnu_out.assign(sol.begin() + nv_, sol.end());
        };

        auto max_step = [&](const Vec& v, const Vec& dv) {
            double a = 1.0;
            for (std::size_t r = 0; r < v.size(); ++r)
                if (dv[r] < 0.0) a = std::min(a, -v[r] / dv[r]);
            return a;
        };

        // Predictor.
        for (std::size_t r = 0; r < mi_; ++r) rc[r] = -s[r] * mu[r];
        Vec dz, dnu;
        newton(rc, dz, dnu);
        {
            const Vec gdz = folded_.g.matvec(dz);
            for (std::size_t r = 0; r < mi_; ++r) {
                ds[r] = -r_g[r] - gdz[r];
                dmu[r] = (rc[r] - mu[r] * ds[r]) / s[r];
            }
        }
        const double alpha_aff = std::min(max_step(s, ds), max_step(mu, dmu));
        double gap_aff = 0.0;
        for (std::size_t r = 0; r < mi_; ++r)
            gap_aff += (s[r] + alpha_aff * ds[r]) * (mu[r] + alpha_aff * dmu[r]);
        gap_aff /= static_cast<double>(mi_);
        double sigma = std::pow(std::max(gap_aff, 0.0) / gap, 3.0);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        // Corrector.
        for (std::size_t r = 0; r < mi_; ++r)
            rc[r] = -s[r] * mu[r] - ds[r] * dmu[r] + sigma * gap;
        newton(rc, dz, dnu);
        {
            const Vec gdz = folded_.g.matvec(dz);
            for (std::size_t r = 0; r < mi_; ++r) {
                ds[r] = -r_g[r] - gdz[r];
                dmu[r] = (rc[r] - mu[r] * ds[r]) / s[r];
            }
        }
        const double tau = (gap < 1e-4) ? 0.999 : 0.99;
        const double alpha = tau * std::min(max_step(s, ds), max_step(mu, dmu));
        for (std::size_t i = 0; i < nv_; ++i) z[i] += alpha * dz[i];
        for (std::size_t r = 0; r < ne_; ++r) nu[r] += alpha * dnu[r];
        for (std::size_t r = 0; r < mi_; ++r) {
            s[r] += alpha * ds[r];
            mu[r] += alpha * dmu[r];
        }
    }
    return finish(QpStatus::max_iters, opt_.max_iters, z, nu, mu);
}

} // namespace

QpSolution solve_qp(const QpProblem& problem, const QpOptions& options) {
    IpmSolver solver(problem, options);
    return solver.run();
}

QpSolution solve_qp(const QpProblem& problem, double tol, int max_iters) {
    QpOptions opt;
    opt.tol = tol;
    opt.max_iters = max_iters;
    return solve_qp(problem, opt);
}

KktReport verify_kkt(const QpProblem& p, const QpSolution& sol, double tol) {
    KktReport rep;
    const std::size_t nv = p.num_vars();
    const Vec& z = sol.primal;
    if (z.size() != nv) throw std::invalid_argument("verify_kkt: primal size mismatch");

    Vec station = p.objective_matrix.matvec(z);
    for (std::size_t i = 0; i < nv; ++i) station[i] += p.objective_vector[i];
    if (!sol.dual_eq.empty()) {
        const Vec at = p.eq_constraints.matvec_t(sol.dual_eq);
        for (std::size_t i = 0; i < nv; ++i) station[i] += at[i];
    }
    if (!sol.dual_ineq.empty()) {
        const Vec gt = p.ineq_constraints.matvec_t(sol.dual_ineq);
        for (std::size_t i = 0; i < nv; ++i) station[i] += gt[i];
    }
    for (std::size_t i = 0; i < nv && i < sol.dual_lower.size(); ++i) station[i] -= sol.dual_lower[i];
    for (std::size_t i = 0; i < nv && i < sol.dual_upper.size(); ++i) station[i] += sol.dual_upper[i];
    rep.stationarity = norm_inf(station);

    if (p.eq_rhs.size() > 0) {
        const Vec az = p.eq_constraints.matvec(z);
        double m = 0.0;
        for (std::size_t r = 0; r < az.size(); ++r) m = std::max(m, std::fabs(az[r] - p.eq_rhs[r]));
        rep.primal_eq = m;
    }

    double viol = 0.0, comp = 0.0, dneg = 0.0;
    if (p.ineq_rhs.size() > 0) {
        const Vec gz = p.ineq_constraints.matvec(z);
        for (std::size_t r = 0; r < gz.size(); ++r) {
            const double slack = p.ineq_rhs[r] - gz[r];
            viol = std::max(viol, -slack);
            if (r < sol.dual_ineq.size()) {
                comp = std::max(comp, std::fabs(sol.dual_ineq[r] * slack));
                dneg = std::max(dneg, -sol.dual_ineq[r]);
            }
        }
    }
    if (p.lower_bounds)
        for (std::size_t i = 0; i < nv; ++i) {
            const double lb = (*p.lower_bounds)[i];
            if (lb == -kInf) continue;
            const double slack = z[i] - lb;
            viol = std::max(viol, -slack);
            if (i < sol.dual_lower.size()) {
                comp = std::max(comp, std::fabs(sol.dual_lower[i] * slack));
                dneg = std::max(dneg, -sol.dual_lower[i]);
            }
        }
    if (p.upper_bounds)
        for (std::size_t i = 0; i < nv; ++i) {
            const double ub = (*p.upper_bounds)[i];
            if (ub == kInf) continue;
            const double slack = ub - z[i];
            viol = std::max(viol, -slack);
            if (i < sol.dual_upper.size()) {
                comp = std::max(comp, std::fabs(sol.dual_upper[i] * slack));
                dneg = std::max(dneg, -sol.dual_upper[i]);
            }
        }
    rep.primal_ineq = viol;
    rep.complementarity = comp;
    rep.dual_nonneg = dneg;
    rep.ok = rep.max_residual() <= tol;
    return rep;
}

} // namespace sddf
