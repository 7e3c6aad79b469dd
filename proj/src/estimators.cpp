#include "sddf/estimators.hpp"

#include "sddf/errors.hpp"
#include "sddf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sddf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ColumnStats {
    Vec mean, sd;
};

ColumnStats column_stats(const Mat& m) {
    ColumnStats st;
    const std::size_t n = m.rows(), c = m.cols();
    st.mean.assign(c, 0.0);
    st.sd.assign(c, 1.0);
    if (n == 0) return st;
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += m(i, j);
        st.mean[j] = s / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = m(i, j) - st.mean[j];
            ss += d * d;
        }
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        st.sd[j] = sd > 1e-300 ? sd : 1.0;
    }
    return st;
}

Mat standardize(const Mat& m, const ColumnStats& st) {
    Mat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = (m(i, j) - st.mean[j]) / st.sd[j];
    return out;
}

// Input-side matrix for the distance function: cost mode uses the cost
// column as the single input.
Mat input_matrix(const Dataset& data) {
    if (data.mode() == DataMode::cost) {
        Mat x(data.n(), 1);
        for (std::size_t i = 0; i < data.n(); ++i) x(i, 0) = (*data.cost)[i];
        return x;
    }
    return data.inputs;
}

void split_direction(const Dataset& data, const Direction& dir, Vec& dir_in, Vec& dir_out) {
    if (data.mode() == DataMode::cost) {
        if (!dir.gc || dir.gy.size() != data.num_outputs())
            throw DataError("direction does not match cost-mode dataset");
        dir_in = {*dir.gc};
    } else if (data.mode() == DataMode::production) {
        if (dir.gx.size() != data.num_inputs() || dir.gy.size() != data.num_outputs())
            throw DataError("direction does not match production-mode dataset");
        dir_in = dir.gx;
    } else {
        throw DataError("estimator requires production or cost mode data");
    }
    dir_out = dir.gy;
}

} // namespace

// --- model evaluation ---------------------------------------------------------

double LinearDdfModel::value(const Vec& input_part, const Vec& output_part) const {
    if (input_part.size() != beta.size() || output_part.size() != gamma.size())
        throw DataError("evaluate: point dimension mismatch");
    double v = alpha;
    v += simd::dot(beta.data(), input_part.data(), beta.size());
    v -= simd::dot(gamma.data(), output_part.data(), gamma.size());
    return v;
}

const Direction& FrontierModel::direction_of(std::size_t i) const {
    if (!multi_direction()) return direction;
    return group_directions.at(group_of.at(i));
}

void FrontierModel::rebuild_envelope() {
    const std::size_t n = hyperplanes.size();
    if (n == 0) {
        env_rows_ = Mat();
        env_offsets_.clear();
        return;
    }
    const std::size_t d = hyperplanes[0].beta.size();
    const std::size_t q = hyperplanes[0].gamma.size();
    env_rows_ = Mat(n, d + q);
    env_offsets_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        env_offsets_[i] = hyperplanes[i].alpha;
        for (std::size_t k = 0; k < d; ++k) env_rows_(i, k) = hyperplanes[i].beta[k];
        for (std::size_t k = 0; k < q; ++k) env_rows_(i, d + k) = -hyperplanes[i].gamma[k];
    }
}

double FrontierModel::value(const Vec& input_part, const Vec& output_part) const {
    if (env_rows_.rows() != hyperplanes.size())
        throw SolverError("frontier model: envelope cache not built");
    if (input_part.size() + output_part.size() != env_rows_.cols())
        throw DataError("evaluate: point dimension mismatch");
    Vec point = input_part;
    point.insert(point.end(), output_part.begin(), output_part.end());
    return simd::envelope_min(env_rows_.data(), env_offsets_.data(), point.data(),
                              env_rows_.rows(), env_rows_.cols());
}

CostFrontierValue explicit_cost(const FrontierModel& model, const Vec& y, double beta_floor) {
    CostFrontierValue out;
    if (model.mode != FrontierMode::cost) throw DataError("explicit_cost: cost-mode model required");
    bool any = false;
    double best = -kInf;
    for (const Hyperplane& h : model.hyperplanes) {
        const double gy = simd::dot(h.gamma.data(), y.data(), y.size());
        if (h.beta[0] >= beta_floor) {
            best = std::max(best, (gy - h.alpha) / h.beta[0]);
            any = true;
        } else if (h.alpha - gy < 0.0) {
            out.infeasible_output = true; // no cost level satisfies this hyperplane
        }
    }
    if (!any) {
        out.unbounded_along_cost = true;
        return out;
    }
    if (out.infeasible_output) return out;
    out.ok = true;
    out.cost = best;
    return out;
}

CostFrontierValue explicit_cost(const LinearDdfModel& model, const Vec& y, double beta_floor) {
    CostFrontierValue out;
    if (model.mode != DataMode::cost) throw DataError("explicit_cost: cost-mode model required");
    const double gy = simd::dot(model.gamma.data(), y.data(), y.size());
    if (model.beta[0] >= beta_floor) {
        out.ok = true;
        out.cost = (gy - model.alpha) / model.beta[0];
    } else {
        out.unbounded_along_cost = true;
    }
    return out;
}

double QuadraticModel::predict(const Vec& y) const {
    if (y.size() != linear.size()) throw DataError("quadratic predict: dimension mismatch");
    double v = intercept;
    for (std::size_t q = 0; q < y.size(); ++q) v += linear[q] * y[q] + squared[q] * y[q] * y[q];
    return v;
}

// --- parametric DDF -------------------------------------------------------------

LinearDdfModel fit_parametric_ddf_raw(const Dataset& data, const Vec& dir_input,
                                      const Vec& dir_output, const FitOptions& opt) {
    data.validate();
    const Mat x = input_matrix(data);
    const Mat& y = data.outputs;
    const std::size_t n = data.n(), d = x.cols(), q = y.cols();
    if (n <= d + q + 1) throw DataError("parametric ddf: need n > d + Q + 1");
    if (dir_input.size() != d || dir_output.size() != q)
        throw DataError("parametric ddf: direction dimension mismatch");

    const ColumnStats xs = column_stats(x), ys = column_stats(y);
    const Mat xstd = standardize(x, xs), ystd = standardize(y, ys);

    // theta = (alpha, beta_std, gamma_std); residual_i = row_i . theta.
    const std::size_t nv = 1 + d + q;
    Mat m(n, nv);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, 0) = 1.0;
        for (std::size_t k = 0; k < d; ++k) m(i, 1 + k) = xstd(i, k);
        for (std::size_t k = 0; k < q; ++k) m(i, 1 + d + k) = -ystd(i, k);
    }
    QpProblem qp;
    qp.objective_matrix = Mat(nv, nv);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m.row(i);
        for (std::size_t a = 0; a < nv; ++a)
            for (std::size_t b = 0; b < nv; ++b) qp.objective_matrix(a, b) += 2.0 * row[a] * row[b];
    }
    qp.objective_vector.assign(nv, 0.0);
    qp.eq_constraints = SparseRows(nv);
    Vec trans(nv, 0.0);
    for (std::size_t k = 0; k < d; ++k) trans[1 + k] = dir_input[k] / xs.sd[k];
    for (std::size_t k = 0; k < q; ++k) trans[1 + d + k] = dir_output[k] / ys.sd[k];
    qp.eq_constraints.push_dense_row(trans.data(), nv);
    qp.eq_rhs = {1.0};
    qp.ineq_constraints = SparseRows(nv);

    const QpSolution sol = solve_qp(qp, opt.tol, opt.max_iters);
    if (sol.status != QpStatus::optimal)
        throw SolverError("parametric ddf: QP did not reach optimality (" + to_string(sol.status) + ")");

    LinearDdfModel model;
    model.mode = data.mode();
    model.beta.assign(d, 0.0);
    model.gamma.assign(q, 0.0);
    double alpha = sol.primal[0];
    for (std::size_t k = 0; k < d; ++k) {
        model.beta[k] = sol.primal[1 + k] / xs.sd[k];
        alpha -= model.beta[k] * xs.mean[k];
    }
    for (std::size_t k = 0; k < q; ++k) {
        model.gamma[k] = sol.primal[1 + d + k] / ys.sd[k];
        alpha += model.gamma[k] * ys.mean[k];
    }
    model.alpha = alpha;
    model.residuals.assign(n, 0.0);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = model.alpha;
        for (std::size_t k = 0; k < d; ++k) e += model.beta[k] * x(i, k);
        for (std::size_t k = 0; k < q; ++k) e -= model.gamma[k] * y(i, k);
        model.residuals[i] = e;
        obj += e * e;
    }
    model.diagnostics = {sol.status, sol.iterations, sol.kkt_report, sol.objective, obj, opt.tol};
    return model;
}

LinearDdfModel fit_parametric_ddf(const Dataset& data, const Direction& direction,
                                  const FitOptions& opt) {
    Vec din, dout;
    split_direction(data, direction, din, dout);
    LinearDdfModel model = fit_parametric_ddf_raw(data, din, dout, opt);
    model.direction = direction;
    return model;
}

// --- CNLS-d ----------------------------------------------------------------------

namespace {

// Shared CNLS-d core in the intercept-eliminated form. `x` may have zero
// columns (isoquant). Directions are per-observation and may be non-unit;
// the translation constraint and fitted-point recovery use them as given.
FrontierModel solve_cnls(const Mat& x, const Mat& y, const std::vector<Vec>& dir_in,
                         const std::vector<Vec>& dir_out, std::optional<double> slope_bound,
                         const FitOptions& opt, FrontierMode mode) {
    const std::size_t n = y.rows(), d = x.cols(), q = y.cols();
    if (n < 1) throw DataError("cnls: empty dataset");
    if (slope_bound && !(*slope_bound > 0.0)) throw DataError("cnls: slope bound must be positive");

    const ColumnStats xs = column_stats(x), ys = column_stats(y);
    const Mat xstd = standardize(x, xs), ystd = standardize(y, ys);

    // z = [eps (n), beta_std (n*d), gamma_std (n*q)]
    const std::size_t nv = n + n * d + n * q;
    const auto beta_ix = [&](std::size_t i, std::size_t k) {
        return static_cast<std::uint32_t>(n + i * d + k);
    };
    const auto gamma_ix = [&](std::size_t i, std::size_t k) {
        return static_cast<std::uint32_t>(n + n * d + i * q + k);
    };

    QpProblem qp;
    qp.objective_matrix = Mat(nv, nv);
    for (std::size_t i = 0; i < n; ++i) qp.objective_matrix(i, i) = 2.0;
    qp.objective_vector.assign(nv, 0.0);

    qp.eq_constraints = SparseRows(nv);
    qp.eq_rhs.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> cols;
        std::vector<double> vals;
        for (std::size_t k = 0; k < d; ++k) {
            cols.push_back(beta_ix(i, k));
            vals.push_back(dir_in[i][k] / xs.sd[k]);
        }
        for (std::size_t k = 0; k < q; ++k) {
            cols.push_back(gamma_ix(i, k));
            vals.push_back(dir_out[i][k] / ys.sd[k]);
        }
        qp.eq_constraints.push_row(cols, vals);
    }

    // Afriat block: eps_i - eps_j - beta_j'(x_i - x_j) + gamma_j'(y_i - y_j) <= 0.
    qp.ineq_constraints = SparseRows(nv);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            std::vector<std::uint32_t> cols{static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j)};
            std::vector<double> vals{1.0, -1.0};
            for (std::size_t k = 0; k < d; ++k) {
                cols.push_back(beta_ix(j, k));
                vals.push_back(-(xstd(i, k) - xstd(j, k)));
            }
            for (std::size_t k = 0; k < q; ++k) {
                cols.push_back(gamma_ix(j, k));
                vals.push_back(ystd(i, k) - ystd(j, k));
            }
            qp.ineq_constraints.push_row(cols, vals);
        }
    qp.ineq_rhs.assign(qp.ineq_constraints.rows(), 0.0);

    // The slope bound caps the hyperplane slope coefficients. In cost mode
    // the cost coefficient is pinned near 1/g_c by the translation
    // normalization, so the cap applies to the output slopes only there.
    Vec lb(nv, -kInf), ub(nv, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            lb[beta_ix(i, k)] = 0.0;
            if (slope_bound && mode == FrontierMode::production)
                ub[beta_ix(i, k)] = *slope_bound * xs.sd[k];
        }
        for (std::size_t k = 0; k < q; ++k) {
            lb[gamma_ix(i, k)] = 0.0;
            if (slope_bound) ub[gamma_ix(i, k)] = *slope_bound * ys.sd[k];
        }
    }
    qp.lower_bounds = std::move(lb);
    qp.upper_bounds = std::move(ub);

    const QpSolution sol = solve_qp(qp, opt.tol, opt.max_iters);
    if (sol.status == QpStatus::infeasible)
        throw SolverError("cnls: QP reported infeasible (solver failure on a consistent model)");
    if (sol.status != QpStatus::optimal)
        throw SolverError("cnls: QP did not reach optimality within the iteration cap");

    FrontierModel model;
    model.mode = mode;
    model.slope_bound = slope_bound;
    model.residuals.assign(sol.primal.begin(), sol.primal.begin() + n);
    model.hyperplanes.resize(n);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Hyperplane& h = model.hyperplanes[i];
        h.beta.assign(d, 0.0);
        h.gamma.assign(q, 0.0);
        double alpha = model.residuals[i];
        for (std::size_t k = 0; k < d; ++k) {
            h.beta[k] = sol.primal[beta_ix(i, k)] / xs.sd[k];
            alpha -= h.beta[k] * x(i, k);
        }
        for (std::size_t k = 0; k < q; ++k) {
            h.gamma[k] = sol.primal[gamma_ix(i, k)] / ys.sd[k];
            alpha += h.gamma[k] * y(i, k);
        }
        h.alpha = alpha;
        double e = h.alpha;
        for (std::size_t k = 0; k < d; ++k) e += h.beta[k] * x(i, k);
        for (std::size_t k = 0; k < q; ++k) e -= h.gamma[k] * y(i, k);
        obj += e * e;
    }
    model.diagnostics = {sol.status, sol.iterations, sol.kkt_report, sol.objective, obj, opt.tol};

    // Fitted netputs: project each observation onto the zero set along its
    // own direction (translation property).
    model.fitted_outputs = Mat(n, q);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < q; ++k)
            model.fitted_outputs(i, k) = y(i, k) + model.residuals[i] * dir_out[i][k];
    if (mode == FrontierMode::cost) {
        model.fitted_cost.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            model.fitted_cost[i] = x(i, 0) - model.residuals[i] * dir_in[i][0];
    } else if (mode == FrontierMode::production) {
        model.fitted_inputs = Mat(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k)
                model.fitted_inputs(i, k) = x(i, k) - model.residuals[i] * dir_in[i][k];
    }
    model.rebuild_envelope();
    return model;
}

} // namespace

FrontierModel fit_cnls_d_raw(const Dataset& data, const Vec& dir_input, const Vec& dir_output,
                             std::optional<double> slope_bound, const FitOptions& opt) {
    data.validate();
    if (data.n() < 2) throw DataError("cnls: need n >= 2");
    const Mat x = input_matrix(data);
    if (dir_input.size() != x.cols() || dir_output.size() != data.num_outputs())
        throw DataError("cnls: direction dimension mismatch");
    const std::size_t n = data.n();
    const std::vector<Vec> din(n, dir_input), dout(n, dir_output);
    const FrontierMode mode =
        data.mode() == DataMode::cost ? FrontierMode::cost : FrontierMode::production;
    return solve_cnls(x, data.outputs, din, dout, slope_bound, opt, mode);
}

FrontierModel fit_cnls_d(const Dataset& data, const Direction& direction,
                         std::optional<double> slope_bound, const FitOptions& opt) {
    Vec din, dout;
    split_direction(data, direction, din, dout);
    FrontierModel model = fit_cnls_d_raw(data, din, dout, slope_bound, opt);
    model.direction = direction;
    return model;
}

FrontierModel fit_cnls_d_isoquant_raw(const Mat& outputs, const std::vector<Vec>& dir_of_obs,
                                      const std::vector<std::size_t>& group_of,
                                      const FitOptions& opt) {
    const std::size_t n = outputs.rows();
    if (n < 1) throw DataError("isoquant cnls: empty dataset");
    if (dir_of_obs.size() != n) throw DataError("isoquant cnls: one direction per observation required");
    Mat x(n, 0);
    const std::vector<Vec> din(n);
    FrontierModel model = solve_cnls(x, outputs, din, dir_of_obs, std::nullopt, opt,
                                     FrontierMode::isoquant);
    model.group_of = group_of;
    return model;
}

FrontierModel fit_cnls_d_isoquant(const Mat& outputs, const Direction& direction,
                                  const FitOptions& opt) {
    if (direction.gy.size() != outputs.cols() || !direction.gx.empty() || direction.gc)
        throw DataError("isoquant cnls: direction must live in output space");
    const std::vector<Vec> dirs(outputs.rows(), direction.gy);
    FrontierModel model = fit_cnls_d_isoquant_raw(outputs, dirs, {}, opt);
    model.direction = direction;
    return model;
}

FrontierModel fit_cnls_d_multidir(const Mat& outputs, const std::vector<std::size_t>& group_of,
                                  const std::vector<Direction>& directions,
                                  const FitOptions& opt) {
    const std::size_t n = outputs.rows();
    if (group_of.size() != n) throw DataError("multidir cnls: group assignment must cover all observations");
    if (directions.empty()) throw DataError("multidir cnls: no directions given");
    std::vector<std::size_t> counts(directions.size(), 0);
    for (std::size_t g : group_of) {
        if (g >= directions.size()) throw DataError("multidir cnls: group id out of range");
        ++counts[g];
    }
    for (std::size_t g = 0; g < counts.size(); ++g)
        if (counts[g] == 0) throw DataError("multidir cnls: empty group " + std::to_string(g));
    std::vector<Vec> dirs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Direction& dg = directions[group_of[i]];
        if (dg.gy.size() != outputs.cols() || !dg.gx.empty() || dg.gc)
            throw DataError("multidir cnls: directions must live in output space");
        dirs[i] = dg.gy;
    }
    FrontierModel model = fit_cnls_d_isoquant_raw(outputs, dirs, group_of, opt);
    model.group_directions = directions;
    return model;
}

// --- comparator estimators --------------------------------------------------------

QuadraticModel fit_quadratic(const Dataset& data) {
    data.validate();
    if (data.mode() != DataMode::cost) throw DataError("quadratic: cost mode required");
    const std::size_t n = data.n(), q = data.num_outputs();
    if (n <= 2 * q + 1) throw DataError("quadratic: need n > 2Q + 1");
    const ColumnStats ys = column_stats(data.outputs);
    const Mat ystd = standardize(data.outputs, ys);

    const std::size_t nv = 1 + 2 * q;
    Mat xtx(nv, nv);
    Vec xtc(nv, 0.0);
    Vec row(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        row[0] = 1.0;
        for (std::size_t k = 0; k < q; ++k) {
            row[1 + k] = ystd(i, k);
            row[1 + q + k] = ystd(i, k) * ystd(i, k);
        }
        for (std::size_t a = 0; a < nv; ++a) {
            for (std::size_t b = 0; b <= a; ++b) xtx(a, b) += row[a] * row[b];
            xtc[a] += row[a] * (*data.cost)[i];
        }
    }
    for (std::size_t a = 0; a < nv; ++a)
        for (std::size_t b = a + 1; b < nv; ++b) xtx(a, b) = xtx(b, a);

    Cholesky chol;
    if (!chol.factor(xtx, 1e-10))
        throw DataError("quadratic: rank-deficient design matrix");
    const Vec theta = chol.solve(xtc);

    QuadraticModel model;
    model.linear.assign(q, 0.0);
    model.squared.assign(q, 0.0);
    model.intercept = theta[0];
    for (std::size_t k = 0; k < q; ++k) {
        const double b = theta[1 + k], dcoef = theta[1 + q + k];
        const double mu = ys.mean[k], s = ys.sd[k];
        // a + b*(y-mu)/s + d*((y-mu)/s)^2 expanded in y
        model.squared[k] = dcoef / (s * s);
        model.linear[k] = b / s - 2.0 * dcoef * mu / (s * s);
        model.intercept += -b * mu / s + dcoef * mu * mu / (s * s);
    }
    return model;
}

namespace {

double local_linear_fit(const Mat& y, const Vec& c, const Vec& h, const Vec& point,
                        std::ptrdiff_t skip) {
    const std::size_t n = y.rows(), q = y.cols();
    const std::size_t nv = q + 1;
    Mat a(nv, nv);
    Vec b(nv, 0.0), u(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::ptrdiff_t>(i) == skip) continue;
        double e = 0.0;
        for (std::size_t k = 0; k < q; ++k) {
            const double t = (y(i, k) - point[k]) / h[k];
            e += t * t;
        }
        const double w = std::exp(-0.5 * e);
        if (w < 1e-300) continue;
        u[0] = 1.0;
        for (std::size_t k = 0; k < q; ++k) u[1 + k] = y(i, k) - point[k];
        for (std::size_t p = 0; p < nv; ++p) {
            const double wu = w * u[p];
            for (std::size_t r = 0; r <= p; ++r) a(p, r) += wu * u[r];
            b[p] += wu * c[i];
        }
    }
    for (std::size_t p = 0; p < nv; ++p)
        for (std::size_t r = p + 1; r < nv; ++r) a(p, r) = a(r, p);
    Cholesky chol;
    if (!chol.factor(a)) {
        double md = 1.0;
        for (std::size_t p = 0; p < nv; ++p) md = std::max(md, a(p, p));
        for (std::size_t p = 0; p < nv; ++p) a(p, p) += 1e-10 * md;
        if (!chol.factor(a)) throw SolverError("local linear: singular weighted system");
    }
    return chol.solve(b)[0];
}

} // namespace

double KernelModel::predict(const Vec& y) const {
    if (y.size() != train_outputs.cols()) throw DataError("kernel predict: dimension mismatch");
    return local_linear_fit(train_outputs, train_cost, bandwidths, y, -1);
}

KernelModel fit_local_linear(const Dataset& data, std::size_t grid_points) {
    data.validate();
    if (data.mode() != DataMode::cost) throw DataError("local linear: cost mode required");
    const std::size_t n = data.n(), q = data.num_outputs();
    if (n < 10) throw DataError("local linear: need n >= 10");
    if (grid_points < 2) throw DataError("local linear: grid needs at least 2 points");

    const ColumnStats ys = column_stats(data.outputs);
    Vec anchor(q);
    const double nfac = std::pow(static_cast<double>(n), -0.2);
    for (std::size_t k = 0; k < q; ++k) anchor[k] = std::max(ys.sd[k], 1e-12) * nfac;

    KernelModel best;
    best.train_outputs = data.outputs;
    best.train_cost = *data.cost;
    double best_err = kInf;
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double mult =
            std::pow(10.0, -1.0 + 2.0 * static_cast<double>(g) / static_cast<double>(grid_points - 1));
        Vec h(q);
        for (std::size_t k = 0; k < q; ++k) h[k] = mult * anchor[k];
        double err = 0.0;
        bool usable = true;
        for (std::size_t i = 0; i < n && usable; ++i) {
            Vec point(q);
            for (std::size_t k = 0; k < q; ++k) point[k] = data.outputs(i, k);
            try {
                const double pred =
                    local_linear_fit(data.outputs, *data.cost, h, point, static_cast<std::ptrdiff_t>(i));
                const double dlt = (*data.cost)[i] - pred;
                err += dlt * dlt;
            } catch (const SolverError&) {
                usable = false;
            }
        }
        if (usable && err < best_err) {
            best_err = err;
            best.bandwidths = h;
        }
    }
    if (!(best_err < kInf)) throw SolverError("local linear: no usable bandwidth on the grid");
    best.loo_cv_error = best_err / static_cast<double>(n);
    return best;
}

} // namespace sddf
