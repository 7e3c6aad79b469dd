#include "sddf/evaluation.hpp"

#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"
#include "sddf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sddf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EnvelopeCrossing envelope_zero_crossing(const Vec& a, const Vec& b) {
    EnvelopeCrossing out;
    if (a.size() != b.size()) throw MetricError("envelope crossing: size mismatch");
    // The region {t : min_r(a_r + b_r t) >= 0} is the interval [lo, hi].
    double lo = -kInf, hi = kInf;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (b[r] > 0.0) lo = std::max(lo, -a[r] / b[r]);
        else if (b[r] < 0.0) hi = std::min(hi, -a[r] / b[r]);
        else if (a[r] < 0.0) {
            out.region_empty = true;
            return out;
        }
    }
    if (lo > hi) {
        out.region_empty = true;
        return out;
    }
    const bool lo_ok = std::isfinite(lo), hi_ok = std::isfinite(hi);
    if (!lo_ok && !hi_ok) return out; // constant-sign envelope, never crosses
    if (lo_ok && hi_ok) {
        out.t = std::fabs(lo) <= std::fabs(hi) ? lo : hi;
    } else {
        out.t = lo_ok ? lo : hi;
    }
    out.found = true;
    return out;
}

std::optional<double> bisect_zero(const std::function<double(double)>& f, double lo, double hi,
                                  double tol, int scan_points) {
    if (!(lo < hi)) throw MetricError("bisect_zero: empty interval");
    const double step = (hi - lo) / scan_points;
    double best_lo = 0.0, best_hi = 0.0, best_dist = kInf;
    double prev_t = lo, prev_v = f(lo);
    for (int k = 1; k <= scan_points; ++k) {
        const double t = lo + k * step;
        const double v = f(t);
        if (prev_v == 0.0) {
            if (std::fabs(prev_t) < best_dist) {
                best_dist = std::fabs(prev_t);
                best_lo = best_hi = prev_t;
            }
        } else if ((prev_v < 0.0) != (v < 0.0)) {
            const double d = std::min(std::fabs(prev_t), std::fabs(t));
            if (d < best_dist) {
                best_dist = d;
                best_lo = prev_t;
                best_hi = t;
            }
        }
        prev_t = t;
        prev_v = v;
    }
    if (prev_v == 0.0 && std::fabs(prev_t) < best_dist) {
        best_dist = std::fabs(prev_t);
        best_lo = best_hi = prev_t;
    }
    if (!(best_dist < kInf)) return std::nullopt;
    if (best_lo == best_hi) return best_lo;
    double a = best_lo, b = best_hi, fa = f(a);
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// --- directional MSE --------------------------------------------------------------

namespace {

// Per-hyperplane affine coefficients of the distance value along the line
// p(t) = (input + t*dir_in, output + t*dir_out).
void ray_coefficients(const Mat& rows, const Vec& offsets, const Vec& input, const Vec& output,
                      const Vec& dir_in, const Vec& dir_out, Vec& a, Vec& b) {
    Vec point = input;
    point.insert(point.end(), output.begin(), output.end());
    Vec dir = dir_in;
    dir.insert(dir.end(), dir_out.begin(), dir_out.end());
    const std::size_t n = rows.rows();
    a.assign(n, 0.0);
    b.assign(n, 0.0);
    simd::affine_rows(rows.data(), offsets.data(), point.data(), a.data(), n, rows.cols());
    const Vec zero(n, 0.0);
    simd::affine_rows(rows.data(), zero.data(), dir.data(), b.data(), n, rows.cols());
}

MseReport finalize(MseReport rep) {
    if (!rep.squared_distances.empty())
        rep.value = std::accumulate(rep.squared_distances.begin(), rep.squared_distances.end(), 0.0) /
                    static_cast<double>(rep.squared_distances.size());
    return rep;
}

struct CostModePoint {
    Vec y;
    double c = 0.0;
};

CostModePoint cost_point(const Dataset& test, std::size_t i) {
    CostModePoint p;
    p.y.assign(test.num_outputs(), 0.0);
    for (std::size_t k = 0; k < test.num_outputs(); ++k) p.y[k] = test.outputs(i, k);
    p.c = (*test.cost)[i];
    return p;
}

} // namespace

MseReport directional_mse(const LinearDdfModel& model, const Dataset& test,
                          const Direction& mse_direction) {
    test.validate();
    if (test.mode() != DataMode::cost || model.mode != DataMode::cost)
        throw MetricError("directional_mse: cost-mode model and test set required");
    if (!mse_direction.gc || mse_direction.gy.size() != test.num_outputs())
        throw MetricError("directional_mse: direction does not match data");
    MseReport rep;
    rep.metric = "directional";
    rep.direction_used = mse_direction.concat();
    // The projection line runs along (g^y, -g^c): outputs expand while cost
    // contracts, matching the distance-function direction.
    const double gc = -*mse_direction.gc;
    for (std::size_t i = 0; i < test.n(); ++i) {
        const CostModePoint p = cost_point(test, i);
        const double value = model.value({p.c}, p.y);
        const double slope = model.beta[0] * gc - dot(model.gamma, mse_direction.gy);
        if (slope == 0.0) {
            rep.failed.push_back(i);
            continue;
        }
        const double t = -value / slope;
        rep.squared_distances.push_back(t * t);
    }
    return finalize(rep);
}

MseReport directional_mse(const FrontierModel& model, const Dataset& test,
                          const Direction& mse_direction) {
    test.validate();
    if (test.mode() != DataMode::cost || model.mode != FrontierMode::cost)
        throw MetricError("directional_mse: cost-mode model and test set required");
    if (!mse_direction.gc || mse_direction.gy.size() != test.num_outputs())
        throw MetricError("directional_mse: direction does not match data");
    MseReport rep;
    rep.metric = "directional";
    rep.direction_used = mse_direction.concat();
    Vec a, b;
    for (std::size_t i = 0; i < test.n(); ++i) {
        const CostModePoint p = cost_point(test, i);
        ray_coefficients(model.envelope_rows(), model.envelope_offsets(), {p.c}, p.y,
                         {-*mse_direction.gc}, mse_direction.gy, a, b);
        const EnvelopeCrossing cross = envelope_zero_crossing(a, b);
        if (!cross.found) {
            rep.failed.push_back(i);
            continue;
        }
        rep.squared_distances.push_back(cross.t * cross.t);
    }
    return finalize(rep);
}

MseReport directional_mse_isoquant(const FrontierModel& model, const Mat& test_outputs,
                                   const Direction& mse_direction) {
    if (model.mode != FrontierMode::isoquant)
        throw MetricError("directional_mse_isoquant: isoquant model required");
    if (mse_direction.gy.size() != test_outputs.cols())
        throw MetricError("directional_mse_isoquant: direction does not match data");
    MseReport rep;
    rep.metric = "directional";
    rep.direction_used = mse_direction.concat();
    Vec a, b;
    for (std::size_t i = 0; i < test_outputs.rows(); ++i) {
        Vec y(test_outputs.cols());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = test_outputs(i, k);
        ray_coefficients(model.envelope_rows(), model.envelope_offsets(), {}, y, {},
                         mse_direction.gy, a, b);
        const EnvelopeCrossing cross = envelope_zero_crossing(a, b);
        if (!cross.found) {
            rep.failed.push_back(i);
            continue;
        }
        rep.squared_distances.push_back(cross.t * cross.t);
    }
    return finalize(rep);
}

// --- radial MSE --------------------------------------------------------------------

MseReport radial_mse_cost(const std::function<double(const Vec&)>& frontier,
                          const NormalizedDataset& test, const RadialOptions& opt) {
    if (!test.cost) throw MetricError("radial_mse: cost mode required");
    const std::size_t n = test.outputs.rows(), q = test.outputs.cols();
    MseReport rep;
    rep.metric = "radial";
    for (std::size_t i = 0; i < n; ++i) {
        // Ray p + t*(C - p) through the center C = [0,...,0,1].
        Vec p(q + 1);
        for (std::size_t k = 0; k < q; ++k) p[k] = test.outputs(i, k);
        p[q] = (*test.cost)[i];
        Vec step(q + 1);
        for (std::size_t k = 0; k < q; ++k) step[k] = -p[k];
        step[q] = 1.0 - p[q];
        const double len2 = simd::sumsq(step.data(), step.size());
        if (len2 == 0.0) {
            rep.squared_distances.push_back(0.0); // the point is the center
            continue;
        }
        auto f = [&](double t) {
            Vec point(q + 1);
            for (std::size_t k = 0; k <= q; ++k) point[k] = p[k] + t * step[k];
            return frontier(point);
        };
        const std::optional<double> root = bisect_zero(f, -opt.t_limit, opt.t_limit);
        if (!root) {
            rep.failed.push_back(i);
            continue;
        }
        if (*root > 1.0) ++rep.beyond_center;
        rep.squared_distances.push_back(*root * *root * len2);
    }
    if (static_cast<double>(rep.failed.size()) > opt.max_failure_share * static_cast<double>(n))
        throw MetricError("radial_mse: too many rays failed to cross the frontier (" +
                          std::to_string(rep.failed.size()) + " of " + std::to_string(n) + ")");
    return finalize(rep);
}

namespace {

// Exact envelope crossings for a piecewise-linear cost-mode model fit on
// normalized data.
MseReport radial_frontier_exact(const FrontierModel& model, const NormalizedDataset& test,
                                const RadialOptions& opt) {
    const std::size_t n = test.outputs.rows(), q = test.outputs.cols();
    MseReport rep;
    rep.metric = "radial";
    Vec a, b;
    for (std::size_t i = 0; i < n; ++i) {
        Vec y(q);
        for (std::size_t k = 0; k < q; ++k) y[k] = test.outputs(i, k);
        const double c = (*test.cost)[i];
        Vec dir_y(q);
        for (std::size_t k = 0; k < q; ++k) dir_y[k] = -y[k];
        const double dir_c = 1.0 - c;
        const double len2 = simd::sumsq(dir_y.data(), q) + dir_c * dir_c;
        if (len2 == 0.0) {
            rep.squared_distances.push_back(0.0);
            continue;
        }
        ray_coefficients(model.envelope_rows(), model.envelope_offsets(), {c}, y, {dir_c}, dir_y,
                         a, b);
        const EnvelopeCrossing cross = envelope_zero_crossing(a, b);
        if (!cross.found || std::fabs(cross.t) > opt.t_limit) {
            rep.failed.push_back(i);
            continue;
        }
        if (cross.t > 1.0) ++rep.beyond_center;
        rep.squared_distances.push_back(cross.t * cross.t * len2);
    }
    if (static_cast<double>(rep.failed.size()) > opt.max_failure_share * static_cast<double>(n))
        throw MetricError("radial_mse: too many rays failed to cross the frontier (" +
                          std::to_string(rep.failed.size()) + " of " + std::to_string(n) + ")");
    return finalize(rep);
}

} // namespace

MseReport radial_mse(const FrontierModel& model, const Dataset& test, const ScaleInfo& scale,
                     const RadialOptions& opt) {
    if (model.mode != FrontierMode::cost) throw MetricError("radial_mse: cost-mode model required");
    const NormalizedDataset nt = normalize_with(test, scale);
    return radial_frontier_exact(model, nt, opt);
}

MseReport radial_mse(const QuadraticModel& model, const Dataset& test, const ScaleInfo& scale,
                     const RadialOptions& opt) {
    const NormalizedDataset nt = normalize_with(test, scale);
    const std::size_t q = test.num_outputs();
    auto frontier = [&](const Vec& point) {
        const Vec y(point.begin(), point.begin() + q);
        return point[q] - model.predict(y); // positive above the cost surface
    };
    return radial_mse_cost(frontier, nt, opt);
}

MseReport radial_mse(const KernelModel& model, const Dataset& test, const ScaleInfo& scale,
                     const RadialOptions& opt) {
    const NormalizedDataset nt = normalize_with(test, scale);
    const std::size_t q = test.num_outputs();
    auto frontier = [&](const Vec& point) {
        const Vec y(point.begin(), point.begin() + q);
        return point[q] - model.predict(y);
    };
    return radial_mse_cost(frontier, nt, opt);
}

MseReport radial_mse_isoquant(const FrontierModel& model, const Mat& test_outputs,
                              const RadialOptions& opt) {
    if (model.mode != FrontierMode::isoquant)
        throw MetricError("radial_mse_isoquant: isoquant model required");
    const std::size_t n = test_outputs.rows(), q = test_outputs.cols();
    MseReport rep;
    rep.metric = "radial";
    Vec a, b;
    for (std::size_t i = 0; i < n; ++i) {
        Vec y(q);
        for (std::size_t k = 0; k < q; ++k) y[k] = test_outputs(i, k);
        // Ray toward the output-space origin: p(t) = y + t*(-y).
        Vec dir_y(q);
        for (std::size_t k = 0; k < q; ++k) dir_y[k] = -y[k];
        const double len2 = simd::sumsq(dir_y.data(), q);
        if (len2 == 0.0) {
            rep.failed.push_back(i);
            continue;
        }
        ray_coefficients(model.envelope_rows(), model.envelope_offsets(), {}, y, {}, dir_y, a, b);
        const EnvelopeCrossing cross = envelope_zero_crossing(a, b);
        if (!cross.found || std::fabs(cross.t) > opt.t_limit) {
            rep.failed.push_back(i);
            continue;
        }
        rep.squared_distances.push_back(cross.t * cross.t * len2);
    }
    if (static_cast<double>(rep.failed.size()) > opt.max_failure_share * static_cast<double>(n))
        throw MetricError("radial_mse_isoquant: too many rays failed (" +
                          std::to_string(rep.failed.size()) + " of " + std::to_string(n) + ")");
    return finalize(rep);
}

// --- K-fold -------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> kfold_assignment(std::size_t n, std::size_t k,
                                                       std::uint64_t seed) {
    if (k < 2) throw ConfigError("kfold: k must be >= 2");
    if (n < k) throw ConfigError("kfold: need n >= k");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x6b666f6cULL, 0));
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t j =
            std::min(static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i + 1)), i);
        std::swap(order[i], order[j]);
    }
    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k, extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + pos, order.begin() + pos + len);
        pos += len;
    }
    return folds;
}

Dataset subset_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.inputs = Mat(rows.size(), data.num_inputs());
    out.outputs = Mat(rows.size(), data.num_outputs());
    if (data.cost) out.cost = Vec(rows.size());
    out.input_labels = data.input_labels;
    out.output_labels = data.output_labels;
    out.cost_label = data.cost_label;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t i = rows[r];
        for (std::size_t j = 0; j < data.num_inputs(); ++j) out.inputs(r, j) = data.inputs(i, j);
        for (std::size_t j = 0; j < data.num_outputs(); ++j) out.outputs(r, j) = data.outputs(i, j);
        if (data.cost) (*out.cost)[r] = (*data.cost)[i];
    }
    return out;
}

KfoldResult kfold_mse(const Dataset& data, const KfoldSpec& spec,
                      const std::function<double(const Dataset&, const Dataset&)>& fold_metric) {
    data.validate();
    const auto folds = kfold_assignment(data.n(), spec.k, spec.seed);
    KfoldResult result;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        std::sort(train_rows.begin(), train_rows.end());
        std::vector<std::size_t> test_rows = folds[f];
        std::sort(test_rows.begin(), test_rows.end());
        const Dataset train = subset_rows(data, train_rows);
        const Dataset test = subset_rows(data, test_rows);
        try {
            result.fold_values.push_back(fold_metric(train, test));
        } catch (const std::exception& e) {
            throw MetricError("kfold: fold " + std::to_string(f) + " failed: " + e.what());
        }
    }
    result.average = std::accumulate(result.fold_values.begin(), result.fold_values.end(), 0.0) /
                     static_cast<double>(result.fold_values.size());
    return result;
}

} // namespace sddf
