#include "sddf/analysis.hpp"

#include "sddf/errors.hpp"
#include "sddf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sddf {

namespace {

Vec to_normalized(const Vec& y, const ScaleInfo& scale) {
    Vec out(y.size());
    for (std::size_t q = 0; q < y.size(); ++q) {
        const ColumnScale& s = scale.outputs.at(q);
        out[q] = s.degenerate ? 0.0 : (y[q] - s.min) / (s.max - s.min);
    }
    return out;
}

double cost_from_normalized(double c_norm, const ScaleInfo& scale) {
    const ColumnScale& s = *scale.cost;
    return s.degenerate ? s.min : s.min + c_norm * (s.max - s.min);
}

double cost_range(const ScaleInfo& scale) {
    const ColumnScale& s = *scale.cost;
    return s.degenerate ? 0.0 : s.max - s.min;
}

double output_range(const ScaleInfo& scale, std::size_t q) {
    const ColumnScale& s = scale.outputs.at(q);
    return s.degenerate ? 1.0 : s.max - s.min;
}

} // namespace

CostSurface make_cost_surface(const FrontierModel& model, const std::optional<ScaleInfo>& scale) {
    if (model.mode != FrontierMode::cost) throw DataError("cost surface: cost-mode model required");
    if (scale && !scale->cost) throw DataError("cost surface: scale info lacks a cost column");
    CostSurface s;
    s.cost = [&model, scale](const Vec& y) {
        if (!scale) return explicit_cost(model, y);
        CostFrontierValue v = explicit_cost(model, to_normalized(y, *scale));
        if (v.ok) v.cost = cost_from_normalized(v.cost, *scale);
        return v;
    };
    s.subgradient = [&model, scale](const Vec& y, std::size_t q) -> std::optional<double> {
        const Vec yn = scale ? to_normalized(y, *scale) : y;
        // Active hyperplane of the explicit cost frontier.
        double best = -std::numeric_limits<double>::infinity();
        const Hyperplane* active = nullptr;
        for (const Hyperplane& h : model.hyperplanes) {
            if (h.beta[0] < 1e-9) continue;
            const double c = (simd::dot(h.gamma.data(), yn.data(), yn.size()) - h.alpha) / h.beta[0];
            if (c > best) {
                best = c;
                active = &h;
            }
        }
        if (!active) return std::nullopt;
        double g = active->gamma[q] / active->beta[0];
        if (scale) g *= cost_range(*scale) / output_range(*scale, q);
        return g;
    };
    return s;
}

CostSurface make_cost_surface(const QuadraticModel& model, std::size_t num_outputs,
                              const std::optional<ScaleInfo>& scale) {
    if (scale && !scale->cost) throw DataError("cost surface: scale info lacks a cost column");
    CostSurface s;
    s.cost = [&model, scale, num_outputs](const Vec& y) {
        if (y.size() != num_outputs) throw DataError("cost surface: dimension mismatch");
        CostFrontierValue v;
        v.ok = true;
        if (!scale) {
            v.cost = model.predict(y);
        } else {
            v.cost = cost_from_normalized(model.predict(to_normalized(y, *scale)), *scale);
        }
        return v;
    };
    s.subgradient = [&model, scale](const Vec& y, std::size_t q) -> std::optional<double> {
        const Vec yn = scale ? to_normalized(y, *scale) : y;
        double g = model.linear[q] + 2.0 * model.squared[q] * yn[q];
        if (scale) g *= cost_range(*scale) / output_range(*scale, q);
        return g;
    };
    return s;
}

CostSurface make_cost_surface(const KernelModel& model, const std::optional<ScaleInfo>& scale) {
    if (scale && !scale->cost) throw DataError("cost surface: scale info lacks a cost column");
    CostSurface s;
    s.cost = [&model, scale](const Vec& y) {
        CostFrontierValue v;
        v.ok = true;
        if (!scale) {
            v.cost = model.predict(y);
        } else {
            v.cost = cost_from_normalized(model.predict(to_normalized(y, *scale)), *scale);
        }
        return v;
    };
    s.subgradient = nullptr;
    return s;
}

void RaySpec::validate(std::size_t num_outputs) const {
    if (scanned.empty()) throw ConfigError("ray: no scanned outputs");
    if (ratio.size() != scanned.size()) throw ConfigError("ray: ratio length mismatch");
    double total = 0.0;
    for (double r : ratio) {
        if (r < 0.0) throw ConfigError("ray: ratio components must be nonnegative");
        total += r;
    }
    if (!(total > 0.0)) throw ConfigError("ray: ratio must have a positive component");
    std::vector<char> used(num_outputs, 0);
    for (std::size_t q : scanned) {
        if (q >= num_outputs) throw ConfigError("ray: scanned index out of range");
        if (used[q]++) throw ConfigError("ray: duplicate output index");
    }
    for (const auto& [q, level] : held) {
        if (q >= num_outputs) throw ConfigError("ray: held index out of range");
        if (used[q]++) throw ConfigError("ray: output both scanned and held");
        (void)level;
    }
    for (std::size_t q = 0; q < num_outputs; ++q)
        if (!used[q]) throw ConfigError("ray: output " + std::to_string(q + 1) + " unspecified");
    if (!(scan_lo_frac > 0.0) || !(scan_hi_frac > scan_lo_frac))
        throw ConfigError("ray: bad scan range");
}

Vec RaySpec::point_at(double scale_value, std::size_t num_outputs) const {
    Vec y(num_outputs, 0.0);
    for (std::size_t k = 0; k < scanned.size(); ++k) y[scanned[k]] = scale_value * ratio[k];
    for (const auto& [q, level] : held) y[q] = level;
    return y;
}

MpssResult mpss(const CostSurface& surface, const RaySpec& ray, const Mat& train_outputs) {
    const std::size_t num_outputs = train_outputs.cols();
    ray.validate(num_outputs);
    double ratio_sum = 0.0;
    for (double r : ray.ratio) ratio_sum += r;

    // Sample max scale on this ray: the largest observed aggregate of the
    // scanned outputs, expressed in ray-scale units.
    double max_aggregate = 0.0;
    for (std::size_t i = 0; i < train_outputs.rows(); ++i) {
        double agg = 0.0;
        for (std::size_t q : ray.scanned) agg += train_outputs(i, q);
        max_aggregate = std::max(max_aggregate, agg);
    }
    if (!(max_aggregate > 0.0)) throw MetricError("mpss: sample has no mass on the scanned outputs");
    const double s_max = max_aggregate / ratio_sum;

    const double lo = ray.scan_lo_frac * s_max, hi = ray.scan_hi_frac * s_max;
    constexpr std::size_t kGrid = 512;
    const double step = std::pow(hi / lo, 1.0 / static_cast<double>(kGrid - 1));

    auto objective = [&](double s) -> double {
        const CostFrontierValue v = surface.cost(ray.point_at(s, num_outputs));
        if (!v.ok || !(v.cost > 0.0)) return -std::numeric_limits<double>::infinity();
        return s * ratio_sum / v.cost;
    };

    double best_val = -std::numeric_limits<double>::infinity();
    std::size_t best_k = kGrid;
    double s = lo;
    Vec grid(kGrid);
    for (std::size_t k = 0; k < kGrid; ++k, s *= step) {
        grid[k] = s;
        const double val = objective(s);
        if (val > best_val) {
            best_val = val;
            best_k = k;
        }
    }
    if (best_k == kGrid) throw MetricError("mpss: frontier not evaluable anywhere on the scan range");

    MpssResult out;
    out.boundary = best_k == 0 || best_k == kGrid - 1;
    double a = grid[best_k > 0 ? best_k - 1 : 0];
    double b = grid[std::min(best_k + 1, kGrid - 1)];
    // Golden-section refinement to 1e-6 relative in the scale.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while ((b - a) > 1e-6 * std::max(1.0, std::fabs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = objective(x1);
        }
    }
    const double s_star = 0.5 * (a + b);
    const double val_star = objective(s_star);
    const double s_best = val_star >= best_val ? s_star : grid[best_k];
    const CostFrontierValue v = surface.cost(ray.point_at(s_best, num_outputs));
    if (!v.ok) throw MetricError("mpss: frontier not evaluable at the maximizer");
    out.scale = s_best;
    out.aggregate_output = s_best * ratio_sum;
    out.cost_level = v.cost;
    return out;
}

MarginalCostResult marginal_cost(const CostSurface& surface, const Vec& point,
                                 std::size_t output_index, double h) {
    if (output_index >= point.size()) throw ConfigError("marginal_cost: output index out of range");
    if (!(h > 0.0)) throw ConfigError("marginal_cost: step must be positive");
    const CostFrontierValue base = surface.cost(point);
    if (!base.ok) throw MetricError("marginal_cost: frontier not evaluable at the point");
    Vec shifted = point;
    shifted[output_index] += h;
    const CostFrontierValue up = surface.cost(shifted);
    if (!up.ok) throw MetricError("marginal_cost: frontier not evaluable at the shifted point");
    MarginalCostResult out;
    out.forward_difference = (up.cost - base.cost) / h;
    if (surface.subgradient) out.subgradient = surface.subgradient(point, output_index);
    return out;
}

} // namespace sddf
