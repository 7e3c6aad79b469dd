#pragma once
// Most productive scale size and marginal costs along output-ratio rays on
// a fitted cost surface. Surfaces wrap a model (and the unit-cube scale it
// was fit under, if any) and always speak original units.

#include "sddf/data.hpp"
#include "sddf/estimators.hpp"

#include <functional>
#include <optional>

namespace sddf {

// A surface borrows the wrapped model; the model must outlive it.
struct CostSurface {
    // Frontier cost at an original-unit output bundle.
    std::function<CostFrontierValue(const Vec& y)> cost;
    // d cost / d y_q from the active hyperplane (piecewise-linear models) or
    // the analytic gradient (quadratic); empty for kernel models.
    std::function<std::optional<double>(const Vec& y, std::size_t q)> subgradient;
};

CostSurface make_cost_surface(const FrontierModel& model,
                              const std::optional<ScaleInfo>& scale = std::nullopt);
CostSurface make_cost_surface(const QuadraticModel& model, std::size_t num_outputs,
                              const std::optional<ScaleInfo>& scale = std::nullopt);
CostSurface make_cost_surface(const KernelModel& model,
                              const std::optional<ScaleInfo>& scale = std::nullopt);

struct RaySpec {
    std::vector<std::size_t> scanned;                 // output indices swept by the ray
    Vec ratio;                                        // fixed mix over `scanned`
    std::vector<std::pair<std::size_t, double>> held; // remaining outputs at fixed levels
    double scan_lo_frac = 0.01;                       // of the sample max scale
    double scan_hi_frac = 3.0;

    void validate(std::size_t num_outputs) const;
    Vec point_at(double scale_value, std::size_t num_outputs) const;
};

struct MpssResult {
    double cost_level = 0.0;
    double scale = 0.0;            // maximizer of aggregate output / cost
    double aggregate_output = 0.0; // sum of scanned outputs at the maximizer
    bool boundary = false;         // maximizer sits on the scan boundary
};

// Maximizes (sum of scanned outputs)/cost over a 512-point geometric grid,
// refined by golden-section to 1e-6 relative. `train_outputs` anchors the
// scan range through the sample's maximum scale on the ray.
MpssResult mpss(const CostSurface& surface, const RaySpec& ray, const Mat& train_outputs);

struct MarginalCostResult {
    double forward_difference = 0.0; // (c(y + h e_q) - c(y))/h, h in output units
    std::optional<double> subgradient;
};

MarginalCostResult marginal_cost(const CostSurface& surface, const Vec& point,
                                 std::size_t output_index, double h = 1.0);

} // namespace sddf
