#pragma once
// Out-of-sample fit measures: directional MSE along a chosen direction,
// radial MSE along rays toward a center, and the K-fold protocol.
//
// For piecewise-linear models the distance value along a ray is a concave
// piecewise-linear function of the ray parameter, so its zero set is an
// interval [t_lo, t_hi]; crossings are found exactly from the per-hyperplane
// interval reductions. A bisection root finder over the same restriction
// serves as the oracle and as the path for smooth (quadratic/kernel)
// frontiers.

#include "sddf/data.hpp"
#include "sddf/estimators.hpp"

#include <functional>
#include <optional>
#include <string>

namespace sddf {

struct MseReport {
    double value = 0.0;            // mean of squared distances over successful rays
    Vec squared_distances;         // per successful observation, in order
    std::vector<std::size_t> failed; // observation indices with no crossing
    std::size_t beyond_center = 0; // crossings past the center (radial only)
    std::string metric;            // "directional" or "radial"
    Vec direction_used;            // directional: the MSE direction components
};

// --- ray/crossing machinery -----------------------------------------------------

// Roots of t -> min_r(a_r + b_r t). The nonnegative region is an interval;
// both finite endpoints are crossings. Returns the root closest to t = 0,
// or nothing when the region is empty/never crosses.
struct EnvelopeCrossing {
    bool found = false;
    double t = 0.0;
    bool region_empty = false;
};
EnvelopeCrossing envelope_zero_crossing(const Vec& a, const Vec& b);

// Bisection oracle: finds a sign change of f on [lo, hi] by scanning
// `scan_points` panels nearest t = 0 first, then bisects to `tol`.
std::optional<double> bisect_zero(const std::function<double(double)>& f, double lo, double hi,
                                  double tol = 1e-10, int scan_points = 256);

// --- directional MSE -------------------------------------------------------------

// Squared distances from test points to the model surface along the given
// MSE direction (full line through each point). In cost mode the projection
// line runs along (g^y, -g^c): outputs expand while cost contracts, the
// same orientation the distance function measures. Rays with no crossing
// are recorded and excluded.
MseReport directional_mse(const LinearDdfModel& model, const Dataset& test,
                          const Direction& mse_direction);
MseReport directional_mse(const FrontierModel& model, const Dataset& test,
                          const Direction& mse_direction);
// Isoquant variant: test rows are output bundles, direction in output space.
MseReport directional_mse_isoquant(const FrontierModel& model, const Mat& test_outputs,
                                   const Direction& mse_direction);

// --- radial MSE ------------------------------------------------------------------

// Cost mode, per the normalized-cube construction: test observations are
// normalized with the training scale, rays run from each point through the
// center C = [0,...,0,1], distances are measured in normalized space.
// Crossings outside |t| <= 10 count as failures; the report throws
// MetricError when more than `max_failure_share` of rays fail.
struct RadialOptions {
    double t_limit = 10.0;
    double max_failure_share = 0.01;
};

// `frontier` must return the distance-function value at a normalized-space
// point (outputs..., cost); positive inside, negative outside.
MseReport radial_mse_cost(const std::function<double(const Vec&)>& frontier,
                          const NormalizedDataset& test, const RadialOptions& opt = {});

// Convenience wrappers: models fit on normalized data evaluate directly.
MseReport radial_mse(const FrontierModel& model, const Dataset& test, const ScaleInfo& scale,
                     const RadialOptions& opt = {});
MseReport radial_mse(const QuadraticModel& model, const Dataset& test, const ScaleInfo& scale,
                     const RadialOptions& opt = {});
MseReport radial_mse(const KernelModel& model, const Dataset& test, const ScaleInfo& scale,
                     const RadialOptions& opt = {});

// Isoquant experiments: rays run from each test output bundle toward the
// output-space origin (raw units, no normalization).
MseReport radial_mse_isoquant(const FrontierModel& model, const Mat& test_outputs,
                              const RadialOptions& opt = {});

// --- K-fold -----------------------------------------------------------------------

struct KfoldSpec {
    std::size_t k = 5;
    std::uint64_t seed = 0;
};

struct KfoldResult {
    Vec fold_values;
    double average = 0.0;
};

// Deterministic fold assignment: seeded uniform shuffle, contiguous blocks.
std::vector<std::vector<std::size_t>> kfold_assignment(std::size_t n, std::size_t k,
                                                       std::uint64_t seed);

// Runs the estimator callback on each training split and the metric callback
// on the held-out split; estimator failures abort with the fold index.
KfoldResult kfold_mse(const Dataset& data, const KfoldSpec& spec,
                      const std::function<double(const Dataset& train, const Dataset& test)>& fold_metric);

Dataset subset_rows(const Dataset& data, const std::vector<std::size_t>& rows);

} // namespace sddf
