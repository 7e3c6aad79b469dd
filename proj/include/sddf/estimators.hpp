#pragma once
// Directional distance function estimators.
//
// All models share one sign convention: the distance value at a netput
// point is eps = alpha + beta'x - gamma'y (cost mode treats cost as the
// single input, so beta holds one cost coefficient). The fitted surface of
// a shape-constrained model is the lower envelope min_i of its hyperplanes;
// projecting an observation onto the zero set along the estimation
// direction gives the fitted point (x - eps*gx, y + eps*gy).
//
// Estimation standardizes columns internally (zero mean, unit variance)
// before compiling to a QP and maps coefficients back, so constraint
// tolerances are meaningful regardless of data units.

#include "sddf/data.hpp"
#include "sddf/qp.hpp"

#include <optional>
#include <vector>

namespace sddf {

struct SolveDiagnostics {
    QpStatus status = QpStatus::optimal;
    int iterations = 0;
    KktReport kkt_report;
    double objective = 0.0;            // QP objective (intercept-eliminated form)
    double objective_recomputed = 0.0; // from recovered hyperplanes at the data
    double tolerance = 0.0;
};

// Single-hyperplane DDF fit (Eq. 8-style least squares under the
// translation normalization). No sign constraints on the slopes.
struct LinearDdfModel {
    double alpha = 0.0;
    Vec beta;   // input slopes; cost mode: one cost coefficient
    Vec gamma;  // output slopes
    Direction direction;
    Vec residuals;
    DataMode mode = DataMode::cost;
    SolveDiagnostics diagnostics;

    // Distance value alpha + beta'x - gamma'y; cost mode passes {c}.
    double value(const Vec& input_part, const Vec& output_part) const;
};

enum class FrontierMode { production, cost, isoquant };

struct Hyperplane {
    double alpha = 0.0;
    Vec beta;  // empty in isoquant mode
    Vec gamma;
};

struct FrontierModel {
    std::vector<Hyperplane> hyperplanes; // one per observation
    Direction direction;                 // single-direction fits
    std::vector<Direction> group_directions; // multi-direction fits
    std::vector<std::size_t> group_of;       // per-observation group id
    Vec residuals;
    Mat fitted_outputs;     // y_i + eps_i * gy
    Vec fitted_cost;        // cost mode: c_i - eps_i * gc
    Mat fitted_inputs;      // production mode: x_i - eps_i * gx
    FrontierMode mode = FrontierMode::isoquant;
    std::optional<double> slope_bound;
    SolveDiagnostics diagnostics;

    std::size_t size() const { return hyperplanes.size(); }
    bool multi_direction() const { return !group_directions.empty(); }
    const Direction& direction_of(std::size_t i) const;

    // Lower-envelope value min_j(alpha_j + beta_j'x - gamma_j'y); isoquant
    // mode passes an empty input part, cost mode passes {c}.
    double value(const Vec& input_part, const Vec& output_part) const;

    // Envelope rows [beta_j | -gamma_j] with offsets alpha_j, cached for
    // kernel evaluation.
    const Mat& envelope_rows() const { return env_rows_; }
    const Vec& envelope_offsets() const { return env_offsets_; }
    void rebuild_envelope();

  private:
    Mat env_rows_;
    Vec env_offsets_;
};

// Explicit cost-frontier evaluation max_i (gamma_i'y - alpha_i)/beta_i over
// hyperplanes with beta_i >= beta_floor. Fails when no hyperplane has a
// usable cost slope (cost-unbounded region) or when a zero-slope hyperplane
// already excludes the output bundle at any cost.
struct CostFrontierValue {
    bool ok = false;
    double cost = 0.0;
    bool unbounded_along_cost = false;
    bool infeasible_output = false;
};
CostFrontierValue explicit_cost(const FrontierModel& model, const Vec& y,
                                double beta_floor = 1e-9);
CostFrontierValue explicit_cost(const LinearDdfModel& model, const Vec& y,
                                double beta_floor = 1e-9);

struct QuadraticModel {
    double intercept = 0.0;
    Vec linear;   // per output
    Vec squared;  // per output, no cross terms
    double predict(const Vec& y) const;
};

struct KernelModel {
    Vec bandwidths;       // per regressor
    Mat train_outputs;    // regressors
    Vec train_cost;       // response
    double loo_cv_error = 0.0;
    double predict(const Vec& y) const;
};

struct FitOptions {
    double tol = 1e-8;
    int max_iters = 200;
};

LinearDdfModel fit_parametric_ddf(const Dataset& data, const Direction& direction,
                                  const FitOptions& opt = {});

FrontierModel fit_cnls_d(const Dataset& data, const Direction& direction,
                         std::optional<double> slope_bound = std::nullopt,
                         const FitOptions& opt = {});

FrontierModel fit_cnls_d_isoquant(const Mat& outputs, const Direction& direction,
                                  const FitOptions& opt = {});

FrontierModel fit_cnls_d_multidir(const Mat& outputs, const std::vector<std::size_t>& group_of,
                                  const std::vector<Direction>& directions,
                                  const FitOptions& opt = {});

QuadraticModel fit_quadratic(const Dataset& data);

KernelModel fit_local_linear(const Dataset& data, std::size_t grid_points = 20);

// Internal fitting cores taking raw (possibly non-unit) direction vectors;
// exposed so direction-scaling behavior is testable. Cost mode passes the
// cost component as the last entry of `dir_input`/uses dir layout matching
// the model equation.
LinearDdfModel fit_parametric_ddf_raw(const Dataset& data, const Vec& dir_input,
                                      const Vec& dir_output, const FitOptions& opt = {});
FrontierModel fit_cnls_d_isoquant_raw(const Mat& outputs, const std::vector<Vec>& dir_of_obs,
                                      const std::vector<std::size_t>& group_of,
                                      const FitOptions& opt = {});
FrontierModel fit_cnls_d_raw(const Dataset& data, const Vec& dir_input, const Vec& dir_output,
                             std::optional<double> slope_bound, const FitOptions& opt = {});

} // namespace sddf
