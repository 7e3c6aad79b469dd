#pragma once
// Subcommand implementations behind the CLI front end. Each returns the
// process exit code; failures are signalled by the sddf error types and
// mapped to exit codes by the caller.

#include <cstdint>
#include <string>
#include <vector>

namespace sddf::cli {

struct SimulateArgs {
    std::string kind = "linear"; // linear | isoquant2d | isoquant3d
    std::size_t n = 100;
    double lambda = 0.1;
    std::uint64_t seed = 1;
    std::string noise = "random";     // random | angle value via noise_angle
    double noise_angle = -1.0;        // >= 0 selects the fixed-direction DGP
    std::string angle_dist = "uniform"; // uniform | normal:mean,sd | gamma:shape,scale
    std::string out = "sim";
};
void cmd_simulate(const SimulateArgs& args);

struct EstimateArgs {
    std::string data;
    std::string estimator = "cnls"; // cnls | parametric | quadratic | local-linear
    std::string direction = "median"; // median | angle:<radians> | vector:<a,b,...>
    double slope_bound = 0.0;        // 0 disables
    bool normalize = false;
    double tol = 1e-8;
    int max_iters = 200;
    std::string out = "model.json";
};
void cmd_estimate(const EstimateArgs& args);

struct EvaluateArgs {
    std::string model;
    std::string data;
    std::string metric = "radial"; // radial | directional
    double mse_angle = -1.0;       // directional metric direction
    std::string direction;         // or explicit vector:<...>
    std::string out;               // optional JSON report path
    std::string append_csv;        // optional one-row CSV append target
    std::string tag = "run";
};
void cmd_evaluate(const EvaluateArgs& args);

struct KfoldArgs {
    std::string data;
    std::size_t k = 5;
    std::uint64_t seed = 1;
    std::string estimator = "cnls";
    std::string direction = "median";
    double slope_bound = 0.0;
    std::string metric = "radial";
    double mse_angle = -1.0;
    std::string out; // optional CSV path
};
void cmd_kfold(const KfoldArgs& args);

struct AnalyzeArgs {
    std::string model;
    std::string data;               // training data for anchors
    std::vector<std::size_t> scan;  // 1-based output indices forming the ray plane
    std::vector<double> ratios;     // second/first scanned output ratios
    std::vector<double> percentiles{25.0, 50.0, 75.0};
    std::string out = "analysis";
};
void cmd_analyze(const AnalyzeArgs& args);

struct CheckConvexityArgs {
    std::string model;
    std::string out; // optional JSON path
};
void cmd_check_convexity(const CheckConvexityArgs& args);

struct ExperimentArgs {
    std::string profile; // exp1..exp6, b1-parametric-random, b1-parametric-fixed, a4
    std::size_t n = 100;
    std::size_t replications = 100;
    std::uint64_t seed = 20240501;
    double lambda = -1.0; // profile default when negative
    int threads = 0;
    std::string out = "experiment";
};
void cmd_experiment(const ExperimentArgs& args);

} // namespace sddf::cli
