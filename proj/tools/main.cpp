#include "commands.hpp"

#include "sddf/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

// JSON config support: values load as option defaults, explicit flags win.
json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sddf::ConfigError("cannot open config file " + path);
    try {
        json j;
        in >> j;
        if (!j.is_object()) throw sddf::ConfigError("config root must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw sddf::ConfigError(std::string("config parse failure: ") + e.what());
    }
}

template <typename T>
void apply(const json& cfg, const char* key, const CLI::Option* opt, T& value) {
    if (opt->count() > 0) return; // flags win
    if (!cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw sddf::ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shape-constrained stochastic directional distance function estimation"};
    app.require_subcommand(1);

    using namespace sddf::cli;

    SimulateArgs sim;
    std::string sim_config;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate train/test data from a DGP");
    auto* sim_kind = simulate->add_option("--kind", sim.kind, "linear | isoquant2d | isoquant3d | hospital");
    auto* sim_n = simulate->add_option("--n", sim.n, "observations per set");
    auto* sim_lambda = simulate->add_option("--lambda", sim.lambda, "noise scale");
    auto* sim_seed = simulate->add_option("--seed", sim.seed, "master seed");
    auto* sim_noise_angle =
        simulate->add_option("--noise-angle", sim.noise_angle, "fixed noise direction angle");
    auto* sim_angle_dist = simulate->add_option("--angle-dist", sim.angle_dist,
                                                "uniform | normal:mean,sd | gamma:shape,scale");
    auto* sim_out = simulate->add_option("--out", sim.out, "output path prefix");
    simulate->add_option("--config", sim_config, "JSON config file (flags win)");
    simulate->callback([&]() {
        if (!sim_config.empty()) {
            const json cfg = load_config(sim_config);
            apply(cfg, "kind", sim_kind, sim.kind);
            apply(cfg, "n", sim_n, sim.n);
            apply(cfg, "lambda", sim_lambda, sim.lambda);
            apply(cfg, "seed", sim_seed, sim.seed);
            apply(cfg, "noise_angle", sim_noise_angle, sim.noise_angle);
            apply(cfg, "angle_dist", sim_angle_dist, sim.angle_dist);
            apply(cfg, "out", sim_out, sim.out);
        }
        cmd_simulate(sim);
    });

    EstimateArgs est;
    std::string est_config;
    CLI::App* estimate = app.add_subcommand("estimate", "Fit a model to a CSV dataset");
    auto* est_data = estimate->add_option("--data", est.data, "input CSV")->required();
    auto* est_kind =
        estimate->add_option("--estimator", est.estimator, "cnls | parametric | quadratic | local-linear");
    auto* est_dir = estimate->add_option("--direction", est.direction,
                                         "median | angle:<radians> | vector:<a,b,...>");
    auto* est_bound = estimate->add_option("--slope-bound", est.slope_bound, "output-slope cap (0 = none)");
    auto* est_norm = estimate->add_flag("--normalize", est.normalize, "fit in unit-cube space");
    auto* est_tol = estimate->add_option("--tol", est.tol, "solver tolerance");
    auto* est_iters = estimate->add_option("--max-iters", est.max_iters, "solver iteration cap");
    auto* est_out = estimate->add_option("--out", est.out, "model JSON path");
    estimate->add_option("--config", est_config, "JSON config file (flags win)");
    estimate->callback([&]() {
        if (!est_config.empty()) {
            const json cfg = load_config(est_config);
            apply(cfg, "data", est_data, est.data);
            apply(cfg, "estimator", est_kind, est.estimator);
            apply(cfg, "direction", est_dir, est.direction);
            apply(cfg, "slope_bound", est_bound, est.slope_bound);
            apply(cfg, "normalize", est_norm, est.normalize);
            apply(cfg, "tol", est_tol, est.tol);
            apply(cfg, "max_iters", est_iters, est.max_iters);
            apply(cfg, "out", est_out, est.out);
        }
        cmd_estimate(est);
    });

    EvaluateArgs ev;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score a model on a test CSV");
    evaluate->add_option("--model", ev.model, "model JSON")->required();
    evaluate->add_option("--data", ev.data, "test CSV")->required();
    evaluate->add_option("--metric", ev.metric, "radial | directional");
    evaluate->add_option("--mse-angle", ev.mse_angle, "directional metric angle");
    evaluate->add_option("--direction", ev.direction, "directional metric direction (vector:...)");
    evaluate->add_option("--out", ev.out, "report JSON path");
    evaluate->add_option("--append-csv", ev.append_csv, "append a one-row summary to this CSV");
    evaluate->add_option("--tag", ev.tag, "row tag for the CSV append");
    evaluate->callback([&]() { cmd_evaluate(ev); });

    KfoldArgs kf;
    CLI::App* kfold = app.add_subcommand("kfold", "K-fold average MSE for an estimator");
    kfold->add_option("--data", kf.data, "input CSV")->required();
    kfold->add_option("--k", kf.k, "number of folds");
    kfold->add_option("--seed", kf.seed, "fold-shuffle seed");
    kfold->add_option("--estimator", kf.estimator, "cnls | parametric | quadratic | local-linear");
    kfold->add_option("--direction", kf.direction, "direction source for DDF estimators");
    kfold->add_option("--slope-bound", kf.slope_bound, "output-slope cap (0 = none)");
    kfold->add_option("--metric", kf.metric, "radial | directional");
    kfold->add_option("--mse-angle", kf.mse_angle, "directional metric angle");
    kfold->add_option("--out", kf.out, "per-fold CSV path");
    kfold->callback([&]() { cmd_kfold(kf); });

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand("analyze", "MPSS and marginal costs on a cost model");
    analyze->add_option("--model", an.model, "model JSON")->required();
    analyze->add_option("--data", an.data, "training CSV (anchors the rays)")->required();
    analyze->add_option("--scan", an.scan, "two 1-based output indices")->expected(2);
    analyze->add_option("--ratios", an.ratios, "scanned-output ratios")->expected(-1);
    analyze->add_option("--percentiles", an.percentiles, "percentile anchors")->expected(-1);
    analyze->add_option("--out", an.out, "output path prefix");
    analyze->callback([&]() {
        if (an.scan.empty()) an.scan = {1, 2};
        if (an.ratios.empty()) an.ratios = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
        cmd_analyze(an);
    });

    CheckConvexityArgs cc;
    CLI::App* check = app.add_subcommand("check-convexity", "Shape-violation report for a fit");
    check->add_option("--model", cc.model, "model JSON")->required();
    check->add_option("--out", cc.out, "report JSON path");
    check->callback([&]() { cmd_check_convexity(cc); });

    ExperimentArgs ex;
    std::string ex_config;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a bundled replication profile");
    auto* ex_profile =
        experiment
            ->add_option("--profile", ex.profile,
                         "exp1..exp6 | b1-parametric-random | b1-parametric-fixed | a4")
            ->required();
    auto* ex_n = experiment->add_option("--n", ex.n, "observations per replication");
    auto* ex_reps = experiment->add_option("--reps", ex.replications, "replications per cell");
    auto* ex_seed = experiment->add_option("--seed", ex.seed, "master seed");
    auto* ex_lambda = experiment->add_option("--lambda", ex.lambda, "noise scale override");
    auto* ex_threads = experiment->add_option("--threads", ex.threads, "parallelism cap (0 = all cores)");
    auto* ex_out = experiment->add_option("--out", ex.out, "output path prefix");
    experiment->add_option("--config", ex_config, "JSON config file (flags win)");
    experiment->callback([&]() {
        if (!ex_config.empty()) {
            const json cfg = load_config(ex_config);
            apply(cfg, "profile", ex_profile, ex.profile);
            apply(cfg, "n", ex_n, ex.n);
            apply(cfg, "reps", ex_reps, ex.replications);
            apply(cfg, "seed", ex_seed, ex.seed);
            apply(cfg, "lambda", ex_lambda, ex.lambda);
            apply(cfg, "threads", ex_threads, ex.threads);
            apply(cfg, "out", ex_out, ex.out);
        }
        cmd_experiment(ex);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const sddf::ConfigError& e) {
        std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
        return sddf::ConfigError::exit_code;
    } catch (const sddf::DataError& e) {
        std::cerr << "{\"error\":\"data\",\"message\":\"" << e.what() << "\"}\n";
        return sddf::DataError::exit_code;
    } catch (const sddf::SolverError& e) {
        std::cerr << "{\"error\":\"solver\",\"message\":\"" << e.what() << "\"}\n";
        return sddf::SolverError::exit_code;
    } catch (const sddf::MetricError& e) {
        std::cerr << "{\"error\":\"metric\",\"message\":\"" << e.what() << "\"}\n";
        return sddf::MetricError::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"internal\",\"message\":\"" << e.what() << "\"}\n";
        return 1;
    }
    return 0;
}
