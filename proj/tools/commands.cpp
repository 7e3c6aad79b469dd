#include "commands.hpp"

#include "sddf/analysis.hpp"
#include "sddf/data.hpp"
#include "sddf/errors.hpp"
#include "sddf/estimators.hpp"
#include "sddf/evaluation.hpp"
#include "sddf/fixtures.hpp"
#include "sddf/io.hpp"
#include "sddf/multidir.hpp"
#include "sddf/simulation.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sddf::cli {

using nlohmann::json;

namespace {

const double kPi = std::acos(-1.0);

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
    if (!out.flush()) throw DataError("write failed for " + path);
}

AngleSpec parse_angle_dist(const std::string& s) {
    if (s == "uniform") return AngleSpec::uniform();
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("bad angle distribution: " + s);
    const std::string kind = s.substr(0, colon);
    const std::string params = s.substr(colon + 1);
    const auto comma = params.find(',');
    if (comma == std::string::npos) throw ConfigError("angle distribution needs two parameters: " + s);
    double a = 0.0, b = 0.0;
    try {
        a = std::stod(params.substr(0, comma));
        b = std::stod(params.substr(comma + 1));
    } catch (...) {
        throw ConfigError("bad angle distribution parameters: " + s);
    }
    if (kind == "normal") return AngleSpec::normal(a, b);
    if (kind == "gamma") return AngleSpec::gamma(a, b);
    throw ConfigError("unknown angle distribution kind: " + kind);
}

Vec parse_vector(const std::string& csv) {
    Vec out;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (...) {
            throw ConfigError("bad numeric list: " + csv);
        }
    }
    if (out.empty()) throw ConfigError("empty numeric list");
    return out;
}

// Resolves a direction source for a dataset; median implies unit-cube data.
struct ResolvedDirection {
    Direction direction;
    std::optional<Vec> median_raw;
};

ResolvedDirection resolve_direction(const std::string& source, const Dataset& data,
                                    const NormalizedDataset* norm) {
    ResolvedDirection out;
    if (source == "median") {
        if (!norm) throw ConfigError("median direction requires cost-mode data (use --normalize)");
        const MedianDirection md = median_direction(*norm);
        out.direction = md.direction;
        out.median_raw = md.raw;
        return out;
    }
    if (source.rfind("angle:", 0) == 0) {
        const double th = std::stod(source.substr(6));
        out.direction = data.mode() == DataMode::outputs_only ? isoquant_direction_from_angle(th)
                                                              : direction_from_angle(th);
        return out;
    }
    if (source.rfind("vector:", 0) == 0) {
        Vec v = parse_vector(source.substr(7));
        if (data.mode() == DataMode::outputs_only) {
            out.direction = Direction::outputs_only(std::move(v));
        } else if (data.mode() == DataMode::cost) {
            if (v.size() != data.num_outputs() + 1)
                throw ConfigError("direction vector must have Q+1 components (outputs then cost)");
            const double gc = v.back();
            v.pop_back();
            out.direction = Direction::cost_mode(std::move(v), gc);
        } else {
            throw ConfigError("explicit production-mode directions are not wired to the CLI");
        }
        return out;
    }
    throw ConfigError("unknown direction source: " + source +
                      " (expected median, angle:<t>, or vector:<a,b,...>)");
}

Dataset outputs_as_dataset(const Mat& outputs) {
    Mat copy = outputs;
    return Dataset::make_outputs(std::move(copy));
}

} // namespace

void cmd_simulate(const SimulateArgs& args) {
    DgpSpec spec;
    spec.n = args.n;
    spec.lambda = args.lambda;
    spec.seed = args.seed;
    if (args.noise_angle >= 0.0) {
        spec.noise_kind = NoiseModel::Kind::fixed_direction;
        spec.noise_angle = args.noise_angle;
    }
    spec.angle = parse_angle_dist(args.angle_dist);

    json meta;
    meta["seed"] = args.seed;
    meta["n"] = args.n;
    meta["lambda"] = args.lambda;
    meta["noise"] = args.noise_angle >= 0.0 ? "fixed" : "random";
    if (args.noise_angle >= 0.0) meta["noise_angle"] = args.noise_angle;

    if (args.kind == "linear") {
        spec.kind = DgpKind::linear_2d;
        const LinearSample s = gen_linear(spec);
        write_dataset_csv(args.out + "_train.csv", s.train);
        write_dataset_csv(args.out + "_test.csv", s.test_true);
        write_dataset_csv(args.out + "_test_noisy.csv", s.test_noisy);
        meta["kind"] = "linear";
        meta["epsilon0_train"] = s.epsilon0_train;
        meta["files"] = {args.out + "_train.csv", args.out + "_test.csv",
                         args.out + "_test_noisy.csv"};
    } else if (args.kind == "isoquant2d" || args.kind == "isoquant3d") {
        spec.kind = args.kind == "isoquant2d" ? DgpKind::isoquant_2d : DgpKind::isoquant_3d;
        const IsoquantSample s =
            spec.kind == DgpKind::isoquant_2d ? gen_isoquant_2d(spec) : gen_isoquant_3d(spec);
        write_dataset_csv(args.out + "_train.csv", outputs_as_dataset(s.train));
        write_dataset_csv(args.out + "_test.csv", outputs_as_dataset(s.test));
        meta["kind"] = args.kind;
        meta["angle_dist"] = args.angle_dist;
        meta["files"] = {args.out + "_train.csv", args.out + "_test.csv"};
    } else if (args.kind == "hospital") {
        HospitalFixtureSpec hs;
        hs.n = args.n;
        hs.seed = args.seed;
        const Dataset d = gen_hospital_fixture(hs);
        write_dataset_csv(args.out + "_train.csv", d);
        HospitalFixtureSpec ts = hs;
        ts.seed = args.seed + 1;
        write_dataset_csv(args.out + "_test.csv", gen_hospital_fixture(ts));
        meta["kind"] = "hospital";
        meta["files"] = {args.out + "_train.csv", args.out + "_test.csv"};
    } else {
        throw ConfigError("unknown DGP kind: " + args.kind);
    }
    write_text(args.out + "_meta.json", meta.dump(2) + "\n");
    std::cout << meta.dump(2) << std::endl;
}

void cmd_estimate(const EstimateArgs& args) {
    const Dataset raw = read_dataset_csv(args.data);
    ModelEnvelope env;

    std::optional<NormalizedDataset> norm;
    Dataset fit_data = raw;
    const bool want_norm = args.normalize || args.direction == "median";
    if (want_norm) {
        if (raw.mode() != DataMode::cost)
            throw ConfigError("--normalize requires cost-mode data (y columns plus c)");
        norm = normalize(raw, /*strict=*/true);
        Mat ny = norm->outputs;
        fit_data = Dataset::make_cost(std::move(ny), *norm->cost);
        env.normalization = norm->scale_info;
    }

    FitOptions opt;
    opt.tol = args.tol;
    opt.max_iters = args.max_iters;
    const std::optional<double> bound =
        args.slope_bound > 0.0 ? std::optional<double>(args.slope_bound) : std::nullopt;

    json summary;
    if (args.estimator == "cnls") {
        const ResolvedDirection rd =
            resolve_direction(args.direction, fit_data, norm ? &*norm : nullptr);
        env.median_raw = rd.median_raw;
        if (fit_data.mode() == DataMode::outputs_only) {
            env.frontier = fit_cnls_d_isoquant(fit_data.outputs, rd.direction, opt);
        } else {
            env.frontier = fit_cnls_d(fit_data, rd.direction, bound, opt);
        }
        env.kind = "cnls_d";
        summary["objective"] = env.frontier->diagnostics.objective;
        summary["kkt_ok"] = env.frontier->diagnostics.kkt_report.ok;
        summary["iterations"] = env.frontier->diagnostics.iterations;
    } else if (args.estimator == "parametric") {
        const ResolvedDirection rd =
            resolve_direction(args.direction, fit_data, norm ? &*norm : nullptr);
        env.median_raw = rd.median_raw;
        env.linear = fit_parametric_ddf(fit_data, rd.direction, opt);
        env.kind = "parametric_ddf";
        summary["objective"] = env.linear->diagnostics.objective;
        summary["kkt_ok"] = env.linear->diagnostics.kkt_report.ok;
    } else if (args.estimator == "quadratic") {
        env.quadratic = fit_quadratic(fit_data);
        env.kind = "quadratic";
        summary["coefficients"] = 2 * raw.num_outputs() + 1;
    } else if (args.estimator == "local-linear") {
        env.kernel = fit_local_linear(fit_data);
        env.kind = "local_linear";
        summary["loo_cv_error"] = env.kernel->loo_cv_error;
    } else {
        throw ConfigError("unknown estimator: " + args.estimator);
    }
    save_model(args.out, env);
    summary["kind"] = env.kind;
    summary["model"] = args.out;
    if (env.median_raw) summary["median_raw"] = *env.median_raw;
    std::cout << summary.dump(2) << std::endl;
}

namespace {

MseReport evaluate_model(const ModelEnvelope& env, const Dataset& test, const std::string& metric,
                         double mse_angle, const std::string& direction_source) {
    if (metric == "radial") {
        if (env.kind == "cnls_d" && env.frontier) {
            if (env.frontier->mode == FrontierMode::isoquant)
                return radial_mse_isoquant(*env.frontier, test.outputs);
            if (!env.normalization)
                throw ConfigError("radial metric requires a model fit with --normalize");
            return radial_mse(*env.frontier, test, *env.normalization);
        }
        if (env.quadratic) {
            if (!env.normalization)
                throw ConfigError("radial metric requires a model fit with --normalize");
            return radial_mse(*env.quadratic, test, *env.normalization);
        }
        if (env.kernel) {
            if (!env.normalization)
                throw ConfigError("radial metric requires a model fit with --normalize");
            return radial_mse(*env.kernel, test, *env.normalization);
        }
        throw ConfigError("radial metric is not available for this model kind");
    }
    if (metric == "directional") {
        Direction dir;
        if (!direction_source.empty()) {
            dir = resolve_direction(direction_source, test, nullptr).direction;
        } else if (mse_angle >= 0.0) {
            dir = test.mode() == DataMode::outputs_only ? isoquant_direction_from_angle(mse_angle)
                                                        : direction_from_angle(mse_angle);
        } else {
            throw ConfigError("directional metric needs --mse-angle or --direction");
        }
        if (env.linear) return directional_mse(*env.linear, test, dir);
        if (env.frontier) {
            if (env.frontier->mode == FrontierMode::isoquant)
                return directional_mse_isoquant(*env.frontier, test.outputs, dir);
            return directional_mse(*env.frontier, test, dir);
        }
        throw ConfigError("directional metric is not available for this model kind");
    }
    throw ConfigError("unknown metric: " + metric);
}

} // namespace

void cmd_evaluate(const EvaluateArgs& args) {
    const ModelEnvelope env = load_model(args.model);
    Dataset test = read_dataset_csv(args.data);
    // Models fit in unit-cube space consume unit-cube observations; the
    // envelope's scale maps the raw test data there for directional metrics.
    if (env.normalization && args.metric == "directional") {
        const NormalizedDataset nt = normalize_with(test, *env.normalization);
        Mat ny = nt.outputs;
        test = Dataset::make_cost(std::move(ny), *nt.cost);
    }
    const MseReport rep = evaluate_model(env, test, args.metric, args.mse_angle, args.direction);
    const std::string text = mse_report_to_json(rep);
    if (!args.out.empty()) write_text(args.out, text + "\n");
    if (!args.append_csv.empty()) {
        const bool fresh = !std::ifstream(args.append_csv).good();
        std::ofstream out(args.append_csv, std::ios::app);
        if (!out) throw DataError("cannot append to " + args.append_csv);
        if (fresh) out << mse_report_csv_header() << '\n';
        out << mse_report_csv_row(args.tag, rep) << '\n';
    }
    std::cout << text << std::endl;
}

void cmd_kfold(const KfoldArgs& args) {
    const Dataset data = read_dataset_csv(args.data);
    if (data.mode() != DataMode::cost) throw ConfigError("kfold expects cost-mode data");
    KfoldSpec spec;
    spec.k = args.k;
    spec.seed = args.seed;
    const std::optional<double> bound =
        args.slope_bound > 0.0 ? std::optional<double>(args.slope_bound) : std::nullopt;

    auto fold_metric = [&](const Dataset& train, const Dataset& test) -> double {
        const NormalizedDataset norm = normalize(train, /*strict=*/true);
        Mat ny = norm.outputs;
        const Dataset train_unit = Dataset::make_cost(std::move(ny), *norm.cost);
        ModelEnvelope env;
        env.normalization = norm.scale_info;
        if (args.estimator == "cnls") {
            const ResolvedDirection rd = resolve_direction(args.direction, train_unit, &norm);
            env.frontier = fit_cnls_d(train_unit, rd.direction, bound);
            env.kind = "cnls_d";
        } else if (args.estimator == "parametric") {
            const ResolvedDirection rd = resolve_direction(args.direction, train_unit, &norm);
            env.linear = fit_parametric_ddf(train_unit, rd.direction);
            env.kind = "parametric_ddf";
        } else if (args.estimator == "quadratic") {
            env.quadratic = fit_quadratic(train_unit);
            env.kind = "quadratic";
        } else if (args.estimator == "local-linear") {
            env.kernel = fit_local_linear(train_unit);
            env.kind = "local_linear";
        } else {
            throw ConfigError("unknown estimator: " + args.estimator);
        }
        Dataset test_eval = test;
        if (args.metric == "directional") {
            const NormalizedDataset nt = normalize_with(test, norm.scale_info);
            Mat ty = nt.outputs;
            test_eval = Dataset::make_cost(std::move(ty), *nt.cost);
        }
        return evaluate_model(env, test_eval, args.metric, args.mse_angle, "").value;
    };

    const KfoldResult res = kfold_mse(data, spec, fold_metric);
    json j;
    j["k"] = args.k;
    j["seed"] = args.seed;
    j["estimator"] = args.estimator;
    j["metric"] = args.metric;
    j["fold_values"] = res.fold_values;
    j["average"] = res.average;
    if (!args.out.empty()) {
        std::string csv = "fold,value\n";
        char buf[64];
        for (std::size_t f = 0; f < res.fold_values.size(); ++f) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", f, res.fold_values[f]);
            csv += buf;
        }
        std::snprintf(buf, sizeof buf, "average,%.17g\n", res.average);
        csv += buf;
        write_text(args.out, csv);
    }
    std::cout << j.dump(2) << std::endl;
}

void cmd_analyze(const AnalyzeArgs& args) {
    const ModelEnvelope env = load_model(args.model);
    const Dataset data = read_dataset_csv(args.data);
    const std::size_t q = data.num_outputs();
    if (args.scan.size() != 2) throw ConfigError("--scan expects exactly two 1-based output indices");
    const std::size_t s0 = args.scan[0] - 1, s1 = args.scan[1] - 1;
    if (s0 >= q || s1 >= q || s0 == s1) throw ConfigError("bad --scan indices");

    CostSurface surface;
    if (env.frontier) surface = make_cost_surface(*env.frontier, env.normalization);
    else if (env.quadratic) surface = make_cost_surface(*env.quadratic, q, env.normalization);
    else if (env.kernel) surface = make_cost_surface(*env.kernel, env.normalization);
    else throw ConfigError("analysis needs a frontier, quadratic, or kernel model");

    // Held outputs sit at their training medians.
    std::vector<std::pair<std::size_t, double>> held;
    for (std::size_t k = 0; k < q; ++k) {
        if (k == s0 || k == s1) continue;
        Vec col(data.n());
        for (std::size_t i = 0; i < data.n(); ++i) col[i] = data.outputs(i, k);
        held.push_back({k, median(col)});
    }

    char buf[128];
    std::string mpss_csv = "ratio,scale,aggregate_output,cost,boundary\n";
    for (double r : args.ratios) {
        RaySpec ray;
        ray.scanned = {s0, s1};
        ray.ratio = {1.0, r};
        ray.held = held;
        const MpssResult res = mpss(surface, ray, data.outputs);
        std::snprintf(buf, sizeof buf, "%.4g,%.6g,%.6g,%.6g,%d\n", r, res.scale,
                      res.aggregate_output, res.cost_level, res.boundary ? 1 : 0);
        mpss_csv += buf;
    }
    write_text(args.out + "_mpss.csv", mpss_csv);

    std::string mc_csv = "p_" + std::to_string(s0 + 1) + ",p_" + std::to_string(s1 + 1) +
                         ",mc_y" + std::to_string(s0 + 1) + ",mc_y" + std::to_string(s1 + 1) + "\n";
    for (double p0 : args.percentiles)
        for (double p1 : args.percentiles) {
            Vec point(q, 0.0);
            for (const auto& [k, v] : held) point[k] = v;
            Vec col0(data.n()), col1(data.n());
            for (std::size_t i = 0; i < data.n(); ++i) {
                col0[i] = data.outputs(i, s0);
                col1[i] = data.outputs(i, s1);
            }
            point[s0] = quantile(col0, p0 / 100.0);
            point[s1] = quantile(col1, p1 / 100.0);
            const MarginalCostResult m0 = marginal_cost(surface, point, s0);
            const MarginalCostResult m1 = marginal_cost(surface, point, s1);
            std::snprintf(buf, sizeof buf, "%.4g,%.4g,%.6g,%.6g\n", p0, p1,
                          m0.forward_difference, m1.forward_difference);
            mc_csv += buf;
        }
    write_text(args.out + "_mc.csv", mc_csv);
    json j;
    j["mpss"] = args.out + "_mpss.csv";
    j["marginal_costs"] = args.out + "_mc.csv";
    std::cout << j.dump(2) << std::endl;
}

void cmd_check_convexity(const CheckConvexityArgs& args) {
    const ModelEnvelope env = load_model(args.model);
    if (!env.frontier) throw ConfigError("convexity checks need a cnls_d model");
    const FrontierModel& m = *env.frontier;
    if (m.fitted_outputs.cols() != 2)
        throw ConfigError("violation detection is defined for 2-output isoquants");
    const ViolationReport rep = detect_violations(m.fitted_outputs, m.group_of);
    std::string text = violation_report_to_json(rep);
    if (m.multi_direction()) {
        GroupAssignment ga;
        ga.group_of = m.group_of;
        ga.directions = m.group_directions;
        const ConditionReport cond = check_condition(m.residuals, ga);
        nlohmann::json j = nlohmann::json::parse(text);
        j["concavity_condition_holds"] = cond.all_hold;
        text = j.dump(2);
    }
    if (!args.out.empty()) write_text(args.out, text + "\n");
    std::cout << text << std::endl;
}

} // namespace sddf::cli
