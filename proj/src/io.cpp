#include "sddf/io.hpp"

#include "sddf/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace sddf {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) { return json(v); }

Vec vec_from_json(const json& j) { return j.get<Vec>(); }

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array()) throw DataError("model json: matrix field is not an array");
    const std::size_t rows = j.size();
    if (rows == 0) return Mat();
    const std::size_t cols = j[0].size();
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw DataError("model json: ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

json direction_to_json(const Direction& d) {
    json j;
    j["gx"] = d.gx;
    j["gy"] = d.gy;
    if (d.gc) j["gc"] = *d.gc;
    return j;
}

Direction direction_from_json(const json& j) {
    std::optional<double> gc;
    if (j.contains("gc")) gc = j["gc"].get<double>();
    return Direction::make(vec_from_json(j["gx"]), vec_from_json(j["gy"]), gc);
}

json diag_to_json(const SolveDiagnostics& d) {
    json j;
    j["status"] = to_string(d.status);
    j["iterations"] = d.iterations;
    j["objective"] = d.objective;
    j["objective_recomputed"] = d.objective_recomputed;
    j["tolerance"] = d.tolerance;
    j["kkt"] = {{"stationarity", d.kkt_report.stationarity},
                {"primal_eq", d.kkt_report.primal_eq},
                {"primal_ineq", d.kkt_report.primal_ineq},
                {"dual_nonneg", d.kkt_report.dual_nonneg},
                {"complementarity", d.kkt_report.complementarity},
                {"ok", d.kkt_report.ok}};
    return j;
}

SolveDiagnostics diag_from_json(const json& j) {
    SolveDiagnostics d;
    const std::string st = j.value("status", "optimal");
    d.status = st == "optimal" ? QpStatus::optimal
               : st == "infeasible" ? QpStatus::infeasible
                                    : QpStatus::max_iters;
    d.iterations = j.value("iterations", 0);
    d.objective = j.value("objective", 0.0);
    d.objective_recomputed = j.value("objective_recomputed", 0.0);
    d.tolerance = j.value("tolerance", 0.0);
    if (j.contains("kkt")) {
        const json& k = j["kkt"];
        d.kkt_report.stationarity = k.value("stationarity", 0.0);
        d.kkt_report.primal_eq = k.value("primal_eq", 0.0);
        d.kkt_report.primal_ineq = k.value("primal_ineq", 0.0);
        d.kkt_report.dual_nonneg = k.value("dual_nonneg", 0.0);
        d.kkt_report.complementarity = k.value("complementarity", 0.0);
        d.kkt_report.ok = k.value("ok", false);
    }
    return d;
}

json scale_to_json(const ScaleInfo& s) {
    json cols = json::array();
    for (const ColumnScale& c : s.outputs)
        cols.push_back({{"min", c.min}, {"max", c.max}, {"degenerate", c.degenerate}});
    json j;
    j["outputs"] = std::move(cols);
    if (s.cost)
        j["cost"] = {{"min", s.cost->min}, {"max", s.cost->max}, {"degenerate", s.cost->degenerate}};
    return j;
}

ScaleInfo scale_from_json(const json& j) {
    ScaleInfo s;
    for (const json& c : j["outputs"])
        s.outputs.push_back({c["min"].get<double>(), c["max"].get<double>(), c["degenerate"].get<bool>()});
    if (j.contains("cost")) {
        const json& c = j["cost"];
        s.cost = ColumnScale{c["min"].get<double>(), c["max"].get<double>(), c["degenerate"].get<bool>()};
    }
    return s;
}

std::string mode_name(FrontierMode m) {
    switch (m) {
        case FrontierMode::production: return "production";
        case FrontierMode::cost: return "cost";
        case FrontierMode::isoquant: return "isoquant";
    }
    return "isoquant";
}

FrontierMode mode_from_name(const std::string& s) {
    if (s == "production") return FrontierMode::production;
    if (s == "cost") return FrontierMode::cost;
    if (s == "isoquant") return FrontierMode::isoquant;
    throw DataError("model json: unknown frontier mode " + s);
}

} // namespace

std::string model_to_json(const ModelEnvelope& env) {
    json j;
    j["kind"] = env.kind;
    if (env.frontier) {
        const FrontierModel& m = *env.frontier;
        json f;
        f["mode"] = mode_name(m.mode);
        json planes = json::array();
        for (const Hyperplane& h : m.hyperplanes)
            planes.push_back({{"alpha", h.alpha}, {"beta", h.beta}, {"gamma", h.gamma}});
        f["hyperplanes"] = std::move(planes);
        if (!m.multi_direction()) {
            f["direction"] = direction_to_json(m.direction);
        } else {
            json dirs = json::array();
            for (const Direction& d : m.group_directions) dirs.push_back(direction_to_json(d));
            f["group_directions"] = std::move(dirs);
            f["group_of"] = m.group_of;
        }
        f["residuals"] = m.residuals;
        f["fitted_outputs"] = mat_to_json(m.fitted_outputs);
        if (!m.fitted_cost.empty()) f["fitted_cost"] = m.fitted_cost;
        if (m.slope_bound) f["slope_bound"] = *m.slope_bound;
        f["diagnostics"] = diag_to_json(m.diagnostics);
        j["frontier"] = std::move(f);
    }
    if (env.linear) {
        const LinearDdfModel& m = *env.linear;
        json f;
        f["alpha"] = m.alpha;
        f["beta"] = m.beta;
        f["gamma"] = m.gamma;
        f["direction"] = direction_to_json(m.direction);
        f["residuals"] = m.residuals;
        f["mode"] = m.mode == DataMode::cost ? "cost" : "production";
        f["diagnostics"] = diag_to_json(m.diagnostics);
        j["linear"] = std::move(f);
    }
    if (env.quadratic) {
        j["quadratic"] = {{"intercept", env.quadratic->intercept},
                          {"linear", env.quadratic->linear},
                          {"squared", env.quadratic->squared}};
    }
    if (env.kernel) {
        j["kernel"] = {{"bandwidths", env.kernel->bandwidths},
                       {"train_outputs", mat_to_json(env.kernel->train_outputs)},
                       {"train_cost", env.kernel->train_cost},
                       {"loo_cv_error", env.kernel->loo_cv_error}};
    }
    if (env.normalization) j["normalization"] = scale_to_json(*env.normalization);
    if (env.median_raw) j["median_raw"] = *env.median_raw;
    return j.dump(2);
}

ModelEnvelope model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model json: parse failure: ") + e.what());
    }
    ModelEnvelope env;
    env.kind = j.value("kind", "");
    if (j.contains("frontier")) {
        const json& f = j["frontier"];
        FrontierModel m;
        m.mode = mode_from_name(f.value("mode", "isoquant"));
        for (const json& p : f["hyperplanes"]) {
            Hyperplane h;
            h.alpha = p["alpha"].get<double>();
            h.beta = vec_from_json(p["beta"]);
            h.gamma = vec_from_json(p["gamma"]);
            m.hyperplanes.push_back(std::move(h));
        }
        if (f.contains("direction")) m.direction = direction_from_json(f["direction"]);
        if (f.contains("group_directions")) {
            for (const json& d : f["group_directions"])
                m.group_directions.push_back(direction_from_json(d));
            m.group_of = f["group_of"].get<std::vector<std::size_t>>();
        }
        m.residuals = vec_from_json(f["residuals"]);
        if (f.contains("fitted_outputs")) m.fitted_outputs = mat_from_json(f["fitted_outputs"]);
        if (f.contains("fitted_cost")) m.fitted_cost = vec_from_json(f["fitted_cost"]);
        if (f.contains("slope_bound")) m.slope_bound = f["slope_bound"].get<double>();
        if (f.contains("diagnostics")) m.diagnostics = diag_from_json(f["diagnostics"]);
        m.rebuild_envelope();
        env.frontier = std::move(m);
    }
    if (j.contains("linear")) {
        const json& f = j["linear"];
        LinearDdfModel m;
        m.alpha = f["alpha"].get<double>();
        m.beta = vec_from_json(f["beta"]);
        m.gamma = vec_from_json(f["gamma"]);
        m.direction = direction_from_json(f["direction"]);
        m.residuals = vec_from_json(f["residuals"]);
        m.mode = f.value("mode", "cost") == "cost" ? DataMode::cost : DataMode::production;
        if (f.contains("diagnostics")) m.diagnostics = diag_from_json(f["diagnostics"]);
        env.linear = std::move(m);
    }
    if (j.contains("quadratic")) {
        QuadraticModel m;
        m.intercept = j["quadratic"]["intercept"].get<double>();
        m.linear = vec_from_json(j["quadratic"]["linear"]);
        m.squared = vec_from_json(j["quadratic"]["squared"]);
        env.quadratic = std::move(m);
    }
    if (j.contains("kernel")) {
        KernelModel m;
        m.bandwidths = vec_from_json(j["kernel"]["bandwidths"]);
        m.train_outputs = mat_from_json(j["kernel"]["train_outputs"]);
        m.train_cost = vec_from_json(j["kernel"]["train_cost"]);
        m.loo_cv_error = j["kernel"].value("loo_cv_error", 0.0);
        env.kernel = std::move(m);
    }
    if (j.contains("normalization")) env.normalization = scale_from_json(j["normalization"]);
    if (j.contains("median_raw")) env.median_raw = vec_from_json(j["median_raw"]);
    return env;
}

void save_model(const std::string& path, const ModelEnvelope& env) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file " + path);
    out << model_to_json(env) << '\n';
    if (!out) throw DataError("write failed for " + path);
}

ModelEnvelope load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

std::string mse_report_to_json(const MseReport& rep) {
    json j;
    j["value"] = rep.value;
    j["metric"] = rep.metric;
    j["squared_distances"] = rep.squared_distances;
    j["failed_observations"] = rep.failed;
    j["beyond_center"] = rep.beyond_center;
    j["direction"] = rep.direction_used;
    return j.dump(2);
}

std::string mse_report_csv_header() { return "tag,metric,value,n_used,n_failed,beyond_center"; }

std::string mse_report_csv_row(const std::string& tag, const MseReport& rep) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%zu,%zu,%zu", tag.c_str(), rep.metric.c_str(),
                  rep.value, rep.squared_distances.size(), rep.failed.size(), rep.beyond_center);
    return buf;
}

std::string violation_report_to_json(const ViolationReport& rep) {
    json j;
    j["pair_count"] = rep.pair_count;
    j["within_pair_count"] = rep.within_pair_count;
    j["cross_pair_count"] = rep.cross_pair_count;
    j["monotonicity_violations_within"] = rep.monotonicity_violations_within;
    j["monotonicity_violations_cross"] = rep.monotonicity_violations_cross;
    j["triplet_count"] = rep.triplet_count;
    j["same_triplet_count"] = rep.same_triplet_count;
    j["mixed_triplet_count"] = rep.mixed_triplet_count;
    j["concavity_violations_same"] = rep.concavity_violations_same;
    j["concavity_violations_mixed"] = rep.concavity_violations_mixed;
    j["rates"] = {{"cross_monotonicity", rep.cross_monotonicity_rate()},
                  {"mixed_concavity", rep.mixed_concavity_rate()},
                  {"same_concavity", rep.same_concavity_rate()}};
    return j.dump(2);
}

std::string a4_summary_to_csv(const A4Summary& sum) {
    std::string out = "run,monotonicity_rate_cross,monotonicity_rate_within,concavity_rate_mixed,"
                      "concavity_rate_same,single_violations\n";
    char buf[200];
    std::snprintf(buf, sizeof buf, "single_low,0,0,0,0,%zu\n",
                  sum.single_low_monotonicity + sum.single_low_concavity);
    out += buf;
    std::snprintf(buf, sizeof buf, "single_high,0,0,0,0,%zu\n",
                  sum.single_high_monotonicity + sum.single_high_concavity);
    out += buf;
    std::snprintf(buf, sizeof buf, "two_direction,%.4g,%.4g,%.4g,%.4g,\n",
                  sum.cross_monotonicity_rate, sum.within_monotonicity_rate,
                  sum.mixed_concavity_rate, sum.same_concavity_rate);
    out += buf;
    return out;
}

void write_experiment_csv(const std::string& path, const ExperimentReport& report) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "row";
    for (const std::string& c : report.col_labels) out << ',' << c;
    out << '\n';
    char buf[48];
    for (std::size_t r = 0; r < report.rows(); ++r) {
        out << (r < report.row_labels.size() ? report.row_labels[r] : std::to_string(r));
        for (std::size_t c = 0; c < report.values.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.4g", report.values(r, c) * report.display_scale);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed for " + path);
}

void write_experiment_metadata(const std::string& path, const ExperimentReport& report,
                               const std::map<std::string, std::string>& extra) {
    json j;
    j["title"] = report.title;
    j["replications"] = report.replications;
    j["master_seed"] = report.master_seed;
    j["display_scale"] = report.display_scale;
    j["row_labels"] = report.row_labels;
    j["col_labels"] = report.col_labels;
    j["values_raw"] = mat_to_json(report.values);
    j["failure_counts"] = mat_to_json(report.failure_counts);
    for (const auto& [k, v] : extra) j[k] = v;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for " + path);
}

} // namespace sddf
