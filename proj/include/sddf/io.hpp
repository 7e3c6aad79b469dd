#pragma once
// JSON serialization for models and reports, CSV emission for experiment
// tables. Numeric JSON fields round-trip exactly.

#include "sddf/data.hpp"
#include "sddf/estimators.hpp"
#include "sddf/evaluation.hpp"
#include "sddf/multidir.hpp"
#include "sddf/simulation.hpp"

#include <map>
#include <optional>
#include <string>

namespace sddf {

// A fitted model plus the context needed to evaluate it later: which space
// it was fit in (unit-cube normalization, when used) and the raw median
// vector when the direction came from the median rule.
struct ModelEnvelope {
    std::string kind; // "cnls_d" | "parametric_ddf" | "quadratic" | "local_linear"
    std::optional<FrontierModel> frontier;
    std::optional<LinearDdfModel> linear;
    std::optional<QuadraticModel> quadratic;
    std::optional<KernelModel> kernel;
    std::optional<ScaleInfo> normalization;
    std::optional<Vec> median_raw;
};

std::string model_to_json(const ModelEnvelope& env);
ModelEnvelope model_from_json(const std::string& text);
void save_model(const std::string& path, const ModelEnvelope& env);
ModelEnvelope load_model(const std::string& path);

std::string mse_report_to_json(const MseReport& rep);
// One-row CSV append format for experiment tables.
std::string mse_report_csv_header();
std::string mse_report_csv_row(const std::string& tag, const MseReport& rep);

std::string violation_report_to_json(const ViolationReport& rep);
std::string a4_summary_to_csv(const A4Summary& sum);

// Experiment table: rows x cols CSV with 4-significant-digit cells scaled by
// report.display_scale, plus a JSON metadata sidecar (seed, replications,
// scale, failures).
void write_experiment_csv(const std::string& path, const ExperimentReport& report);
void write_experiment_metadata(const std::string& path, const ExperimentReport& report,
                               const std::map<std::string, std::string>& extra = {});

} // namespace sddf
