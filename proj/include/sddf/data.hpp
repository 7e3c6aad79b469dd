#pragma once
// Datasets, directions, and unit-cube normalization shared by all
// estimators and metrics.

#include "sddf/core/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sddf {

enum class DataMode { production, cost, outputs_only };

// Observations are rows. Production mode carries inputs and outputs; cost
// mode carries outputs and a cost vector (cost acts as the single input in
// the distance function); outputs-only datasets are isoquant samples at a
// common cost level. Values must be finite; negative values are accepted
// because noisy observations can stray below zero.
struct Dataset {
    Mat inputs;                       // n x d (d may be 0)
    Mat outputs;                      // n x Q
    std::optional<Vec> cost;          // length n in cost mode
    std::vector<std::string> input_labels;
    std::vector<std::string> output_labels;
    std::string cost_label = "c";

    std::size_t n() const { return outputs.rows(); }
    std::size_t num_inputs() const { return inputs.cols(); }
    std::size_t num_outputs() const { return outputs.cols(); }

    DataMode mode() const;
    void validate() const; // throws DataError

    static Dataset make_cost(Mat outputs, Vec cost);
    static Dataset make_outputs(Mat outputs);
    static Dataset make_production(Mat inputs, Mat outputs);
};

// Nonnegative direction with at least one positive component, stored with
// unit Euclidean norm over all components.
struct Direction {
    Vec gx;                    // input side (production mode)
    Vec gy;                    // output side
    std::optional<double> gc;  // cost side (cost mode)

    static Direction make(Vec gx, Vec gy, std::optional<double> gc);
    static Direction outputs_only(Vec gy);
    static Direction cost_mode(Vec gy, double gc);

    Vec concat() const;                 // [gx, gy, gc]
    std::size_t dim() const;
    void validate() const;              // throws DataError
};

// (g^y, g^c) = (cos theta, sin theta) for theta in [0, pi/2].
Direction direction_from_angle(double theta);

// Output-space direction (cos theta, sin theta) for the isoquant experiments.
Direction isoquant_direction_from_angle(double theta);

struct ColumnScale {
    double min = 0.0;
    double max = 0.0;
    bool degenerate = false; // max == min
};

struct ScaleInfo {
    std::vector<ColumnScale> outputs;
    std::optional<ColumnScale> cost;
};

struct NormalizedDataset {
    Mat outputs;
    std::optional<Vec> cost;
    ScaleInfo scale_info;
    bool any_degenerate = false;
};

// Min-max normalization of outputs and cost to [0,1] per column. Degenerate
// (constant) columns map to 0 and are flagged; in strict mode they raise
// DataError. Requires n >= 2.
NormalizedDataset normalize(const Dataset& data, bool strict = false);

// Normalizes with a previously computed scale (test sets reuse the training
// scale); values outside [0,1] are allowed.
NormalizedDataset normalize_with(const Dataset& data, const ScaleInfo& scale);

// Maps a normalized dataset back to original units.
Dataset denormalize(const NormalizedDataset& data);

struct MedianDirection {
    Direction direction; // unit-normalized
    Vec raw;             // [median(y_1)...median(y_Q), 1 - median(c)] as written
};

// Data-driven direction: per-column medians of the normalized outputs and
// one minus the median normalized cost, then unit-normalized.
MedianDirection median_direction(const NormalizedDataset& norm);

// Order statistics with linear interpolation; median(q=0.5) averages the two
// central order statistics for even n.
double quantile(Vec values, double q);
double median(const Vec& values);

// How observations are perturbed by the linear-DGP noise process.
struct NoiseModel {
    enum class Kind { random_direction, fixed_direction };
    Kind kind = Kind::random_direction;
    double lambda = 0.0;  // noise scale, >= 0
    Vec fixed_direction;  // unit vector when kind == fixed_direction

    static NoiseModel random(double lambda);
    static NoiseModel fixed_angle(double lambda, double theta);
    static NoiseModel fixed_vector(double lambda, Vec v);
    void validate() const;
};

// CSV ingestion/emission. Header row with columns named x1..xd, y1..yQ, c
// (any column order); comma separator, decimal point.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

} // namespace sddf
