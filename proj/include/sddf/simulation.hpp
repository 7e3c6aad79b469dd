#pragma once
// Data generating processes and the seeded Monte Carlo grid runner.
//
// Replication r of DGP cell c under master seed m draws from an Rng seeded
// with derive_seed(m, c, r), so grids are bit-reproducible, replications are
// independent of the replication count, and every estimation direction in a
// row sees the same simulated data.

#include "sddf/data.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sddf {

enum class DgpKind { linear_2d, isoquant_2d, isoquant_3d };

struct AngleSpec {
    enum class Dist { uniform, truncated_normal, truncated_gamma };
    Dist dist = Dist::uniform;
    // normal: (a, b) = (mean, sd); gamma: (a, b) = (shape, scale).
    double a = 0.0, b = 0.0;

    static AngleSpec uniform();
    static AngleSpec normal(double mean, double sd);
    static AngleSpec gamma(double shape, double scale);
};

struct DgpSpec {
    DgpKind kind = DgpKind::linear_2d;
    std::size_t n = 100;
    double lambda = 0.1;
    NoiseModel::Kind noise_kind = NoiseModel::Kind::random_direction;
    double noise_angle = 0.0; // fixed-direction DGPs
    AngleSpec angle;          // isoquant_2d observation angles
    std::uint64_t seed = 1;

    void validate() const;
};

struct LinearSample {
    Dataset train;        // noisy observations (y, c)
    Dataset test_true;    // noiseless points on the true function
    Dataset test_noisy;   // an independent noisy draw
    double epsilon0_train = 0.0; // Eq-style base scale: mean of the two sample SDs
    double epsilon0_test = 0.0;
};

// Linear cost DGP: y ~ U[0,1], c = y, noise = length * unit direction with
// length ~ N(0, lambda * eps0).
LinearSample gen_linear(const DgpSpec& spec);

struct IsoquantSample {
    Mat train; // noisy output bundles
    Mat test;  // noiseless points on the true isoquant, same angle law
    Vec train_angles;
};

// Quarter-circle isoquant: y = (cos th, sin th) plus planar noise with
// length ~ N(0, lambda) and angle U[-pi/2, pi/2] or fixed.
IsoquantSample gen_isoquant_2d(const DgpSpec& spec);

// Unit-sphere octant: y = l/||l||, l ~ U[0,1]^3; noise direction from
// U[-1,1]^3 normalized, length ~ N(0, lambda).
IsoquantSample gen_isoquant_3d(const DgpSpec& spec);

// The 19-direction grid: {0, 0.5, 1}^3 minus the origin, normalized,
// deduplicated, in first-occurrence order of the lexicographic enumeration.
std::vector<Direction> direction_grid_3d();

// --- grid runner -------------------------------------------------------------

struct GridSpec {
    std::size_t dgp_cells = 1;
    std::size_t sub_rows = 1; // rows per DGP cell (e.g. MSE directions)
    std::size_t cols = 1;     // estimation directions
    std::size_t replications = 100;
    std::uint64_t master_seed = 1;
    int threads = 0;                 // 0: hardware concurrency
    double max_cell_failure_share = 0.05;
};

struct ExperimentReport {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Mat values;          // (dgp_cells*sub_rows) x cols, replication means
    Mat failure_counts;  // same shape; failed replications per cell
    std::size_t replications = 0;
    std::uint64_t master_seed = 0;
    double display_scale = 1.0; // applied in the CSV table; recorded in metadata
    std::string title;

    std::size_t rows() const { return values.rows(); }
};

// One replication of one DGP cell: returns a (sub_rows x cols) block of
// metric values. Thrown exceptions mark the replication failed for the
// whole cell block.
using CellFn = std::function<Mat(std::size_t dgp_index, std::uint64_t rep_seed)>;

// Runs all cells; cell means exclude failed replications; throws MetricError
// when any cell exceeds the failure share.
ExperimentReport run_grid(const GridSpec& spec, const CellFn& cell);

} // namespace sddf
