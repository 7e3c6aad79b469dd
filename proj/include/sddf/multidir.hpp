#pragma once
// Concavity/convexity conditions for multi-direction CNLS-d and the
// shape-violation detectors for fitted isoquants.

#include "sddf/data.hpp"
#include "sddf/estimators.hpp"

#include <cstdint>
#include <vector>

namespace sddf {

struct GroupAssignment {
    std::vector<std::size_t> group_of;  // per observation
    std::vector<Direction> directions;  // per group, output space

    void validate(std::size_t n) const;
};

struct ConditionReport {
    // pair_ok[i][j] for ordered pairs, i != j (diagonal true by convention)
    std::vector<std::vector<bool>> pair_ok;
    bool all_hold = true;
};

// Concavity condition on ordered pairs:
//   (eps_i g_{k(i)})' (g_{k(j)} - g_{k(i)}) >= 0   with unit directions.
ConditionReport check_condition(const Vec& residuals, const GroupAssignment& assignment);

// Mirror with the reversed inequality (convex case).
ConditionReport check_condition_convex(const Vec& residuals, const GroupAssignment& assignment);

struct ViolationReport {
    std::size_t pair_count = 0;
    std::size_t within_pair_count = 0;
    std::size_t cross_pair_count = 0;
    std::size_t monotonicity_violations_within = 0;
    std::size_t monotonicity_violations_cross = 0;

    std::size_t triplet_count = 0;
    std::size_t same_triplet_count = 0;
    std::size_t mixed_triplet_count = 0;
    std::size_t concavity_violations_same = 0;
    std::size_t concavity_violations_mixed = 0;

    std::size_t total_monotonicity() const {
        return monotonicity_violations_within + monotonicity_violations_cross;
    }
    std::size_t total_concavity() const {
        return concavity_violations_same + concavity_violations_mixed;
    }
    double cross_monotonicity_rate() const {
        return cross_pair_count ? static_cast<double>(monotonicity_violations_cross) /
                                      static_cast<double>(cross_pair_count)
                                : 0.0;
    }
    double mixed_concavity_rate() const {
        return mixed_triplet_count ? static_cast<double>(concavity_violations_mixed) /
                                         static_cast<double>(mixed_triplet_count)
                                   : 0.0;
    }
    double same_concavity_rate() const {
        return same_triplet_count ? static_cast<double>(concavity_violations_same) /
                                        static_cast<double>(same_triplet_count)
                                  : 0.0;
    }
};

// Sorts 2-D fitted points by (y1, y2), then tests adjacent pairs for a
// downward-sloping isoquant and adjacent triplets for concavity of the
// implied curve. `group_of` may be empty (all pairs count as within-group).
ViolationReport detect_violations(const Mat& fitted_points,
                                  const std::vector<std::size_t>& group_of,
                                  double tol = 1e-7);

struct A4Summary {
    std::size_t replications = 0;
    // Single-direction baselines: pooled violation counts (expected zero).
    std::size_t single_low_monotonicity = 0, single_low_concavity = 0;
    std::size_t single_high_monotonicity = 0, single_high_concavity = 0;
    // Two-direction run: pooled rates over all replications.
    double cross_monotonicity_rate = 0.0;
    double within_monotonicity_rate = 0.0;
    double mixed_concavity_rate = 0.0;
    double same_concavity_rate = 0.0;
};

// Replicated study: Exp-1 style DGP (lambda = 0.1, n = 100), groups split
// at a true angle of pi/4, group directions at pi/8 and 3*pi/8; each
// replication also records single-direction baselines.
A4Summary run_a4_study(std::uint64_t seed, std::size_t replications, int threads = 0,
                       std::size_t n = 100);

} // namespace sddf
