#include "sddf/multidir.hpp"

#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace sddf;

namespace {
const double kPi = std::acos(-1.0);

GroupAssignment two_groups(std::size_t n, const Direction& a, const Direction& b) {
    GroupAssignment g;
    g.directions = {a, b};
    g.group_of.assign(n, 0);
    for (std::size_t i = n / 2; i < n; ++i) g.group_of[i] = 1;
    return g;
}
} // namespace

TEST_CASE("shared directions satisfy the concavity condition with equality") {
    const Direction d = isoquant_direction_from_angle(kPi / 8.0);
    GroupAssignment g = two_groups(6, d, d);
    Vec eps{0.5, -0.2, 0.1, -0.4, 0.3, 0.9};
    const ConditionReport rep = check_condition(eps, g);
    CHECK(rep.all_hold);
}

TEST_CASE("zero residuals satisfy the condition for any directions") {
    GroupAssignment g = two_groups(4, isoquant_direction_from_angle(0.0),
                                   isoquant_direction_from_angle(kPi / 2.0));
    const ConditionReport rep = check_condition(Vec(4, 0.0), g);
    CHECK(rep.all_hold);
}

TEST_CASE("orthogonal directions with unit residuals violate the condition") {
    // g1 = (1,0), g2 = (0,1), eps = 1 on G1: inner product (1,0).(-1,1) = -1.
    GroupAssignment g = two_groups(4, isoquant_direction_from_angle(0.0),
                                   isoquant_direction_from_angle(kPi / 2.0));
    Vec eps{1.0, 1.0, 0.0, 0.0};
    const ConditionReport rep = check_condition(eps, g);
    CHECK_FALSE(rep.all_hold);
    CHECK_FALSE(rep.pair_ok[0][2]); // G1 member against a G2 member
    // The convex mirror accepts exactly this configuration.
    const ConditionReport conv = check_condition_convex(eps, g);
    CHECK(conv.all_hold);
}

TEST_CASE("concave and convex checks are antisymmetric for nonzero residuals") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        GroupAssignment g = two_groups(6, isoquant_direction_from_angle(rng.uniform(0.0, kPi / 2.0)),
                                       isoquant_direction_from_angle(rng.uniform(0.0, kPi / 2.0)));
        Vec eps(6);
        for (double& e : eps) e = rng.uniform(-1.0, 1.0);
        const ConditionReport con = check_condition(eps, g);
        const ConditionReport cvx = check_condition_convex(eps, g);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) {
                if (i == j) continue;
                // A strict violation on one side is strict satisfaction on
                // the other; equality satisfies both.
                CHECK((con.pair_ok[i][j] || cvx.pair_ok[i][j]));
            }
    }
}

TEST_CASE("points on the quarter circle show no violations") {
    const std::size_t n = 20;
    Mat pts(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = kPi / 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        pts(i, 0) = std::cos(th);
        pts(i, 1) = std::sin(th);
    }
    const ViolationReport rep = detect_violations(pts, {});
    CHECK(rep.total_monotonicity() == 0);
    CHECK(rep.total_concavity() == 0);
    CHECK(rep.pair_count == n - 1);
    CHECK(rep.triplet_count == n - 2);
}

TEST_CASE("collinear decreasing points count as satisfied") {
    Mat pts(3, 2);
    pts(0, 0) = 0.1;
    pts(0, 1) = 0.9;
    pts(1, 0) = 0.5;
    pts(1, 1) = 0.5;
    pts(2, 0) = 0.9;
    pts(2, 1) = 0.1;
    const ViolationReport rep = detect_violations(pts, {});
    CHECK(rep.total_concavity() == 0);
    CHECK(rep.total_monotonicity() == 0);
}

TEST_CASE("a middle point below the chord is one concavity violation") {
    Mat pts(3, 2);
    pts(0, 0) = 0.0;
    pts(0, 1) = 1.0;
    pts(1, 0) = 0.5;
    pts(1, 1) = 0.4; // chord value is 0.5
    pts(2, 0) = 1.0;
    pts(2, 1) = 0.0;
    const ViolationReport rep = detect_violations(pts, {});
    CHECK(rep.total_concavity() == 1);
    CHECK(rep.total_monotonicity() == 0);
}

TEST_CASE("cross-group monotonicity violations are classified") {
    Mat pts(4, 2);
    // Sorted by y1: (0.1,0.5) (0.2,0.8)! up-step, groups 0 then 1.
    pts(0, 0) = 0.1;
    pts(0, 1) = 0.5;
    pts(1, 0) = 0.2;
    pts(1, 1) = 0.8;
    pts(2, 0) = 0.6;
    pts(2, 1) = 0.4;
    pts(3, 0) = 0.9;
    pts(3, 1) = 0.1;
    const ViolationReport rep = detect_violations(pts, {0, 1, 1, 1});
    CHECK(rep.monotonicity_violations_cross == 1);
    CHECK(rep.monotonicity_violations_within == 0);
    CHECK(rep.cross_pair_count == 1);
    CHECK(rep.within_pair_count == 2);
    CHECK(rep.mixed_triplet_count == 1);
    CHECK(rep.same_triplet_count == 1);
}

TEST_CASE("a4 study smoke run: single directions are violation-free") {
    const A4Summary sum = run_a4_study(1234, 6, 1, 40);
    CHECK(sum.replications == 6);
    CHECK(sum.single_low_monotonicity == 0);
    CHECK(sum.single_low_concavity == 0);
    CHECK(sum.single_high_monotonicity == 0);
    CHECK(sum.single_high_concavity == 0);
    CHECK(sum.cross_monotonicity_rate >= 0.0);
    CHECK(sum.mixed_concavity_rate <= 1.0);
}
