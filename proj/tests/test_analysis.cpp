#include "sddf/analysis.hpp"

#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace sddf;

namespace {

FrontierModel cost_model(std::vector<Hyperplane> planes) {
    FrontierModel m;
    m.mode = FrontierMode::cost;
    m.hyperplanes = std::move(planes);
    m.rebuild_envelope();
    return m;
}

Mat single_column_outputs(const Vec& values) {
    Mat m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
    return m;
}

} // namespace

TEST_CASE("mpss on an affine frontier with positive intercept is a boundary case") {
    // chat = 0.5 + 2*s: s/chat is increasing, so the maximizer is the scan top.
    const FrontierModel m = cost_model({{-0.5, {1.0}, {2.0}}});
    RaySpec ray;
    ray.scanned = {0};
    ray.ratio = {1.0};
    const MpssResult res = mpss(make_cost_surface(m), ray, single_column_outputs({1.0, 2.0}));
    CHECK(res.boundary);
    CHECK(res.scale == doctest::Approx(6.0).epsilon(1e-3)); // 300% of max scale 2
}

TEST_CASE("mpss of a quadratic frontier lands at the calculus optimum") {
    // chat = 1 + s^2: maximize s/(1+s^2) -> s* = 1, cost 2.
    QuadraticModel qm;
    qm.intercept = 1.0;
    qm.linear = {0.0};
    qm.squared = {1.0};
    RaySpec ray;
    ray.scanned = {0};
    ray.ratio = {1.0};
    const MpssResult res =
        mpss(make_cost_surface(qm, 1), ray, single_column_outputs({0.5, 2.0}));
    CHECK_FALSE(res.boundary);
    CHECK(res.scale == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(res.cost_level == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("mpss of a constant frontier is flagged at the boundary") {
    QuadraticModel qm;
    qm.intercept = 4.0;
    qm.linear = {0.0};
    qm.squared = {0.0};
    RaySpec ray;
    ray.scanned = {0};
    ray.ratio = {1.0};
    const MpssResult res = mpss(make_cost_surface(qm, 1), ray, single_column_outputs({1.0}));
    CHECK(res.boundary);
}

TEST_CASE("mpss is invariant to rescaling the ratio vector") {
    QuadraticModel qm;
    qm.intercept = 1.0;
    qm.linear = {0.5, 0.0};
    qm.squared = {1.0, 0.3};
    Mat train(3, 2);
    train(0, 0) = 0.4;
    train(0, 1) = 0.8;
    train(1, 0) = 1.5;
    train(1, 1) = 0.2;
    train(2, 0) = 0.9;
    train(2, 1) = 1.1;
    RaySpec ray;
    ray.scanned = {0, 1};
    ray.ratio = {1.0, 2.0};
    const MpssResult a = mpss(make_cost_surface(qm, 2), ray, train);
    ray.ratio = {3.0, 6.0};
    const MpssResult b = mpss(make_cost_surface(qm, 2), ray, train);
    CHECK(a.cost_level == doctest::Approx(b.cost_level).epsilon(1e-5));
    CHECK(a.aggregate_output == doctest::Approx(b.aggregate_output).epsilon(1e-4));
}

TEST_CASE("marginal cost of a linear frontier is exact") {
    // chat = 2*y1 + 3*y2 as one hyperplane through the origin.
    const FrontierModel m = cost_model({{0.0, {1.0}, {2.0, 3.0}}});
    const CostSurface s = make_cost_surface(m);
    const MarginalCostResult mc0 = marginal_cost(s, {1.0, 1.0}, 0);
    CHECK(mc0.forward_difference == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(mc0.subgradient.has_value());
    CHECK(*mc0.subgradient == doctest::Approx(2.0).epsilon(1e-12));
    const MarginalCostResult mc1 = marginal_cost(s, {1.0, 1.0}, 1);
    CHECK(mc1.forward_difference == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("marginal cost on a piecewise frontier picks the active piece") {
    // chat = max(y, 2y - 1): pieces meet at y = 1.
    const FrontierModel m = cost_model({{0.0, {1.0}, {1.0}}, {1.0, {1.0}, {2.0}}});
    const CostSurface s = make_cost_surface(m);
    CHECK(marginal_cost(s, {0.4}, 0, 0.1).forward_difference == doctest::Approx(1.0));
    CHECK(marginal_cost(s, {1.5}, 0, 0.1).forward_difference == doctest::Approx(2.0));
    // Forward difference and subgradient agree away from the breakpoint.
    const MarginalCostResult far = marginal_cost(s, {2.0}, 0, 0.25);
    REQUIRE(far.subgradient.has_value());
    CHECK(far.forward_difference == doctest::Approx(*far.subgradient).epsilon(1e-6));
}

TEST_CASE("marginal costs on a max-affine frontier are nondecreasing along rays") {
    // Three hyperplanes with increasing slopes form a convex cost frontier.
    const FrontierModel m = cost_model(
        {{0.0, {1.0}, {1.0, 0.5}}, {0.8, {1.0}, {2.0, 1.0}}, {2.4, {1.0}, {3.5, 2.0}}});
    const CostSurface s = make_cost_surface(m);
    double prev = -1.0;
    for (double scale : {0.5, 1.5, 4.0}) {
        const double mc = marginal_cost(s, {scale, 0.7 * scale}, 0, 1e-3).forward_difference;
        CHECK(mc >= prev - 1e-9);
        prev = mc;
    }
}

TEST_CASE("ray validation rejects malformed specifications") {
    RaySpec ray;
    ray.scanned = {0};
    ray.ratio = {1.0};
    CHECK_THROWS_AS(ray.validate(2), ConfigError); // output 2 unspecified
    ray.held = {{0, 1.0}};
    CHECK_THROWS_AS(ray.validate(2), ConfigError); // scanned and held overlap
    ray.held = {{1, 1.0}};
    ray.ratio = {-1.0};
    CHECK_THROWS_AS(ray.validate(2), ConfigError);
}
