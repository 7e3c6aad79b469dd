#include "sddf/estimators.hpp"

#include "oracles.hpp"
#include "sddf/core/rng.hpp"
#include "sddf/errors.hpp"
#include "sddf/simulation.hpp"

#include <doctest.h>

#include <cmath>

using namespace sddf;

namespace {

const double kPi = std::acos(-1.0);

Dataset cost_dataset(const Vec& y, const Vec& c) {
    Mat out(y.size(), 1);
    for (std::size_t i = 0; i < y.size(); ++i) out(i, 0) = y[i];
    return Dataset::make_cost(std::move(out), Vec(c));
}

Dataset noisy_linear(std::uint64_t seed, std::size_t n = 40, double lambda = 0.4) {
    DgpSpec spec;
    spec.kind = DgpKind::linear_2d;
    spec.n = n;
    spec.lambda = lambda;
    spec.seed = seed;
    return gen_linear(spec).train;
}

// Ordinary least squares of b on a (slope, intercept) via the closed-form
// normal equations.
std::pair<double, double> ols(const Vec& a, const Vec& b) {
    const double n = static_cast<double>(a.size());
    double sa = 0.0, sb = 0.0, saa = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        saa += a[i] * a[i];
        sab += a[i] * b[i];
    }
    const double slope = (n * sab - sa * sb) / (n * saa - sa * sa);
    const double intercept = (sb - slope * sa) / n;
    return {slope, intercept};
}

} // namespace

TEST_CASE("parametric DDF at the pure-cost direction equals OLS of c on y") {
    Rng rng(31);
    Vec y(30), c(30);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = rng.uniform01();
        c[i] = 0.6 + 1.8 * y[i] + rng.normal(0.0, 0.15);
    }
    const Dataset data = cost_dataset(y, c);
    const LinearDdfModel m = fit_parametric_ddf(data, Direction::cost_mode({0.0}, 1.0));
    // beta (cost coefficient) pinned to 1; eps = alpha + c - gamma*y, so the
    // fitted line is c = gamma*y - alpha: OLS slope and negated intercept.
    const auto [slope, intercept] = ols(y, c);
    CHECK(m.beta[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m.gamma[0] == doctest::Approx(slope).epsilon(1e-6));
    CHECK(m.alpha == doctest::Approx(-intercept).epsilon(1e-6));
}

TEST_CASE("parametric DDF at the pure-output direction equals the reverse regression") {
    Rng rng(32);
    Vec y(30), c(30);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = rng.uniform01();
        c[i] = 0.3 + 1.2 * y[i] + rng.normal(0.0, 0.1);
    }
    const Dataset data = cost_dataset(y, c);
    const LinearDdfModel m = fit_parametric_ddf(data, Direction::cost_mode({1.0}, 0.0));
    // gamma pinned to 1; eps = alpha + beta*c - y fits y = alpha + beta*c.
    const auto [slope, intercept] = ols(c, y);
    CHECK(m.gamma[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m.beta[0] == doctest::Approx(slope).epsilon(1e-6));
    CHECK(m.alpha == doctest::Approx(intercept).epsilon(1e-6));
}

TEST_CASE("noiseless linear data gives zero residuals for any direction") {
    Vec y{0.1, 0.3, 0.5, 0.7, 0.9, 0.2, 0.8};
    const Dataset data = cost_dataset(y, y); // c = y
    for (double th : {0.0, kPi / 8.0, kPi / 4.0, kPi / 2.0}) {
        const LinearDdfModel m = fit_parametric_ddf(data, direction_from_angle(th));
        for (double e : m.residuals) CHECK(std::fabs(e) < 1e-7);
    }
}

TEST_CASE("parametric DDF honors the translation normalization") {
    const Dataset data = noisy_linear(5);
    const Direction dir = direction_from_angle(kPi / 8.0);
    const LinearDdfModel m = fit_parametric_ddf(data, dir);
    CHECK(m.beta[0] * *dir.gc + m.gamma[0] * dir.gy[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m.diagnostics.kkt_report.ok);
}

TEST_CASE("cnls-d interpolates collinear noiseless points") {
    const Dataset data = cost_dataset({0.2, 0.5, 0.8}, {0.4, 1.0, 1.6}); // c = 2y
    const FrontierModel m = fit_cnls_d(data, direction_from_angle(kPi / 4.0));
    for (double e : m.residuals) CHECK(std::fabs(e) < 1e-6);
    // Active hyperplanes reproduce the marginal cost 2 at the interior point.
    const CostFrontierValue v = explicit_cost(m, {0.5});
    REQUIRE(v.ok);
    CHECK(v.cost == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("3-point cnls-d at the pure-cost direction matches the classical CNLS oracle") {
    const Vec y{0.2, 0.5, 0.9}, c{0.30, 0.35, 0.80};
    const Dataset data = cost_dataset(y, c);
    const FrontierModel m = fit_cnls_d(data, Direction::cost_mode({0.0}, 1.0));

    // Independent formulation: convex-cost CNLS on fitted values chat_i =
    // a_i + b_i*y_i with tangents below and b >= 0, solved by enumeration.
    // Variables z = (a1,b1,a2,b2,a3,b3).
    const std::size_t nv = 6;
    Mat p(nv, nv);
    Vec q(nv, 0.0);
    for (int i = 0; i < 3; ++i) {
        // (c_i - a_i - b_i y_i)^2
        const std::size_t ia = 2 * i, ib = 2 * i + 1;
        p(ia, ia) += 2.0;
        p(ia, ib) += 2.0 * y[i];
        p(ib, ia) += 2.0 * y[i];
        p(ib, ib) += 2.0 * y[i] * y[i];
        q[ia] += -2.0 * c[i];
        q[ib] += -2.0 * c[i] * y[i];
    }
    // Tangency: a_i + b_i y_j <= a_j + b_j y_j for i != j; monotonicity -b_i <= 0.
    Mat g(9, nv);
    Vec h(9, 0.0);
    std::size_t r = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            g(r, 2 * i) += 1.0;
            g(r, 2 * i + 1) += y[j];
            g(r, 2 * j) -= 1.0;
            g(r, 2 * j + 1) -= y[j];
            ++r;
        }
    for (int i = 0; i < 3; ++i) g(r++, 2 * i + 1) = -1.0;
    const auto ref = oracles::enumerate_qp(p, q, Mat(0, nv), {}, g, h, 1e-8);
    REQUIRE(ref.has_value());
    for (int i = 0; i < 3; ++i) {
        const double chat = (*ref)[2 * i] + (*ref)[2 * i + 1] * y[i];
        CHECK(m.fitted_cost[i] == doctest::Approx(chat).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("different directions give different coefficient estimates") {
    const Dataset data = noisy_linear(17, 50, 0.5);
    const FrontierModel a = fit_cnls_d(data, direction_from_angle(kPi / 8.0));
    const FrontierModel b = fit_cnls_d(data, direction_from_angle(3.0 * kPi / 8.0));
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        max_diff = std::max(max_diff, std::fabs(a.hyperplanes[i].alpha - b.hyperplanes[i].alpha));
        max_diff = std::max(max_diff, std::fabs(a.hyperplanes[i].beta[0] - b.hyperplanes[i].beta[0]));
        max_diff = std::max(max_diff, std::fabs(a.hyperplanes[i].gamma[0] - b.hyperplanes[i].gamma[0]));
    }
    CHECK(max_diff > 1e-4);
}

TEST_CASE("cnls-d objective never exceeds the parametric objective") {
    Rng rng(8);
    Vec y(25), c(25);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = rng.uniform01();
        c[i] = 2.0 * y[i] + 0.3 + rng.normal(0.0, 0.08);
    }
    const Dataset data = cost_dataset(y, c);
    const Direction dir = direction_from_angle(kPi / 4.0);
    const LinearDdfModel par = fit_parametric_ddf(data, dir);
    REQUIRE(par.beta[0] > 0.0);
    REQUIRE(par.gamma[0] > 0.0); // parametric solution is cnls-feasible here
    const FrontierModel cnls = fit_cnls_d(data, dir);
    CHECK(cnls.diagnostics.objective <= par.diagnostics.objective + 1e-8);
}

TEST_CASE("afriat inequalities hold at the sample points") {
    const Dataset data = noisy_linear(23, 30, 0.5);
    const FrontierModel m = fit_cnls_d(data, direction_from_angle(kPi / 8.0));
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double ci = (*data.cost)[i];
        const double yi = data.outputs(i, 0);
        const double own = m.hyperplanes[i].alpha + m.hyperplanes[i].beta[0] * ci -
                           m.hyperplanes[i].gamma[0] * yi;
        CHECK(own == doctest::Approx(m.residuals[i]).epsilon(1e-6).scale(1.0));
        // Envelope equals the own-hyperplane value at the observation.
        CHECK(m.value({ci}, {yi}) == doctest::Approx(own).epsilon(1e-6).scale(1.0));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double other = m.hyperplanes[j].alpha + m.hyperplanes[j].beta[0] * ci -
                                 m.hyperplanes[j].gamma[0] * yi;
            CHECK(own <= other + 1e-6);
        }
    }
    CHECK(m.diagnostics.kkt_report.ok);
    CHECK(m.diagnostics.objective ==
          doctest::Approx(m.diagnostics.objective_recomputed).epsilon(1e-7));
}

TEST_CASE("scaling the direction rescales residuals and keeps fitted points") {
    DgpSpec spec;
    spec.kind = DgpKind::isoquant_2d;
    spec.n = 25;
    spec.lambda = 0.1;
    spec.seed = 77;
    const IsoquantSample sample = gen_isoquant_2d(spec);
    const Vec base{std::cos(kPi / 8.0), std::sin(kPi / 8.0)};
    std::vector<std::size_t> groups(sample.train.rows(), 0);
    const FrontierModel unit = fit_cnls_d_isoquant_raw(
        sample.train, std::vector<Vec>(sample.train.rows(), base), groups);
    for (double lambda : {0.5, 2.0}) {
        Vec scaled{base[0] * lambda, base[1] * lambda};
        const FrontierModel m = fit_cnls_d_isoquant_raw(
            sample.train, std::vector<Vec>(sample.train.rows(), scaled), groups);
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m.residuals[i] ==
                  doctest::Approx(unit.residuals[i] / lambda).epsilon(1e-4).scale(1.0));
            for (int k = 0; k < 2; ++k)
                CHECK(m.fitted_outputs(i, k) ==
                      doctest::Approx(unit.fitted_outputs(i, k)).epsilon(1e-4).scale(1.0));
        }
    }
}

TEST_CASE("isoquant fit interpolates three circle points and recovers identities") {
    Mat pts(3, 2);
    const double angles[3] = {kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0};
    for (int i = 0; i < 3; ++i) {
        pts(i, 0) = std::cos(angles[i]);
        pts(i, 1) = std::sin(angles[i]);
    }
    const FrontierModel m = fit_cnls_d_isoquant(pts, isoquant_direction_from_angle(kPi / 4.0));
    for (double e : m.residuals) CHECK(std::fabs(e) < 1e-6);
    for (std::size_t i = 0; i < 3; ++i) {
        const Hyperplane& h = m.hyperplanes[i];
        const double gyh = h.gamma[0] * m.fitted_outputs(i, 0) + h.gamma[1] * m.fitted_outputs(i, 1);
        CHECK(gyh == doctest::Approx(h.alpha).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("single-observation isoquant fit is its own hyperplane") {
    Mat pts(1, 2);
    pts(0, 0) = 0.6;
    pts(0, 1) = 0.8;
    const FrontierModel m = fit_cnls_d_isoquant(pts, isoquant_direction_from_angle(kPi / 4.0));
    CHECK(std::fabs(m.residuals[0]) < 1e-7);
}

TEST_CASE("shifting an observation along the direction shifts its residual") {
    DgpSpec spec;
    spec.kind = DgpKind::isoquant_2d;
    spec.n = 12;
    spec.lambda = 0.05;
    spec.seed = 3;
    IsoquantSample sample = gen_isoquant_2d(spec);
    const Direction dir = isoquant_direction_from_angle(kPi / 4.0);
    const FrontierModel before = fit_cnls_d_isoquant(sample.train, dir);
    // Pick the observation with the largest positive residual: shifting it
    // slightly inward leaves the frontier (held up by the others) in place.
    std::size_t target = 0;
    for (std::size_t i = 1; i < before.size(); ++i)
        if (before.residuals[i] > before.residuals[target]) target = i;
    if (before.residuals[target] > 1e-3) {
        const double delta = 1e-4;
        sample.train(target, 0) += delta * dir.gy[0];
        sample.train(target, 1) += delta * dir.gy[1];
        const FrontierModel after = fit_cnls_d_isoquant(sample.train, dir);
        const Hyperplane &ha = after.hyperplanes[target], &hb = before.hyperplanes[target];
        const bool same_plane = std::fabs(ha.gamma[0] - hb.gamma[0]) < 1e-5 &&
                                std::fabs(ha.gamma[1] - hb.gamma[1]) < 1e-5;
        if (same_plane)
            CHECK(after.residuals[target] - before.residuals[target] ==
                  doctest::Approx(-delta).epsilon(0.02));
    }
    // The evaluation-side identity is exact for any single-direction model.
    const double v0 = before.value({}, {0.4, 0.7});
    const double v1 = before.value({}, {0.4 + 0.01 * dir.gy[0], 0.7 + 0.01 * dir.gy[1]});
    CHECK(v1 == doctest::Approx(v0 - 0.01).epsilon(1e-9));
}

TEST_CASE("multidir with one shared direction reduces to the isoquant fit") {
    DgpSpec spec;
    spec.kind = DgpKind::isoquant_2d;
    spec.n = 16;
    spec.lambda = 0.1;
    spec.seed = 11;
    const IsoquantSample sample = gen_isoquant_2d(spec);
    const Direction dir = isoquant_direction_from_angle(kPi / 8.0);
    const FrontierModel iso = fit_cnls_d_isoquant(sample.train, dir);
    std::vector<std::size_t> groups(sample.train.rows());
    for (std::size_t i = 0; i < groups.size(); ++i) groups[i] = i % 2;
    const FrontierModel multi = fit_cnls_d_multidir(sample.train, groups, {dir, dir});
    for (std::size_t i = 0; i < iso.size(); ++i)
        CHECK(multi.residuals[i] == doctest::Approx(iso.residuals[i]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("multidir rejects bad group assignments") {
    Mat pts(4, 2);
    for (int i = 0; i < 4; ++i) {
        pts(i, 0) = 0.2 + 0.2 * i;
        pts(i, 1) = 1.0 - 0.2 * i;
    }
    const Direction d = isoquant_direction_from_angle(kPi / 4.0);
    CHECK_THROWS_AS(fit_cnls_d_multidir(pts, {0, 0, 0, 0}, {d, d}), DataError);
    CHECK_THROWS_AS(fit_cnls_d_multidir(pts, {0, 1, 2, 0}, {d, d}), DataError);
    CHECK_THROWS_AS(fit_cnls_d_multidir(pts, {0, 1}, {d, d}), DataError);
}

TEST_CASE("evaluate_ddf equals the brute-force hyperplane minimum") {
    const Dataset data = noisy_linear(41, 20, 0.3);
    const FrontierModel m = fit_cnls_d(data, direction_from_angle(kPi / 4.0));
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        const double c = rng.uniform(-0.5, 1.5), y = rng.uniform(-0.5, 1.5);
        double ref = std::numeric_limits<double>::infinity();
        for (const Hyperplane& h : m.hyperplanes)
            ref = std::min(ref, h.alpha + h.beta[0] * c - h.gamma[0] * y);
        CHECK(m.value({c}, {y}) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("slope bound caps the output slopes") {
    const Dataset data = noisy_linear(53, 30, 0.4);
    const FrontierModel m = fit_cnls_d(data, direction_from_angle(kPi / 4.0), 0.5);
    for (const Hyperplane& h : m.hyperplanes) CHECK(h.gamma[0] <= 0.5 + 1e-6);
}

TEST_CASE("explicit cost frontier flags unusable hyperplane sets") {
    FrontierModel m;
    m.mode = FrontierMode::cost;
    Hyperplane h;
    h.alpha = 1.0;
    h.beta = {0.0};
    h.gamma = {1.0};
    m.hyperplanes.push_back(h);
    m.rebuild_envelope();
    const CostFrontierValue flat = explicit_cost(m, {0.5});
    CHECK_FALSE(flat.ok);
    CHECK(flat.unbounded_along_cost);
    const CostFrontierValue barred = explicit_cost(m, {2.0}); // gamma'y > alpha, beta = 0
    CHECK_FALSE(barred.ok);
    CHECK(barred.infeasible_output);
}

TEST_CASE("quadratic regression recovers exact coefficients") {
    Vec y{0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95, 0.4, 0.7};
    Vec c(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) c[i] = 1.0 + y[i] + y[i] * y[i];
    const QuadraticModel m = fit_quadratic(cost_dataset(y, c));
    CHECK(m.intercept == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m.linear[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m.squared[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("quadratic regression on linear data has vanishing curvature") {
    Vec y{0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 0.3, 0.6};
    Vec c(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) c[i] = 0.5 + 2.0 * y[i];
    const QuadraticModel m = fit_quadratic(cost_dataset(y, c));
    CHECK(std::fabs(m.squared[0]) < 1e-8);
    CHECK(m.linear[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("quadratic regression matches the textbook normal equations") {
    Rng rng(6);
    const std::size_t n = 40;
    Mat out(n, 2);
    Vec c(n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, 0) = rng.uniform01();
        out(i, 1) = rng.uniform(0.0, 2.0);
        c[i] = 0.4 + 0.9 * out(i, 0) + 0.3 * out(i, 1) + 0.7 * out(i, 0) * out(i, 0) +
               0.2 * out(i, 1) * out(i, 1) + rng.normal(0.0, 0.05);
    }
    Mat out_copy = out;
    const QuadraticModel m = fit_quadratic(Dataset::make_cost(std::move(out_copy), Vec(c)));
    // Explicit (X'X)^{-1} X'c with X = [1, y1, y2, y1^2, y2^2].
    const std::size_t nv = 5;
    Mat xtx(nv, nv);
    Vec xtc(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double row[nv] = {1.0, out(i, 0), out(i, 1), out(i, 0) * out(i, 0),
                                out(i, 1) * out(i, 1)};
        for (std::size_t a = 0; a < nv; ++a) {
            for (std::size_t b = 0; b < nv; ++b) xtx(a, b) += row[a] * row[b];
            xtc[a] += row[a] * c[i];
        }
    }
    const Vec theta = oracles::gauss_solve(xtx, xtc);
    CHECK(m.intercept == doctest::Approx(theta[0]).epsilon(1e-6));
    CHECK(m.linear[0] == doctest::Approx(theta[1]).epsilon(1e-6));
    CHECK(m.linear[1] == doctest::Approx(theta[2]).epsilon(1e-6));
    CHECK(m.squared[0] == doctest::Approx(theta[3]).epsilon(1e-6));
    CHECK(m.squared[1] == doctest::Approx(theta[4]).epsilon(1e-6));
}

TEST_CASE("quadratic regression rejects rank-deficient designs") {
    Vec y(8, 0.5), c{1, 2, 1, 2, 1, 2, 1, 2}; // constant regressor
    CHECK_THROWS_AS(fit_quadratic(cost_dataset(y, c)), DataError);
}

TEST_CASE("local-linear prediction with huge bandwidths tends to global OLS") {
    Rng rng(12);
    Vec y(30), c(30);
    for (std::size_t i = 0; i < 30; ++i) {
        y[i] = rng.uniform01();
        c[i] = 1.0 + 2.0 * y[i] + rng.normal(0.0, 0.1);
    }
    KernelModel km;
    km.bandwidths = {1e6};
    Mat out(30, 1);
    for (std::size_t i = 0; i < 30; ++i) out(i, 0) = y[i];
    km.train_outputs = std::move(out);
    km.train_cost = c;
    const auto [slope, intercept] = ols(y, c);
    for (double point : {0.2, 0.5, 0.8})
        CHECK(km.predict({point}) == doctest::Approx(intercept + slope * point).epsilon(1e-6));
}

TEST_CASE("local-linear prediction at a duplicated point approaches its mean") {
    KernelModel km;
    const std::size_t n = 12;
    Mat out(n, 1);
    Vec c(n);
    Rng rng(9);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out(i, 0) = 0.5;
        c[i] = 2.0 + rng.normal(0.0, 0.3);
        mean += c[i];
    }
    mean /= n;
    km.train_outputs = std::move(out);
    km.train_cost = c;
    km.bandwidths = {0.05};
    CHECK(km.predict({0.5}) == doctest::Approx(mean).epsilon(1e-6));
}

TEST_CASE("local-linear prediction matches the weighted normal equations oracle") {
    Rng rng(14);
    const std::size_t n = 20;
    Mat out(n, 2);
    Vec c(n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, 0) = rng.uniform01();
        out(i, 1) = rng.uniform01();
        c[i] = 1.0 + out(i, 0) + 0.5 * out(i, 1) + rng.normal(0.0, 0.05);
    }
    KernelModel km;
    km.train_outputs = out;
    km.train_cost = c;
    km.bandwidths = {0.3, 0.4};
    Rng qrng(15);
    for (int t = 0; t < 5; ++t) {
        const Vec p{qrng.uniform01(), qrng.uniform01()};
        Mat a(3, 3);
        Vec b(3, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double d0 = (out(i, 0) - p[0]) / km.bandwidths[0];
            const double d1 = (out(i, 1) - p[1]) / km.bandwidths[1];
            const double w = std::exp(-0.5 * (d0 * d0 + d1 * d1));
            const double u[3] = {1.0, out(i, 0) - p[0], out(i, 1) - p[1]};
            for (int r = 0; r < 3; ++r) {
                for (int s = 0; s < 3; ++s) a(r, s) += w * u[r] * u[s];
                b[r] += w * u[r] * c[i];
            }
        }
        const Vec theta = oracles::gauss_solve(a, b);
        CHECK(km.predict(p) == doctest::Approx(theta[0]).epsilon(1e-8));
    }
}

TEST_CASE("local-linear cross-validation picks a usable bandwidth") {
    Rng rng(21);
    const std::size_t n = 60;
    Mat out(n, 1);
    Vec c(n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, 0) = rng.uniform01();
        c[i] = std::sin(3.0 * out(i, 0)) + rng.normal(0.0, 0.05);
    }
    const KernelModel km = fit_local_linear(Dataset::make_cost(std::move(out), std::move(c)));
    REQUIRE(km.bandwidths.size() == 1);
    CHECK(km.bandwidths[0] > 0.0);
    double err = 0.0;
    for (double p : {0.2, 0.4, 0.6, 0.8}) {
        const double diff = km.predict({p}) - std::sin(3.0 * p);
        err += diff * diff;
    }
    CHECK(err / 4.0 < 0.01);
}
