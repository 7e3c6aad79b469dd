#include "sddf/qp.hpp"

#include "oracles.hpp"
#include "sddf/core/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sddf;

namespace {

QpProblem scalar_bound_problem() {
    // minimize z^2 subject to z >= 1, via an explicit inequality row.
    QpProblem p;
    p.objective_matrix = Mat(1, 1);
    p.objective_matrix(0, 0) = 2.0;
    p.objective_vector = {0.0};
    p.eq_constraints = SparseRows(1);
    p.ineq_constraints = SparseRows(1);
    p.ineq_constraints.push_row({0}, {-1.0});
    p.ineq_rhs = {-1.0};
    return p;
}

} // namespace

TEST_CASE("active scalar bound: z* = 1 with dual 2") {
    const QpProblem p = scalar_bound_problem();
    const QpSolution sol = solve_qp(p, 1e-9, 200);
    REQUIRE(sol.status == QpStatus::optimal);
    CHECK(sol.primal[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sol.dual_ineq[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.kkt_report.ok);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("symmetric equality projection") {
    // minimize (z1-1)^2 + (z2-1)^2 s.t. z1 + z2 = 1 -> (0.5, 0.5)
    QpProblem p;
    p.objective_matrix = Mat(2, 2);
    p.objective_matrix(0, 0) = p.objective_matrix(1, 1) = 2.0;
    p.objective_vector = {-2.0, -2.0};
    p.eq_constraints = SparseRows(2);
    p.eq_constraints.push_row({0, 1}, {1.0, 1.0});
    p.eq_rhs = {1.0};
    p.ineq_constraints = SparseRows(2);
    const QpSolution sol = solve_qp(p, 1e-9, 200);
    REQUIRE(sol.status == QpStatus::optimal);
    CHECK(sol.primal[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sol.primal[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sol.iterations == 1); // pure equality QPs solve in one step
}

TEST_CASE("random 5-variable QPs match the active-set enumeration oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t nv = 5, mi = 3;
        Mat m(nv, nv);
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = 0; j < nv; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
        Mat p(nv, nv);
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = 0; j < nv; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < nv; ++k) s += m(k, i) * m(k, j);
                p(i, j) = s + (i == j ? 0.1 : 0.0);
            }
        Vec q(nv);
        for (double& x : q) x = rng.uniform(-1.0, 1.0);
        Mat g(mi, nv);
        for (std::size_t r = 0; r < mi; ++r)
            for (std::size_t j = 0; j < nv; ++j) g(r, j) = rng.uniform(-1.0, 1.0);
        Vec h(mi);
        for (double& x : h) x = rng.uniform(-0.2, 1.0);

        QpProblem qp;
        qp.objective_matrix = p;
        qp.objective_vector = q;
        qp.eq_constraints = SparseRows(nv);
        qp.ineq_constraints = SparseRows::from_dense(g);
        qp.ineq_rhs = h;
        const QpSolution sol = solve_qp(qp, 1e-10, 200);
        REQUIRE(sol.status == QpStatus::optimal);
        const auto ref = oracles::enumerate_qp(p, q, Mat(0, nv), {}, g, h);
        REQUIRE(ref.has_value());
        for (std::size_t i = 0; i < nv; ++i)
            CHECK(sol.primal[i] == doctest::Approx((*ref)[i]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("verify_kkt reports zero residuals at the optimum and flags perturbations") {
    const QpProblem p = scalar_bound_problem();
    QpSolution sol = solve_qp(p, 1e-9, 200);
    const KktReport clean = verify_kkt(p, sol, 1e-6);
    CHECK(clean.ok);
    CHECK(clean.max_residual() < 1e-6);
    sol.primal[0] += 1e-3;
    const KktReport bent = verify_kkt(p, sol, 1e-6);
    CHECK_FALSE(bent.ok);
    CHECK(bent.stationarity > 1e-4);
}

TEST_CASE("infeasible problems are certified") {
    // z >= 1 and z <= 0 cannot hold together.
    QpProblem p;
    p.objective_matrix = Mat(1, 1);
    p.objective_matrix(0, 0) = 2.0;
    p.objective_vector = {0.0};
    p.eq_constraints = SparseRows(1);
    p.ineq_constraints = SparseRows(1);
    p.ineq_constraints.push_row({0}, {-1.0});
    p.ineq_constraints.push_row({0}, {1.0});
    p.ineq_rhs = {-1.0, 0.0};
    const QpSolution sol = solve_qp(p, 1e-8, 300);
    CHECK(sol.status == QpStatus::infeasible);
    CHECK(sol.infeasibility_measure <= 1e-6);
}

TEST_CASE("non-PSD objectives are rejected before solving") {
    QpProblem p;
    p.objective_matrix = Mat(2, 2);
    p.objective_matrix(0, 1) = p.objective_matrix(1, 0) = 1.0; // eigenvalues +-1
    p.objective_vector = {0.0, 0.0};
    p.eq_constraints = SparseRows(2);
    p.ineq_constraints = SparseRows(2);
    CHECK_THROWS_AS(solve_qp(p, 1e-8, 100), std::invalid_argument);

    QpProblem asym = scalar_bound_problem();
    asym.objective_matrix = Mat(2, 2);
    asym.objective_vector = {0.0, 0.0};
    asym.ineq_constraints = SparseRows(2);
    asym.ineq_rhs = {};
    asym.objective_matrix(0, 1) = 1e-6; // asymmetric
    CHECK_THROWS_AS(solve_qp(asym, 1e-8, 100), std::invalid_argument);
}

TEST_CASE("objective invariant under inequality row permutation") {
    Rng rng(99);
    const std::size_t nv = 4, mi = 6;
    Mat g(mi, nv);
    for (std::size_t r = 0; r < mi; ++r)
        for (std::size_t j = 0; j < nv; ++j) g(r, j) = rng.uniform(-1.0, 1.0);
    Vec h(mi);
    for (double& x : h) x = rng.uniform(0.1, 1.0);

    QpProblem p;
    p.objective_matrix = Mat(nv, nv);
    for (std::size_t i = 0; i < nv; ++i) p.objective_matrix(i, i) = 2.0;
    p.objective_vector = {1.0, -2.0, 0.5, -0.25};
    p.eq_constraints = SparseRows(nv);
    p.ineq_constraints = SparseRows::from_dense(g);
    p.ineq_rhs = h;
    const QpSolution a = solve_qp(p, 1e-9, 200);

    std::vector<std::size_t> perm{3, 1, 5, 0, 4, 2};
    Mat gp(mi, nv);
    Vec hp(mi);
    for (std::size_t r = 0; r < mi; ++r) {
        hp[r] = h[perm[r]];
        for (std::size_t j = 0; j < nv; ++j) gp(r, j) = g(perm[r], j);
    }
    p.ineq_constraints = SparseRows::from_dense(gp);
    p.ineq_rhs = hp;
    const QpSolution b = solve_qp(p, 1e-9, 200);
    REQUIRE(a.status == QpStatus::optimal);
    REQUIRE(b.status == QpStatus::optimal);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-8));
}

TEST_CASE("variable bounds carry their own duals") {
    QpProblem p;
    p.objective_matrix = Mat(1, 1);
    p.objective_matrix(0, 0) = 2.0;
    p.objective_vector = {0.0};
    p.eq_constraints = SparseRows(1);
    p.ineq_constraints = SparseRows(1);
    p.lower_bounds = Vec{1.0};
    const QpSolution sol = solve_qp(p, 1e-9, 200);
    REQUIRE(sol.status == QpStatus::optimal);
    CHECK(sol.primal[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sol.dual_lower[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.kkt_report.ok);
}

TEST_CASE("solver is deterministic") {
    const QpProblem p = scalar_bound_problem();
    const QpSolution a = solve_qp(p, 1e-9, 200);
    const QpSolution b = solve_qp(p, 1e-9, 200);
    CHECK(a.primal[0] == b.primal[0]);
    CHECK(a.iterations == b.iterations);
}
