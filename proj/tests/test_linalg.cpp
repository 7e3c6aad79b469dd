#include "sddf/core/linalg.hpp"

#include "oracles.hpp"
#include "sddf/core/rng.hpp"

#include <doctest.h>

using namespace sddf;

namespace {

Mat random_spd(Rng& rng, std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    Mat spd(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
            spd(i, j) = s + (i == j ? 0.5 : 0.0);
        }
    return spd;
}

} // namespace

TEST_CASE("cholesky solves SPD systems") {
    Rng rng(3);
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{23}}) {
        const Mat a = random_spd(rng, n);
        Vec b(n);
        for (double& x : b) x = rng.uniform(-2.0, 2.0);
        Cholesky chol;
        REQUIRE(chol.factor(a));
        const Vec x = chol.solve(b);
        const Vec ref = oracles::gauss_solve(a, b);
        for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
}

TEST_CASE("cholesky rejects indefinite matrices") {
    Mat a(2, 2);
    a(0, 0) = 0.0;
    a(0, 1) = a(1, 0) = 1.0;
    a(1, 1) = 0.0;
    Cholesky chol;
    CHECK_FALSE(chol.factor(a));
}

TEST_CASE("quasi-definite LDL^T solves KKT-shaped systems") {
    Rng rng(5);
    const std::size_t nv = 8, ne = 3, n = nv + ne;
    const Mat h = random_spd(rng, nv);
    Mat kkt(n, n);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nv; ++j) kkt(i, j) = h(i, j);
    for (std::size_t r = 0; r < ne; ++r) {
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            kkt(nv + r, j) = v;
            kkt(j, nv + r) = v;
        }
        kkt(nv + r, nv + r) = -1e-8;
    }
    Vec b(n);
    for (double& x : b) x = rng.uniform(-1.0, 1.0);
    LdltQd f;
    REQUIRE(f.factor(kkt));
    const Vec x = f.solve(b);
    const Vec ref = oracles::gauss_solve(kkt, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-7));
}

TEST_CASE("matvec and transpose") {
    Mat a(2, 3);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(0, 2) = 3;
    a(1, 0) = 4;
    a(1, 1) = 5;
    a(1, 2) = 6;
    const Vec y = a.matvec({1.0, 1.0, 1.0});
    CHECK(y[0] == doctest::Approx(6.0));
    CHECK(y[1] == doctest::Approx(15.0));
    const Vec z = a.matvec_t({1.0, 1.0});
    CHECK(z[0] == doctest::Approx(5.0));
    CHECK(z[2] == doctest::Approx(9.0));
    const Mat t = a.transposed();
    CHECK(t(2, 1) == doctest::Approx(6.0));
}
