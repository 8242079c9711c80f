#include <doctest.h>

#include <cmath>

#include "tumor_dde/errors.hpp"
#include "tumor_dde/rootfind.hpp"

using namespace tumor_dde;

TEST_CASE("newton_bisect agrees with bisection and lands on simple roots") {
    auto f = [](double x) { return std::cos(x) - x; };
    auto df = [](double x) { return -std::sin(x) - 1.0; };
    const double r1 = newton_bisect(f, df, 0.0, 1.0);
    const double r2 = bisect(f, 0.0, 1.0);
    CHECK(std::abs(f(r1)) < 1e-14);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-11));
}

TEST_CASE("newton_bisect survives a flat derivative via the bisection fallback") {
    auto f = [](double x) { return x * x * x - 2.0; };
    auto df = [](double x) { return 3.0 * x * x; };
    const double r = newton_bisect(f, df, 0.0, 2.0);  // df(0)=0 would break plain Newton
    CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-13));
}

TEST_CASE("bracket that does not straddle a root is rejected") {
    auto f = [](double x) { return x * x + 1.0; };
    auto df = [](double x) { return 2.0 * x; };
    CHECK_THROWS_AS(newton_bisect(f, df, -1.0, 1.0), convergence_error);
    CHECK_THROWS_AS(bisect(f, -1.0, 1.0), convergence_error);
}

TEST_CASE("exact endpoint roots are returned as-is") {
    auto f = [](double x) { return x - 1.0; };
    auto df = [](double) { return 1.0; };
    CHECK(newton_bisect(f, df, 1.0, 2.0) == 1.0);
    CHECK(bisect(f, 0.0, 1.0) == 1.0);
}
