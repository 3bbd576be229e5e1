#include <doctest.h>

#include <cmath>

#include "vcoop/errors.hpp"
#include "vcoop/quadrature.hpp"

using namespace vcoop::quad;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials and smooth functions") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0).value == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("endpoint singularity") {
    const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.intervals > 1);
}

TEST_CASE("semi-infinite range") {
    const auto r = integrate_to_infinity([](double x) { return std::exp(-x); }, 2.0);
    CHECK(r.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
    const auto g = integrate_to_infinity([](double x) { return x * x * std::exp(-x) / 2.0; }, 0.0);
    CHECK(g.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("budget exhaustion throws") {
    QuadratureControl ctl;
    ctl.max_intervals = 2;
    ctl.abs_tol = 1e-15;
    ctl.rel_tol = 1e-15;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, ctl),
                    vcoop::QuadratureError);
}

}
