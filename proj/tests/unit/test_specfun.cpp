#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "unit/oracles.hpp"
#include "vcoop/errors.hpp"
#include "vcoop/specfun.hpp"

using namespace vcoop::specfun;

TEST_SUITE("specfun") {

TEST_CASE("reg_lower_gamma examples") {
    CHECK(reg_lower_gamma(1.0, 0.0) == 0.0);
    CHECK(reg_lower_gamma(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    for (double x : {0.01, 0.5, 3.0, 20.0}) {
        CHECK(reg_lower_gamma(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
    }
    const double want = oracle::lower_gamma_quadrature(2.5, 3.0);
    CHECK(std::abs(reg_lower_gamma(2.5, 3.0) - want) < 1e-10);
}

TEST_CASE("reg_upper_gamma examples") {
    CHECK(reg_upper_gamma(1.0, 0.0) == 1.0);
    CHECK(std::abs(reg_upper_gamma(4.0, 4.0) - oracle::upper_gamma_quadrature(4.0, 4.0)) < 1e-10);
}

TEST_CASE("incomplete gamma against boost") {
    for (double a : {0.3, 1.0, 2.5, 10.0, 55.0, 180.0}) {
        for (double x : {1e-3, 0.2, 1.0, 4.0, 12.0, 60.0, 200.0}) {
            CAPTURE(a);
            CAPTURE(x);
            CHECK(reg_lower_gamma(a, x) == doctest::Approx(boost::math::gamma_p(a, x)).epsilon(1e-11));
            CHECK(reg_upper_gamma(a, x) == doctest::Approx(boost::math::gamma_q(a, x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("P + Q = 1 and P monotone") {
    for (double a : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        double prev = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double x = 0.1 * i;
            const double p = reg_lower_gamma(a, x);
            CHECK(std::abs(p + reg_upper_gamma(a, x) - 1.0) < 1e-12);
            CHECK(p >= prev);
            prev = p;
        }
    }
}

TEST_CASE("incomplete gamma domain") {
    CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), vcoop::DomainError);
    CHECK_THROWS_AS(reg_lower_gamma(-1.0, 1.0), vcoop::DomainError);
    CHECK_THROWS_AS(reg_lower_gamma(1.0, -0.1), vcoop::DomainError);
    CHECK_THROWS_AS(reg_upper_gamma(1.0, -0.1), vcoop::DomainError);
}

TEST_CASE("kummer_1f1") {
    CHECK(kummer_1f1(0.7, 1.3, 0.0) == 1.0);
    CHECK(kummer_1f1(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    for (double x = -10.0; x <= 10.0; x += 0.25) {
        CHECK(kummer_1f1(2.3, 2.3, x) == doctest::Approx(std::exp(x)).epsilon(1e-10));
    }
    CHECK(kummer_1f1(1.0, 3.0, 2.5) == doctest::Approx(oracle::kummer_long(1.0, 3.0, 2.5)).epsilon(1e-13));
    CHECK(kummer_1f1(3.5, 1.5, 7.0) == doctest::Approx(oracle::kummer_long(3.5, 1.5, 7.0)).epsilon(1e-12));
}

TEST_CASE("log_kummer_1f1_positive agrees with the series and extends it") {
    for (double x : {0.0, 0.5, 5.0, 40.0}) {
        CHECK(log_kummer_1f1_positive(2.0, 5.0, x) ==
              doctest::Approx(std::log(oracle::kummer_long(2.0, 5.0, x, 400))).epsilon(1e-11));
    }
    // Far beyond double range: 1F1(a;a;x) = e^x.
    CHECK(log_kummer_1f1_positive(3.0, 3.0, 2000.0) == doctest::Approx(2000.0).epsilon(1e-12));
    // 1F1(1;2;x) = (e^x - 1) / x.
    const double x = 900.0;
    CHECK(log_kummer_1f1_positive(1.0, 2.0, x) == doctest::Approx(x - std::log(x)).epsilon(1e-12));
}

TEST_CASE("kummer non-convergence") {
    SeriesControl ctl;
    ctl.max_terms = 5;
    CHECK_THROWS_AS(kummer_1f1(1.0, 1.0, 30.0, ctl), vcoop::SeriesNotConverged);
}

TEST_CASE("SeriesControl validation") {
    SeriesControl ctl;
    ctl.rel_tol = 0.0;
    CHECK_THROWS_AS(ctl.validate(), vcoop::DomainError);
    ctl = {};
    ctl.max_terms = 0;
    CHECK_THROWS_AS(ctl.validate(), vcoop::DomainError);
}

TEST_CASE("humbert_phi1 reductions") {
    for (double x : {-0.6, 0.2, 0.8}) {
        const double g = gauss_2f1(1.5, 0.7, 2.2, x);
        CHECK(g == doctest::Approx(oracle::gauss_2f1_long(1.5, 0.7, 2.2, x)).epsilon(1e-10));
        CHECK(humbert_phi1(1.5, 0.7, 2.2, x, 0.0) == doctest::Approx(g).epsilon(1e-9));
    }
    for (double y : {-3.0, 0.5, 4.0}) {
        CHECK(humbert_phi1(1.5, 0.7, 2.2, 0.0, y) == doctest::Approx(kummer_1f1(1.5, 2.2, y)).epsilon(1e-12));
    }
}

TEST_CASE("humbert_phi1 against brute-force double sum") {
    const double want = oracle::phi1_brute(1.0, 2.0, 3.0, 0.3, 0.7, 10000);
    CHECK(humbert_phi1(1.0, 2.0, 3.0, 0.3, 0.7) == doctest::Approx(want).epsilon(1e-12));
    const double want2 = oracle::phi1_brute(2.5, 0.5, 4.0, -0.5, 3.0, 2000);
    CHECK(humbert_phi1(2.5, 0.5, 4.0, -0.5, 3.0) == doctest::Approx(want2).epsilon(1e-11));
}

TEST_CASE("humbert_phi1 domain") {
    CHECK_THROWS_AS(humbert_phi1(1.0, 1.0, 2.0, 1.0, 0.5), vcoop::DomainError);
    CHECK_THROWS_AS(humbert_phi1(1.0, 1.0, 2.0, -1.5, 0.5), vcoop::DomainError);
}

TEST_CASE("series are bit-reproducible") {
    const double a = humbert_phi1(1.2, 0.4, 2.9, 0.45, 1.7);
    const double b = humbert_phi1(1.2, 0.4, 2.9, 0.45, 1.7);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    CHECK(kummer_1f1(0.3, 1.9, 4.4) == kummer_1f1(0.3, 1.9, 4.4));
}

}
