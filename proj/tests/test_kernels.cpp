#include <doctest.h>

#include <cmath>

#include "abc/kernels.hpp"
#include "abc/random.hpp"

#include "test_support.hpp"

using namespace abc;

namespace {

DataVector scalar(double v) { return DataVector{{v}}; }

} // namespace

TEST_CASE("epanechnikov density matches the quadratic profile") {
    const auto k = DiscrepancyKernel::epanechnikov(1.0);
    CHECK(k.density(scalar(0.0)) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(k.density(scalar(1.0)) == doctest::Approx(0.0));
    CHECK(k.density(scalar(1.0001)) == 0.0);
    CHECK(k.density(scalar(0.5)) == doctest::Approx(0.75 * (1.0 - 0.25)).epsilon(1e-15));
}

TEST_CASE("uniform ball density is the box density") {
    const auto k = DiscrepancyKernel::uniform_ball(0.1);
    CHECK(k.density(scalar(0.05)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(k.density(scalar(0.1)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(k.density(scalar(0.11)) == 0.0);
}

TEST_CASE("gaussian density has the normal mode") {
    const auto k = DiscrepancyKernel::gaussian(2.0);
    CHECK(k.density(scalar(0.0)) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-14));
}

TEST_CASE("acceptance probability is density over c") {
    SUBCASE("zero difference always accepts when c = density(0)") {
        for (const auto& k : {DiscrepancyKernel::uniform_ball(0.3), DiscrepancyKernel::epanechnikov(0.7),
                              DiscrepancyKernel::gaussian(1.3)}) {
            CHECK(k.acceptance_prob(scalar(0.0)) == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    SUBCASE("uniform ball outside the ball rejects") {
        CHECK(DiscrepancyKernel::uniform_ball(1.0).acceptance_prob(scalar(1.5)) == 0.0);
    }
    SUBCASE("gaussian ratio at one sigma") {
        CHECK(DiscrepancyKernel::gaussian(1.0).acceptance_prob(scalar(1.0)) ==
              doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    }
    SUBCASE("misconfigured bound raises InvalidBound") {
        const auto k = DiscrepancyKernel::gaussian(1.0).with_bound(0.1);
        CHECK_THROWS_AS(k.acceptance_prob(scalar(0.0)), InvalidBoundError);
    }
    SUBCASE("raised bound scales the acceptance down") {
        const auto base = DiscrepancyKernel::uniform_ball(0.5);
        const auto k = base.with_bound(2.0 * base.bound());
        CHECK(k.acceptance_prob(scalar(0.0)) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("error variance closed forms") {
    CHECK(DiscrepancyKernel::uniform_ball(1.0).error_variance() == 1.0 / 3.0);
    CHECK(DiscrepancyKernel::epanechnikov(1.0).error_variance() == 1.0 / 5.0);
    const double sigma = 0.3 / std::sqrt(3.0); // sigma^2 = delta^2/3 at delta = 0.3
    CHECK(DiscrepancyKernel::gaussian(sigma).error_variance() == doctest::Approx(0.03).epsilon(1e-14));
    CHECK_THROWS_AS(DiscrepancyKernel::uniform_ball(1.0, Metric::Euclidean, 2).error_variance(),
                    UnsupportedError);

    auto prod = DiscrepancyKernel::product(
        {DiscrepancyKernel::uniform_ball(1.0), DiscrepancyKernel::epanechnikov(1.0)});
    CHECK_THROWS_AS(prod.error_variance(), UnsupportedError);
    const auto vars = prod.error_variances();
    REQUIRE(vars.size() == 2);
    CHECK(vars[0] == 1.0 / 3.0);
    CHECK(vars[1] == 1.0 / 5.0);
}

TEST_CASE("epanechnikov-to-uniform variance ratio is 3/5") {
    for (double delta : {0.1, 1.0, 3.7}) {
        const double vu = DiscrepancyKernel::uniform_ball(delta).error_variance();
        const double ve = DiscrepancyKernel::epanechnikov(delta).error_variance();
        CHECK(ve / vu == doctest::Approx(0.6).epsilon(1e-14));
    }
}

TEST_CASE("scalar kernels are normalized densities") {
    auto quad_mass = [](const DiscrepancyKernel& k, double lo, double hi) {
        return test_support::simpson([&k](double r) { return k.density(DataVector{{r}}); }, lo, hi, 20000);
    };
    CHECK(quad_mass(DiscrepancyKernel::uniform_ball(0.4), -0.4, 0.4) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(quad_mass(DiscrepancyKernel::epanechnikov(0.8), -0.8, 0.8) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(quad_mass(DiscrepancyKernel::gaussian(0.5), -8.0, 8.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel draws match the stated error variances") {
    const std::size_t n = 1000000;
    RngStream rng(2024);
    for (const auto& k : {DiscrepancyKernel::uniform_ball(0.7), DiscrepancyKernel::epanechnikov(0.7),
                          DiscrepancyKernel::gaussian(0.4)}) {
        std::vector<double> draws(n);
        for (double& d : draws) d = k.sample_error(rng);
        const auto s = test_support::summarize(draws);
        CHECK(std::abs(s.var - k.error_variance()) < 3.0 * s.se_var);
    }
}

TEST_CASE("density never exceeds the default bound") {
    RngStream rng(77);
    const auto kernels = {DiscrepancyKernel::uniform_ball(0.3), DiscrepancyKernel::epanechnikov(1.7),
                          DiscrepancyKernel::gaussian(0.9)};
    for (const auto& k : kernels) {
        for (int i = 0; i < 20000; ++i) {
            const double r = rng.uniform(-4.0, 4.0);
            CHECK(k.density(scalar(r)) <= k.bound() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("density is even in each difference component") {
    RngStream rng(78);
    auto k3 = DiscrepancyKernel::gaussian(std::vector<double>{0.5, 1.0, 2.0});
    auto ball3 = DiscrepancyKernel::uniform_ball(2.0, Metric::Euclidean, 3);
    for (int i = 0; i < 2000; ++i) {
        DataVector diff{{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}};
        for (std::size_t comp = 0; comp < 3; ++comp) {
            DataVector flipped = diff;
            flipped.values[comp] = -flipped.values[comp];
            CHECK(k3.density(diff) == doctest::Approx(k3.density(flipped)).epsilon(1e-12));
            CHECK(ball3.density(diff) == ball3.density(flipped));
        }
    }
}

TEST_CASE("uniform acceptance equals the hard cutoff indicator") {
    RngStream rng(79);
    for (int i = 0; i < 20000; ++i) {
        const double delta = rng.uniform(0.01, 2.0);
        const auto k = DiscrepancyKernel::uniform_ball(delta);
        const double r = rng.uniform(-3.0, 3.0);
        const double expected = std::abs(r) <= delta ? 1.0 : 0.0;
        CHECK(k.acceptance_prob(scalar(r)) == expected);
    }
}

TEST_CASE("product kernel multiplies child densities") {
    auto prod = DiscrepancyKernel::product(
        {DiscrepancyKernel::uniform_ball(0.5), DiscrepancyKernel::gaussian(1.5),
         DiscrepancyKernel::epanechnikov(2.0)});
    REQUIRE(prod.dim() == 3);
    RngStream rng(80);
    for (int i = 0; i < 5000; ++i) {
        DataVector diff{{rng.uniform(-1, 1), rng.uniform(-3, 3), rng.uniform(-3, 3)}};
        const double expected = DiscrepancyKernel::uniform_ball(0.5).density(scalar(diff[0])) *
                                DiscrepancyKernel::gaussian(1.5).density(scalar(diff[1])) *
                                DiscrepancyKernel::epanechnikov(2.0).density(scalar(diff[2]));
        CHECK(prod.density(diff) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(prod.acceptance_prob(DataVector{{0.0, 0.0, 0.0}}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("max relative error metric") {
    const DataVector d{{1.149, 0.6358, 316.0}};
    CHECK(max_relative_error_metric(d, d) == 0.0);
    CHECK(max_relative_error_metric(DataVector{{2.0}}, DataVector{{1.0}}) == doctest::Approx(0.5));

    // The 10% box corner: every coordinate at its lower endpoint.
    const DataVector corner{{1.149 * 0.9, 0.6358 * 0.9, 316.0 * 0.9}};
    CHECK(max_relative_error_metric(d, corner) == doctest::Approx(0.1).epsilon(1e-12));

    CHECK_THROWS_AS(max_relative_error_metric(DataVector{{0.0, 1.0}}, DataVector{{0.0, 1.0}}),
                    DivisionByZeroError);
}

TEST_CASE("max relative kernel needs a reference and thresholds the box") {
    const std::vector<double> ref{1.149, 0.6358, 316.0};
    auto k = DiscrepancyKernel::uniform_ball(0.1, Metric::MaxRelative, 3);
    CHECK_THROWS_AS(k.density(DataVector{{0.0, 0.0, 0.0}}), UnsupportedError);
    const auto bound = k.with_reference(ref);
    // Inside the 10% box.
    CHECK(bound.acceptance_prob(difference(DataVector{ref}, DataVector{{1.2, 0.64, 340.0}})) == 1.0);
    // 316 -> 280 is an 11.4% error.
    CHECK(bound.acceptance_prob(difference(DataVector{ref}, DataVector{{1.149, 0.6358, 280.0}})) == 0.0);
    CHECK_THROWS_AS(k.with_reference({1.0, 0.0, 2.0}), DivisionByZeroError);
}

TEST_CASE("tiny densities clamp to zero in linear space") {
    const auto k = DiscrepancyKernel::gaussian(1.0);
    const DataVector far{{60.0}};
    CHECK(k.density(far) == 0.0);
    CHECK(k.log_density(far) == doctest::Approx(-1800.0).epsilon(1e-3));
}

TEST_CASE("kernel dimension mismatches are rejected") {
    const auto k = DiscrepancyKernel::gaussian(std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(k.density(scalar(0.0)), DimensionMismatchError);
}
