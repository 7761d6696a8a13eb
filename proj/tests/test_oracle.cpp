// SPDX-License-Identifier: Apache-2.0
#include "safebound/oracle.hpp"

#include "test_systems.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace safebound;
using namespace safebound::testing;

TEST_CASE("mesh function interpolation") {
    MeshFunction f{{0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}};
    CHECK(f.at(0.5) == doctest::Approx(0.5));
    CHECK(f.at(1.5) == doctest::Approx(0.5));
    CHECK(f.at(1.0) == doctest::Approx(1.0));
    CHECK(f.at(-3.0) == doctest::Approx(0.0)); // clamped
    CHECK(f.at(9.0) == doctest::Approx(0.0));
}

TEST_CASE("zero horizon is certainly safe") {
    const auto res = exact_dp(random_walk_1d(), unit_interval_safe(), 0, 501,
                              OracleMode::FixedAction);
    REQUIRE(res.value_functions.size() == 1);
    for (double v : res.value_functions[0].values)
        CHECK(v == 0.0);
    CHECK(res.safety_at(0.3) == 1.0);
}

TEST_CASE("one step equals the closed-form escape probability") {
    const auto sys = random_walk_1d();
    const auto res = exact_dp(sys, unit_interval_safe(), 1, 4001, OracleMode::FixedAction);
    for (double x : {-0.8, -0.2, 0.0, 0.5, 0.95}) {
        const double expected = 1.0 - transition_prob(sys, 0, {x}, unit_interval_safe());
        CHECK(res.value_functions[0].at(x) == doctest::Approx(expected).epsilon(1e-9));
    }
    // x = 0.95 sits half a sigma inside the boundary.
    CHECK(res.safety_at(0.95) == doctest::Approx(0.691462).epsilon(1e-5));
}

TEST_CASE("quadrature error bound and Richardson behaviour") {
    const auto sys = random_walk_1d();
    const auto coarse = exact_dp(sys, unit_interval_safe(), 10, 501, OracleMode::FixedAction);
    const auto fine = exact_dp(sys, unit_interval_safe(), 10, 2001, OracleMode::FixedAction);
    const auto finest = exact_dp(sys, unit_interval_safe(), 10, 8001, OracleMode::FixedAction);
    CHECK(fine.quadrature_error_bound < coarse.quadrature_error_bound);
    // Trapezoid error is O(dy^2): 4x mesh refinement shrinks the bound 16x.
    CHECK(fine.quadrature_error_bound ==
          doctest::Approx(coarse.quadrature_error_bound / 16.0).epsilon(1e-2));
    for (double x : {-0.5, 0.0, 0.7}) {
        const double d1 = std::abs(coarse.value_functions[0].at(x) -
                                   finest.value_functions[0].at(x));
        const double d2 =
            std::abs(fine.value_functions[0].at(x) - finest.value_functions[0].at(x));
        CHECK(d1 <= coarse.quadrature_error_bound + 1e-12);
        CHECK(d2 <= d1 + 1e-12);
    }
}

TEST_CASE("unsafety grows with the horizon") {
    const auto sys = random_walk_1d();
    const auto res = exact_dp(sys, unit_interval_safe(), 10, 2001, OracleMode::FixedAction);
    for (double x : {-0.9, 0.0, 0.4}) {
        for (std::size_t k = 1; k <= 10; ++k) {
            CHECK(res.value_functions[k - 1].at(x) >=
                  res.value_functions[k].at(x) - 1e-12);
        }
    }
}

TEST_CASE("symmetric system gives a symmetric value function") {
    const auto sys = random_walk_1d();
    const auto res = exact_dp(sys, unit_interval_safe(), 10, 4001, OracleMode::FixedAction);
    for (double x : {0.1, 0.35, 0.7, 0.95})
        CHECK(res.value_functions[0].at(x) ==
              doctest::Approx(res.value_functions[0].at(-x)).epsilon(1e-9));
}

TEST_CASE("optimal mode dominates every fixed action") {
    const auto sys = controlled_walk_1d();
    const auto opt = exact_dp(sys, unit_interval_safe(), 5, 1001, OracleMode::Optimal);
    for (std::size_t a = 0; a < sys.actions.size(); ++a) {
        const auto fixed =
            exact_dp(sys, unit_interval_safe(), 5, 1001, OracleMode::FixedAction, a);
        for (double x : {-0.8, -0.3, 0.0, 0.6})
            CHECK(opt.value_functions[0].at(x) <=
                  fixed.value_functions[0].at(x) + 1e-12);
    }
}

TEST_CASE("input validation") {
    AffineGaussianSystem sys2;
    sys2.A = {{1.0, 0.0}, {0.0, 1.0}};
    sys2.B = {{0.0}, {0.0}};
    sys2.c = {0.0, 0.0};
    sys2.sigma = {0.1, 0.1};
    sys2.actions = {{0.0}};
    CHECK_THROWS_AS((void)exact_dp(sys2, make_rect({-1.0, -1.0}, {1.0, 1.0}), 5, 1001,
                                   OracleMode::FixedAction),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)exact_dp(random_walk_1d(), unit_interval_safe(), 5, 10,
                                   OracleMode::FixedAction),
                    std::invalid_argument);
}
