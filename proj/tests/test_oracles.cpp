#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncl/oracles.hpp"

using namespace ncl::oracles;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("tan x = x root is certified") {
  const double x = tan_x_eq_x_root();
  CHECK(x == doctest::Approx(4.493409458).epsilon(1e-9));
  CHECK(std::abs(std::sin(x) - x * std::cos(x)) < 1e-10);
}

TEST_CASE("ball eigenvalues") {
  CHECK(ball_eigenvalue(1.0, BallMode::Ground).value ==
        doctest::Approx(9.869604401).epsilon(1e-9));
  CHECK(ball_eigenvalue(2.0, BallMode::Ground).value ==
        doctest::Approx(2.467401100).epsilon(1e-9));
  const OracleValue excited = ball_eigenvalue(1.0, BallMode::FirstExcited);
  CHECK(excited.value == doctest::Approx(20.190728557).epsilon(1e-9));
  CHECK_FALSE(excited.closed_form);
  CHECK(excited.bracket_width <= 1e-10 * excited.value);
  CHECK(ball_eigenvalue(1.0, BallMode::Ground).closed_form);
}

TEST_CASE("shell ground eigenvalue") {
  CHECK(shell_ground_eigenvalue(1.0, 1.8).value ==
        doctest::Approx(15.421256876).epsilon(1e-9));
  CHECK(shell_ground_eigenvalue(1.0, 2.0).value ==
        doctest::Approx(9.869604401).epsilon(1e-9));
  // gap-scaling: doubling both radii doubles the gap, quartering the value
  CHECK(shell_ground_eigenvalue(2.0, 3.6).value ==
        doctest::Approx(0.25 * shell_ground_eigenvalue(1.0, 1.8).value).epsilon(1e-12));
  CHECK(shell_ground_eigenvalue(2.0, 3.6).value == doctest::Approx((kPi / 1.6) * (kPi / 1.6)));
}

TEST_CASE("outer-radius window") {
  const auto [lo, hi] = choose_R_window(1.0);
  CHECK(lo == doctest::Approx(1.6991569).epsilon(1e-6));  // 1 + pi/x_1
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-12));

  // interior point keeps the strict three-way ordering
  const double l1b = ball_eigenvalue(1.0, BallMode::Ground).value;
  const double l2b = ball_eigenvalue(1.0, BallMode::FirstExcited).value;
  for (double r : {lo + 1e-6, 1.75, 1.8, 1.9, hi - 1e-6}) {
    const double ls = shell_ground_eigenvalue(1.0, r).value;
    CHECK(l1b < ls);
    CHECK(ls < l2b);
  }

  // endpoint equalities within 1e-9
  CHECK(std::abs(shell_ground_eigenvalue(1.0, hi).value - l1b) < 1e-9);
  CHECK(std::abs(shell_ground_eigenvalue(1.0, lo).value - l2b) < 1e-6 * l2b);
}

TEST_CASE("dilation scaling law 1/s^2") {
  for (double s : {2.0, 0.5}) {
    const double inv = 1.0 / (s * s);
    CHECK(ball_eigenvalue(s, BallMode::Ground).value ==
          doctest::Approx(inv * ball_eigenvalue(1.0, BallMode::Ground).value).epsilon(1e-12));
    CHECK(ball_eigenvalue(s, BallMode::FirstExcited).value ==
          doctest::Approx(inv * ball_eigenvalue(1.0, BallMode::FirstExcited).value)
              .epsilon(1e-12));
    CHECK(shell_ground_eigenvalue(s, 1.8 * s).value ==
          doctest::Approx(inv * shell_ground_eigenvalue(1.0, 1.8).value).epsilon(1e-12));
  }
  // the window scales linearly with the inner radius
  const auto [lo1, hi1] = choose_R_window(1.0);
  const auto [lo2, hi2] = choose_R_window(2.0);
  CHECK(lo2 == doctest::Approx(2.0 * lo1).epsilon(1e-12));
  CHECK(hi2 == doctest::Approx(2.0 * hi1).epsilon(1e-12));
}
