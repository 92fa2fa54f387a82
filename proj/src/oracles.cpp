#include "ncl/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncl::oracles {

namespace {

// sin(x) - x cos(x); same zeros as tan(x) = x but finite on the bracket.
double spherical_j1_numerator(double x) { return std::sin(x) - x * std::cos(x); }

}  // namespace

double tan_x_eq_x_root() {
  double lo = std::numbers::pi / 2.0 + 0.1;
  double hi = 1.49 * std::numbers::pi;
  if (spherical_j1_numerator(lo) * spherical_j1_numerator(hi) >= 0.0)
    throw std::logic_error("bisection bracket does not straddle the root");
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (spherical_j1_numerator(lo) * spherical_j1_numerator(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

OracleValue ball_eigenvalue(double radius, BallMode mode) {
  if (radius <= 0.0) throw std::invalid_argument("ball radius must be positive");
  if (mode == BallMode::Ground) {
    const double pi = std::numbers::pi;
    return {pi * pi / (radius * radius), true, 0.0};
  }
  const double x = tan_x_eq_x_root();
  return {x * x / (radius * radius), false, 1e-12 * x * x};
}

OracleValue shell_ground_eigenvalue(double r1, double r2) {
  if (!(0.0 < r1 && r1 < r2))
    throw std::invalid_argument("shell radii must satisfy 0 < r1 < r2");
  const double gap = r2 - r1;
  const double pi = std::numbers::pi;
  return {pi * pi / (gap * gap), true, 0.0};
}

std::pair<double, double> choose_R_window(double r1) {
  if (r1 <= 0.0) throw std::invalid_argument("inner radius must be positive");
  // pi^2/(R-r1)^2 < lambda_2(B_r1) = x^2/r1^2  <=>  R > r1 + pi r1 / x
  // pi^2/(R-r1)^2 > lambda_1(B_r1) = pi^2/r1^2 <=>  R < 2 r1
  const double x = tan_x_eq_x_root();
  return {r1 + std::numbers::pi * r1 / x, 2.0 * r1};
}

}  // namespace ncl::oracles
