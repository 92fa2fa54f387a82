#ifndef NCL_ORACLES_HPP
#define NCL_ORACLES_HPP

// Reference eigenvalues for the 3D ball and spherical shell, plus the
// outer-radius window in which the ball/shell spectra interleave as
// lambda_1(ball) < lambda_1(shell) < lambda_2(ball).

#include <utility>

namespace ncl::oracles {

enum class BallMode { Ground, FirstExcited };

struct OracleValue {
  double value = 0.0;          // 1/length^2
  bool closed_form = true;     // false => certified bisection
  double bracket_width = 0.0;  // certified bracket for bisection results
};

// First positive root of tan(x) = x (first zero of the order-1 spherical
// Bessel function), certified by bisection. Approximately 4.493409458.
double tan_x_eq_x_root();

// Dirichlet eigenvalues of the ball of radius R.
// Ground: pi^2/R^2. First excited: (tan-root)^2 / R^2, 3-fold degenerate.
OracleValue ball_eigenvalue(double radius, BallMode mode);

// Ground Dirichlet eigenvalue of the shell r1 < |x| < r2: pi^2/(r2-r1)^2.
OracleValue shell_ground_eigenvalue(double r1, double r2);

// Open interval of outer radii R for which
// lambda_1(B_{r1}) < lambda_1(A_{r1,R}) < lambda_2(B_{r1}).
std::pair<double, double> choose_R_window(double r1);

}  // namespace ncl::oracles

#endif
