#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "ncl/eigensolve.hpp"

using namespace ncl;

namespace {

Eigen::MatrixXd dense_of(const SparseSymMatrix& m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.order, m.order);
  for (int64_t i = 0; i < m.order; ++i)
    for (int64_t e = m.row_offsets[i]; e < m.row_offsets[i + 1]; ++e)
      a(i, m.col_indices[e]) = m.values[e];
  return a;
}

// random connected grid: start from the origin, grow by random adjacent cells
VoxelGrid random_connected_grid(std::mt19937_64& rng, int target) {
  std::set<std::array<int, 3>> cells{{0, 0, 0}};
  std::vector<std::array<int, 3>> list{{0, 0, 0}};
  std::uniform_int_distribution<int> pick_axis(0, 2), pick_sign(0, 1);
  while (static_cast<int>(cells.size()) < target) {
    const auto base = list[std::uniform_int_distribution<size_t>(0, list.size() - 1)(rng)];
    auto next = base;
    next[pick_axis(rng)] += pick_sign(rng) ? 1 : -1;
    if (std::abs(next[0]) > 6 || std::abs(next[1]) > 6 || std::abs(next[2]) > 6) continue;
    if (cells.insert(next).second) list.push_back(next);
  }
  return grid_from_nodes(0.25, list, {});
}

}  // namespace

TEST_CASE("1x1 matrix") {
  const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}}, {});
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = 1;
  const Spectrum s = smallest_eigenpairs(op, opt);
  CHECK(s.converged);
  CHECK(s.eigenvalues[0] == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(std::abs(s.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("order < k is an error") {
  const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}, {1, 0, 0}}, {});
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = 3;
  CHECK_THROWS(smallest_eigenpairs(op, opt));
}

TEST_CASE("star graph ground state (6 - sqrt 6)/h^2") {
  const double h = 0.9;
  const VoxelGrid g = voxelize(make_ball(1.0), h);
  REQUIRE(g.count() == 7);
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = 1;
  opt.tol = 1e-10;
  const Spectrum s = smallest_eigenpairs(op, opt);
  const double expected = (6.0 - std::sqrt(6.0)) / (h * h);
  CHECK(s.converged);
  CHECK(std::abs(s.eigenvalues[0] - expected) < 1e-8 * expected);
}

TEST_CASE("ball spectrum: ground within 3.5%, excited cluster within 4%") {
  const VoxelGrid g = voxelize(make_ball(1.0), 0.05);
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = 4;  // ground + the full l=1 triple
  opt.tol = 1e-6;
  opt.max_iter = 1500;
  const Spectrum s = smallest_eigenpairs(op, opt);
  REQUIRE(s.converged);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  // boundary-by-omission is first order: the error at h = 0.05 is ~3%
  CHECK(std::abs(s.eigenvalues[0] - pi2) < 0.035 * pi2);
  for (int j = 1; j <= 3; ++j)
    CHECK(std::abs(s.eigenvalues[j] - 20.190728557) < 0.04 * 20.190728557);

  SUBCASE("lambda_2 of the ball is not simple") {
    CHECK_FALSE(simplicity_report(s, 2, opt.tol).simple);
  }

  SUBCASE("residuals, orthogonality, Rayleigh consistency") {
    for (int j = 0; j < opt.k; ++j) {
      CHECK(s.residuals[j] <= opt.tol * s.eigenvalues[opt.k - 1] * 1.000001);
      Eigen::VectorXd av(g.count());
      op.apply(s.eigenvectors.col(j).data(), av.data());
      const double rq = s.eigenvectors.col(j).dot(av);
      CHECK(std::abs(rq - s.eigenvalues[j]) <= 10.0 * s.residuals[j] + 1e-12);
      for (int i = 0; i < j; ++i)
        CHECK(std::abs(s.eigenvectors.col(i).dot(s.eigenvectors.col(j))) < 1e-8);
    }
    for (int j = 1; j < opt.k; ++j) CHECK(s.eigenvalues[j - 1] <= s.eigenvalues[j]);
  }
}

TEST_CASE("simplicity report") {
  Spectrum s;
  s.eigenvalues = {10.0, 10.0, 15.0};
  CHECK_FALSE(simplicity_report(s, 1, 1e-6).simple);  // identical values
  CHECK(simplicity_report(s, 2, 1e-6).simple);
  CHECK(simplicity_report(s, 2, 1e-6).gap == doctest::Approx(5.0));
  CHECK_THROWS(simplicity_report(s, 3, 1e-6));  // needs lambda_4
}

TEST_CASE("shell lambda_1 is simple") {
  const VoxelGrid g = voxelize(make_shell(1.0, 1.8), 0.1);
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = 2;
  opt.max_iter = 1200;
  const Spectrum s = smallest_eigenpairs(op, opt);
  REQUIRE(s.converged);
  CHECK(simplicity_report(s, 1, opt.tol).simple);
}

TEST_CASE("domain monotonicity of Dirichlet eigenvalues") {
  const VoxelGrid small = voxelize(make_ball(0.8), 0.1);
  const VoxelGrid big = voxelize(make_ball(1.0), 0.1);
  SolveOptions opt;
  opt.k = 2;
  opt.max_iter = 1200;
  GridLaplacianOperator op_small(small), op_big(big);
  const Spectrum ss = smallest_eigenpairs(op_small, opt);
  const Spectrum sb = smallest_eigenpairs(op_big, opt);
  REQUIRE(ss.converged);
  REQUIRE(sb.converged);
  CHECK(ss.eigenvalues[0] >= sb.eigenvalues[0]);
  CHECK(ss.eigenvalues[1] >= sb.eigenvalues[1]);
}

TEST_CASE("dense-oracle equivalence on 50 random connected grids") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(8, 500);
  for (int trial = 0; trial < 50; ++trial) {
    const VoxelGrid g = random_connected_grid(rng, size(rng));
    const SparseSymMatrix m = assemble_laplacian(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(m));

    SolveOptions opt;
    opt.k = std::min<int>(3, g.count() / 3);
    if (opt.k < 1) opt.k = 1;
    opt.tol = 1e-10;
    opt.max_iter = 4000;
    GridLaplacianOperator op(g);
    const Spectrum s = smallest_eigenpairs(op, opt);
    REQUIRE(s.converged);
    for (int j = 0; j < opt.k; ++j) {
      const double exact = es.eigenvalues()(j);
      CHECK(std::abs(s.eigenvalues[j] - exact) <= 1e-8 * std::abs(exact));
    }
  }
}

TEST_CASE("determinism: fixed seed gives bit-identical eigenvalues") {
  const VoxelGrid g = voxelize(make_ball(1.0), 0.15);
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = 3;
  opt.seed = 12345;
  const Spectrum a = smallest_eigenpairs(op, opt);
  const Spectrum b = smallest_eigenpairs(op, opt);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (size_t j = 0; j < a.eigenvalues.size(); ++j)
    CHECK(a.eigenvalues[j] == b.eigenvalues[j]);  // bitwise
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shift-invert path agrees with the default") {
  const VoxelGrid g = voxelize(make_ball(1.0), 0.2);
  GridLaplacianOperator op(g);
  SolveOptions plain;
  plain.k = 2;
  plain.tol = 1e-9;
  plain.max_iter = 3000;
  SolveOptions si = plain;
  si.shift_invert = true;
  const Spectrum a = smallest_eigenpairs(op, plain);
  const Spectrum b = smallest_eigenpairs(op, si);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  for (int j = 0; j < 2; ++j)
    CHECK(a.eigenvalues[j] == doctest::Approx(b.eigenvalues[j]).epsilon(1e-7));
}
