#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "ncl/eigensolve.hpp"
#include "ncl/grid.hpp"

using namespace ncl;

namespace {

Eigen::MatrixXd dense_of(const SparseSymMatrix& m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.order, m.order);
  for (int64_t i = 0; i < m.order; ++i)
    for (int64_t e = m.row_offsets[i]; e < m.row_offsets[i + 1]; ++e)
      a(i, m.col_indices[e]) = m.values[e];
  return a;
}

double smallest_dense_eigenvalue(const VoxelGrid& grid) {
  const SparseSymMatrix m = assemble_laplacian(grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(m));
  return es.eigenvalues()(0);
}

}  // namespace

TEST_CASE("ball voxel counts") {
  const DomainSpec ball = make_ball(1.0);
  CHECK(voxelize(ball, 0.5).count() == 27);
  const VoxelGrid star = voxelize(ball, 0.9);
  CHECK(star.count() == 7);
  CHECK(star.node_at(0, 0, 0) >= 0);
  CHECK(star.node_at(1, 1, 0) < 0);
  CHECK(star.connected_components() == 1);
}

TEST_CASE("empty grid is an error, warning flag on coarse h") {
  CHECK_THROWS(voxelize(make_shell(1.0, 1.01), 0.5));
  CHECK(voxelize(make_ball(1.0), 0.9).resolution_warning);       // h > R/2
  CHECK_FALSE(voxelize(make_ball(1.0), 0.4).resolution_warning);
}

TEST_CASE("severed edges near the wall") {
  SpherePointSet pts;
  pts.centers = {{0, 0, 1}};
  const DomainSpec f = make_fournais(pts, 0.2, 1.8);
  const VoxelGrid g = voxelize(f, 0.25);

  auto severed = [&](int32_t a, int32_t b) {
    for (const auto& e : g.severed_edges)
      if ((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a)) return true;
    return false;
  };

  // vertical edge through the room at the north pole: crossing but not severed
  const int32_t below = g.node_at(0, 0, 3);   // z = 0.75
  const int32_t above = g.node_at(0, 0, 5);   // z = 1.25 (z=1.0 is on the wall sphere)
  REQUIRE(below >= 0);
  const int32_t mid = g.node_at(0, 0, 4);     // z = 1.00, inside the room
  REQUIRE(mid >= 0);
  CHECK_FALSE(severed(below, mid));
  REQUIRE(above >= 0);
  CHECK_FALSE(severed(mid, above));

  // equatorial radial edge crosses the bare wall: severed
  const int32_t in = g.node_at(3, 1, 0);      // (0.75, 0.25, 0), inside B_1
  const int32_t out = g.node_at(4, 1, 0);     // (1.00, 0.25, 0), in the shell
  REQUIRE(in >= 0);
  REQUIRE(out >= 0);
  CHECK(severed(in, out));
  CHECK_FALSE(g.severed_edges.empty());

  for (const auto& e : g.severed_edges) {
    const auto &a = g.nodes[e[0]], &b = g.nodes[e[1]];
    const int d = std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]);
    CHECK(d == 1);  // severed edges join lattice-adjacent nodes
  }
}

TEST_CASE("laplacian assembly") {
  SUBCASE("single node") {
    const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}}, {});
    const SparseSymMatrix m = assemble_laplacian(g);
    CHECK(m.order == 1);
    CHECK(m.values.size() == 1);
    CHECK(m.values[0] == doctest::Approx(6.0 / 0.25).epsilon(1e-14));
  }

  SUBCASE("star grid = (1/h^2)(6I - star adjacency)") {
    const double h = 0.9;
    const VoxelGrid g = voxelize(make_ball(1.0), h);
    const Eigen::MatrixXd a = dense_of(assemble_laplacian(g));
    CHECK(a.rows() == 7);
    const double inv_h2 = 1.0 / (h * h);
    const int center = g.node_at(0, 0, 0);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        if (i == j)
          CHECK(a(i, j) == doctest::Approx(6.0 * inv_h2));
        else if (i == center || j == center)
          CHECK(a(i, j) == doctest::Approx(-inv_h2));
        else
          CHECK(a(i, j) == 0.0);
      }
  }

  SUBCASE("severed edge keeps diagonals, drops coupling") {
    const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}, {1, 0, 0}}, {{0, 1}});
    const Eigen::MatrixXd a = dense_of(assemble_laplacian(g));
    CHECK(a(0, 0) == doctest::Approx(24.0));
    CHECK(a(1, 1) == doctest::Approx(24.0));
    CHECK(a(0, 1) == 0.0);
    CHECK(a(1, 0) == 0.0);
  }

  SUBCASE("symmetry and Gershgorin") {
    const VoxelGrid g = voxelize(make_ball(1.0), 0.3);
    const SparseSymMatrix m = assemble_laplacian(g);
    const Eigen::MatrixXd a = dense_of(m);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK(es.eigenvalues()(0) >= 0.0);
    CHECK(es.eigenvalues()(a.rows() - 1) <= 12.0 / (0.3 * 0.3) + 1e-9);
    CHECK(es.eigenvalues()(0) > 0.0);  // positive definite on a connected grid
  }
}

TEST_CASE("refinement convergence toward pi^2, first-order boundary error") {
  // boundary-by-omission error dominates and is first order in h, so the
  // observed eigenvalue error shrinks by roughly 2x per halving
  const double exact = std::numbers::pi * std::numbers::pi;
  double prev_err = 0.0;
  int step = 0;
  for (double h : {0.2, 0.1, 0.05}) {
    const VoxelGrid g = voxelize(make_ball(1.0), h);
    SolveOptions opt;
    opt.k = 1;
    opt.tol = 1e-8;
    opt.max_iter = 2000;
    GridLaplacianOperator op(g);
    const double lam = smallest_eigenpairs(op, opt).eigenvalues[0];
    const double err = std::abs(lam - exact);
    if (step > 0) CHECK(err < prev_err / 1.7);
    prev_err = err;
    ++step;
  }
  CHECK(prev_err < 0.035 * exact);
}

TEST_CASE("boundary distance field") {
  SUBCASE("origin of Ball(1)") {
    const VoxelGrid g = voxelize(make_ball(1.0), 0.1);
    const auto d = boundary_distance_field(g);
    const int32_t origin = g.node_at(0, 0, 0);
    REQUIRE(origin >= 0);
    CHECK(d[origin] == doctest::Approx(0.9).epsilon(0.12));
    for (int n = 0; n < g.count(); ++n) {
      CHECK(d[n] >= 0.0);
      CHECK(d[n] <= 1.0);
    }
  }

  SUBCASE("severed edge acts as a wall next door") {
    const VoxelGrid g =
        grid_from_nodes(0.5, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1}});
    const auto d = boundary_distance_field(g);
    CHECK(d[0] <= 0.25 + 1e-12);
    CHECK(d[1] <= 0.25 + 1e-12);
  }
}

TEST_CASE("binary IO round-trips") {
  SpherePointSet pts;
  pts.centers = {{0, 0, 1}};
  const VoxelGrid g = voxelize(make_fournais(pts, 0.2, 1.8), 0.25);
  const std::string dir = std::filesystem::temp_directory_path() / "ncl_io_test";
  std::filesystem::create_directories(dir);

  write_grid(g, dir + "/grid.bin");
  const VoxelGrid back = read_grid(dir + "/grid.bin");
  CHECK(back.h == g.h);
  CHECK(back.nodes == g.nodes);
  CHECK(back.severed_edges == g.severed_edges);
  CHECK(back.count() == g.count());
  CHECK(back.node_at(0, 0, 0) == g.node_at(0, 0, 0));

  const SparseSymMatrix m = assemble_laplacian(g);
  write_matrix(m, dir + "/mat.bin");
  const SparseSymMatrix mb = read_matrix(dir + "/mat.bin");
  CHECK(mb.order == m.order);
  CHECK(mb.row_offsets == m.row_offsets);
  CHECK(mb.col_indices == m.col_indices);
  CHECK(mb.values == m.values);

  write_matrix_triplets(m, dir + "/mat.txt");
  std::ifstream txt(dir + "/mat.txt");
  std::string header;
  std::getline(txt, header);
  CHECK(header == "# row col value");
  long r = -1, c = -1;
  double v = 0.0;
  CHECK(bool(txt >> r >> c >> v));
  CHECK(r == 0);
  CHECK(v == m.values[0]);
}
