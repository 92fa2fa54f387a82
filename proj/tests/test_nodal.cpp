#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ncl/eigensolve.hpp"
#include "ncl/nodal.hpp"

using namespace ncl;

namespace {

Spectrum solve_k(const VoxelGrid& g, int k, double tol = 1e-6) {
  GridLaplacianOperator op(g);
  SolveOptions opt;
  opt.k = k;
  opt.tol = tol;
  opt.max_iter = 2000;
  return smallest_eigenpairs(op, opt);
}

}  // namespace

TEST_CASE("trivial sign patterns") {
  SUBCASE("constant positive field on a connected grid") {
    const VoxelGrid g = voxelize(make_ball(1.0), 0.5);
    const NodalReport rep = nodal_domains(g, std::vector<double>(g.count(), 1.0));
    CHECK(rep.component_count() == 1);
    CHECK(rep.components[0].sign == 1);
    CHECK(rep.components[0].node_count == g.count());
    CHECK(rep.components[0].volume == doctest::Approx(g.count() * 0.125));
  }

  SUBCASE("two joined nodes with opposite signs") {
    const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}, {1, 0, 0}}, {});
    const NodalReport rep = nodal_domains(g, {1.0, -1.0});
    CHECK(rep.component_count() == 2);
    CHECK(interface_check(g, {1.0, -1.0}));
  }

  SUBCASE("identically zero field is rejected") {
    const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}}, {});
    CHECK_THROWS(nodal_domains(g, {0.0}));
  }

  SUBCASE("severed wall between same-sign halves: no shared interface") {
    const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}, {1, 0, 0}}, {{0, 1}});
    CHECK_FALSE(interface_check(g, {1.0, -1.0}));
    const NodalReport rep = nodal_domains(g, {1.0, 1.0});
    CHECK(rep.component_count() == 2);  // severed edge does not connect
  }
}

TEST_CASE("zero-band nodes join the nonpositive set") {
  const VoxelGrid g = grid_from_nodes(0.5, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {});
  // outer-most node (2,0,0) is the witness; give it the positive sign
  const NodalReport rep = nodal_domains(g, {-1.0, 1e-15, 1.0});
  CHECK(rep.component_count() == 2);
  CHECK(rep.signs[2] == 1);
  CHECK(rep.signs[1] == -1);  // within the zero band
  CHECK(rep.signs[0] == -1);
}

TEST_CASE("shell l=1 mode: two hemispheres touching the boundary") {
  const VoxelGrid g = voxelize(make_shell(1.0, 1.8), 1.0 / 15.0);
  const Spectrum s = solve_k(g, 3);
  REQUIRE(s.converged);

  const std::vector<double> psi2 = s.eigenvector(1);
  const NodalReport rep = nodal_domains(g, psi2);
  CHECK(rep.component_count() == 2);
  CHECK(interface_check(g, psi2));

  const NodalReport crep = containment_report(g, psi2, 2.0 / 15.0);
  CHECK_FALSE(crep.verdict);
  CHECK_FALSE(crep.courant_violation);
  CHECK_FALSE(rep.components[0].interior);
  CHECK_FALSE(rep.components[1].interior);

  SUBCASE("psi_1 is strictly positive after orientation") {
    const NodalReport r1 = nodal_domains(g, s.eigenvector(0));
    CHECK(r1.component_count() == 1);
    CHECK(r1.components[0].sign == 1);
  }

  SUBCASE("Courant bound for j = 1..3") {
    for (int j = 0; j < 3; ++j) {
      const NodalReport rj = nodal_domains(g, s.eigenvector(j));
      CHECK(rj.component_count() <= j + 1);
    }
  }

  SUBCASE("verdict invariant under sign flip") {
    std::vector<double> neg = psi2;
    for (double& v : neg) v = -v;
    const NodalReport a = containment_report(g, psi2, 2.0 / 15.0);
    const NodalReport b = containment_report(g, neg, 2.0 / 15.0);
    CHECK(a.verdict == b.verdict);
    CHECK(a.component_count() == b.component_count());
    CHECK(a.min_boundary_distance == doctest::Approx(b.min_boundary_distance));
  }
}

TEST_CASE("containment margin semantics") {
  // hand-built bar: negative cell in the middle, positive elsewhere —
  // 2 components, negative part interior but within one cell of the boundary
  std::vector<std::array<int, 3>> nodes;
  for (int i = -4; i <= 4; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = -1; k <= 1; ++k) nodes.push_back({i, j, k});
  const VoxelGrid g = grid_from_nodes(0.25, nodes, {});
  std::vector<double> psi(g.count());
  for (int n = 0; n < g.count(); ++n) {
    const auto& c = g.nodes[n];
    psi[n] = c[0] <= -3 ? -1.0 : 1.0;  // negative slab at one end
  }
  const NodalReport rep = nodal_domains(g, psi);
  REQUIRE(rep.component_count() == 2);

  // margin 0: the slab reaches |x| >= 1, so the radius rule alone fails it
  const NodalReport r0 = containment_report(g, psi, 0.0);
  CHECK_FALSE(r0.verdict);

  SUBCASE("monotone margin: pass at a implies pass at b < a") {
    // single negative node at the origin; its boundary distance is 0.5
    std::vector<double> inner(g.count(), 1.0);
    for (int n = 0; n < g.count(); ++n)
      if (g.nodes[n] == std::array<int, 3>{0, 0, 0}) inner[n] = -1.0;
    const NodalReport ra = containment_report(g, inner, 0.6);
    const NodalReport rb = containment_report(g, inner, 0.4);
    const NodalReport rc = containment_report(g, inner, 0.0);
    CHECK_FALSE(ra.verdict);
    CHECK(rb.verdict);
    CHECK(rb.min_boundary_distance == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rc.verdict);
    if (ra.verdict) CHECK(rb.verdict);
    if (rb.verdict) CHECK(rc.verdict);
  }
}

TEST_CASE("below-noise pockets are not nodal domains") {
  // a pocket peaking at 1e-9 of the maximum is solver noise
  const VoxelGrid g = grid_from_nodes(0.25, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {});
  const NodalReport rep = containment_report(g, {1.0, 1.0, -1e-9}, 0.0);
  CHECK(rep.component_count() == 2);
  CHECK(rep.significant_count == 1);
  CHECK_FALSE(rep.verdict);             // no significant negative domain
  CHECK_FALSE(rep.courant_violation);   // one domain does not violate Courant
}

TEST_CASE("courant violation flag when psi has too many pieces") {
  const VoxelGrid g =
      grid_from_nodes(0.25, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}}, {});
  const NodalReport rep = containment_report(g, {1.0, -1.0, 1.0, -1.0, 1.0}, 0.0);
  CHECK(rep.courant_violation);
  CHECK_FALSE(rep.verdict);
  CHECK(rep.component_count() == 5);  // alternating signs isolate every node
}
