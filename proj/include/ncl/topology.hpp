#ifndef NCL_TOPOLOGY_HPP
#define NCL_TOPOLOGY_HPP

// Voxel-level topology reports: complement components inside a bounding box
// (hole count J), Euler characteristic of the voxel solid, and mod-2 Betti
// numbers of its cubical complex.

#include <array>

#include "ncl/grid.hpp"

namespace ncl {

struct TopologyReport {
  int complement_components = 0;  // including the outer region
  int j_observed = 0;             // bounded holes
  long euler = 0;
  bool has_euler = false;
  int b0 = -1, b1 = -1, b2 = -1;  // -1 when not computed
  double h = 0.0;
  // 6- and 26-connectivity disagree on the complement count at this h.
  bool connectivity_unresolved = false;
};

// Flood fill over non-interior lattice points of the cube of the given
// half-width. The component touching the box face is the outer region.
TopologyReport complement_components(const VoxelGrid& grid, double box_half_width);

// V - E + F - C of the cubical complex whose 3-cells are the voxels
// centered at interior nodes.
long euler_characteristic(const VoxelGrid& grid);

// Ranks of the GF(2) cubical boundary maps; guarded to <= 32^3 voxels.
std::array<int, 3> betti_mod2(const VoxelGrid& grid);

}  // namespace ncl

#endif
