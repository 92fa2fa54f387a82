#ifndef NCL_GRID_HPP
#define NCL_GRID_HPP

// Voxelization of a DomainSpec on the origin-anchored lattice h*Z^3 and the
// 7-point discrete Dirichlet Laplacian. Zero-thickness walls sever stencil
// edges; the Dirichlet zero absorbs anything outside the node set.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ncl/geometry.hpp"
#include "ncl/vec3.hpp"

namespace ncl {

class VoxelGrid {
 public:
  double h = 0.0;
  int box_half = 0;  // lattice indices range over [-box_half, box_half]
  bool resolution_warning = false;

  std::vector<std::array<int, 3>> nodes;                // lattice coordinates
  std::vector<std::array<int32_t, 2>> severed_edges;    // node index pairs

  int count() const { return static_cast<int>(nodes.size()); }
  int side() const { return 2 * box_half + 1; }

  Vec3 point(int node) const {
    const auto& c = nodes[node];
    return {c[0] * h, c[1] * h, c[2] * h};
  }

  // -1 when (i,j,k) is not an interior node (or outside the box).
  int32_t node_at(int i, int j, int k) const;

  // Unsevered lattice adjacency, CSR layout.
  const std::vector<int32_t>& adj_offsets() const { return adj_offsets_; }
  const std::vector<int32_t>& adj() const { return adj_; }

  int connected_components() const;

  friend VoxelGrid voxelize(const DomainSpec& spec, double h);
  friend VoxelGrid grid_from_nodes(double h, std::vector<std::array<int, 3>> nodes,
                                   std::vector<std::array<int32_t, 2>> severed);

 private:
  std::vector<int32_t> index_map_;  // dense lattice -> node index, -1 elsewhere
  std::vector<int32_t> adj_offsets_;
  std::vector<int32_t> adj_;
};

VoxelGrid voxelize(const DomainSpec& spec, double h);

// Assembles a grid from explicit node and severed-edge lists (tests, IO).
VoxelGrid grid_from_nodes(double h, std::vector<std::array<int, 3>> nodes,
                          std::vector<std::array<int32_t, 2>> severed);

struct SparseSymMatrix {
  int64_t order = 0;
  std::vector<int64_t> row_offsets;
  std::vector<int32_t> col_indices;
  std::vector<double> values;

  void apply(const double* x, double* y) const;
};

SparseSymMatrix assemble_laplacian(const VoxelGrid& grid);

// Per-node Euclidean distance to the nearest non-interior lattice point or
// severed-edge midpoint; exact on the half-spacing lattice.
std::vector<double> boundary_distance_field(const VoxelGrid& grid);

// Binary dumps: magic bytes, version byte, little-endian payload.
void write_grid(const VoxelGrid& grid, const std::string& path);
VoxelGrid read_grid(const std::string& path);
void write_matrix(const SparseSymMatrix& mat, const std::string& path);
SparseSymMatrix read_matrix(const std::string& path);
void write_matrix_triplets(const SparseSymMatrix& mat, const std::string& path);

}  // namespace ncl

#endif
