#ifndef NCL_SPHERE_MESH_HPP
#define NCL_SPHERE_MESH_HPP

// Latitude/longitude cell mesh on the unit sphere, used to count the
// connected components the sheet web cuts the free sphere into, and to
// place the fireman's poles deep inside those components.

#include <functional>
#include <vector>

#include "ncl/vec3.hpp"

namespace ncl {

class SphereMesh {
 public:
  // pitch = pi / rows; azimuth resolution matches at the equator.
  explicit SphereMesh(int rows);

  // Largest mesh admissible under the memory guard whose pitch does not
  // exceed `target_pitch`. Throws if the guard forces a coarser mesh.
  static SphereMesh with_pitch(double target_pitch);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cell_count() const { return rows_ * cols_; }
  double pitch() const;

  int index(int i, int j) const { return i * cols_ + j; }
  Vec3 center(int cell) const;

  // 4-neighbourhood with azimuthal wrap; rows at the poles additionally
  // connect to the antipodal column so caps stay connected.
  void neighbors(int cell, std::vector<int>& out) const;

  static constexpr int kMaxRows = 2048;

 private:
  int rows_;
  int cols_;
};

// Labels cells where `free_cell` is true; returns component count.
// Labels are 0..count-1 in first-encounter (row-major) order; non-free
// cells get -1.
int label_free_components(const SphereMesh& mesh,
                          const std::function<bool(Vec3)>& free_cell,
                          std::vector<int>& labels);

struct ComponentDepth {
  int cell = -1;       // deepest cell, lexicographic tie-break
  double arc = 0.0;    // geodesic distance to the component edge
};

// Multi-source Dijkstra from the component edges, geodesic edge weights.
std::vector<ComponentDepth> component_depths(const SphereMesh& mesh,
                                             const std::vector<int>& labels,
                                             int count);

}  // namespace ncl

#endif
