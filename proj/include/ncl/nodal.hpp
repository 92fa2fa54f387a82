#ifndef NCL_NODAL_HPP
#define NCL_NODAL_HPP

// Nodal domains of a discrete eigenfunction and the compact-containment
// check for the nonpositive set of psi_2: every nonpositive node must keep
// a margin to the domain boundary and stay inside the unit ball.

#include <vector>

#include "ncl/grid.hpp"

namespace ncl {

struct NodalComponent {
  int sign = 0;  // +1 or -1
  long node_count = 0;
  double volume = 0.0;     // node_count * h^3
  double peak = 0.0;       // max |psi| over the component
  bool interior = false;   // no node touches the discrete boundary
};

// Components peaking below this fraction of the global maximum are solver
// noise (pockets where psi sits at the residual floor), not nodal domains.
inline constexpr double kSignificanceRel = 1e-5;

struct NodalReport {
  std::vector<NodalComponent> components;
  std::vector<int> labels;  // per node
  std::vector<int> signs;   // per node, after zero-band and orientation
  bool flipped = false;     // orientation normalization negated psi
  int significant_count = 0;  // components with peak >= kSignificanceRel * max

  // containment fields (set by containment_report)
  double min_boundary_distance = 0.0;  // over the nonpositive set
  double margin = 0.0;
  bool verdict = false;
  bool courant_violation = false;

  int component_count() const { return static_cast<int>(components.size()); }
};

// Flood fill over same-sign unsevered adjacency. Nodes with
// |psi| <= zero_band_rel * max|psi| join the nonpositive set. The component
// holding the max-radius node (lexicographic tie-break) is oriented positive.
NodalReport nodal_domains(const VoxelGrid& grid, const std::vector<double>& psi,
                          double zero_band_rel = 1e-12);

NodalReport containment_report(const VoxelGrid& grid, const std::vector<double>& psi2,
                               double margin, double zero_band_rel = 1e-12);

// True iff some unsevered edge joins a positive node to a negative one,
// i.e. the two nodal domains actually meet inside the domain.
bool interface_check(const VoxelGrid& grid, const std::vector<double>& psi2,
                     double zero_band_rel = 1e-12);

}  // namespace ncl

#endif
