#include "ncl/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncl {

namespace {

std::vector<int> classify_signs(const VoxelGrid& grid, const std::vector<double>& psi,
                                double zero_band_rel, bool* flipped) {
  double max_abs = 0.0;
  for (double v : psi) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) throw std::invalid_argument("eigenfunction is identically zero");
  const double band = zero_band_rel * max_abs;

  std::vector<int> signs(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) signs[i] = psi[i] > band ? +1 : -1;

  // Witness: max-radius node, lexicographic lattice tie-break.
  int witness = 0;
  for (int n = 1; n < grid.count(); ++n) {
    const auto &a = grid.nodes[n], &b = grid.nodes[witness];
    const long ra = static_cast<long>(a[0]) * a[0] + static_cast<long>(a[1]) * a[1] +
                    static_cast<long>(a[2]) * a[2];
    const long rb = static_cast<long>(b[0]) * b[0] + static_cast<long>(b[1]) * b[1] +
                    static_cast<long>(b[2]) * b[2];
    if (ra > rb || (ra == rb && a < b)) witness = n;
  }
  const bool flip = signs[witness] < 0;
  if (flip)
    for (size_t i = 0; i < psi.size(); ++i)
      signs[i] = std::abs(psi[i]) <= band ? -1 : -signs[i];
  if (flipped) *flipped = flip;
  return signs;
}

}  // namespace

NodalReport nodal_domains(const VoxelGrid& grid, const std::vector<double>& psi,
                          double zero_band_rel) {
  if (static_cast<int>(psi.size()) != grid.count())
    throw std::invalid_argument("eigenfunction size does not match grid");

  NodalReport rep;
  rep.signs = classify_signs(grid, psi, zero_band_rel, &rep.flipped);

  const auto& offsets = grid.adj_offsets();
  const auto& adj = grid.adj();

  rep.labels.assign(grid.count(), -1);
  std::vector<int> stack;
  for (int s = 0; s < grid.count(); ++s) {
    if (rep.labels[s] >= 0) continue;
    const int id = static_cast<int>(rep.components.size());
    NodalComponent comp;
    comp.sign = rep.signs[s];
    comp.interior = true;
    stack.assign(1, s);
    rep.labels[s] = id;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      ++comp.node_count;
      comp.peak = std::max(comp.peak, std::abs(psi[c]));
      if (offsets[c + 1] - offsets[c] < 6) comp.interior = false;
      for (int32_t e = offsets[c]; e < offsets[c + 1]; ++e) {
        const int nb = adj[e];
        if (rep.labels[nb] < 0 && rep.signs[nb] == comp.sign) {
          rep.labels[nb] = id;
          stack.push_back(nb);
        }
      }
    }
    comp.volume = comp.node_count * grid.h * grid.h * grid.h;
    rep.components.push_back(comp);
  }

  double global_peak = 0.0;
  for (const auto& c : rep.components) global_peak = std::max(global_peak, c.peak);
  for (const auto& c : rep.components)
    if (c.peak >= kSignificanceRel * global_peak) ++rep.significant_count;
  return rep;
}

NodalReport containment_report(const VoxelGrid& grid, const std::vector<double>& psi2,
                               double margin, double zero_band_rel) {
  NodalReport rep = nodal_domains(grid, psi2, zero_band_rel);
  rep.margin = margin;

  if (rep.significant_count != 2) {
    rep.verdict = false;
    rep.courant_violation = rep.significant_count > 2;
    return rep;
  }

  // Below-noise components are spectator pockets: skip them in the scan.
  double global_peak = 0.0;
  for (const auto& c : rep.components) global_peak = std::max(global_peak, c.peak);
  const double floor = kSignificanceRel * global_peak;

  const std::vector<double> bdist = boundary_distance_field(grid);
  double min_dist = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int n = 0; n < grid.count(); ++n) {
    if (rep.signs[n] > 0) continue;
    if (rep.components[rep.labels[n]].peak < floor) continue;
    min_dist = std::min(min_dist, bdist[n]);
    if (!(bdist[n] > margin)) ok = false;
    if (!(norm(grid.point(n)) < 1.0 - margin)) ok = false;  // strengthened: inside B_1
  }
  rep.min_boundary_distance = std::isfinite(min_dist) ? min_dist : 0.0;
  rep.verdict = ok && std::isfinite(min_dist);
  return rep;
}

bool interface_check(const VoxelGrid& grid, const std::vector<double>& psi2,
                     double zero_band_rel) {
  const NodalReport rep = nodal_domains(grid, psi2, zero_band_rel);
  if (rep.component_count() != 2) return false;
  const auto& offsets = grid.adj_offsets();
  const auto& adj = grid.adj();
  for (int n = 0; n < grid.count(); ++n)
    for (int32_t e = offsets[n]; e < offsets[n + 1]; ++e)
      if (rep.signs[n] != rep.signs[adj[e]]) return true;
  return false;
}

}  // namespace ncl
