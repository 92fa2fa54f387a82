#include "ncl/sphere_mesh.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace ncl {

SphereMesh::SphereMesh(int rows) : rows_(rows), cols_(2 * rows) {
  if (rows < 4) throw std::invalid_argument("sphere mesh needs at least 4 rows");
  if (rows > kMaxRows) throw std::invalid_argument("sphere mesh exceeds size guard");
}

SphereMesh SphereMesh::with_pitch(double target_pitch) {
  if (target_pitch <= 0.0) throw std::invalid_argument("mesh pitch must be positive");
  const int rows = static_cast<int>(std::ceil(std::numbers::pi / target_pitch));
  if (rows > kMaxRows)
    throw std::runtime_error("required sphere-mesh pitch exceeds the size guard");
  return SphereMesh(std::max(rows, 4));
}

double SphereMesh::pitch() const { return std::numbers::pi / rows_; }

Vec3 SphereMesh::center(int cell) const {
  const int i = cell / cols_;
  const int j = cell % cols_;
  const double colat = (i + 0.5) * std::numbers::pi / rows_;
  const double az = (j + 0.5) * 2.0 * std::numbers::pi / cols_;
  const double s = std::sin(colat);
  return {s * std::cos(az), s * std::sin(az), std::cos(colat)};
}

void SphereMesh::neighbors(int cell, std::vector<int>& out) const {
  out.clear();
  const int i = cell / cols_;
  const int j = cell % cols_;
  out.push_back(index(i, (j + 1) % cols_));
  out.push_back(index(i, (j + cols_ - 1) % cols_));
  if (i > 0) out.push_back(index(i - 1, j));
  if (i + 1 < rows_) out.push_back(index(i + 1, j));
  // across-pole link keeps polar caps connected
  if (i == 0) out.push_back(index(0, (j + cols_ / 2) % cols_));
  if (i == rows_ - 1) out.push_back(index(i, (j + cols_ / 2) % cols_));
}

int label_free_components(const SphereMesh& mesh,
                          const std::function<bool(Vec3)>& free_cell,
                          std::vector<int>& labels) {
  const int n = mesh.cell_count();
  std::vector<char> free_flag(n);
  for (int c = 0; c < n; ++c) free_flag[c] = free_cell(mesh.center(c)) ? 1 : 0;

  labels.assign(n, -1);
  int count = 0;
  std::vector<int> stack, nbrs;
  for (int start = 0; start < n; ++start) {
    if (!free_flag[start] || labels[start] >= 0) continue;
    const int id = count++;
    stack.assign(1, start);
    labels[start] = id;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      mesh.neighbors(c, nbrs);
      for (int nb : nbrs) {
        if (free_flag[nb] && labels[nb] < 0) {
          labels[nb] = id;
          stack.push_back(nb);
        }
      }
    }
  }
  return count;
}

std::vector<ComponentDepth> component_depths(const SphereMesh& mesh,
                                             const std::vector<int>& labels,
                                             int count) {
  const int n = mesh.cell_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);

  using Item = std::pair<double, int>;  // (distance, cell)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

  std::vector<int> nbrs;
  for (int c = 0; c < n; ++c) {
    if (labels[c] < 0) continue;
    mesh.neighbors(c, nbrs);
    for (int nb : nbrs) {
      if (labels[nb] != labels[c]) {  // edge cell: non-free or other component
        dist[c] = 0.5 * mesh.pitch();
        heap.emplace(dist[c], c);
        break;
      }
    }
  }

  while (!heap.empty()) {
    auto [d, c] = heap.top();
    heap.pop();
    if (d > dist[c]) continue;
    mesh.neighbors(c, nbrs);
    for (int nb : nbrs) {
      if (labels[nb] != labels[c]) continue;
      const double nd = d + angle_between(mesh.center(c), mesh.center(nb));
      if (nd < dist[nb]) {
        dist[nb] = nd;
        heap.emplace(nd, nb);
      }
    }
  }

  std::vector<ComponentDepth> out(count);
  for (int c = 0; c < n; ++c) {
    const int id = labels[c];
    if (id < 0) continue;
    double d = dist[c];
    if (d == inf) d = std::numbers::pi;  // component with no edge (whole sphere free)
    if (d > out[id].arc + 1e-15 || out[id].cell < 0) {
      out[id].arc = d;
      out[id].cell = c;
    }
  }
  return out;
}

}  // namespace ncl
