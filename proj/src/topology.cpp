#include "ncl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ncl {

namespace {

// Complement components with either 6- or 26-connectivity.
int count_complement(const VoxelGrid& grid, int hw, bool diag, int* outer_components) {
  const int side = 2 * hw + 1;
  const long n = static_cast<long>(side) * side * side;
  std::vector<char> outside(n);
  auto lin = [&](int i, int j, int k) {
    return (static_cast<long>(i + hw) * side + (j + hw)) * side + (k + hw);
  };
  for (int i = -hw; i <= hw; ++i)
    for (int j = -hw; j <= hw; ++j)
      for (int k = -hw; k <= hw; ++k)
        outside[lin(i, j, k)] = grid.node_at(i, j, k) < 0 ? 1 : 0;

  std::vector<int> label(n, -1);
  int count = 0, outer = 0;
  std::vector<long> stack;
  for (long start = 0; start < n; ++start) {
    if (!outside[start] || label[start] >= 0) continue;
    const int id = count++;
    bool touches_face = false;
    stack.assign(1, start);
    label[start] = id;
    while (!stack.empty()) {
      const long c = stack.back();
      stack.pop_back();
      const int k = static_cast<int>(c % side) - hw;
      const int j = static_cast<int>((c / side) % side) - hw;
      const int i = static_cast<int>(c / (static_cast<long>(side) * side)) - hw;
      if (std::abs(i) == hw || std::abs(j) == hw || std::abs(k) == hw) touches_face = true;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          for (int dk = -1; dk <= 1; ++dk) {
            const int manhattan = std::abs(di) + std::abs(dj) + std::abs(dk);
            if (manhattan == 0) continue;
            if (!diag && manhattan != 1) continue;
            const int ii = i + di, jj = j + dj, kk = k + dk;
            if (std::abs(ii) > hw || std::abs(jj) > hw || std::abs(kk) > hw) continue;
            const long nb = lin(ii, jj, kk);
            if (outside[nb] && label[nb] < 0) {
              label[nb] = id;
              stack.push_back(nb);
            }
          }
    }
    if (touches_face) ++outer;
  }
  if (outer_components) *outer_components = outer;
  return count;
}

}  // namespace

TopologyReport complement_components(const VoxelGrid& grid, double box_half_width) {
  const int hw = static_cast<int>(std::floor(box_half_width / grid.h));
  for (const auto& c : grid.nodes)
    if (std::abs(c[0]) >= hw || std::abs(c[1]) >= hw || std::abs(c[2]) >= hw)
      throw std::invalid_argument("box does not strictly contain the domain");

  TopologyReport rep;
  rep.h = grid.h;
  int outer = 0;
  rep.complement_components = count_complement(grid, hw, false, &outer);
  rep.j_observed = rep.complement_components - outer;
  const int alt = count_complement(grid, hw, true, nullptr);
  rep.connectivity_unresolved = alt != rep.complement_components;
  return rep;
}

namespace {

// Cells of the cubical complex live on the doubled lattice: the voxel at
// node (i,j,k) contributes all points (2i+a, 2j+b, 2k+c), a,b,c in {-1,0,1};
// the dimension of a cell is the number of zero offsets.
int64_t pack(int x, int y, int z) {
  const int64_t bias = 1 << 20;
  return ((static_cast<int64_t>(x) + bias) << 42) | ((static_cast<int64_t>(y) + bias) << 21) |
         (static_cast<int64_t>(z) + bias);
}

void unpack(int64_t key, int& x, int& y, int& z) {
  const int64_t bias = 1 << 20;
  x = static_cast<int>((key >> 42) & 0x1fffff) - bias;
  y = static_cast<int>((key >> 21) & 0x1fffff) - bias;
  z = static_cast<int>(key & 0x1fffff) - bias;
}

int cell_dim(int x, int y, int z) {
  return (x % 2 == 0) + (y % 2 == 0) + (z % 2 == 0);
}

std::unordered_set<int64_t> collect_cells(const VoxelGrid& grid) {
  std::unordered_set<int64_t> cells;
  cells.reserve(grid.nodes.size() * 32);
  for (const auto& c : grid.nodes)
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int d = -1; d <= 1; ++d)
          cells.insert(pack(2 * c[0] + a, 2 * c[1] + b, 2 * c[2] + d));
  return cells;
}

// GF(2) rank of a boundary matrix by column reduction (low-index pairing).
int gf2_rank(std::vector<std::vector<int>>& columns) {
  std::unordered_map<int, int> low_to_col;
  int rank = 0;
  std::vector<int> merged;
  for (size_t j = 0; j < columns.size(); ++j) {
    auto& col = columns[j];
    while (!col.empty()) {
      const int low = col.back();
      const auto it = low_to_col.find(low);
      if (it == low_to_col.end()) break;
      const auto& other = columns[it->second];
      merged.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(merged));
      col.swap(merged);
    }
    if (!col.empty()) {
      low_to_col.emplace(col.back(), static_cast<int>(j));
      ++rank;
    }
  }
  return rank;
}

}  // namespace

long euler_characteristic(const VoxelGrid& grid) {
  if (grid.count() == 0) throw std::invalid_argument("empty grid");
  long chi = 0;
  for (int64_t key : collect_cells(grid)) {
    int x, y, z;
    unpack(key, x, y, z);
    chi += cell_dim(x, y, z) % 2 == 0 ? 1 : -1;
  }
  return chi;
}

std::array<int, 3> betti_mod2(const VoxelGrid& grid) {
  if (grid.count() > 32 * 32 * 32)
    throw std::invalid_argument("betti computation guarded to <= 32^3 voxels");

  const auto cells = collect_cells(grid);

  // Stable ids per dimension, ordered by packed coordinate.
  std::array<std::vector<int64_t>, 4> by_dim;
  for (int64_t key : cells) {
    int x, y, z;
    unpack(key, x, y, z);
    by_dim[cell_dim(x, y, z)].push_back(key);
  }
  std::array<std::unordered_map<int64_t, int>, 4> ids;
  for (int d = 0; d <= 3; ++d) {
    std::sort(by_dim[d].begin(), by_dim[d].end());
    for (size_t i = 0; i < by_dim[d].size(); ++i) ids[d].emplace(by_dim[d][i], static_cast<int>(i));
  }

  std::array<int, 4> rank{};  // rank[d] = rank of boundary_d : C_d -> C_{d-1}
  for (int d = 1; d <= 3; ++d) {
    std::vector<std::vector<int>> columns;
    columns.reserve(by_dim[d].size());
    for (int64_t key : by_dim[d]) {
      int x, y, z;
      unpack(key, x, y, z);
      std::vector<int> col;
      const int coord[3] = {x, y, z};
      for (int axis = 0; axis < 3; ++axis) {
        if (coord[axis] % 2 != 0) continue;  // not spanned
        for (int s : {-1, 1}) {
          int f[3] = {x, y, z};
          f[axis] += s;
          col.push_back(ids[d - 1].at(pack(f[0], f[1], f[2])));
        }
      }
      std::sort(col.begin(), col.end());
      columns.push_back(std::move(col));
    }
    rank[d] = gf2_rank(columns);
  }

  std::array<int, 3> betti{};
  for (int d = 0; d < 3; ++d)
    betti[d] = static_cast<int>(by_dim[d].size()) - rank[d] - rank[d + 1];
  return betti;
}

}  // namespace ncl
