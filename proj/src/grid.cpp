#include "ncl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

namespace ncl {

namespace {

constexpr int kDI[6] = {1, -1, 0, 0, 0, 0};
constexpr int kDJ[6] = {0, 0, 1, -1, 0, 0};
constexpr int kDK[6] = {0, 0, 0, 0, 1, -1};

long dense_index(int i, int j, int k, int half, int side) {
  return (static_cast<long>(i + half) * side + (j + half)) * side + (k + half);
}

void build_topology(VoxelGrid& g, std::vector<int32_t>& index_map,
                    std::vector<int32_t>& offsets, std::vector<int32_t>& adj) {
  const int side = g.side();
  index_map.assign(static_cast<long>(side) * side * side, -1);
  for (int n = 0; n < g.count(); ++n) {
    const auto& c = g.nodes[n];
    index_map[dense_index(c[0], c[1], c[2], g.box_half, side)] = n;
  }

  std::set<std::pair<int32_t, int32_t>> severed;
  for (const auto& e : g.severed_edges)
    severed.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});

  offsets.assign(g.count() + 1, 0);
  adj.clear();
  for (int n = 0; n < g.count(); ++n) {
    const auto& c = g.nodes[n];
    for (int d = 0; d < 6; ++d) {
      const int i = c[0] + kDI[d], j = c[1] + kDJ[d], k = c[2] + kDK[d];
      if (std::abs(i) > g.box_half || std::abs(j) > g.box_half || std::abs(k) > g.box_half)
        continue;
      const int32_t nb = index_map[dense_index(i, j, k, g.box_half, side)];
      if (nb < 0) continue;
      if (severed.count({std::min<int32_t>(n, nb), std::max<int32_t>(n, nb)})) continue;
      adj.push_back(nb);
    }
    offsets[n + 1] = static_cast<int32_t>(adj.size());
  }
}

}  // namespace

int32_t VoxelGrid::node_at(int i, int j, int k) const {
  if (std::abs(i) > box_half || std::abs(j) > box_half || std::abs(k) > box_half) return -1;
  return index_map_[dense_index(i, j, k, box_half, side())];
}

int VoxelGrid::connected_components() const {
  std::vector<int> label(count(), -1);
  int comps = 0;
  std::vector<int> stack;
  for (int s = 0; s < count(); ++s) {
    if (label[s] >= 0) continue;
    ++comps;
    stack.assign(1, s);
    label[s] = s;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int32_t e = adj_offsets_[c]; e < adj_offsets_[c + 1]; ++e) {
        const int nb = adj_[e];
        if (label[nb] < 0) {
          label[nb] = s;
          stack.push_back(nb);
        }
      }
    }
  }
  return comps;
}

VoxelGrid voxelize(const DomainSpec& spec, double h) {
  if (h <= 0.0) throw std::invalid_argument("grid spacing must be positive");

  VoxelGrid g;
  g.h = h;
  g.box_half = static_cast<int>(std::floor(spec.bounding_radius() / h)) + 1;
  g.resolution_warning = h > 0.5 * spec.min_feature_size();

  for (int i = -g.box_half; i <= g.box_half; ++i)
    for (int j = -g.box_half; j <= g.box_half; ++j)
      for (int k = -g.box_half; k <= g.box_half; ++k)
        if (spec.contains({i * h, j * h, k * h})) g.nodes.push_back({i, j, k});

  if (g.nodes.empty()) throw std::runtime_error("voxelization produced an empty grid");

  const int side = g.side();
  g.index_map_.assign(static_cast<long>(side) * side * side, -1);
  for (int n = 0; n < g.count(); ++n) {
    const auto& c = g.nodes[n];
    g.index_map_[dense_index(c[0], c[1], c[2], g.box_half, side)] = n;
  }

  if (spec.has_cut_surfaces()) {
    for (int n = 0; n < g.count(); ++n) {
      const auto& c = g.nodes[n];
      for (int d = 0; d < 6; d += 2) {  // +x, +y, +z only, each edge once
        const int i = c[0] + kDI[d], j = c[1] + kDJ[d], k = c[2] + kDK[d];
        const int32_t nb = g.node_at(i, j, k);
        if (nb < 0) continue;
        if (spec.segment_crosses_wall(g.point(n), {i * h, j * h, k * h}))
          g.severed_edges.push_back({static_cast<int32_t>(n), nb});
      }
    }
  }

  build_topology(g, g.index_map_, g.adj_offsets_, g.adj_);
  return g;
}

VoxelGrid grid_from_nodes(double h, std::vector<std::array<int, 3>> nodes,
                          std::vector<std::array<int32_t, 2>> severed) {
  if (nodes.empty()) throw std::invalid_argument("node list must be nonempty");
  VoxelGrid g;
  g.h = h;
  int extent = 0;
  for (const auto& c : nodes)
    extent = std::max({extent, std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
  g.box_half = extent + 1;
  g.nodes = std::move(nodes);
  g.severed_edges = std::move(severed);
  build_topology(g, g.index_map_, g.adj_offsets_, g.adj_);
  return g;
}

void SparseSymMatrix::apply(const double* x, double* y) const {
  for (int64_t r = 0; r < order; ++r) {
    double acc = 0.0;
    for (int64_t e = row_offsets[r]; e < row_offsets[r + 1]; ++e)
      acc += values[e] * x[col_indices[e]];
    y[r] = acc;
  }
}

SparseSymMatrix assemble_laplacian(const VoxelGrid& grid) {
  if (grid.count() == 0) throw std::invalid_argument("empty grid");
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const auto& offsets = grid.adj_offsets();
  const auto& adj = grid.adj();

  SparseSymMatrix m;
  m.order = grid.count();
  m.row_offsets.reserve(m.order + 1);
  m.row_offsets.push_back(0);
  for (int r = 0; r < grid.count(); ++r) {
    // diagonal first, then sorted neighbours
    std::vector<int32_t> cols(adj.begin() + offsets[r], adj.begin() + offsets[r + 1]);
    cols.push_back(r);
    std::sort(cols.begin(), cols.end());
    for (int32_t c : cols) {
      m.col_indices.push_back(c);
      m.values.push_back(c == r ? 6.0 * inv_h2 : -inv_h2);
    }
    m.row_offsets.push_back(static_cast<int64_t>(m.col_indices.size()));
  }
  return m;
}

namespace {

// Felzenszwalb-Huttenlocher 1D squared distance transform.
void dt_1d(const double* f, double* out, int n, std::vector<int>& v,
           std::vector<double>& z) {
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    if (f[q] == std::numeric_limits<double>::infinity() &&
        f[v[k]] == std::numeric_limits<double>::infinity())
      continue;
    double s;
    while (true) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

}  // namespace

std::vector<double> boundary_distance_field(const VoxelGrid& grid) {
  if (grid.count() == 0) throw std::invalid_argument("empty grid");
  // Work on the half-spacing lattice so severed-edge midpoints are sites.
  const int half2 = 2 * grid.box_half;        // doubled lattice indices in [-half2, half2]
  const int side = 2 * half2 + 1;
  const double inf = std::numeric_limits<double>::infinity();
  const long total = static_cast<long>(side) * side * side;

  std::vector<double> field(total, 0.0);  // seed: every point is a site...
  auto at = [&](int i, int j, int k) -> double& {
    return field[(static_cast<long>(i + half2) * side + (j + half2)) * side + (k + half2)];
  };

  // ...except interior nodes and non-site half-lattice points.
  for (long t = 0; t < total; ++t) field[t] = inf;
  for (int i = -half2; i <= half2; i += 2)
    for (int j = -half2; j <= half2; j += 2)
      for (int k = -half2; k <= half2; k += 2)
        if (grid.node_at(i / 2, j / 2, k / 2) < 0) at(i, j, k) = 0.0;
  for (const auto& e : grid.severed_edges) {
    const auto& a = grid.nodes[e[0]];
    const auto& b = grid.nodes[e[1]];
    at(a[0] + b[0], a[1] + b[1], a[2] + b[2]) = 0.0;
  }

  // Three separable passes of the exact squared EDT.
  std::vector<double> line(side), out(side);
  std::vector<int> v;
  std::vector<double> z;
  for (int axis = 0; axis < 3; ++axis) {
    for (int a = 0; a < side; ++a)
      for (int b = 0; b < side; ++b) {
        for (int c = 0; c < side; ++c) {
          const int i = axis == 0 ? c : a;
          const int j = axis == 1 ? c : (axis == 0 ? a : b);
          const int k = axis == 2 ? c : b;
          line[c] = at(i - half2, j - half2, k - half2);
        }
        dt_1d(line.data(), out.data(), side, v, z);
        for (int c = 0; c < side; ++c) {
          const int i = axis == 0 ? c : a;
          const int j = axis == 1 ? c : (axis == 0 ? a : b);
          const int k = axis == 2 ? c : b;
          at(i - half2, j - half2, k - half2) = out[c];
        }
      }
  }

  std::vector<double> result(grid.count());
  const double half_h = 0.5 * grid.h;
  for (int n = 0; n < grid.count(); ++n) {
    const auto& c = grid.nodes[n];
    result[n] = half_h * std::sqrt(at(2 * c[0], 2 * c[1], 2 * c[2]));
  }
  return result;
}

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof v);
}

}  // namespace

void write_grid(const VoxelGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write("NCLG", 4);
  put<uint8_t>(out, 1);
  put<double>(out, grid.h);
  put<int32_t>(out, grid.box_half);
  put<int64_t>(out, grid.count());
  for (const auto& c : grid.nodes)
    for (int d = 0; d < 3; ++d) put<int32_t>(out, c[d]);
  put<int64_t>(out, static_cast<int64_t>(grid.severed_edges.size()));
  for (const auto& e : grid.severed_edges) {
    put<int32_t>(out, e[0]);
    put<int32_t>(out, e[1]);
  }
}

VoxelGrid read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "NCLG", 4) != 0) throw std::runtime_error("bad grid magic");
  uint8_t version;
  get(in, version);
  if (version != 1) throw std::runtime_error("unsupported grid version");
  double h;
  int32_t box_half;
  int64_t n;
  get(in, h);
  get(in, box_half);
  get(in, n);
  std::vector<std::array<int, 3>> nodes(n);
  for (auto& c : nodes)
    for (int d = 0; d < 3; ++d) {
      int32_t v;
      get(in, v);
      c[d] = v;
    }
  int64_t ns;
  get(in, ns);
  std::vector<std::array<int32_t, 2>> severed(ns);
  for (auto& e : severed) {
    get(in, e[0]);
    get(in, e[1]);
  }
  if (!in) throw std::runtime_error("truncated grid file");
  return grid_from_nodes(h, std::move(nodes), std::move(severed));
}

void write_matrix(const SparseSymMatrix& mat, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write("NCLM", 4);
  put<uint8_t>(out, 1);
  put<int64_t>(out, mat.order);
  put<int64_t>(out, static_cast<int64_t>(mat.col_indices.size()));
  for (int64_t r = 0; r <= mat.order; ++r) put<int64_t>(out, mat.row_offsets[r]);
  for (int32_t c : mat.col_indices) put<int32_t>(out, c);
  for (double v : mat.values) put<double>(out, v);
}

SparseSymMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "NCLM", 4) != 0) throw std::runtime_error("bad matrix magic");
  uint8_t version;
  get(in, version);
  if (version != 1) throw std::runtime_error("unsupported matrix version");
  SparseSymMatrix m;
  int64_t nnz;
  get(in, m.order);
  get(in, nnz);
  m.row_offsets.resize(m.order + 1);
  for (auto& r : m.row_offsets) get(in, r);
  m.col_indices.resize(nnz);
  for (auto& c : m.col_indices) get(in, c);
  m.values.resize(nnz);
  for (auto& v : m.values) get(in, v);
  if (!in) throw std::runtime_error("truncated matrix file");
  return m;
}

void write_matrix_triplets(const SparseSymMatrix& mat, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# row col value\n";
  char buf[96];
  for (int64_t r = 0; r < mat.order; ++r)
    for (int64_t e = mat.row_offsets[r]; e < mat.row_offsets[r + 1]; ++e) {
      std::snprintf(buf, sizeof buf, "%lld %d %.17g\n", static_cast<long long>(r),
                    mat.col_indices[e], mat.values[e]);
      out << buf;
    }
}

}  // namespace ncl
