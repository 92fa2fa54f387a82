#include "ncl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ncl/kvconfig.hpp"
#include "ncl/oracles.hpp"
#include "ncl/sphere_mesh.hpp"

namespace ncl {

namespace {

constexpr double kUnitTol = 1e-12;

// Probe directions for the signed-distance estimate of the smoothing step:
// the 6 axes and the 8 cube diagonals.
const std::vector<Vec3>& probe_directions() {
  static const std::vector<Vec3> dirs = [] {
    std::vector<Vec3> d;
    for (int axis = 0; axis < 3; ++axis)
      for (int sgn : {-1, 1}) {
        Vec3 v{0, 0, 0};
        v[axis] = sgn;
        d.push_back(v);
      }
    const double c = 1.0 / std::sqrt(3.0);
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) d.push_back({sx * c, sy * c, sz * c});
    return d;
  }();
  return dirs;
}

}  // namespace

void SpherePointSet::validate() const {
  if (dimension != 3)
    throw std::invalid_argument("only dimension 3 is supported");
  if (centers.empty()) throw std::invalid_argument("point set must be nonempty");
  for (const Vec3& z : centers)
    if (std::abs(norm(z) - 1.0) > kUnitTol)
      throw std::invalid_argument("centers must lie on the unit sphere");
  for (size_t i = 0; i < centers.size(); ++i)
    for (size_t j = i + 1; j < centers.size(); ++j)
      if (dist(centers[i], centers[j]) <= kUnitTol)
        throw std::invalid_argument("centers must be pairwise distinct");
}

double SheetWeb::distance(Vec3 t) const {
  // vertical great circle {x1 = 0}
  double best;
  {
    const double s = std::sqrt(t.y * t.y + t.z * t.z);
    best = s > 0.0 ? std::sqrt(t.x * t.x + (1.0 - s) * (1.0 - s)) : std::sqrt(2.0);
  }
  // horizontal circles {x3 = level}
  for (double c : levels) {
    const double rho = std::sqrt(std::max(0.0, 1.0 - c * c));
    double d;
    if (rho == 0.0) {
      d = dist(t, Vec3{0, 0, c});
    } else {
      const double s = std::sqrt(t.x * t.x + t.y * t.y);
      const double dr = s - rho;
      d = std::sqrt(dr * dr + (t.z - c) * (t.z - c));
    }
    best = std::min(best, d);
  }
  return best;
}

bool SheetWeb::limit_connected() const {
  for (double c : levels)
    if (std::abs(c) > 1.0) return false;
  return true;
}

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Ball: return "ball";
    case DomainKind::Shell: return "shell";
    case DomainKind::Fournais: return "fournais";
    case DomainKind::Passage: return "passage";
    case DomainKind::Sheet: return "sheet";
    case DomainKind::Pole: return "pole";
    case DomainKind::Smoothed: return "smoothed";
  }
  return "?";
}

DomainKind domain_kind_from_string(const std::string& name) {
  for (DomainKind k : {DomainKind::Ball, DomainKind::Shell, DomainKind::Fournais,
                       DomainKind::Passage, DomainKind::Sheet, DomainKind::Pole,
                       DomainKind::Smoothed})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown domain kind: " + name);
}

double epsilon_upper_bound(const SpherePointSet& points) {
  points.validate();
  const auto& z = points.centers;

  double bound = std::numeric_limits<double>::infinity();

  double min_pair = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < z.size(); ++i)
    for (size_t j = i + 1; j < z.size(); ++j)
      min_pair = std::min(min_pair, dist(z[i], z[j]));
  if (z.size() > 1) bound = std::min(bound, 0.5 * min_pair);

  double quarter_term = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < z.size(); ++i)
    for (size_t j = i + 1; j < z.size(); ++j) {
      const double gap = std::abs(z[i].z - z[j].z);
      if (gap > kUnitTol) quarter_term = std::min(quarter_term, gap);
    }
  for (const Vec3& p : z)
    if (std::abs(p.x) > kUnitTol) quarter_term = std::min(quarter_term, std::abs(p.x));
  if (std::isfinite(quarter_term)) bound = std::min(bound, 0.25 * quarter_term);

  return std::isfinite(bound) ? bound : 0.5;
}

double DomainSpec::bounding_radius() const {
  switch (kind) {
    case DomainKind::Ball: return outer_radius;
    case DomainKind::Smoothed: return outer_radius + smooth_delta;
    default: return outer_radius;
  }
}

double DomainSpec::min_feature_size() const {
  switch (kind == DomainKind::Smoothed ? smooth_base : kind) {
    case DomainKind::Ball: return outer_radius;
    case DomainKind::Shell: return outer_radius - inner_radius;
    case DomainKind::Fournais: return eps;
    case DomainKind::Passage: return std::min(eps, 1.0 / passage_n);
    case DomainKind::Sheet:
      return std::min({eps, 1.0 / passage_n, 2.0 * eps / sheet_m});
    case DomainKind::Pole:
    case DomainKind::Smoothed:
      return std::min({eps, 1.0 / passage_n, 2.0 * eps / sheet_m, 2.0 / pole_l});
  }
  return 0.0;
}

SheetWeb DomainSpec::web() const {
  if (!sheet_web.levels.empty() || sheet_web.half_width > 0.0) return sheet_web;
  SheetWeb w;
  for (const Vec3& z : points.centers) w.levels.push_back(z.z);
  std::sort(w.levels.begin(), w.levels.end());
  w.levels.erase(std::unique(w.levels.begin(), w.levels.end(),
                             [](double a, double b) { return std::abs(a - b) <= kUnitTol; }),
                 w.levels.end());
  w.half_width = sheet_m > 0 ? eps / sheet_m : 0.0;
  return w;
}

namespace {

bool in_room(const SpherePointSet& points, Vec3 p, double eps) {
  for (const Vec3& z : points.centers)
    if (dist(p, z) < eps) return true;
  return false;
}

// Distance to the radial pole line {r * dir : r in [r0, r1]}.
double dist_to_pole(Vec3 x, Vec3 dir, double r0, double r1) {
  const double t = std::clamp(dot(x, dir), r0, r1);
  return dist(x, t * dir);
}

struct Clauses {
  // Volumetric membership of the stage named by `kind` (no cut surfaces).
  static bool stage(const DomainSpec& s, DomainKind kind, Vec3 x) {
    switch (kind) {
      case DomainKind::Ball: return norm(x) < s.outer_radius;
      case DomainKind::Shell: {
        const double r = norm(x);
        return s.inner_radius < r && r < s.outer_radius;
      }
      case DomainKind::Passage: return passage_stage(s, x);
      case DomainKind::Sheet: return sheet_stage(s, x);
      default: return pole_stage(s, x);
    }
  }

  // Membership up to the Pole stage, shared by Pole and Smoothed.
  static bool pole_stage(const DomainSpec& s, Vec3 x) {
    if (!sheet_stage(s, x)) return false;
    const double r0 = 1.0 + 1.0 / s.passage_n;
    for (const Vec3& dir : s.pole_dirs)
      if (dist_to_pole(x, dir, r0, s.outer_radius) <= 1.0 / s.pole_l) return false;
    return true;
  }

  static bool sheet_stage(const DomainSpec& s, Vec3 x) {
    if (passage_stage(s, x)) return true;
    const double r = norm(x);
    if (r < 1.0 || r > 1.0 + 1.0 / s.passage_n) return false;
    return s.sheet_web.distance(normalized(x)) < s.eps / s.sheet_m;
  }

  static bool passage_stage(const DomainSpec& s, Vec3 x) {
    const double r = norm(x);
    if (r < 1.0) return true;
    if (r > 1.0 + 1.0 / s.passage_n) return r < s.outer_radius;
    return in_room(s.points, normalized(x), s.eps);
  }
};

}  // namespace

bool DomainSpec::contains(Vec3 x) const {
  const double r = norm(x);
  switch (kind) {
    case DomainKind::Ball:
      return r < outer_radius;
    case DomainKind::Shell:
      return inner_radius < r && r < outer_radius;
    case DomainKind::Fournais: {
      if (r < 1.0) return true;
      if (1.0 < r && r < outer_radius) return true;
      return in_room(points, x, eps);  // covers |x| == 1 inside a room
    }
    case DomainKind::Passage:
      return Clauses::passage_stage(*this, x);
    case DomainKind::Sheet:
      return Clauses::sheet_stage(*this, x);
    case DomainKind::Pole:
      return Clauses::pole_stage(*this, x);
    case DomainKind::Smoothed: {
      if (smooth_delta == 0.0 && smooth_width == 0.0)
        return Clauses::stage(*this, smooth_base, x);
      // Mollified indicator of the delta-dilation: Gaussian-weighted vote of
      // the dilated indicator over a 7-point stencil of spacing width.
      const double w = smooth_width;
      const double gc = 1.0, ga = std::exp(-0.5);
      double total = gc + 6.0 * ga, vote = 0.0;
      auto dilated = [&](Vec3 p) {
        if (Clauses::stage(*this, smooth_base, p)) return true;
        const double step = 0.5 * w;
        for (double t = step; t <= smooth_delta + 0.5 * step; t += step)
          for (const Vec3& dir : probe_directions())
            if (Clauses::stage(*this, smooth_base, p + t * dir)) return true;
        return false;
      };
      vote += gc * (dilated(x) ? 1.0 : 0.0);
      for (int axis = 0; axis < 3; ++axis)
        for (int sgn : {-1, 1}) {
          Vec3 o{0, 0, 0};
          o[axis] = sgn * w;
          vote += ga * (dilated(x + o) ? 1.0 : 0.0);
        }
      return vote > 0.5 * total;
    }
  }
  return false;
}

bool DomainSpec::segment_crosses_wall(Vec3 a, Vec3 b) const {
  if (kind != DomainKind::Fournais) return false;
  // Roots of |a + t(b-a)|^2 = 1 on (0,1).
  const Vec3 d = b - a;
  const double A = dot(d, d);
  if (A == 0.0) return false;
  const double B = 2.0 * dot(a, d);
  const double C = dot(a, a) - 1.0;
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
    if (t <= 0.0 || t >= 1.0) continue;
    const Vec3 p = a + t * d;
    if (!in_room(points, p, eps)) return true;  // crossing outside every room
  }
  return false;
}

DomainSpec make_ball(double radius) {
  if (radius <= 0.0) throw std::invalid_argument("ball radius must be positive");
  DomainSpec s;
  s.kind = DomainKind::Ball;
  s.inner_radius = 0.0;
  s.outer_radius = radius;
  return s;
}

DomainSpec make_shell(double r1, double r2) {
  if (!(0.0 < r1 && r1 < r2))
    throw std::invalid_argument("shell radii must satisfy 0 < r1 < r2");
  DomainSpec s;
  s.kind = DomainKind::Shell;
  s.inner_radius = r1;
  s.outer_radius = r2;
  return s;
}

DomainSpec make_fournais(const SpherePointSet& points, double eps, double outer_radius,
                         double inner_radius) {
  points.validate();
  if (inner_radius != 1.0)
    throw std::invalid_argument("the construction is normalised to inner radius 1");
  const double cap = epsilon_upper_bound(points);
  if (!(0.0 < eps && eps < cap))
    throw std::invalid_argument("room radius violates the placement constraint (eps >= " +
                                std::to_string(cap) + ")");
  const auto [lo, hi] = oracles::choose_R_window(1.0);
  if (!(lo < outer_radius && outer_radius < hi))
    throw std::invalid_argument("outer radius outside the spectral ordering window");
  DomainSpec s;
  s.kind = DomainKind::Fournais;
  s.inner_radius = 1.0;
  s.outer_radius = outer_radius;
  s.points = points;
  s.eps = eps;
  return s;
}

DomainSpec make_passage(const DomainSpec& fournais, int n) {
  if (fournais.kind != DomainKind::Fournais)
    throw std::invalid_argument("passage base must be a fournais domain");
  if (n < 1) throw std::invalid_argument("passage index must be >= 1");
  DomainSpec s = fournais;
  s.kind = DomainKind::Passage;
  s.passage_n = n;
  return s;
}

namespace {

// Free-sphere predicate: outside the thickened web and outside every room.
std::function<bool(Vec3)> free_sphere_predicate(const DomainSpec& s) {
  const SheetWeb w = s.web();
  const double band = s.eps / s.sheet_m;
  const SpherePointSet pts = s.points;
  const double eps = s.eps;
  return [w, band, pts, eps](Vec3 t) {
    return w.distance(t) >= band && !in_room(pts, t, eps);
  };
}

}  // namespace

DomainSpec make_sheet(const DomainSpec& passage, int m) {
  if (passage.kind != DomainKind::Passage)
    throw std::invalid_argument("sheet base must be a passage domain");
  if (m < 1) throw std::invalid_argument("sheet index must be >= 1");
  DomainSpec s = passage;
  s.kind = DomainKind::Sheet;
  s.sheet_m = m;
  s.sheet_web = SheetWeb{};
  s.sheet_web = s.web();

  if (!s.web().limit_connected())
    throw std::logic_error("sheet web limit set is not connected");

  const SphereMesh mesh = SphereMesh::with_pitch(s.eps / (2.0 * m));
  std::vector<int> labels;
  s.sheet_components = label_free_components(mesh, free_sphere_predicate(s), labels);

  const int bound = 2 * static_cast<int>(s.points.centers.size()) + 2;
  if (s.sheet_components > bound)
    throw std::runtime_error("sheet web produced more components than 2M+2");
  return s;
}

DomainSpec make_pole(const DomainSpec& sheet, int l) {
  if (sheet.kind != DomainKind::Sheet)
    throw std::invalid_argument("pole base must be a sheet domain");
  if (l < 1) throw std::invalid_argument("pole index must be >= 1");
  DomainSpec s = sheet;
  s.kind = DomainKind::Pole;
  s.pole_l = l;

  const SphereMesh mesh = SphereMesh::with_pitch(s.eps / (4.0 * s.sheet_m));
  std::vector<int> labels;
  const int count = label_free_components(mesh, free_sphere_predicate(s), labels);
  if (count == 0) throw std::runtime_error("no free components to drill poles into");

  const auto depths = component_depths(mesh, labels, count);
  double eta_arc = std::numeric_limits<double>::infinity();
  s.pole_dirs.clear();
  for (const ComponentDepth& d : depths) {
    s.pole_dirs.push_back(normalized(mesh.center(d.cell)));
    eta_arc = std::min(eta_arc, d.arc);
  }
  if (eta_arc < mesh.pitch())
    throw std::runtime_error("cannot certify pole placement: component thinner than mesh pitch");

  s.pole_margin = 2.0 * std::sin(0.5 * std::min(eta_arc, std::numbers::pi));
  if (l < static_cast<int>(std::ceil(1.0 / s.pole_margin)))
    throw std::invalid_argument("pole index too small: poles would be wider than the holes");
  s.sheet_components = count;
  return s;
}

int complement_component_count(const DomainSpec& spec, double box_half_width, double h) {
  if (box_half_width <= spec.bounding_radius())
    throw std::invalid_argument("box must strictly contain the domain");
  const int half = static_cast<int>(std::floor(box_half_width / h));
  const int side = 2 * half + 1;
  const long n = static_cast<long>(side) * side * side;
  std::vector<char> outside(n);
  auto idx = [&](int i, int j, int k) {
    return (static_cast<long>(i + half) * side + (j + half)) * side + (k + half);
  };
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j)
      for (int k = -half; k <= half; ++k)
        outside[idx(i, j, k)] = spec.contains({i * h, j * h, k * h}) ? 0 : 1;

  std::vector<int> label(n, -1);
  int count = 0;
  std::vector<long> stack;
  for (long start = 0; start < n; ++start) {
    if (!outside[start] || label[start] >= 0) continue;
    const int id = count++;
    stack.assign(1, start);
    label[start] = id;
    while (!stack.empty()) {
      const long c = stack.back();
      stack.pop_back();
      const int k = static_cast<int>(c % side);
      const int j = static_cast<int>((c / side) % side);
      const int i = static_cast<int>(c / (static_cast<long>(side) * side));
      const int di[6] = {1, -1, 0, 0, 0, 0};
      const int dj[6] = {0, 0, 1, -1, 0, 0};
      const int dk[6] = {0, 0, 0, 0, 1, -1};
      for (int d = 0; d < 6; ++d) {
        const int ii = i + di[d], jj = j + dj[d], kk = k + dk[d];
        if (ii < 0 || ii >= side || jj < 0 || jj >= side || kk < 0 || kk >= side) continue;
        const long nb = (static_cast<long>(ii) * side + jj) * side + kk;
        if (outside[nb] && label[nb] < 0) {
          label[nb] = id;
          stack.push_back(nb);
        }
      }
    }
  }
  return count;
}

DomainSpec smooth_domain(const DomainSpec& base, double delta, double width,
                         double check_h) {
  if (base.kind == DomainKind::Fournais || base.kind == DomainKind::Smoothed)
    throw std::invalid_argument("smoothing base must be a volumetric stage");
  DomainSpec s = base;
  s.kind = DomainKind::Smoothed;
  s.smooth_base = base.kind;
  s.smooth_delta = delta;
  s.smooth_width = width;
  if (delta == 0.0 && width == 0.0) return s;  // identity case

  const double delta0 =
      base.kind == DomainKind::Pole
          ? std::min({1.0 / (2.0 * base.pole_l), base.eps / (2.0 * base.sheet_m),
                      1.0 / (2.0 * base.passage_n)})
          : base.min_feature_size() / 2.0;
  if (!(0.0 < width && width < delta))
    throw std::invalid_argument("need 0 < width < delta");
  if (delta >= delta0)
    throw std::invalid_argument("delta exceeds the feature-size estimate of delta0");

  if (check_h != 0.0) {
    double h = check_h;
    if (h < 0.0) h = std::max(base.min_feature_size() / 2.0, base.bounding_radius() / 24.0);
    const double box = s.bounding_radius() + 3.0 * h;
    const int before = complement_component_count(base, box, h);
    const int after = complement_component_count(s, box, h);
    if (before != after)
      throw std::runtime_error("smoothing changed the complement component count");
  }
  return s;
}

std::string DomainSpec::to_config() const {
  kv::Block b;
  b.set("kind", to_string(kind));
  const DomainKind stage = kind == DomainKind::Smoothed ? smooth_base : kind;
  if (kind == DomainKind::Smoothed) b.set("base", to_string(smooth_base));
  b.set_double("inner_radius", inner_radius);
  b.set_double("outer_radius", outer_radius);
  if (stage >= DomainKind::Fournais) {
    b.set_double("eps", eps);
    b.set_int("M", static_cast<long>(points.centers.size()));
    for (size_t i = 0; i < points.centers.size(); ++i) {
      char buf[128];
      const Vec3& z = points.centers[i];
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", z.x, z.y, z.z);
      b.set("center." + std::to_string(i), buf);
    }
  }
  if (stage >= DomainKind::Passage) b.set_int("n", passage_n);
  if (stage >= DomainKind::Sheet) b.set_int("m", sheet_m);
  if (stage >= DomainKind::Pole) b.set_int("l", pole_l);
  if (kind == DomainKind::Smoothed) {
    b.set_double("delta", smooth_delta);
    b.set_double("width", smooth_width);
  }
  return kv::format(b);
}

DomainSpec DomainSpec::from_config(const std::string& text) {
  const kv::Block b = kv::parse(text);
  const DomainKind kind = domain_kind_from_string(b.get("kind"));
  const DomainKind stage =
      kind == DomainKind::Smoothed ? domain_kind_from_string(b.get_or("base", "pole")) : kind;
  const double r1 = b.get_double_or("inner_radius", 0.0);
  const double r2 = b.get_double("outer_radius");

  DomainSpec s;
  if (stage == DomainKind::Ball) {
    s = make_ball(r2);
  } else if (stage == DomainKind::Shell) {
    s = make_shell(r1, r2);
  } else {
    SpherePointSet pts;
    const long m_count = b.get_int("M");
    for (long i = 0; i < m_count; ++i) {
      std::istringstream in(b.get("center." + std::to_string(i)));
      Vec3 z;
      in >> z.x >> z.y >> z.z;
      pts.centers.push_back(z);
    }
    s = make_fournais(pts, b.get_double("eps"), r2, r1);
    if (stage >= DomainKind::Passage) s = make_passage(s, static_cast<int>(b.get_int("n")));
    if (stage >= DomainKind::Sheet) s = make_sheet(s, static_cast<int>(b.get_int("m")));
    if (stage >= DomainKind::Pole) s = make_pole(s, static_cast<int>(b.get_int("l")));
  }
  if (kind != DomainKind::Smoothed) return s;
  return smooth_domain(s, b.get_double("delta"), b.get_double("width"), 0.0);
}

}  // namespace ncl
