#ifndef NCL_GEOMETRY_HPP
#define NCL_GEOMETRY_HPP

// Implicit construction of the perturbed ball-and-shell family:
//
//   Ball(R), Shell(R1,R)
//   Fournais  = B_1 + shell A_{1,R} + small balls ("rooms") at points of S_1,
//               joined through a zero-thickness wall on |x| = 1
//   Passage   = wall thickened to 1/n, rooms become radial passages
//   Sheet     = thin sheets over the great-circle/level-circle web added
//               through the wall layer, cutting the free sphere into J pieces
//   Pole      = J radial "fireman's poles" of radius 1/l drilled through the
//               outer shell, one per piece
//   Smoothed  = mollified indicator of the delta-dilation of the Pole domain
//
// Membership predicates are pure and thread-safe.

#include <string>
#include <vector>

#include "ncl/vec3.hpp"

namespace ncl {

struct SpherePointSet {
  int dimension = 3;
  std::vector<Vec3> centers;  // unit vectors

  void validate() const;  // throws on empty set, non-unit or duplicate centers
};

// Limit set G: the vertical great circle {x1 = 0} plus one horizontal circle
// {x3 = level} per distinct room level, all on the unit sphere.
struct SheetWeb {
  std::vector<double> levels;  // sorted, deduplicated
  double half_width = 0.0;     // eps / m

  // Euclidean distance from a unit vector to G.
  double distance(Vec3 unit_theta) const;
  // G is connected iff every horizontal circle meets the vertical one.
  bool limit_connected() const;
};

enum class DomainKind { Ball, Shell, Fournais, Passage, Sheet, Pole, Smoothed };

const char* to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

class DomainSpec {
 public:
  DomainKind kind = DomainKind::Ball;

  double inner_radius = 0.0;  // R1 (0 for Ball)
  double outer_radius = 1.0;  // R

  SpherePointSet points;  // Fournais onward
  double eps = 0.0;       // room radius
  int passage_n = 0;      // wall thickness 1/n
  int sheet_m = 0;        // sheet half-width eps/m
  int pole_l = 0;         // pole radius 1/l
  double smooth_delta = 0.0;
  double smooth_width = 0.0;
  DomainKind smooth_base = DomainKind::Pole;  // stage the mollifier wraps

  // Derived, recomputed deterministically by the constructors.
  SheetWeb sheet_web;           // cached from Sheet stage on
  std::vector<Vec3> pole_dirs;  // theta_k, one per free component
  int sheet_components = 0;     // J
  double pole_margin = 0.0;     // eta (chord distance)

  bool contains(Vec3 x) const;
  double bounding_radius() const;
  double min_feature_size() const;

  // Zero-thickness Dirichlet wall (Fournais only): true iff the open segment
  // (a,b) crosses |x| = 1 outside every room.
  bool has_cut_surfaces() const { return kind == DomainKind::Fournais; }
  bool segment_crosses_wall(Vec3 a, Vec3 b) const;

  SheetWeb web() const;

  // Key-value config block; from_config re-runs the construction chain so
  // derived data (pole directions, J) is reproduced bit-exactly.
  std::string to_config() const;
  static DomainSpec from_config(const std::string& text);
};

// Largest admissible room radius for a point set: half the minimal pairwise
// center distance, and a quarter of the smaller of the minimal distinct-level
// gap and the minimal nonzero |z1|. Empty minima drop out; if everything
// drops the cap is 0.5.
double epsilon_upper_bound(const SpherePointSet& points);

DomainSpec make_ball(double radius);
DomainSpec make_shell(double r1, double r2);

DomainSpec make_fournais(const SpherePointSet& points, double eps, double outer_radius,
                         double inner_radius = 1.0);
DomainSpec make_passage(const DomainSpec& fournais, int n);
DomainSpec make_sheet(const DomainSpec& passage, int m);
DomainSpec make_pole(const DomainSpec& sheet, int l);

// Mollifies any volumetric stage (Ball, Shell, Passage, Sheet or Pole; the
// Fournais cut wall cannot be smoothed). check_h > 0: verify the complement
// component count is unchanged by smoothing with a flood fill at spacing
// check_h. check_h < 0: pick a coarse default. check_h == 0: skip the guard.
DomainSpec smooth_domain(const DomainSpec& base, double delta, double width,
                         double check_h = -1.0);

// Complement components of {x : spec.contains(x)} inside the cube of the
// given half-width, 6-connectivity, lattice anchored at the origin.
int complement_component_count(const DomainSpec& spec, double box_half_width, double h);

}  // namespace ncl

#endif
