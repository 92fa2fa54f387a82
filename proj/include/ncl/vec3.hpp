#ifndef NCL_VEC3_HPP
#define NCL_VEC3_HPP

#include <array>
#include <cmath>

namespace ncl {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
inline double dist(Vec3 a, Vec3 b) { return norm(a - b); }

inline Vec3 normalized(Vec3 v) {
  const double n = norm(v);
  return n > 0.0 ? (1.0 / n) * v : Vec3{0, 0, 0};
}

// Great-circle angle between two unit vectors, robust near 0 and pi.
inline double angle_between(Vec3 a, Vec3 b) {
  return 2.0 * std::asin(std::min(1.0, 0.5 * dist(a, b)));
}

}  // namespace ncl

#endif
