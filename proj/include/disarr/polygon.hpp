#ifndef DISARR_POLYGON_HPP
#define DISARR_POLYGON_HPP

#include <array>
#include <utility>
#include <vector>

namespace disarr::geom {

// Points carry three coordinates regardless of the active dimension; in 2-D
// the third coordinate is zero. A "face" is a segment in 2-D and a planar
// convex polygon (ordered vertices) in 3-D.
using Pt = std::array<double, 3>;
using Poly = std::vector<Pt>;

inline double dot(const Pt& a, const Pt& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Pt sub(const Pt& a, const Pt& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Pt add(const Pt& a, const Pt& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Pt scale(const Pt& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline Pt cross(const Pt& a, const Pt& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Pt& a);

/// Scalar affine map x -> grad . x + offset.
struct Affine {
  Pt grad{0.0, 0.0, 0.0};
  double offset = 0.0;
  double eval(const Pt& x) const { return dot(grad, x) + offset; }
};

/// Intersect a convex face with the half-space {x : h . x <= b}.
/// Segments stay segments; polygons keep their vertex order.
Poly clip_half_space(const Poly& poly, const Pt& h, double b);

/// Intersect with the centered cube [-w, w]^dim.
Poly clip_to_cube(const Poly& poly, int dim, double w);

/// (dim-1)-dimensional measure: segment length in 2-D, polygon area in 3-D.
double face_measure(const Poly& poly, int dim);

/// Area centroid (measure-weighted). Falls back to the vertex mean for
/// degenerate faces, whose measure is zero anyway.
Pt face_centroid(const Poly& poly, int dim);

/// Exact integrals of an affine scalar over a convex face. The signed
/// integral is measure * f(centroid); the absolute/one-sided variants split
/// the face along the zero set of f first, so they are exact as well.
double integrate_affine(const Poly& poly, int dim, const Affine& f);
double integrate_affine_abs(const Poly& poly, int dim, const Affine& f);
double integrate_affine_pos(const Poly& poly, int dim, const Affine& f);
double integrate_affine_neg(const Poly& poly, int dim, const Affine& f);

/// Convex body described by its hull: volume plus supporting half-spaces
/// {x : normal . x <= offset} with unit outward normals.
struct ConvexBody {
  int dim = 0;
  double volume = 0.0;
  std::vector<std::pair<Pt, double>> halfspaces;

  bool contains(const Pt& x, double tol) const;
};

/// Builds the hull of a convex vertex set (dim 2 or 3). Vertices need not be
/// ordered; interior points are tolerated.
ConvexBody convex_body(int dim, const std::vector<Pt>& vertices);

}  // namespace disarr::geom

#endif
