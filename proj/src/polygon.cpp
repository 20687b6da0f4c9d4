#include "disarr/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "disarr/errors.hpp"

namespace disarr::geom {

double norm(const Pt& a) { return std::sqrt(dot(a, a)); }

namespace {

Pt lerp(const Pt& a, const Pt& b, double t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

Poly clip_segment(const Poly& seg, const Pt& h, double b) {
  const double f0 = b - dot(h, seg[0]);
  const double f1 = b - dot(h, seg[1]);
  if (f0 >= 0.0 && f1 >= 0.0) return seg;
  if (f0 < 0.0 && f1 < 0.0) return {};
  const double t = f0 / (f0 - f1);  // f changes sign, so f0 != f1
  const Pt c = lerp(seg[0], seg[1], t);
  if (f0 >= 0.0) return {seg[0], c};
  return {c, seg[1]};
}

}  // namespace

Poly clip_half_space(const Poly& poly, const Pt& h, double b) {
  if (poly.empty()) return {};
  if (poly.size() == 1) return (dot(h, poly[0]) <= b) ? poly : Poly{};
  if (poly.size() == 2) return clip_segment(poly, h, b);

  // Sutherland-Hodgman on an ordered convex polygon.
  Poly out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  double f_prev = b - dot(h, poly[n - 1]);
  for (std::size_t i = 0; i < n; ++i) {
    const double f_cur = b - dot(h, poly[i]);
    const bool in_prev = f_prev >= 0.0;
    const bool in_cur = f_cur >= 0.0;
    if (in_cur) {
      if (!in_prev) out.push_back(lerp(poly[(i + n - 1) % n], poly[i], f_prev / (f_prev - f_cur)));
      out.push_back(poly[i]);
    } else if (in_prev) {
      out.push_back(lerp(poly[(i + n - 1) % n], poly[i], f_prev / (f_prev - f_cur)));
    }
    f_prev = f_cur;
  }
  if (out.size() < 3) return out.size() == 2 ? out : Poly{};
  return out;
}

Poly clip_to_cube(const Poly& poly, int dim, double w) {
  Poly p = poly;
  for (int axis = 0; axis < dim && !p.empty(); ++axis) {
    Pt h{0.0, 0.0, 0.0};
    h[axis] = 1.0;
    p = clip_half_space(p, h, w);
    if (p.empty()) break;
    h[axis] = -1.0;
    p = clip_half_space(p, h, w);
  }
  return p;
}

double face_measure(const Poly& poly, int dim) {
  if (poly.size() < 2) return 0.0;
  if (dim == 2 || poly.size() == 2) return norm(sub(poly[1], poly[0]));
  Pt acc{0.0, 0.0, 0.0};
  for (std::size_t i = 1; i + 1 < poly.size(); ++i)
    acc = add(acc, cross(sub(poly[i], poly[0]), sub(poly[i + 1], poly[0])));
  return 0.5 * norm(acc);
}

Pt face_centroid(const Poly& poly, int dim) {
  if (poly.empty()) return {0.0, 0.0, 0.0};
  if (poly.size() == 1) return poly[0];
  if (dim == 2 || poly.size() == 2) return scale(add(poly[0], poly[1]), 0.5);

  Pt weighted{0.0, 0.0, 0.0};
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const double a = 0.5 * norm(cross(sub(poly[i], poly[0]), sub(poly[i + 1], poly[0])));
    const Pt c = scale(add(add(poly[0], poly[i]), poly[i + 1]), 1.0 / 3.0);
    weighted = add(weighted, scale(c, a));
    total += a;
  }
  if (total <= 0.0) {
    Pt mean{0.0, 0.0, 0.0};
    for (const Pt& p : poly) mean = add(mean, p);
    return scale(mean, 1.0 / static_cast<double>(poly.size()));
  }
  return scale(weighted, 1.0 / total);
}

double integrate_affine(const Poly& poly, int dim, const Affine& f) {
  const double m = face_measure(poly, dim);
  if (m == 0.0) return 0.0;
  if (dim == 2 || poly.size() == 2) return m * f.eval(face_centroid(poly, dim));
  // evaluate trianglewise so the centroid rule stays exact for affine f
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const double a = 0.5 * norm(cross(sub(poly[i], poly[0]), sub(poly[i + 1], poly[0])));
    const Pt c = scale(add(add(poly[0], poly[i]), poly[i + 1]), 1.0 / 3.0);
    acc += a * f.eval(c);
  }
  return acc;
}

double integrate_affine_pos(const Poly& poly, int dim, const Affine& f) {
  // {f >= 0} = {(-grad) . x <= offset}
  const Poly kept = clip_half_space(poly, scale(f.grad, -1.0), f.offset);
  return integrate_affine(kept, dim, f);
}

double integrate_affine_neg(const Poly& poly, int dim, const Affine& f) {
  const Poly kept = clip_half_space(poly, f.grad, -f.offset);
  return -integrate_affine(kept, dim, f);
}

double integrate_affine_abs(const Poly& poly, int dim, const Affine& f) {
  return integrate_affine_pos(poly, dim, f) + integrate_affine_neg(poly, dim, f);
}

bool ConvexBody::contains(const Pt& x, double tol) const {
  for (const auto& [n, b] : halfspaces)
    if (dot(n, x) > b + tol) return false;
  return true;
}

namespace {

ConvexBody convex_body_2d(const std::vector<Pt>& vertices) {
  std::vector<Pt> pts = vertices;
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto cross2 = [](const Pt& o, const Pt& a, const Pt& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };

  // monotone chain
  std::vector<Pt> hull;
  if (pts.size() >= 3) {
    std::vector<Pt> lower, upper;
    for (const Pt& p : pts) {
      while (lower.size() >= 2 && cross2(lower[lower.size() - 2], lower.back(), p) <= 0.0)
        lower.pop_back();
      lower.push_back(p);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      while (upper.size() >= 2 && cross2(upper[upper.size() - 2], upper.back(), *it) <= 0.0)
        upper.pop_back();
      upper.push_back(*it);
    }
    lower.pop_back();
    upper.pop_back();
    hull = lower;
    hull.insert(hull.end(), upper.begin(), upper.end());
  }

  ConvexBody body;
  body.dim = 2;
  if (hull.size() < 3) {
    body.volume = 0.0;
    return body;
  }
  double area2 = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Pt& a = hull[i];
    const Pt& b = hull[(i + 1) % hull.size()];
    area2 += a[0] * b[1] - b[0] * a[1];
    // hull is counterclockwise, so the outward normal is the right-hand one
    Pt nrm{b[1] - a[1], a[0] - b[0], 0.0};
    const double len = norm(nrm);
    if (len > 0.0) body.halfspaces.emplace_back(scale(nrm, 1.0 / len), dot(nrm, a) / len);
  }
  body.volume = 0.5 * std::abs(area2);
  return body;
}

ConvexBody convex_body_3d(const std::vector<Pt>& vertices) {
  ConvexBody body;
  body.dim = 3;
  const std::size_t n = vertices.size();

  double span = 0.0;
  for (const Pt& p : vertices)
    for (const Pt& q : vertices) span = std::max(span, norm(sub(p, q)));
  const double tol = 1e-9 * std::max(span, 1.0);

  // Brute-force supporting planes: fine for the small vertex counts of mesh
  // cells. Each plane spanned by a vertex triple with all points on one side
  // becomes a hull face.
  std::vector<std::pair<Pt, double>> planes;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Pt nrm = cross(sub(vertices[j], vertices[i]), sub(vertices[k], vertices[i]));
        const double len = norm(nrm);
        if (len <= tol * tol) continue;
        nrm = scale(nrm, 1.0 / len);
        double lo = 0.0, hi = 0.0;
        for (const Pt& p : vertices) {
          const double s = dot(nrm, sub(p, vertices[i]));
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        double d;
        Pt outward;
        if (hi <= tol) {
          outward = nrm;
          d = dot(nrm, vertices[i]);
        } else if (lo >= -tol) {
          outward = scale(nrm, -1.0);
          d = -dot(nrm, vertices[i]);
        } else {
          continue;
        }
        bool dup = false;
        for (const auto& [pn, pd] : planes)
          if (norm(sub(pn, outward)) < 1e-7 && std::abs(pd - d) < tol) {
            dup = true;
            break;
          }
        if (!dup) planes.emplace_back(outward, d);
      }

  body.halfspaces = planes;
  if (planes.size() < 4) {
    body.volume = 0.0;  // flat or degenerate
    return body;
  }

  // Divergence theorem: V = (1/3) sum over faces of area * (centroid . n).
  double vol3 = 0.0;
  for (const auto& [nrm, d] : planes) {
    Poly face;
    for (const Pt& p : vertices)
      if (std::abs(dot(nrm, p) - d) <= tol) face.push_back(p);
    if (face.size() < 3) continue;

    // order face vertices around their mean within the plane
    Pt u = cross(nrm, std::abs(nrm[0]) < 0.9 ? Pt{1.0, 0.0, 0.0} : Pt{0.0, 1.0, 0.0});
    u = scale(u, 1.0 / norm(u));
    const Pt v = cross(nrm, u);
    Pt mean{0.0, 0.0, 0.0};
    for (const Pt& p : face) mean = add(mean, p);
    mean = scale(mean, 1.0 / static_cast<double>(face.size()));
    std::sort(face.begin(), face.end(), [&](const Pt& a, const Pt& b) {
      return std::atan2(dot(sub(a, mean), v), dot(sub(a, mean), u)) <
             std::atan2(dot(sub(b, mean), v), dot(sub(b, mean), u));
    });

    const double area = face_measure(face, 3);
    const Pt c = face_centroid(face, 3);
    vol3 += area * dot(c, nrm);
  }
  body.volume = vol3 / 3.0;
  return body;
}

}  // namespace

ConvexBody convex_body(int dim, const std::vector<Pt>& vertices) {
  if (dim == 2) return convex_body_2d(vertices);
  if (dim == 3) return convex_body_3d(vertices);
  throw unsupported_dimension("convex_body: dim must be 2 or 3");
}

}  // namespace disarr::geom
