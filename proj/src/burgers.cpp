#include "disarr/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "disarr/errors.hpp"
#include "disarr/kahan.hpp"

namespace disarr {

SampledTensorField::SampledTensorField(Vector origin_in, Vector spacing_in,
                                       std::array<int, 3> counts_in, std::vector<Matrix> values_in)
    : origin(std::move(origin_in)),
      spacing(std::move(spacing_in)),
      counts(counts_in),
      values(std::move(values_in)) {
  if (origin.dim() != 3 || spacing.dim() != 3)
    throw dimension_mismatch("tensor field: origin/spacing must be 3-vectors");
  for (int a = 0; a < 3; ++a) {
    if (counts[a] < 3) throw std::invalid_argument("tensor field: need >= 3 nodes per axis");
    if (!(spacing[a] > 0.0)) throw std::invalid_argument("tensor field: spacing must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(counts[0]) * counts[1] * counts[2];
  if (values.size() != expected)
    throw std::invalid_argument("tensor field: node count does not match counts");
  for (const Matrix& m : values)
    if (m.dim() != 3) throw dimension_mismatch("tensor field: values must be 3x3");
}

double SampledTensorField::min_spacing() const {
  return std::min({spacing[0], spacing[1], spacing[2]});
}

Matrix SampledTensorField::sample(const Vector& x) const {
  if (x.dim() != 3) throw dimension_mismatch("sample: point must be a 3-vector");
  double t[3];
  int i0[3];
  double fr[3];
  for (int a = 0; a < 3; ++a) {
    t[a] = (x[a] - origin[a]) / spacing[a];
    if (t[a] < -1e-9 || t[a] > counts[a] - 1 + 1e-9)
      throw geometry_out_of_bounds("sample: point outside the grid hull");
    i0[a] = static_cast<int>(std::floor(t[a]));
    i0[a] = std::clamp(i0[a], 0, counts[a] - 2);
    fr[a] = t[a] - i0[a];
  }
  Matrix out(3);
  for (int ci = 0; ci < 2; ++ci)
    for (int cj = 0; cj < 2; ++cj)
      for (int ck = 0; ck < 2; ++ck) {
        const double wgt = (ci ? fr[0] : 1.0 - fr[0]) * (cj ? fr[1] : 1.0 - fr[1]) *
                           (ck ? fr[2] : 1.0 - fr[2]);
        if (wgt == 0.0) continue;
        const Matrix& node = at(i0[0] + ci, i0[1] + cj, i0[2] + ck);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) out(r, c) += wgt * node(r, c);
      }
  return out;
}

OrientedLoop::OrientedLoop(std::vector<Vector> vertices_in) : vertices(std::move(vertices_in)) {
  if (vertices.size() < 4) throw std::invalid_argument("loop: need at least 3 distinct points");
  for (const Vector& v : vertices)
    if (v.dim() != 3) throw dimension_mismatch("loop: vertices must be 3-vectors");
  const Vector d = vertices.front() - vertices.back();
  if (d.norm() != 0.0) throw std::invalid_argument("loop: first vertex must equal the last");
}

OrientedLoop OrientedLoop::reversed() const {
  std::vector<Vector> rev(vertices.rbegin(), vertices.rend());
  return OrientedLoop(std::move(rev));
}

OrientedSurface OrientedSurface::flipped() const {
  OrientedSurface out = *this;
  for (auto& t : out.triangles) std::swap(t[1], t[2]);
  return out;
}

SampledTensorField curl_matrix_field(const SampledTensorField& f) {
  SampledTensorField out = f;

  // d/dx_axis of entry (r, c) at a node, second order.
  auto partial = [&f](int i, int j, int k, int axis, int r, int c) {
    int idx[3] = {i, j, k};
    const int n = f.counts[axis];
    const double h = f.spacing[axis];
    auto value = [&](int shifted) {
      int p[3] = {idx[0], idx[1], idx[2]};
      p[axis] = shifted;
      return f.at(p[0], p[1], p[2])(r, c);
    };
    const int a = idx[axis];
    if (a == 0) return (-3.0 * value(0) + 4.0 * value(1) - value(2)) / (2.0 * h);
    if (a == n - 1) return (3.0 * value(n - 1) - 4.0 * value(n - 2) + value(n - 3)) / (2.0 * h);
    return (value(a + 1) - value(a - 1)) / (2.0 * h);
  };

  for (int i = 0; i < f.counts[0]; ++i)
    for (int j = 0; j < f.counts[1]; ++j)
      for (int k = 0; k < f.counts[2]; ++k) {
        Matrix curl(3);
        for (int r = 0; r < 3; ++r) {
          curl(r, 0) = partial(i, j, k, 1, r, 2) - partial(i, j, k, 2, r, 1);
          curl(r, 1) = partial(i, j, k, 2, r, 0) - partial(i, j, k, 0, r, 2);
          curl(r, 2) = partial(i, j, k, 0, r, 1) - partial(i, j, k, 1, r, 0);
        }
        out.values[out.index(i, j, k)] = curl;
      }
  return out;
}

Vector line_integral(const SampledTensorField& f, const OrientedLoop& loop) {
  CompensatedSum acc[3];
  const double target_step = 0.5 * f.min_spacing();
  for (std::size_t s = 0; s + 1 < loop.vertices.size(); ++s) {
    const Vector& p = loop.vertices[s];
    const Vector& q = loop.vertices[s + 1];
    const Vector d = q - p;
    const double len = d.norm();
    if (len == 0.0) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil(len / target_step)));
    const Vector step = d * (1.0 / steps);
    for (int j = 0; j < steps; ++j) {
      const Vector mid = p + d * ((j + 0.5) / steps);
      const Vector contrib = f.sample(mid).apply(step);
      for (int c = 0; c < 3; ++c) acc[c].add(contrib[c]);
    }
  }
  return Vector{acc[0].value(), acc[1].value(), acc[2].value()};
}

Vector surface_integral(const SampledTensorField& curl_f, const OrientedSurface& surface) {
  CompensatedSum acc[3];
  for (const auto& tri : surface.triangles) {
    const Vector& a = surface.vertices[static_cast<std::size_t>(tri[0])];
    const Vector& b = surface.vertices[static_cast<std::size_t>(tri[1])];
    const Vector& c = surface.vertices[static_cast<std::size_t>(tri[2])];
    const Vector e1 = b - a;
    const Vector e2 = c - a;
    // area-weighted normal (cross / 2)
    const Vector an{0.5 * (e1[1] * e2[2] - e1[2] * e2[1]),
                    0.5 * (e1[2] * e2[0] - e1[0] * e2[2]),
                    0.5 * (e1[0] * e2[1] - e1[1] * e2[0])};
    const Vector centroid = (a + b + c) * (1.0 / 3.0);
    const Vector contrib = curl_f.sample(centroid).apply(an);
    for (int k = 0; k < 3; ++k) acc[k].add(contrib[k]);
  }
  return Vector{acc[0].value(), acc[1].value(), acc[2].value()};
}

namespace {

// Boundary of the triangle soup as an oriented vertex cycle. Interior edges
// appear twice in opposite directions and cancel.
std::vector<int> boundary_cycle(const OrientedSurface& surface) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : surface.triangles) {
    const int e[3][2] = {{tri[0], tri[1]}, {tri[1], tri[2]}, {tri[2], tri[0]}};
    for (const auto& ed : e) count[{ed[0], ed[1]}] += 1;
  }
  std::map<int, int> next;
  for (const auto& [edge, c] : count) {
    const auto rev = count.find({edge.second, edge.first});
    const int r = (rev == count.end()) ? 0 : rev->second;
    if (c == 1 && r == 0) {
      if (next.count(edge.first))
        throw std::invalid_argument("surface: boundary is not a single cycle");
      next[edge.first] = edge.second;
    } else if (c + r != 2) {
      throw std::invalid_argument("surface: inconsistent triangle orientation");
    }
  }
  if (next.empty()) throw std::invalid_argument("surface: no boundary");
  std::vector<int> cycle;
  const int start = next.begin()->first;
  int cur = start;
  do {
    cycle.push_back(cur);
    const auto it = next.find(cur);
    if (it == next.end()) throw std::invalid_argument("surface: boundary is not closed");
    cur = it->second;
  } while (cur != start && cycle.size() <= next.size());
  if (cur != start) throw std::invalid_argument("surface: boundary is not closed");
  return cycle;
}

}  // namespace

double stokes_residual(const SampledTensorField& f, const OrientedLoop& loop,
                       const OrientedSurface& surface) {
  const std::vector<int> cycle = boundary_cycle(surface);
  const std::size_t n = cycle.size();
  if (loop.vertices.size() - 1 != n)
    throw std::invalid_argument("stokes_residual: surface boundary does not match the loop");

  double span = 1.0;
  for (const Vector& v : loop.vertices) span = std::max(span, v.norm());
  const double tol = 1e-12 * span;

  bool matched = false;
  for (std::size_t shift = 0; shift < n && !matched; ++shift) {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Vector& lv = loop.vertices[i];
      const Vector& sv = surface.vertices[static_cast<std::size_t>(cycle[(i + shift) % n])];
      if ((lv - sv).norm() > tol) {
        ok = false;
        break;
      }
    }
    matched = ok;
  }
  if (!matched)
    throw std::invalid_argument("stokes_residual: surface boundary does not match the loop");

  const Vector line = line_integral(f, loop);
  const Vector flux = surface_integral(curl_matrix_field(f), surface);
  return (line - flux).norm();
}

}  // namespace disarr
