#include "disarr/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "disarr/errors.hpp"
#include "disarr/rng.hpp"
#include "disarr/tilted.hpp"

namespace disarr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Direct evaluation of sum_i |sym(M) r_i . r_i| over the columns of R,
// independent of the frame construction it cross-checks.
double objective(const Matrix& sym, const Matrix& r) {
  double total = 0.0;
  for (int j = 0; j < r.dim(); ++j) {
    double q = 0.0;
    for (int a = 0; a < r.dim(); ++a)
      for (int b = 0; b < r.dim(); ++b) q += r(a, j) * sym(a, b) * r(b, j);
    total += std::abs(q);
  }
  return total;
}

Matrix rotation_2d(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Matrix(2, {c, -s, s, c});
}

// Gram-Schmidt orthonormalization of a Gaussian sample, determinant +1.
Matrix haar_like_rotation(int n, SplitMix64& rng) {
  Matrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  for (int col = 0; col < n; ++col) {
    for (int prev = 0; prev < col; ++prev) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += g(i, col) * g(i, prev);
      for (int i = 0; i < n; ++i) g(i, col) -= d * g(i, prev);
    }
    double len = 0.0;
    for (int i = 0; i < n; ++i) len += g(i, col) * g(i, col);
    len = std::sqrt(len);
    if (len < 1e-12) {
      // resample a degenerate column
      for (int i = 0; i < n; ++i) g(i, col) = rng.normal();
      --col;
      continue;
    }
    for (int i = 0; i < n; ++i) g(i, col) /= len;
  }
  if (determinant(g) < 0.0)
    for (int i = 0; i < n; ++i) g(i, n - 1) = -g(i, n - 1);
  return g;
}

Matrix givens(int n, int p, int q, double angle) {
  Matrix g = Matrix::identity(n);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  g(p, p) = c;
  g(q, q) = c;
  g(p, q) = -s;
  g(q, p) = s;
  return g;
}

std::vector<double> quaternion_from_rotation(const Matrix& r) {
  const double t = trace(r);
  double w, x, y, z;
  if (t > 0.0) {
    double s = std::sqrt(t + 1.0) * 2.0;
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  return {w, x, y, z};
}

std::vector<double> rotation_parameters(const Matrix& r) {
  if (r.dim() == 2) return {std::atan2(r(1, 0), r(0, 0))};
  if (r.dim() == 3) return quaternion_from_rotation(r);
  return r.entries();
}

}  // namespace

SearchReport rotation_grid_search_2d(const Matrix& m, int resolution) {
  if (m.dim() != 2) throw dimension_mismatch("rotation_grid_search_2d: matrix must be 2x2");
  if (resolution < 2) throw std::invalid_argument("rotation_grid_search_2d: resolution >= 2");

  const Matrix sym = symmetric_part(m);
  const double t = trace(sym);
  auto value_at = [&](double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double q = c * c * sym(0, 0) + s * s * sym(1, 1) + 2.0 * c * s * sym(0, 1);
    return std::abs(q) + std::abs(t - q);
  };

  SearchReport rep;
  const double step = 0.5 * kPi / resolution;
  double best_angle = 0.0;
  double best = value_at(0.0);
  rep.evaluations = 1;
  for (int k = 1; k < resolution; ++k) {
    const double angle = step * k;
    const double v = value_at(angle);
    rep.evaluations += 1;
    if (v < best) {
      best = v;
      best_angle = angle;
    }
  }

  // golden-section refinement in the bracket around the best grid point
  const double inv_phi = 0.6180339887498948482;
  double lo = best_angle - step;
  double hi = best_angle + step;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = value_at(x1);
  double f2 = value_at(x2);
  rep.evaluations += 2;
  for (int it = 0; it < 120; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value_at(x2);
    }
    rep.evaluations += 1;
  }
  const double refined = (f1 <= f2) ? x1 : x2;
  const double refined_value = std::min(f1, f2);
  if (refined_value < best) {
    best = refined_value;
    best_angle = refined;
  }

  rep.best_value = best;
  rep.rotation = rotation_2d(best_angle);
  rep.best_parameters = {best_angle};
  rep.seed = 0;
  return rep;
}

SearchReport rotation_random_search(const Matrix& m, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("rotation_random_search: trials >= 1");
  const int n = m.dim();
  const Matrix sym = symmetric_part(m);
  const SplitMix64 root(seed);

  SearchReport rep;
  rep.seed = seed;
  rep.rotation = Matrix::identity(n);
  rep.best_value = objective(sym, rep.rotation);
  rep.evaluations = 1;

  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng = root.split(static_cast<std::uint64_t>(trial));
    const Matrix r = haar_like_rotation(n, rng);
    const double v = objective(sym, r);
    rep.evaluations += 1;
    if (v < rep.best_value) {
      rep.best_value = v;
      rep.rotation = r;
    }
  }

  // shrinking random-plane descent from the best sample
  SplitMix64 refine = root.split(static_cast<std::uint64_t>(trials) + 17);
  double stepsize = 0.2;
  for (int it = 0; it < 400; ++it) {
    const int p = static_cast<int>(refine.next_u64() % static_cast<std::uint64_t>(n));
    int q = static_cast<int>(refine.next_u64() % static_cast<std::uint64_t>(n - 1));
    if (q >= p) ++q;
    const double angle = stepsize * refine.normal();
    const Matrix cand = rep.rotation * givens(n, std::min(p, q), std::max(p, q), angle);
    const double v = objective(sym, cand);
    rep.evaluations += 1;
    if (v < rep.best_value) {
      rep.best_value = v;
      rep.rotation = cand;
    } else {
      stepsize *= 0.985;
    }
  }

  rep.best_parameters = rotation_parameters(rep.rotation);
  return rep;
}

SearchReport infimum_probe(const Matrix& m, int n, int resolution,
                           const std::vector<Vector>& offsets,
                           const std::vector<Matrix>& rotations) {
  if (m.dim() < 2 || m.dim() > 3)
    throw unsupported_dimension("infimum_probe: dimension must be 2 or 3");
  if (offsets.empty() || rotations.empty())
    throw std::invalid_argument("infimum_probe: need at least one offset and rotation");

  const double frame_allowance =
      frobenius_norm(m) * (1.0 - std::pow(1.0 - 2.0 / (n + 2), m.dim()));

  SearchReport rep;
  rep.rotation = Matrix::identity(m.dim());
  bool first = true;
  Vector best_offset = offsets.front();
  for (const Vector& off : offsets)
    for (const Matrix& r : rotations) {
      const TiltedTiling tiling = build_tiling(m, r, n, resolution, off);
      const double value = tiling_energy(tiling).energy + frame_allowance;
      rep.evaluations += 1;
      if (first || value < rep.best_value) {
        first = false;
        rep.best_value = value;
        rep.rotation = r;
        best_offset = off;
      }
    }

  rep.best_parameters = rotation_parameters(rep.rotation);
  for (int i = 0; i < best_offset.dim(); ++i) rep.best_parameters.push_back(best_offset[i]);
  rep.seed = 0;
  return rep;
}

}  // namespace disarr
