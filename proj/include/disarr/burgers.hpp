#ifndef DISARR_BURGERS_HPP
#define DISARR_BURGERS_HPP

#include <array>
#include <vector>

#include "disarr/tensor.hpp"

namespace disarr {

/// 3x3 tensor field sampled on an axis-aligned lattice. Node (i, j, k) sits
/// at origin + (i h_x, j h_y, k h_z) and is stored at index
/// (i * n_y + j) * n_z + k.
struct SampledTensorField {
  Vector origin{0.0, 0.0, 0.0};
  Vector spacing{1.0, 1.0, 1.0};
  std::array<int, 3> counts{3, 3, 3};
  std::vector<Matrix> values;

  SampledTensorField() = default;
  SampledTensorField(Vector origin, Vector spacing, std::array<int, 3> counts,
                     std::vector<Matrix> values);

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * counts[1] + static_cast<std::size_t>(j)) * counts[2] +
           static_cast<std::size_t>(k);
  }
  const Matrix& at(int i, int j, int k) const { return values[index(i, j, k)]; }

  /// Trilinear interpolation; throws geometry_out_of_bounds outside the hull.
  Matrix sample(const Vector& x) const;

  double min_spacing() const;
};

/// Closed polyline: first vertex repeated at the end, at least three distinct
/// points.
struct OrientedLoop {
  std::vector<Vector> vertices;
  explicit OrientedLoop(std::vector<Vector> vertices);
  OrientedLoop reversed() const;
};

/// Triangulated surface with consistent orientation; its boundary cycle must
/// match a loop (right-hand rule) for Stokes checks.
struct OrientedSurface {
  std::vector<Vector> vertices;
  std::vector<std::array<int, 3>> triangles;
  OrientedSurface flipped() const;
};

/// Row-wise curl: row r of the result is the classical curl of row r of the
/// input, by second-order differences (central inside, one-sided at the
/// boundary). With this convention the circulation of M along a loop equals
/// the flux of (curl M) nu through any spanning surface.
SampledTensorField curl_matrix_field(const SampledTensorField& f);

/// Circulation of M: integral of M applied to the unit tangent, by composite
/// midpoint quadrature with trilinear sampling.
Vector line_integral(const SampledTensorField& f, const OrientedLoop& loop);

/// Flux of (curl M) nu: centroid-rule sum over triangles.
Vector surface_integral(const SampledTensorField& curl_f, const OrientedSurface& surface);

/// || circulation - flux || after checking that the surface boundary equals
/// the loop up to a cyclic shift.
double stokes_residual(const SampledTensorField& f, const OrientedLoop& loop,
                       const OrientedSurface& surface);

}  // namespace disarr

#endif
