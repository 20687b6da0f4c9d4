#ifndef DISARR_ORACLE_HPP
#define DISARR_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "disarr/tensor.hpp"

namespace disarr {

/// Outcome of a brute-force rotation search. `parameters` holds the rotation
/// in its natural chart: an angle for N = 2, a unit quaternion (w, x, y, z)
/// for N = 3, the flattened matrix otherwise; the infimum probe appends the
/// lattice offset.
struct SearchReport {
  double best_value = 0.0;
  std::vector<double> best_parameters;
  Matrix rotation;
  std::int64_t evaluations = 0;
  std::uint64_t seed = 0;

  SearchReport() : rotation(Matrix::identity(1)) {}
};

/// Exhaustive angle grid on [0, pi/2) (the objective has that period in 2-D)
/// followed by golden-section refinement around the best grid point.
SearchReport rotation_grid_search_2d(const Matrix& m, int resolution);

/// Haar-like sampling: per-trial seeded Gaussian matrices orthonormalized by
/// Gram-Schmidt with the determinant sign fixed, followed by a shrinking
/// random-plane descent from the best sample. Reproducible for a fixed seed.
SearchReport rotation_random_search(const Matrix& m, int trials, std::uint64_t seed);

/// Smallest tilted-tiling jump energy plus the analytic frame allowance over
/// the given lattice offsets and rotations (offsets outer, first minimum
/// wins). The probed energy covers the shrunken cube only, so its guaranteed
/// floor is |tr M| (1 - 2/(n+2))^N; the allowance uses unit constant and can
/// undershoot the actual frame contribution.
SearchReport infimum_probe(const Matrix& m, int n, int resolution,
                           const std::vector<Vector>& offsets,
                           const std::vector<Matrix>& rotations);

}  // namespace disarr

#endif
