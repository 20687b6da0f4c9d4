#ifndef DISARR_ISOTROPIC_HPP
#define DISARR_ISOTROPIC_HPP

#include <vector>

#include "disarr/tensor.hpp"

namespace disarr {

/// Complete orthonormal set v_1..v_N with A v_i . v_i = 0 for the symmetric
/// traceless source matrix A. Such a set exists exactly when tr A = 0.
struct IsotropicFrame {
  int dim;
  std::vector<Vector> vectors;
  Matrix source;
};

/// Orthogonal R minimizing sum_i |sym(M) R e_i . R e_i|; the minimum equals
/// |tr M| and every term equals tr M / N.
struct MinimizingRotation {
  Matrix rotation;
  double objective;
  std::vector<double> per_term;
};

/// Unit vector v in the span of `subspace_basis` (orthonormal) with
/// A v . v = 0. Requires the restriction of A to the subspace to be
/// indefinite or zero; a semidefinite nonzero restriction has no such vector
/// and raises std::domain_error.
///
/// Built in closed form from the extreme eigenpairs (l+, u+), (l-, u-) of the
/// restricted operator: v = cos(t) u+ + sin(t) u- with tan^2(t) = l+ / (-l-),
/// which cancels the quadratic form identically.
Vector zero_quadratic_unit_vector(const Matrix& a, const std::vector<Vector>& subspace_basis);

/// A - v1 (x) Av1 - Av1 (x) v1 for a unit isotropic v1 of the symmetric
/// traceless A. The result is symmetric and traceless and agrees with A as a
/// quadratic form on the orthogonal complement of v1.
Matrix deflate(const Matrix& a, const Vector& v1);

/// Recursive construction of a complete orthonormal isotropic set for a
/// symmetric matrix with |tr A| <= 1e-10 (||A|| + 1). Kernel eigenvectors are
/// adopted directly; the remainder is resolved on successively smaller
/// orthogonal complements.
IsotropicFrame isotropic_frame(const Matrix& a);

/// Rotation carrying the standard basis onto an isotropic frame of
/// sym(M) - (tr M / N) I; realizes the minimum |tr M| of the rotation
/// objective with all N terms equal to tr M / N.
MinimizingRotation minimizing_rotation(const Matrix& m);

/// sum_i |sym(M) R e_i . R e_i| over the standard basis. R must be orthogonal
/// to 1e-10. Never falls below |tr M| up to roundoff.
double rotation_objective(const Matrix& m, const Matrix& r);

}  // namespace disarr

#endif
