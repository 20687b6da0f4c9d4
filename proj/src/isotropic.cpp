#include "disarr/isotropic.hpp"

#include <cmath>
#include <stdexcept>

#include "disarr/errors.hpp"

namespace disarr {

namespace {

// Restriction W^T A W of A to the subspace spanned by the columns of W.
Matrix restrict_to(const Matrix& a, const std::vector<Vector>& w) {
  const int k = static_cast<int>(w.size());
  Matrix b(k);
  std::vector<Vector> aw;
  aw.reserve(w.size());
  for (const Vector& col : w) aw.push_back(a.apply(col));
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) b(r, c) = w[r].dot(aw[c]);
  return symmetric_part(b);
}

Vector from_subspace(const std::vector<Vector>& w, const Vector& coeffs) {
  Vector v = Vector::zero(w[0].dim());
  for (int r = 0; r < static_cast<int>(w.size()); ++r) v = v + w[r] * coeffs[r];
  return v;
}

// Combines the extreme eigenpairs of the restricted operator into a unit
// vector whose quadratic form vanishes: l+ cos^2 + l- sin^2 = 0.
Vector balanced_null_direction(const EigenDecomposition& eig) {
  const int k = static_cast<int>(eig.eigenvalues.size());
  const double lp = eig.eigenvalues.front();
  const double lm = eig.eigenvalues.back();
  const double tan_t = std::sqrt(lp / (-lm));
  const double c = 1.0 / std::sqrt(1.0 + tan_t * tan_t);
  const double s = tan_t * c;
  Vector v(k);
  for (int i = 0; i < k; ++i) v[i] = c * eig.eigenvectors.front()[i] + s * eig.eigenvectors.back()[i];
  return v;
}

// Orthonormal basis of the complement of the unit vector v within R^k,
// read off a Householder reflection mapping e_1 to +/- v.
std::vector<Vector> complement_basis(const Vector& v) {
  const int k = v.dim();
  Vector w = v;
  w[0] += (v[0] >= 0.0) ? 1.0 : -1.0;
  const double wtw = w.dot(w);
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(k) - 1);
  for (int col = 1; col < k; ++col) {
    Vector h = Vector::basis(k, col) - w * (2.0 * w[col] / wtw);
    basis.push_back(h);
  }
  return basis;
}

}  // namespace

Vector zero_quadratic_unit_vector(const Matrix& a, const std::vector<Vector>& subspace_basis) {
  if (subspace_basis.empty())
    throw std::invalid_argument("zero_quadratic_unit_vector: empty subspace");
  for (const Vector& b : subspace_basis)
    if (b.dim() != a.dim())
      throw dimension_mismatch("zero_quadratic_unit_vector: basis dimension mismatch");

  const double scale = frobenius_norm(a);
  const Matrix b = restrict_to(a, subspace_basis);
  const double bscale = frobenius_norm(b);

  if (bscale <= 1e-13 * (scale + 1.0)) return subspace_basis.front();

  const EigenDecomposition eig = symmetric_eigendecomposition(b);
  const double lp = eig.eigenvalues.front();
  const double lm = eig.eigenvalues.back();
  if (lp <= 1e-13 * bscale || lm >= -1e-13 * bscale)
    throw std::domain_error(
        "zero_quadratic_unit_vector: restricted form has no sign change");

  return from_subspace(subspace_basis, balanced_null_direction(eig));
}

Matrix deflate(const Matrix& a, const Vector& v1) {
  if (v1.dim() != a.dim()) throw dimension_mismatch("deflate: dimension mismatch");
  if (std::abs(v1.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("deflate: v1 must be a unit vector");
  const Vector av = a.apply(v1);
  return a - tensor_product(v1, av) - tensor_product(av, v1);
}

IsotropicFrame isotropic_frame(const Matrix& a) {
  const int n = a.dim();
  const double scale = frobenius_norm(a);
  if (std::abs(trace(a)) > 1e-10 * (scale + 1.0))
    throw std::invalid_argument("isotropic_frame: matrix must be traceless");

  const EigenDecomposition eig = symmetric_eigendecomposition(a);  // rejects asymmetry

  IsotropicFrame frame{n, {}, a};
  frame.vectors.reserve(static_cast<std::size_t>(n));

  // Kernel directions are isotropic as they stand.
  std::vector<Vector> working;
  for (int i = 0; i < n; ++i) {
    if (std::abs(eig.eigenvalues[i]) <= 1e-12 * scale)
      frame.vectors.push_back(eig.eigenvectors[i]);
    else
      working.push_back(eig.eigenvectors[i]);
  }

  while (!working.empty()) {
    const Matrix b = restrict_to(a, working);
    const double bscale = frobenius_norm(b);
    if (bscale <= 1e-12 * (scale + 1.0)) {
      for (const Vector& wv : working) frame.vectors.push_back(wv);
      break;
    }
    const EigenDecomposition sub = symmetric_eigendecomposition(b);
    if (sub.eigenvalues.front() <= 0.0 || sub.eigenvalues.back() >= 0.0)
      throw std::logic_error("isotropic_frame: restricted operator lost its sign change");

    const Vector coeffs = balanced_null_direction(sub);
    frame.vectors.push_back(from_subspace(working, coeffs));

    if (working.size() == 1) break;
    std::vector<Vector> next;
    next.reserve(working.size() - 1);
    for (const Vector& h : complement_basis(coeffs)) next.push_back(from_subspace(working, h));
    working = std::move(next);
  }
  return frame;
}

MinimizingRotation minimizing_rotation(const Matrix& m) {
  const int n = m.dim();
  const Matrix sym = symmetric_part(m);
  const double t = trace(sym);

  Matrix shifted = sym;
  for (int i = 0; i < n; ++i) shifted(i, i) -= t / n;

  const IsotropicFrame frame = isotropic_frame(shifted);

  Matrix r(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) r(i, j) = frame.vectors[j][i];
  if (determinant(r) < 0.0)
    for (int i = 0; i < n; ++i) r(i, n - 1) = -r(i, n - 1);

  MinimizingRotation out{r, 0.0, {}};
  out.per_term.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Vector col = r.column(j);
    const double q = sym.apply(col).dot(col);
    out.per_term.push_back(q);
    out.objective += std::abs(q);
  }
  return out;
}

double rotation_objective(const Matrix& m, const Matrix& r) {
  if (r.dim() != m.dim()) throw dimension_mismatch("rotation_objective: dimension mismatch");
  const Matrix gram = r.transpose() * r;
  double dev = 0.0;
  for (int i = 0; i < r.dim(); ++i)
    for (int j = 0; j < r.dim(); ++j)
      dev = std::max(dev, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  if (dev > 1e-10) throw std::invalid_argument("rotation_objective: R is not orthogonal");

  const Matrix sym = symmetric_part(m);
  double total = 0.0;
  for (int j = 0; j < r.dim(); ++j) {
    const Vector col = r.column(j);
    total += std::abs(sym.apply(col).dot(col));
  }
  return total;
}

}  // namespace disarr
