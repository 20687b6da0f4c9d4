#include "disarr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "disarr/errors.hpp"

namespace disarr {

namespace {

void require_finite(const std::vector<double>& xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite entry");
  }
}

}  // namespace

Vector::Vector(int dim) : comps_(static_cast<std::size_t>(dim), 0.0) {
  if (dim < 1) throw std::invalid_argument("vector dimension must be >= 1");
}

Vector::Vector(std::initializer_list<double> comps) : comps_(comps) {
  if (comps_.empty()) throw std::invalid_argument("vector dimension must be >= 1");
  require_finite(comps_);
}

Vector::Vector(std::vector<double> comps) : comps_(std::move(comps)) {
  if (comps_.empty()) throw std::invalid_argument("vector dimension must be >= 1");
  require_finite(comps_);
}

Vector Vector::zero(int dim) { return Vector(dim); }

Vector Vector::basis(int dim, int i) {
  Vector v(dim);
  if (i < 0 || i >= dim) throw std::invalid_argument("basis index out of range");
  v[i] = 1.0;
  return v;
}

double Vector::dot(const Vector& other) const {
  if (other.dim() != dim()) throw dimension_mismatch("dot: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += comps_[i] * other.comps_[i];
  return s;
}

double Vector::norm() const { return std::sqrt(dot(*this)); }

Vector Vector::operator+(const Vector& other) const {
  if (other.dim() != dim()) throw dimension_mismatch("vector add: dimension mismatch");
  Vector r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = comps_[i] + other.comps_[i];
  return r;
}

Vector Vector::operator-(const Vector& other) const {
  if (other.dim() != dim()) throw dimension_mismatch("vector sub: dimension mismatch");
  Vector r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = comps_[i] - other.comps_[i];
  return r;
}

Vector Vector::operator*(double s) const {
  Vector r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = comps_[i] * s;
  return r;
}

Vector Vector::operator-() const { return *this * -1.0; }

Matrix::Matrix(int dim)
    : dim_(dim), entries_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
}

Matrix::Matrix(int dim, std::vector<double> row_major)
    : dim_(dim), entries_(std::move(row_major)) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  if (entries_.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
    throw std::invalid_argument("matrix entry count does not match dimension");
  require_finite(entries_);
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  Matrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.dim() != dim_) throw dimension_mismatch("matrix apply: dimension mismatch");
  Vector r(dim_);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Vector Matrix::apply_transpose(const Vector& v) const {
  if (v.dim() != dim_) throw dimension_mismatch("matrix apply_transpose: dimension mismatch");
  Vector r(dim_);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += (*this)(j, i) * v[j];
    r[i] = s;
  }
  return r;
}

Vector Matrix::row(int i) const {
  Vector r(dim_);
  for (int j = 0; j < dim_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vector Matrix::column(int j) const {
  Vector r(dim_);
  for (int i = 0; i < dim_; ++i) r[i] = (*this)(i, j);
  return r;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (other.dim_ != dim_) throw dimension_mismatch("matrix add: dimension mismatch");
  Matrix r(dim_);
  for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] + other.entries_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& other) const {
  if (other.dim_ != dim_) throw dimension_mismatch("matrix sub: dimension mismatch");
  Matrix r(dim_);
  for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] - other.entries_[k];
  return r;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (other.dim_ != dim_) throw dimension_mismatch("matrix mul: dimension mismatch");
  Matrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < dim_; ++j) r(i, j) += a * other(k, j);
    }
  return r;
}

Matrix Matrix::operator*(double s) const {
  Matrix r(dim_);
  for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] * s;
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double e : entries_) m = std::max(m, std::abs(e));
  return m;
}

Matrix symmetric_part(const Matrix& m) {
  Matrix r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
  return r;
}

double trace(const Matrix& m) {
  double t = 0.0;
  for (int i = 0; i < m.dim(); ++i) t += m(i, i);
  return t;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double e : m.entries()) s += e * e;
  return std::sqrt(s);
}

double row_max_norm(const Matrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.dim(); ++j) s += m(i, j) * m(i, j);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

Matrix tensor_product(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw dimension_mismatch("tensor_product: dimension mismatch");
  Matrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a[i] * b[j];
  return r;
}

EigenDecomposition symmetric_eigendecomposition(const Matrix& s) {
  const int n = s.dim();
  const double scale = frobenius_norm(s);

  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("symmetric_eigendecomposition: matrix is not symmetric");

  Matrix a = symmetric_part(s);
  Matrix v = Matrix::identity(n);

  // Cyclic Jacobi; quadratic convergence makes 64 sweeps far more than enough
  // for n <= 8. Hitting the cap means the input was not a finite symmetric
  // matrix, which the constructors already exclude.
  const int max_sweeps = 64;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= scale * scale * 1e-32) break;

    // small rotations are skipped early on to avoid churning on noise
    const double thresh = (sweep < 3) ? 0.2 * off / (n * n) : 0.0;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq * apq <= thresh && sweep < 3) continue;
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = akp - sn * (akq + tau * akp);
          a(p, k) = a(k, p);
          a(k, q) = akq + sn * (akp - tau * akq);
          a(q, k) = a(k, q);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = vkp - sn * (vkq + tau * vkp);
          v(k, q) = vkq + sn * (vkp - tau * vkq);
        }
      }
    }
  }
  if (sweep == max_sweeps)
    throw std::logic_error("symmetric_eigendecomposition: Jacobi sweep cap exceeded");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  out.eigenvectors.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    const int c = order[static_cast<std::size_t>(r)];
    out.eigenvalues.push_back(a(c, c));
    Vector ev = v.column(c);
    for (int k = 0; k < n; ++k) {
      if (std::abs(ev[k]) > 1e-12) {
        if (ev[k] < 0.0) ev = -ev;
        break;
      }
    }
    out.eigenvectors.push_back(ev);
  }
  return out;
}

double determinant(const Matrix& m) {
  const int n = m.dim();
  Matrix a = m;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

}  // namespace disarr
