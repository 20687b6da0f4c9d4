#ifndef DISARR_TENSOR_HPP
#define DISARR_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace disarr {

/// Dense real vector of small fixed dimension. Components are validated to be
/// finite on construction.
class Vector {
 public:
  explicit Vector(int dim);
  Vector(std::initializer_list<double> comps);
  explicit Vector(std::vector<double> comps);

  static Vector zero(int dim);
  static Vector basis(int dim, int i);

  int dim() const { return static_cast<int>(comps_.size()); }
  double operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return comps_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& components() const { return comps_; }

  double dot(const Vector& other) const;
  double norm() const;

  Vector operator+(const Vector& other) const;
  Vector operator-(const Vector& other) const;
  Vector operator*(double s) const;
  Vector operator-() const;

 private:
  std::vector<double> comps_;
};

inline Vector operator*(double s, const Vector& v) { return v * s; }

/// Dense real N-by-N matrix, row-major: entry(i, j) is row i, column j.
/// Entries are validated to be finite on construction.
class Matrix {
 public:
  explicit Matrix(int dim);                          // zero matrix
  Matrix(int dim, std::vector<double> row_major);

  static Matrix identity(int dim);
  static Matrix diagonal(const std::vector<double>& d);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return entries_[idx(i, j)]; }
  double& operator()(int i, int j) { return entries_[idx(i, j)]; }
  const std::vector<double>& entries() const { return entries_; }

  Matrix transpose() const;
  Vector apply(const Vector& v) const;               // M v
  Vector apply_transpose(const Vector& v) const;     // M^T v
  Vector row(int i) const;
  Vector column(int j) const;

  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix operator*(const Matrix& other) const;
  Matrix operator*(double s) const;

  double max_abs() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(j);
  }

  int dim_;
  std::vector<double> entries_;
};

inline Matrix operator*(double s, const Matrix& m) { return m * s; }

/// Eigenpairs of a symmetric matrix, eigenvalues sorted descending,
/// eigenvectors orthonormal with a deterministic sign convention (first
/// component of magnitude above 1e-12 is positive).
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Vector> eigenvectors;
};

Matrix symmetric_part(const Matrix& m);
double trace(const Matrix& m);
double frobenius_norm(const Matrix& m);

/// Maximum over rows of the Euclidean row norm.
double row_max_norm(const Matrix& m);

/// (a (x) b) v = (b . v) a, i.e. entry(i, j) = a_i b_j.
Matrix tensor_product(const Vector& a, const Vector& b);

/// Cyclic Jacobi with threshold sweeps. Accepts matrices symmetric to within
/// 1e-12 * ||S||_F (symmetrized internally) and rejects anything worse.
EigenDecomposition symmetric_eigendecomposition(const Matrix& s);

double determinant(const Matrix& m);

inline double positive_part(double t) { return 0.5 * (std::abs(t) + t); }
inline double negative_part(double t) { return 0.5 * (std::abs(t) - t); }

}  // namespace disarr

#endif
