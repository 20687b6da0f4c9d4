#ifndef DISARR_TESTS_SUPPORT_HPP
#define DISARR_TESTS_SUPPORT_HPP

#include <vector>

#include "disarr/densities.hpp"
#include "disarr/rng.hpp"
#include "disarr/tensor.hpp"

namespace testsupport {

inline disarr::Matrix random_matrix(int dim, disarr::SplitMix64& rng, double scale = 1.0) {
  std::vector<double> entries(static_cast<std::size_t>(dim) * dim);
  for (double& e : entries) e = rng.uniform(-scale, scale);
  return disarr::Matrix(dim, std::move(entries));
}

inline disarr::Matrix random_symmetric(int dim, disarr::SplitMix64& rng, double scale = 1.0) {
  return disarr::symmetric_part(random_matrix(dim, rng, scale));
}

inline disarr::Matrix random_traceless_symmetric(int dim, disarr::SplitMix64& rng,
                                                 double scale = 1.0) {
  disarr::Matrix s = random_symmetric(dim, rng, scale);
  const double shift = disarr::trace(s) / dim;
  for (int i = 0; i < dim; ++i) s(i, i) -= shift;
  return s;
}

inline disarr::Vector random_vector(int dim, disarr::SplitMix64& rng, double scale = 1.0) {
  disarr::Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

inline disarr::Vector random_unit_vector(int dim, disarr::SplitMix64& rng) {
  while (true) {
    disarr::Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.normal();
    const double len = v.norm();
    if (len > 1e-6) return v * (1.0 / len);
  }
}

// Haar-like random rotation: orthonormalized Gaussian columns, det +1.
inline disarr::Matrix random_rotation(int dim, disarr::SplitMix64& rng) {
  disarr::Matrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  for (int col = 0; col < dim; ++col) {
    for (int prev = 0; prev < col; ++prev) {
      double d = 0.0;
      for (int i = 0; i < dim; ++i) d += g(i, col) * g(i, prev);
      for (int i = 0; i < dim; ++i) g(i, col) -= d * g(i, prev);
    }
    double len = 0.0;
    for (int i = 0; i < dim; ++i) len += g(i, col) * g(i, col);
    len = std::sqrt(len);
    for (int i = 0; i < dim; ++i) g(i, col) /= len;
  }
  if (disarr::determinant(g) < 0.0)
    for (int i = 0; i < dim; ++i) g(i, dim - 1) = -g(i, dim - 1);
  return g;
}

// Random rectilinear mesh on the unit square: nx-by-ny cells, each with its
// own random affine map and tensor G, every shared edge declared as a jump
// face with the exact trace difference (so the validator passes).
inline disarr::StructuredDeformationMesh random_grid_mesh(int nx, int ny,
                                                          disarr::SplitMix64& rng) {
  using disarr::Matrix;
  using disarr::MeshCell;
  using disarr::MeshJumpFace;
  using disarr::Vector;

  const double hx = 1.0 / nx;
  const double hy = 1.0 / ny;
  std::vector<MeshCell> cells;
  std::vector<Matrix> grads;
  std::vector<Vector> offsets;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double x0 = i * hx, y0 = j * hy;
      std::vector<Vector> verts{Vector{x0, y0}, Vector{x0 + hx, y0}, Vector{x0 + hx, y0 + hy},
                                Vector{x0, y0 + hy}};
      Matrix grad = random_matrix(2, rng);
      Vector off = random_vector(2, rng);
      Matrix g_tensor = random_matrix(2, rng);
      grads.push_back(grad);
      offsets.push_back(off);
      cells.emplace_back(std::move(verts), std::move(grad), std::move(off),
                         std::move(g_tensor));
    }

  auto cell_id = [ny](int i, int j) { return i * ny + j; };
  std::vector<MeshJumpFace> faces;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (i + 1 < nx) {  // vertical edge, normal +x, plus cell is (i+1, j)
        const double x = (i + 1) * hx;
        const int plus = cell_id(i + 1, j), minus = cell_id(i, j);
        MeshJumpFace f{{Vector{x, j * hy}, Vector{x, (j + 1) * hy}},
                       Vector{1.0, 0.0},
                       offsets[plus] - offsets[minus],
                       grads[plus] - grads[minus]};
        faces.push_back(std::move(f));
      }
      if (j + 1 < ny) {  // horizontal edge, normal +y
        const double y = (j + 1) * hy;
        const int plus = cell_id(i, j + 1), minus = cell_id(i, j);
        MeshJumpFace f{{Vector{i * hx, y}, Vector{(i + 1) * hx, y}},
                       Vector{0.0, 1.0},
                       offsets[plus] - offsets[minus],
                       grads[plus] - grads[minus]};
        faces.push_back(std::move(f));
      }
    }
  return disarr::StructuredDeformationMesh(2, std::move(cells), std::move(faces));
}

}  // namespace testsupport

#endif
