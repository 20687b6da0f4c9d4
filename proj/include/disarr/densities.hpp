#ifndef DISARR_DENSITIES_HPP
#define DISARR_DENSITIES_HPP

#include <array>
#include <vector>

#include "disarr/polygon.hpp"
#include "disarr/tensor.hpp"

namespace disarr {

/// One cell of a discrete structured deformation: a convex polytope carrying
/// the affine map x -> grad_g x + offset_g and a constant tensor G.
struct MeshCell {
  std::vector<Vector> vertices;
  Matrix grad_g;
  Vector offset_g;
  Matrix tensor_g;

  MeshCell(std::vector<Vector> vertices, Matrix grad_g, Vector offset_g, Matrix tensor_g);
};

/// Declared interface: jump(x) = jump_const + jump_grad x on the face, with
/// unit normal pointing from the "minus" cell to the "plus" cell.
struct MeshJumpFace {
  std::vector<Vector> vertices;
  Vector normal;
  Vector jump_const;
  Matrix jump_grad;
};

/// Cells with affine deformations plus declared jump faces. Construction
/// locates the two cells adjacent to every face and cross-checks the declared
/// jump against the difference of their affine maps (mesh_consistency_error
/// when they disagree).
class StructuredDeformationMesh {
 public:
  StructuredDeformationMesh(int dim, std::vector<MeshCell> cells,
                            std::vector<MeshJumpFace> jump_faces);

  int dim() const { return dim_; }
  const std::vector<MeshCell>& cells() const { return cells_; }
  const std::vector<MeshJumpFace>& jump_faces() const { return faces_; }
  /// Indices of the (plus, minus) cells adjacent to each face.
  const std::vector<std::array<int, 2>>& face_cells() const { return face_cells_; }

  double cell_volume(int cell) const { return bodies_[static_cast<std::size_t>(cell)].volume; }

 private:
  int dim_;
  std::vector<MeshCell> cells_;
  std::vector<MeshJumpFace> faces_;
  std::vector<geom::ConvexBody> bodies_;
  std::vector<std::array<int, 2>> face_cells_;
};

enum class DensityVariant { abs, plus, minus };

/// Bulk, interfacial and total disarrangement volumes over a region, plus the
/// signed total sum(tr M) dV + sum([g].nu) dA that links the signed variants:
/// v_plus/minus = (v_abs +/- signed_total) / 2.
struct DisarrangementReport {
  double bulk_abs = 0.0, bulk_plus = 0.0, bulk_minus = 0.0;
  double interfacial_abs = 0.0, interfacial_plus = 0.0, interfacial_minus = 0.0;
  double v_abs = 0.0, v_plus = 0.0, v_minus = 0.0;
  double signed_total = 0.0;
};

/// grad_g - G on a cell.
Matrix disarrangement_tensor(const MeshCell& cell);

/// |tr(A - B)| and its one-sided parts.
double relaxed_bulk(const Matrix& a, const Matrix& b, DensityVariant variant);

/// |xi . nu| and its one-sided parts; nu must be a unit vector.
double relaxed_interfacial(const Vector& xi, const Vector& nu, DensityVariant variant);

/// |(B - A)^T a|, the Euclidean norm; component convention
/// (M^T a)_i = sum_j M_ji a_j, so a = delta_i picks out row i of M.
double relaxed_bulk_directional(const Matrix& a, const Matrix& b, const Vector& direction);

/// Integral of the chosen bulk density plus the matching interfacial integral
/// over the cells listed in `region` (faces count when both neighbours are in
/// the region).
double volume_swept(const StructuredDeformationMesh& mesh, const std::vector<int>& region,
                    DensityVariant variant);

DisarrangementReport disarrangement_report(const StructuredDeformationMesh& mesh,
                                           const std::vector<int>& region);

/// sum over cells of |M_c^T a| * volume.
double directional_bulk_integral(const StructuredDeformationMesh& mesh, const Vector& a);

/// sum over cells of the row-max norm of M_c times volume; dominates the
/// directional integral for every coordinate direction.
double rowmax_bulk_integral(const StructuredDeformationMesh& mesh);

}  // namespace disarr

#endif
