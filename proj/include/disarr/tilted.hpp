#ifndef DISARR_TILTED_HPP
#define DISARR_TILTED_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "disarr/tensor.hpp"

namespace disarr {

enum class FaceKind { interior_full, interior_clipped, inner_boundary };

/// Scalar affine function x -> gradient . x + offset, used for the normal
/// jump on a face piece. Interior faces carry a constant (zero gradient).
struct AffineScalar {
  Vector gradient{0.0};
  double offset = 0.0;
  double operator()(const Vector& x) const { return gradient.dot(x) + offset; }
};

/// One convex piece of the jump set: a segment in 2-D or a convex polygon in
/// 3-D, with a unit normal and the normal-jump function on it.
struct JumpFacePiece {
  std::vector<Vector> vertices;
  Vector normal{0.0};
  FaceKind kind = FaceKind::interior_full;
  AffineScalar normal_jump;
};

/// Covering of the shrunken cube (1 - 2/(n+2)) Q by congruent open cubes of
/// edge 1/m whose faces are orthogonal to the columns of `rotation`. Cells
/// are kept exactly when they meet the open shrunken cube; indices are
/// stored in lexicographic order on an anchored lattice.
class TiltedTiling {
 public:
  TiltedTiling(Matrix m_target, Matrix rotation, int n, int m, Vector lattice_offset);

  int dim() const { return m_target_.dim(); }
  const Matrix& target() const { return m_target_; }
  const Matrix& rotation() const { return rotation_; }
  int frame_index() const { return n_; }
  int resolution() const { return m_; }
  double inner_half_width() const { return half_width_; }
  const Vector& lattice_offset() const { return offset_; }

  std::size_t cell_count() const { return cells_.size(); }
  const std::vector<std::array<int, 3>>& cell_indices() const { return cells_; }
  Vector center(std::size_t cell) const;

  bool has_cell(const std::array<int, 3>& k) const;
  /// Cell of the full lattice containing x (boundary ties resolved by
  /// rounding); true when that cell belongs to the tiling.
  bool covers(const Vector& x) const;
  /// Closure of the cell contained in the closed shrunken cube with every
  /// face strictly inside the open one.
  bool cell_is_interior(std::size_t cell) const;

  double cell_volume() const;

 private:
  Matrix m_target_;
  Matrix rotation_;
  int n_;
  int m_;
  double half_width_;
  Vector offset_;

  std::array<int, 3> kmin_{0, 0, 0};
  std::array<int, 3> kdim_{1, 1, 1};
  std::vector<std::uint8_t> member_;
  std::vector<std::array<int, 3>> cells_;
};

/// Totals of one pass over the jump set, accumulated in a fixed enumeration
/// order with compensated summation.
struct EnergyBreakdown {
  double energy = 0.0;                 // integral of the chosen |jump| density
  double assigned_face_sum = 0.0;      // the N positively-oriented faces of interior cells
  double interior_volume = 0.0;
  double straddle_volume = 0.0;
  double boundary_area = 0.0;          // total measure of inner-boundary pieces
  std::int64_t interior_cells = 0;
  std::int64_t piece_count = 0;
};

struct ConvergenceRow {
  int n = 0;
  int m = 0;
  double energy = 0.0;
  double target = 0.0;                 // density * volume of the shrunken cube
  double boundary_bound = 0.0;
  double interior_excess_bound = 0.0;
  double frame_bound = 0.0;
};

enum class EnergyMode { normal, directional };

/// Tiling oriented by the trace-minimizing rotation of `m_target`.
TiltedTiling build_tiling(const Matrix& m_target, int n, int m);

/// Tiling with an explicit orientation and lattice offset (in cell units);
/// used by the infimum probe.
TiltedTiling build_tiling(const Matrix& m_target, const Matrix& rotation, int n, int m,
                          const Vector& lattice_offset);

/// Tiling for the directional density, oriented so the first column of R is
/// parallel to M^T a (identity when M^T a = 0).
TiltedTiling build_directional_tiling(const Matrix& m_target, const Vector& a, int n, int m);

/// Materializes every jump piece: shared interior faces once (normal toward
/// the higher-indexed cell), plus the pieces tiling the boundary of the
/// shrunken cube. Intended for moderate resolutions; energy evaluation
/// streams instead.
std::vector<JumpFacePiece> enumerate_jump_faces(const TiltedTiling& t);

/// Exact integral of |normal_jump| over the piece.
double face_normal_jump_integral(const JumpFacePiece& piece);

/// Streaming pass with integrand |[u] . nu|.
EnergyBreakdown tiling_energy(const TiltedTiling& t);
/// Streaming pass with integrand |[u] . a|.
EnergyBreakdown tiling_energy_directional(const TiltedTiling& t, const Vector& a);

ConvergenceRow interfacial_energy(const Matrix& m_target, int n, int m,
                                  double frame_constant = 1.0);
ConvergenceRow directional_energy(const Matrix& m_target, const Vector& a, int n, int m,
                                  double frame_constant = 1.0);

/// Rows for every (n, m) pair, n outermost.
std::vector<ConvergenceRow> convergence_study(const Matrix& m_target,
                                              const std::vector<int>& n_list,
                                              const std::vector<int>& m_list, EnergyMode mode,
                                              const Vector* direction = nullptr,
                                              double frame_constant = 1.0);

/// Intersection of a convex face (segment or ordered polygon) with the
/// closed cube [-w, w]^dim; empty list when disjoint.
std::vector<std::vector<Vector>> clip_face_to_inner_cube(const std::vector<Vector>& polygon,
                                                         double inner_half_width);

}  // namespace disarr

#endif
