#include "disarr/tilted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "disarr/errors.hpp"
#include "disarr/isotropic.hpp"
#include "disarr/kahan.hpp"
#include "disarr/polygon.hpp"

namespace disarr {

namespace {

using geom::Affine;
using geom::Poly;
using geom::Pt;

Pt to_pt(const Vector& v) {
  Pt p{0.0, 0.0, 0.0};
  for (int i = 0; i < v.dim(); ++i) p[i] = v[i];
  return p;
}

Vector to_vector(const Pt& p, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = p[i];
  return v;
}

void check_orthogonal(const Matrix& r) {
  const Matrix gram = r.transpose() * r;
  for (int i = 0; i < r.dim(); ++i)
    for (int j = 0; j < r.dim(); ++j)
      if (std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) > 1e-10)
        throw std::invalid_argument("tilted tiling: rotation is not orthogonal");
}

// Per-tiling geometry shared by the enumeration and the jump-set walks.
struct Frame {
  int dim;
  double w;     // half-width of the shrunken cube
  double edge;  // cell edge 1/m
  Pt axis[3];   // columns of the rotation
  double row_reach[3];  // max |x_j - c_j| over a closed cell

  explicit Frame(const Matrix& r, double half_width, int m) {
    dim = r.dim();
    w = half_width;
    edge = 1.0 / m;
    for (int i = 0; i < 3; ++i) axis[i] = Pt{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) axis[i][j] = r(j, i);
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) s += std::abs(axis[i][j]);
      row_reach[j] = 0.5 * edge * s;
    }
  }

  Poly plus_face(const Pt& c, int i) const {
    const double h = 0.5 * edge;
    Pt f = geom::add(c, geom::scale(axis[i], h));
    if (dim == 2) {
      const Pt& t = axis[1 - i];
      return {geom::sub(f, geom::scale(t, h)), geom::add(f, geom::scale(t, h))};
    }
    const int u = (i == 0) ? 1 : 0;
    const int v = (i == 2) ? 1 : 2;
    const Pt du = geom::scale(axis[u], h);
    const Pt dv = geom::scale(axis[v], h);
    return {geom::sub(geom::sub(f, du), dv), geom::sub(geom::add(f, du), dv),
            geom::add(geom::add(f, du), dv), geom::add(geom::sub(f, du), dv)};
  }

  Poly cube_face(int j, int sign) const {
    Pt f{0.0, 0.0, 0.0};
    f[j] = sign * w;
    if (dim == 2) {
      const int o = 1 - j;
      Pt a = f, b = f;
      a[o] = -w;
      b[o] = w;
      return {a, b};
    }
    const int u = (j == 0) ? 1 : 0;
    const int v = (j == 2) ? 1 : 2;
    Pt p1 = f, p2 = f, p3 = f, p4 = f;
    p1[u] = -w; p1[v] = -w;
    p2[u] = w;  p2[v] = -w;
    p3[u] = w;  p3[v] = w;
    p4[u] = -w; p4[v] = w;
    return {p1, p2, p3, p4};
  }

  Poly clip_to_cell(Poly p, const Pt& c) const {
    for (int i = 0; i < dim && !p.empty(); ++i) {
      const double ac = geom::dot(axis[i], c);
      p = geom::clip_half_space(p, axis[i], ac + 0.5 * edge);
      if (p.empty()) break;
      p = geom::clip_half_space(p, geom::scale(axis[i], -1.0), -(ac - 0.5 * edge));
    }
    return p;
  }
};

}  // namespace

TiltedTiling::TiltedTiling(Matrix m_target, Matrix rotation, int n, int m, Vector lattice_offset)
    : m_target_(std::move(m_target)),
      rotation_(std::move(rotation)),
      n_(n),
      m_(m),
      half_width_(0.0),
      offset_(std::move(lattice_offset)) {
  const int dim = m_target_.dim();
  if (dim < 2 || dim > 3)
    throw unsupported_dimension("tilted tiling: dimension must be 2 or 3");
  if (rotation_.dim() != dim || offset_.dim() != dim)
    throw dimension_mismatch("tilted tiling: rotation/offset dimension mismatch");
  if (n_ < 1 || m_ < 1) throw std::invalid_argument("tilted tiling: n and m must be >= 1");
  check_orthogonal(rotation_);

  half_width_ = 0.5 * (1.0 - 2.0 / (n_ + 2));
  const Frame g(rotation_, half_width_, m_);

  // Candidate index box: |(k_i + off_i)/m| <= w * ||column_i||_1 + edge/2.
  std::array<int, 3> kmax{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    double colsum = 0.0;
    for (int j = 0; j < dim; ++j) colsum += std::abs(rotation_(j, i));
    const double bound = (half_width_ * colsum + 0.5 * g.edge) * m_;
    kmin_[i] = static_cast<int>(std::floor(-bound - offset_[i])) - 1;
    kmax[i] = static_cast<int>(std::ceil(bound - offset_[i])) + 1;
    kdim_[i] = kmax[i] - kmin_[i] + 1;
  }

  // Separating-axis overlap test between the open cell cube and the open
  // shrunken cube: face normals of both plus, in 3-D, their edge cross
  // products.
  struct Axis {
    Pt u;
    double extent;  // summed half-extents of the two boxes along u
  };
  std::vector<Axis> axes;
  for (int j = 0; j < dim; ++j) {
    Pt u{0.0, 0.0, 0.0};
    u[j] = 1.0;
    axes.push_back({u, half_width_ + g.row_reach[j]});
  }
  for (int i = 0; i < dim; ++i) {
    double l1 = 0.0;
    for (int j = 0; j < dim; ++j) l1 += std::abs(g.axis[i][j]);
    axes.push_back({g.axis[i], half_width_ * l1 + 0.5 * g.edge});
  }
  if (dim == 3) {
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        Pt dj{0.0, 0.0, 0.0};
        dj[j] = 1.0;
        const Pt u = geom::cross(dj, g.axis[i]);
        if (geom::norm(u) < 1e-14) continue;
        double l1 = 0.0;
        for (int c = 0; c < 3; ++c) l1 += std::abs(u[c]);
        double cell = 0.0;
        for (int c = 0; c < 3; ++c) cell += std::abs(geom::dot(u, g.axis[c]));
        axes.push_back({u, half_width_ * l1 + 0.5 * g.edge * cell});
      }
  }

  member_.assign(static_cast<std::size_t>(kdim_[0]) * kdim_[1] * kdim_[2], 0);
  const int k2_lo = (dim == 3) ? kmin_[2] : 0;
  const int k2_hi = (dim == 3) ? kmax[2] : 0;
  for (int k0 = kmin_[0]; k0 <= kmax[0]; ++k0)
    for (int k1 = kmin_[1]; k1 <= kmax[1]; ++k1)
      for (int k2 = k2_lo; k2 <= k2_hi; ++k2) {
        Pt c{0.0, 0.0, 0.0};
        const double y0 = (k0 + offset_[0]) * g.edge;
        const double y1 = (k1 + offset_[1]) * g.edge;
        const double y2 = (dim == 3) ? (k2 + offset_[2]) * g.edge : 0.0;
        for (int j = 0; j < dim; ++j)
          c[j] = g.axis[0][j] * y0 + g.axis[1][j] * y1 + g.axis[2][j] * y2;
        bool overlap = true;
        for (const Axis& ax : axes) {
          if (std::abs(geom::dot(ax.u, c)) >= ax.extent) {
            overlap = false;
            break;
          }
        }
        if (!overlap) continue;
        const std::array<int, 3> k{k0, k1, dim == 3 ? k2 : 0};
        cells_.push_back(k);
        const std::size_t lin =
            (static_cast<std::size_t>(k0 - kmin_[0]) * kdim_[1] + (k1 - kmin_[1])) * kdim_[2] +
            (dim == 3 ? k2 - kmin_[2] : 0);
        member_[lin] = 1;
      }
}

Vector TiltedTiling::center(std::size_t cell) const {
  const auto& k = cells_[cell];
  const int dim = m_target_.dim();
  Vector c(dim);
  for (int j = 0; j < dim; ++j) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += rotation_(j, i) * (k[i] + offset_[i]) / m_;
    c[j] = s;
  }
  return c;
}

bool TiltedTiling::has_cell(const std::array<int, 3>& k) const {
  for (int i = 0; i < 3; ++i) {
    if (i >= m_target_.dim()) {
      if (k[i] != 0) return false;
      continue;
    }
    if (k[i] < kmin_[i] || k[i] - kmin_[i] >= kdim_[i]) return false;
  }
  const std::size_t lin =
      (static_cast<std::size_t>(k[0] - kmin_[0]) * kdim_[1] + (k[1] - kmin_[1])) * kdim_[2] +
      (m_target_.dim() == 3 ? k[2] - kmin_[2] : 0);
  return member_[lin] != 0;
}

bool TiltedTiling::covers(const Vector& x) const {
  const int dim = m_target_.dim();
  if (x.dim() != dim) throw dimension_mismatch("covers: point dimension mismatch");
  std::array<int, 3> k{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    double y = 0.0;
    for (int j = 0; j < dim; ++j) y += rotation_(j, i) * x[j];
    k[i] = static_cast<int>(std::lround(y * m_ - offset_[i]));
  }
  return has_cell(k);
}

bool TiltedTiling::cell_is_interior(std::size_t cell) const {
  const int dim = m_target_.dim();
  const Vector c = center(cell);
  for (int j = 0; j < dim; ++j) {
    double reach = 0.0;
    for (int i = 0; i < dim; ++i) reach += std::abs(rotation_(j, i));
    reach *= 0.5 / m_;
    if (!(std::abs(c[j]) + reach < half_width_)) return false;
  }
  return true;
}

double TiltedTiling::cell_volume() const {
  return std::pow(1.0 / m_, m_target_.dim());
}

namespace {

// One pass over the jump set. `on_interior_cell` is invoked for cells whose
// closure sits strictly inside the shrunken cube (their N full faces are
// handled by the caller in closed form); every other piece is delivered to
// `on_piece` in a fixed order: cells lexicographically with face directions
// ascending, then the 2N cube boundary faces with owning cells in cell order.
template <bool MaterializeInterior, typename CellFn, typename PieceFn>
void walk_jump_set(const TiltedTiling& t, CellFn&& on_interior_cell, PieceFn&& on_piece) {
  const int dim = t.dim();
  const Frame g(t.rotation(), t.inner_half_width(), t.resolution());
  const auto& cells = t.cell_indices();
  const double full_measure = std::pow(g.edge, dim - 1);

  std::array<std::vector<std::size_t>, 6> boundary_owner;

  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const auto& k = cells[idx];
    const Pt c = to_pt(t.center(idx));

    bool interior = true;
    for (int j = 0; j < dim; ++j)
      if (!(std::abs(c[j]) + g.row_reach[j] < g.w)) {
        interior = false;
        break;
      }

    for (int j = 0; j < dim; ++j) {
      if (std::abs(g.w - c[j]) <= g.row_reach[j] + 1e-12 * g.edge)
        boundary_owner[2 * j + 1].push_back(idx);
      if (std::abs(-g.w - c[j]) <= g.row_reach[j] + 1e-12 * g.edge)
        boundary_owner[2 * j].push_back(idx);
    }

    if (interior && !MaterializeInterior) {
      on_interior_cell(idx);
      continue;
    }

    for (int i = 0; i < dim; ++i) {
      std::array<int, 3> nb = k;
      nb[i] += 1;
      if (!t.has_cell(nb)) continue;
      Poly face = g.plus_face(c, i);
      if (interior) {
        on_piece(face, FaceKind::interior_full, i, 0, idx, c);
        continue;
      }
      Poly clipped = geom::clip_to_cube(face, dim, g.w);
      const double measure = geom::face_measure(clipped, dim);
      if (measure <= 0.0) continue;
      const FaceKind kind = (measure >= full_measure * (1.0 - 1e-12))
                                ? FaceKind::interior_full
                                : FaceKind::interior_clipped;
      on_piece(clipped, kind, i, 0, idx, c);
    }
  }

  for (int j = 0; j < dim; ++j)
    for (int sign = -1; sign <= 1; sign += 2) {
      const Poly face = g.cube_face(j, sign);
      for (std::size_t idx : boundary_owner[2 * j + (sign > 0 ? 1 : 0)]) {
        const Pt c = to_pt(t.center(idx));
        Poly piece = g.clip_to_cell(face, c);
        if (geom::face_measure(piece, dim) <= 0.0) continue;
        on_piece(piece, FaceKind::inner_boundary, j, sign, idx, c);
      }
    }
}

struct JumpDensity {
  // interior faces in lattice direction i carry the constant jump
  // -edge * face_constant[i]; boundary pieces carry the affine jump
  // -probe . M (x - c) with probe = nu (normal mode) or a (directional).
  std::array<double, 3> face_constant{0.0, 0.0, 0.0};
  bool directional = false;
  Pt direction{0.0, 0.0, 0.0};  // M^T a, directional mode only
  Pt mt_rows[3];                // rows of M^T delta_j, i.e. M^T applied to each axis
};

JumpDensity normal_density(const TiltedTiling& t) {
  JumpDensity d;
  const Matrix sym = symmetric_part(t.target());
  const int dim = t.dim();
  for (int i = 0; i < dim; ++i) {
    const Vector col = t.rotation().column(i);
    d.face_constant[i] = sym.apply(col).dot(col);
  }
  for (int j = 0; j < dim; ++j) d.mt_rows[j] = to_pt(t.target().row(j));
  return d;
}

JumpDensity directional_density(const TiltedTiling& t, const Vector& a) {
  JumpDensity d;
  d.directional = true;
  const int dim = t.dim();
  const Vector mta = t.target().apply_transpose(a);
  d.direction = to_pt(mta);
  for (int i = 0; i < dim; ++i) {
    const Vector col = t.rotation().column(i);
    d.face_constant[i] = col.dot(mta);
  }
  return d;
}

Affine boundary_jump(const JumpDensity& d, int cube_axis, int sign, const Pt& c) {
  Affine f;
  if (d.directional) {
    f.grad = geom::scale(d.direction, -1.0);
  } else {
    f.grad = geom::scale(d.mt_rows[cube_axis], -static_cast<double>(sign));
  }
  f.offset = -geom::dot(f.grad, c);
  return f;
}

EnergyBreakdown accumulate(const TiltedTiling& t, const JumpDensity& d) {
  const int dim = t.dim();
  const double edge = 1.0 / t.resolution();
  const double cell_vol = std::pow(edge, dim);

  double full_face_total = 0.0;  // sum over directions of the full-face integral
  for (int i = 0; i < dim; ++i) full_face_total += cell_vol * std::abs(d.face_constant[i]);

  EnergyBreakdown out;
  CompensatedSum pieces;
  CompensatedSum boundary_area;

  walk_jump_set<false>(
      t, [&](std::size_t) { out.interior_cells += 1; },
      [&](const Poly& poly, FaceKind kind, int axis, int sign, std::size_t, const Pt& c) {
        out.piece_count += 1;
        if (kind == FaceKind::inner_boundary) {
          const Affine f = boundary_jump(d, axis, sign, c);
          pieces.add(geom::integrate_affine_abs(poly, dim, f));
          boundary_area.add(geom::face_measure(poly, dim));
        } else {
          const double measure = geom::face_measure(poly, dim);
          pieces.add(measure * edge * std::abs(d.face_constant[axis]));
        }
      });

  out.assigned_face_sum = static_cast<double>(out.interior_cells) * full_face_total;
  out.piece_count += static_cast<std::int64_t>(out.interior_cells) * dim;
  out.energy = out.assigned_face_sum + pieces.value();
  out.interior_volume = static_cast<double>(out.interior_cells) * cell_vol;
  out.straddle_volume =
      static_cast<double>(t.cell_count() - static_cast<std::size_t>(out.interior_cells)) *
      cell_vol;
  out.boundary_area = boundary_area.value();
  return out;
}

Matrix rotation_with_first_column(const Vector& unit_u) {
  const int n = unit_u.dim();
  Vector w = unit_u;
  w[0] += (unit_u[0] >= 0.0) ? 1.0 : -1.0;
  const double wtw = w.dot(w);
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = (i == j ? 1.0 : 0.0) - 2.0 * w[i] * w[j] / wtw;
  if (r.column(0).dot(unit_u) < 0.0)
    for (int i = 0; i < n; ++i) r(i, 0) = -r(i, 0);
  if (determinant(r) < 0.0)
    for (int i = 0; i < n; ++i) r(i, 1) = -r(i, 1);
  return r;
}

ConvergenceRow assemble_row(const TiltedTiling& t, const EnergyBreakdown& b, double density,
                            double jump_scale, double frame_constant) {
  const int dim = t.dim();
  const double side = 2.0 * t.inner_half_width();
  const double mnorm = frobenius_norm(t.target());
  ConvergenceRow row;
  row.n = t.frame_index();
  row.m = t.resolution();
  row.energy = b.energy;
  row.target = density * std::pow(side, dim);
  row.boundary_bound = std::sqrt(static_cast<double>(dim)) / t.resolution() * mnorm *
                       jump_scale * 2.0 * dim * std::pow(side, dim - 1);
  row.interior_excess_bound = 2.0 * density * b.straddle_volume;
  row.frame_bound = frame_constant * mnorm * jump_scale * (1.0 - std::pow(side, dim));
  return row;
}

}  // namespace

TiltedTiling build_tiling(const Matrix& m_target, int n, int m) {
  const MinimizingRotation mr = minimizing_rotation(m_target);
  return TiltedTiling(m_target, mr.rotation, n, m, Vector::zero(m_target.dim()));
}

TiltedTiling build_tiling(const Matrix& m_target, const Matrix& rotation, int n, int m,
                          const Vector& lattice_offset) {
  return TiltedTiling(m_target, rotation, n, m, lattice_offset);
}

TiltedTiling build_directional_tiling(const Matrix& m_target, const Vector& a, int n, int m) {
  const int dim = m_target.dim();
  if (a.dim() != dim) throw dimension_mismatch("directional tiling: direction dimension");
  const Vector mta = m_target.apply_transpose(a);
  const double len = mta.norm();
  Matrix r = Matrix::identity(dim);
  if (len > 1e-14 * (frobenius_norm(m_target) * a.norm() + 1e-300))
    r = rotation_with_first_column(mta * (1.0 / len));
  return TiltedTiling(m_target, r, n, m, Vector::zero(dim));
}

std::vector<JumpFacePiece> enumerate_jump_faces(const TiltedTiling& t) {
  const int dim = t.dim();
  const double edge = 1.0 / t.resolution();
  const JumpDensity d = normal_density(t);

  std::vector<JumpFacePiece> out;
  walk_jump_set<true>(
      t, [](std::size_t) {},
      [&](const Poly& poly, FaceKind kind, int axis, int sign, std::size_t, const Pt& c) {
        JumpFacePiece piece;
        piece.kind = kind;
        piece.vertices.reserve(poly.size());
        for (const Pt& p : poly) piece.vertices.push_back(to_vector(p, dim));
        if (kind == FaceKind::inner_boundary) {
          Vector nu = Vector::zero(dim);
          nu[axis] = static_cast<double>(sign);
          piece.normal = nu;
          const Affine f = boundary_jump(d, axis, sign, c);
          piece.normal_jump.gradient = to_vector(f.grad, dim);
          piece.normal_jump.offset = f.offset;
        } else {
          piece.normal = t.rotation().column(axis);
          piece.normal_jump.gradient = Vector::zero(dim);
          piece.normal_jump.offset = -edge * d.face_constant[axis];
        }
        out.push_back(std::move(piece));
      });
  return out;
}

double face_normal_jump_integral(const JumpFacePiece& piece) {
  if (piece.vertices.size() < 2) return 0.0;
  const int dim = piece.normal.dim();
  Poly poly;
  poly.reserve(piece.vertices.size());
  for (const Vector& v : piece.vertices) poly.push_back(to_pt(v));
  const Affine f{to_pt(piece.normal_jump.gradient), piece.normal_jump.offset};
  return geom::integrate_affine_abs(poly, dim, f);
}

EnergyBreakdown tiling_energy(const TiltedTiling& t) { return accumulate(t, normal_density(t)); }

EnergyBreakdown tiling_energy_directional(const TiltedTiling& t, const Vector& a) {
  if (a.dim() != t.dim()) throw dimension_mismatch("tiling_energy_directional: direction");
  return accumulate(t, directional_density(t, a));
}

ConvergenceRow interfacial_energy(const Matrix& m_target, int n, int m, double frame_constant) {
  const TiltedTiling t = build_tiling(m_target, n, m);
  const EnergyBreakdown b = tiling_energy(t);
  return assemble_row(t, b, std::abs(trace(m_target)), 1.0, frame_constant);
}

ConvergenceRow directional_energy(const Matrix& m_target, const Vector& a, int n, int m,
                                  double frame_constant) {
  const TiltedTiling t = build_directional_tiling(m_target, a, n, m);
  const EnergyBreakdown b = tiling_energy_directional(t, a);
  const double density = m_target.apply_transpose(a).norm();
  return assemble_row(t, b, density, a.norm(), frame_constant);
}

std::vector<ConvergenceRow> convergence_study(const Matrix& m_target,
                                              const std::vector<int>& n_list,
                                              const std::vector<int>& m_list, EnergyMode mode,
                                              const Vector* direction, double frame_constant) {
  if (n_list.empty() || m_list.empty())
    throw std::invalid_argument("convergence_study: empty resolution list");
  if (mode == EnergyMode::directional && direction == nullptr)
    throw std::invalid_argument("convergence_study: directional mode needs a direction");
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size() * m_list.size());
  for (int n : n_list)
    for (int m : m_list)
      rows.push_back(mode == EnergyMode::normal
                         ? interfacial_energy(m_target, n, m, frame_constant)
                         : directional_energy(m_target, *direction, n, m, frame_constant));
  return rows;
}

std::vector<std::vector<Vector>> clip_face_to_inner_cube(const std::vector<Vector>& polygon,
                                                         double inner_half_width) {
  if (polygon.empty()) return {};
  const int dim = polygon.front().dim();
  if (dim < 2 || dim > 3) throw unsupported_dimension("clip_face_to_inner_cube: dim 2 or 3");
  Poly poly;
  poly.reserve(polygon.size());
  for (const Vector& v : polygon) poly.push_back(to_pt(v));
  const Poly clipped = geom::clip_to_cube(poly, dim, inner_half_width);
  if (clipped.empty()) return {};
  std::vector<Vector> piece;
  piece.reserve(clipped.size());
  for (const Pt& p : clipped) piece.push_back(to_vector(p, dim));
  return {piece};
}

}  // namespace disarr
