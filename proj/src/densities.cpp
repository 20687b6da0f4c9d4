#include "disarr/densities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "disarr/errors.hpp"
#include "disarr/kahan.hpp"

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

Poly to_poly(const std::vector<Vector>& vs) {
  Poly p;
  p.reserve(vs.size());
  for (const Vector& v : vs) p.push_back(to_pt(v));
  return p;
}

// Orders the vertices of a planar convex face counterclockwise about its
// normal so the area formulas apply regardless of input order.
Poly order_face(Poly poly, const Pt& normal) {
  if (poly.size() <= 2) return poly;
  Pt u = geom::cross(normal, std::abs(normal[0]) < 0.9 ? Pt{1.0, 0.0, 0.0} : Pt{0.0, 1.0, 0.0});
  const double ulen = geom::norm(u);
  if (ulen == 0.0) return poly;
  u = geom::scale(u, 1.0 / ulen);
  const Pt v = geom::cross(normal, u);
  Pt mean{0.0, 0.0, 0.0};
  for (const Pt& p : poly) mean = geom::add(mean, p);
  mean = geom::scale(mean, 1.0 / static_cast<double>(poly.size()));
  std::sort(poly.begin(), poly.end(), [&](const Pt& a, const Pt& b) {
    return std::atan2(geom::dot(geom::sub(a, mean), v), geom::dot(geom::sub(a, mean), u)) <
           std::atan2(geom::dot(geom::sub(b, mean), v), geom::dot(geom::sub(b, mean), u));
  });
  return poly;
}

// [g] . nu as an affine scalar on the face.
Affine normal_jump_affine(const MeshJumpFace& face) {
  Affine f;
  const Vector gn = face.jump_grad.apply_transpose(face.normal);
  f.grad = to_pt(gn);
  f.offset = face.jump_const.dot(face.normal);
  return f;
}

Vector eval_affine_map(const Matrix& grad, const Vector& offset, const Vector& x) {
  return grad.apply(x) + offset;
}

}  // namespace

MeshCell::MeshCell(std::vector<Vector> vertices_in, Matrix grad_g_in, Vector offset_g_in,
                   Matrix tensor_g_in)
    : vertices(std::move(vertices_in)),
      grad_g(std::move(grad_g_in)),
      offset_g(std::move(offset_g_in)),
      tensor_g(std::move(tensor_g_in)) {
  const int d = grad_g.dim();
  if (tensor_g.dim() != d || offset_g.dim() != d)
    throw dimension_mismatch("mesh cell: field dimensions disagree");
  for (const Vector& v : vertices)
    if (v.dim() != d) throw dimension_mismatch("mesh cell: vertex dimension");
  if (vertices.size() < static_cast<std::size_t>(d) + 1)
    throw std::invalid_argument("mesh cell: too few vertices for a solid polytope");
}

StructuredDeformationMesh::StructuredDeformationMesh(int dim, std::vector<MeshCell> cells,
                                                     std::vector<MeshJumpFace> jump_faces)
    : dim_(dim), cells_(std::move(cells)), faces_(std::move(jump_faces)) {
  if (dim_ < 2 || dim_ > 3) throw unsupported_dimension("mesh: dimension must be 2 or 3");
  if (cells_.empty()) throw std::invalid_argument("mesh: no cells");
  for (const MeshCell& c : cells_)
    if (c.grad_g.dim() != dim_) throw dimension_mismatch("mesh: cell dimension mismatch");

  double span = 0.0;
  bodies_.reserve(cells_.size());
  for (const MeshCell& c : cells_) {
    bodies_.push_back(geom::convex_body(dim_, to_poly(c.vertices)));
    if (bodies_.back().volume <= 0.0)
      throw std::invalid_argument("mesh: degenerate cell polytope");
    for (const Vector& v : c.vertices)
      for (int i = 0; i < dim_; ++i) span = std::max(span, std::abs(v[i]));
  }
  span = std::max(span, 1.0);

  const double probe = 1e-6 * span;
  const double tol = 1e-9 * span;

  face_cells_.reserve(faces_.size());
  for (MeshJumpFace& face : faces_) {
    if (face.normal.dim() != dim_ || face.jump_const.dim() != dim_ ||
        face.jump_grad.dim() != dim_)
      throw dimension_mismatch("mesh: face dimension mismatch");
    if (std::abs(face.normal.norm() - 1.0) > 1e-10)
      throw mesh_consistency_error("mesh: face normal is not a unit vector");
    if (face.vertices.size() < 2 ||
        (dim_ == 3 && face.vertices.size() < 3))
      throw mesh_consistency_error("mesh: face with too few vertices");

    if (dim_ == 3) {
      Poly ordered = order_face(to_poly(face.vertices), to_pt(face.normal));
      for (std::size_t i = 0; i < ordered.size(); ++i) {
        for (int c = 0; c < dim_; ++c) face.vertices[i][c] = ordered[i][c];
      }
    }
    for (std::size_t i = 1; i < face.vertices.size(); ++i) {
      const Vector d = face.vertices[i] - face.vertices[0];
      if (std::abs(d.dot(face.normal)) > 1e-9 * span)
        throw mesh_consistency_error("mesh: face vertices are not orthogonal to the normal");
    }

    const Pt centroid = geom::face_centroid(to_poly(face.vertices), dim_);
    Vector x0(dim_);
    for (int i = 0; i < dim_; ++i) x0[i] = centroid[i];
    const Vector xp = x0 + face.normal * probe;
    const Vector xm = x0 - face.normal * probe;

    int plus = -1, minus = -1;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      if (plus < 0 && bodies_[c].contains(to_pt(xp), tol)) plus = static_cast<int>(c);
      if (minus < 0 && bodies_[c].contains(to_pt(xm), tol)) minus = static_cast<int>(c);
    }
    if (plus < 0 || minus < 0 || plus == minus)
      throw mesh_consistency_error("mesh: jump face is not between two cells");

    const MeshCell& cp = cells_[static_cast<std::size_t>(plus)];
    const MeshCell& cm = cells_[static_cast<std::size_t>(minus)];
    double gscale = 1.0;
    gscale = std::max(gscale, cp.grad_g.max_abs() * span + cp.offset_g.norm());
    gscale = std::max(gscale, cm.grad_g.max_abs() * span + cm.offset_g.norm());
    for (const Vector& v : face.vertices) {
      const Vector declared = face.jump_const + face.jump_grad.apply(v);
      const Vector actual =
          eval_affine_map(cp.grad_g, cp.offset_g, v) - eval_affine_map(cm.grad_g, cm.offset_g, v);
      if ((declared - actual).norm() > 1e-12 * gscale)
        throw mesh_consistency_error("mesh: declared jump disagrees with the cell traces");
    }
    face_cells_.push_back({plus, minus});
  }
}

Matrix disarrangement_tensor(const MeshCell& cell) { return cell.grad_g - cell.tensor_g; }

double relaxed_bulk(const Matrix& a, const Matrix& b, DensityVariant variant) {
  if (a.dim() != b.dim()) throw dimension_mismatch("relaxed_bulk: dimension mismatch");
  const double t = trace(a) - trace(b);
  switch (variant) {
    case DensityVariant::abs: return std::abs(t);
    case DensityVariant::plus: return positive_part(t);
    case DensityVariant::minus: return negative_part(t);
  }
  return 0.0;
}

double relaxed_interfacial(const Vector& xi, const Vector& nu, DensityVariant variant) {
  if (xi.dim() != nu.dim()) throw dimension_mismatch("relaxed_interfacial: dimension mismatch");
  if (std::abs(nu.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("relaxed_interfacial: nu must be a unit vector");
  const double t = xi.dot(nu);
  switch (variant) {
    case DensityVariant::abs: return std::abs(t);
    case DensityVariant::plus: return positive_part(t);
    case DensityVariant::minus: return negative_part(t);
  }
  return 0.0;
}

double relaxed_bulk_directional(const Matrix& a, const Matrix& b, const Vector& direction) {
  if (a.dim() != b.dim()) throw dimension_mismatch("relaxed_bulk_directional: dimension");
  if (direction.dim() != a.dim())
    throw dimension_mismatch("relaxed_bulk_directional: direction dimension");
  return (b - a).apply_transpose(direction).norm();
}

namespace {

double face_integral(const StructuredDeformationMesh& mesh, std::size_t face_idx,
                     DensityVariant variant) {
  const MeshJumpFace& face = mesh.jump_faces()[face_idx];
  const Poly poly = to_poly(face.vertices);
  const Affine f = normal_jump_affine(face);
  switch (variant) {
    case DensityVariant::abs: return geom::integrate_affine_abs(poly, mesh.dim(), f);
    case DensityVariant::plus: return geom::integrate_affine_pos(poly, mesh.dim(), f);
    case DensityVariant::minus: return geom::integrate_affine_neg(poly, mesh.dim(), f);
  }
  return 0.0;
}

std::unordered_set<int> region_set(const StructuredDeformationMesh& mesh,
                                   const std::vector<int>& region) {
  std::unordered_set<int> in;
  for (int id : region) {
    if (id < 0 || id >= static_cast<int>(mesh.cells().size()))
      throw std::invalid_argument("region: unknown cell id");
    in.insert(id);
  }
  return in;
}

std::vector<int> sorted_unique(const std::vector<int>& region) {
  std::vector<int> ids = region;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

double volume_swept(const StructuredDeformationMesh& mesh, const std::vector<int>& region,
                    DensityVariant variant) {
  const std::unordered_set<int> in = region_set(mesh, region);
  CompensatedSum acc;
  for (int id : sorted_unique(region)) {
    const MeshCell& cell = mesh.cells()[static_cast<std::size_t>(id)];
    acc.add(relaxed_bulk(cell.grad_g, cell.tensor_g, variant) * mesh.cell_volume(id));
  }
  for (std::size_t f = 0; f < mesh.jump_faces().size(); ++f) {
    const auto [plus, minus] = mesh.face_cells()[f];
    if (in.count(plus) && in.count(minus)) acc.add(face_integral(mesh, f, variant));
  }
  return acc.value();
}

DisarrangementReport disarrangement_report(const StructuredDeformationMesh& mesh,
                                           const std::vector<int>& region) {
  const std::unordered_set<int> in = region_set(mesh, region);
  DisarrangementReport rep;
  CompensatedSum babs, bplus, bminus, bsigned;
  for (int id : sorted_unique(region)) {
    const MeshCell& cell = mesh.cells()[static_cast<std::size_t>(id)];
    const double vol = mesh.cell_volume(id);
    const double t = trace(disarrangement_tensor(cell));
    babs.add(std::abs(t) * vol);
    bplus.add(positive_part(t) * vol);
    bminus.add(negative_part(t) * vol);
    bsigned.add(t * vol);
  }
  CompensatedSum iabs, iplus, iminus, isigned;
  for (std::size_t f = 0; f < mesh.jump_faces().size(); ++f) {
    const auto [plus, minus] = mesh.face_cells()[f];
    if (!in.count(plus) || !in.count(minus)) continue;
    iabs.add(face_integral(mesh, f, DensityVariant::abs));
    iplus.add(face_integral(mesh, f, DensityVariant::plus));
    iminus.add(face_integral(mesh, f, DensityVariant::minus));
    const MeshJumpFace& face = mesh.jump_faces()[f];
    isigned.add(geom::integrate_affine(to_poly(face.vertices), mesh.dim(),
                                       normal_jump_affine(face)));
  }
  rep.bulk_abs = babs.value();
  rep.bulk_plus = bplus.value();
  rep.bulk_minus = bminus.value();
  rep.interfacial_abs = iabs.value();
  rep.interfacial_plus = iplus.value();
  rep.interfacial_minus = iminus.value();
  rep.v_abs = rep.bulk_abs + rep.interfacial_abs;
  rep.v_plus = rep.bulk_plus + rep.interfacial_plus;
  rep.v_minus = rep.bulk_minus + rep.interfacial_minus;
  rep.signed_total = bsigned.value() + isigned.value();
  return rep;
}

double directional_bulk_integral(const StructuredDeformationMesh& mesh, const Vector& a) {
  if (a.dim() != mesh.dim()) throw dimension_mismatch("directional_bulk_integral: direction");
  CompensatedSum acc;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const Matrix m = disarrangement_tensor(mesh.cells()[c]);
    acc.add(m.apply_transpose(a).norm() * mesh.cell_volume(static_cast<int>(c)));
  }
  return acc.value();
}

double rowmax_bulk_integral(const StructuredDeformationMesh& mesh) {
  CompensatedSum acc;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const Matrix m = disarrangement_tensor(mesh.cells()[c]);
    acc.add(row_max_norm(m) * mesh.cell_volume(static_cast<int>(c)));
  }
  return acc.value();
}

}  // namespace disarr
