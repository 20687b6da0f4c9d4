#include "disarr/io.hpp"

#include <fstream>

#include <json.hpp>

#include "disarr/errors.hpp"

namespace disarr {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return doc;
}

std::vector<double> numbers(const json& node, const std::string& what) {
  if (!node.is_array()) throw parse_error(what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) throw parse_error(what + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Vector as_vector(const json& node, int dim, const std::string& what) {
  std::vector<double> xs = numbers(node, what);
  if (static_cast<int>(xs.size()) != dim)
    throw parse_error(what + " has the wrong number of components");
  return Vector(std::move(xs));
}

Matrix as_matrix(const json& node, int dim, const std::string& what) {
  std::vector<double> xs = numbers(node, what);
  if (xs.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
    throw parse_error(what + " must hold dim*dim row-major entries");
  try {
    return Matrix(dim, std::move(xs));
  } catch (const std::exception& e) {
    throw parse_error(what + ": " + e.what());
  }
}

std::vector<Vector> as_points(const json& node, int dim, const std::string& what) {
  if (!node.is_array()) throw parse_error(what + " must be an array of points");
  std::vector<Vector> pts;
  pts.reserve(node.size());
  for (const auto& p : node) pts.push_back(as_vector(p, dim, what + " point"));
  return pts;
}

int field_int(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw parse_error("missing integer field '" + key + "'");
  return doc[key].get<int>();
}

const json& field(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw parse_error("missing field '" + key + "'");
  return doc[key];
}

}  // namespace

Matrix load_matrix(const std::string& path) {
  const json doc = load_json(path);
  const int dim = field_int(doc, "dim");
  if (dim < 1 || dim > 16) throw parse_error("matrix dim out of range");
  return as_matrix(field(doc, "entries"), dim, "entries");
}

StructuredDeformationMesh load_mesh(const std::string& path) {
  const json doc = load_json(path);
  const int dim = field_int(doc, "dim");
  if (dim < 2 || dim > 3) throw parse_error("mesh dim must be 2 or 3");

  std::vector<MeshCell> cells;
  for (const auto& c : field(doc, "cells")) {
    cells.emplace_back(as_points(field(c, "vertices"), dim, "cell vertices"),
                       as_matrix(field(c, "grad_g"), dim, "grad_g"),
                       as_vector(field(c, "offset_g"), dim, "offset_g"),
                       as_matrix(field(c, "G"), dim, "G"));
  }

  std::vector<MeshJumpFace> faces;
  if (doc.contains("jump_faces")) {
    for (const auto& f : doc["jump_faces"]) {
      MeshJumpFace face{as_points(field(f, "vertices"), dim, "face vertices"),
                        as_vector(field(f, "normal"), dim, "normal"),
                        as_vector(field(f, "jump_const"), dim, "jump_const"),
                        as_matrix(field(f, "jump_grad"), dim, "jump_grad")};
      faces.push_back(std::move(face));
    }
  }
  return StructuredDeformationMesh(dim, std::move(cells), std::move(faces));
}

FieldDocument load_field_document(const std::string& path) {
  const json doc = load_json(path);

  const Vector origin = as_vector(field(doc, "origin"), 3, "origin");
  const Vector spacing = as_vector(field(doc, "spacing"), 3, "spacing");
  const std::vector<double> counts_raw = numbers(field(doc, "counts"), "counts");
  if (counts_raw.size() != 3) throw parse_error("counts must have 3 entries");
  std::array<int, 3> counts{static_cast<int>(counts_raw[0]), static_cast<int>(counts_raw[1]),
                            static_cast<int>(counts_raw[2])};

  const std::vector<double> flat = numbers(field(doc, "values"), "values");
  const std::size_t nodes =
      static_cast<std::size_t>(counts[0]) * static_cast<std::size_t>(counts[1]) *
      static_cast<std::size_t>(counts[2]);
  if (flat.size() != nodes * 9) throw parse_error("values must hold 9 numbers per node");
  std::vector<Matrix> values;
  values.reserve(nodes);
  for (std::size_t k = 0; k < nodes; ++k)
    values.emplace_back(3, std::vector<double>(flat.begin() + static_cast<long>(9 * k),
                                               flat.begin() + static_cast<long>(9 * (k + 1))));

  FieldDocument out;
  try {
    out.field = SampledTensorField(origin, spacing, counts, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("field: ") + e.what());
  }

  if (doc.contains("loops")) {
    for (const auto& l : doc["loops"]) {
      try {
        out.loops.emplace_back(as_points(l, 3, "loop"));
      } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("loop: ") + e.what());
      }
    }
  }
  if (doc.contains("surfaces")) {
    for (const auto& s : doc["surfaces"]) {
      OrientedSurface surf;
      surf.vertices = as_points(field(s, "vertices"), 3, "surface vertices");
      const json& tris = field(s, "triangles");
      if (!tris.is_array()) throw parse_error("triangles must be an array");
      for (const auto& t : tris) {
        const std::vector<double> idx = numbers(t, "triangle");
        if (idx.size() != 3) throw parse_error("triangle must hold 3 indices");
        std::array<int, 3> tri{static_cast<int>(idx[0]), static_cast<int>(idx[1]),
                               static_cast<int>(idx[2])};
        for (int v : tri)
          if (v < 0 || v >= static_cast<int>(surf.vertices.size()))
            throw parse_error("triangle index out of range");
        surf.triangles.push_back(tri);
      }
      out.surfaces.push_back(std::move(surf));
    }
  }
  return out;
}

}  // namespace disarr
