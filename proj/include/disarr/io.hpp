#ifndef DISARR_IO_HPP
#define DISARR_IO_HPP

#include <string>
#include <vector>

#include "disarr/burgers.hpp"
#include "disarr/densities.hpp"
#include "disarr/tensor.hpp"

namespace disarr {

/// {"dim": N, "entries": [N*N numbers, row-major]}
Matrix load_matrix(const std::string& path);

/// {"dim": N,
///  "cells": [{"vertices": [[x, y, ...], ...], "grad_g": [N*N], "offset_g": [N], "G": [N*N]}],
///  "jump_faces": [{"vertices": [...], "normal": [N], "jump_const": [N], "jump_grad": [N*N]}]}
/// Matrices are row-major. Construction validates the declared jumps.
StructuredDeformationMesh load_mesh(const std::string& path);

struct FieldDocument {
  SampledTensorField field;
  std::vector<OrientedLoop> loops;
  std::vector<OrientedSurface> surfaces;
};

/// {"origin": [3], "spacing": [3], "counts": [3],
///  "values": [nx*ny*nz * 9 numbers, 3x3 row-major per node, node (i,j,k) at
///             flat index (i*ny + j)*nz + k],
///  "loops": [[[x, y, z], ...]],                       (closed polylines)
///  "surfaces": [{"vertices": [[x, y, z], ...], "triangles": [[a, b, c], ...]}]}
FieldDocument load_field_document(const std::string& path);

}  // namespace disarr

#endif
