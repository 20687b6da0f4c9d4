#ifndef DISARR_ERRORS_HPP
#define DISARR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace disarr {

/// Input file could not be read or does not match the expected schema.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands have incompatible dimensions.
struct dimension_mismatch : std::invalid_argument {
  explicit dimension_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested space dimension is outside the supported range of the geometry kernels.
struct unsupported_dimension : std::invalid_argument {
  explicit unsupported_dimension(const std::string& what) : std::invalid_argument(what) {}
};

/// Declared interface jumps disagree with the cellwise affine maps.
struct mesh_consistency_error : std::runtime_error {
  explicit mesh_consistency_error(const std::string& what) : std::runtime_error(what) {}
};

/// A curve or surface leaves the hull of the sampled grid.
struct geometry_out_of_bounds : std::runtime_error {
  explicit geometry_out_of_bounds(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace disarr

#endif
