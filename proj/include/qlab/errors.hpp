#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

/// Invalid arguments: negative values where nonnegative fields are required,
/// empty subsets, out-of-range exponents.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Vector dimensions or field lengths that do not agree.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// An Orlicz function or gauge that violates its defining axioms.
class GaugeDefinitionError : public std::domain_error {
 public:
  explicit GaugeDefinitionError(const std::string& what) : std::domain_error(what) {}
};

/// A cube that contains no grid cell centers.
class DegenerateCubeError : public std::domain_error {
 public:
  explicit DegenerateCubeError(const std::string& what) : std::domain_error(what) {}
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw InputError(msg);
}

inline void require_dims(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace detail
}  // namespace qlab
