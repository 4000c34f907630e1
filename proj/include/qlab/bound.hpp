#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qlab {

/// How a reported number relates to the quantity it estimates.
enum class BoundTag { exact, upper, lower };

inline std::string_view to_string(BoundTag tag) {
  switch (tag) {
    case BoundTag::exact:
      return "EXACT";
    case BoundTag::upper:
      return "UPPER";
    case BoundTag::lower:
      return "LOWER";
  }
  return "?";
}

/// A value together with its certification tag and the object that
/// certifies it: a decomposition for inf-type quantities, a test function or
/// sample pair for sup-type quantities. Witness layout is documented by the
/// producing operation.
struct BoundResult {
  double value = 0.0;
  BoundTag tag = BoundTag::exact;
  std::vector<std::vector<double>> witness;

  static BoundResult exact(double v) { return {v, BoundTag::exact, {}}; }
  static BoundResult upper(double v, std::vector<std::vector<double>> w = {}) {
    return {v, BoundTag::upper, std::move(w)};
  }
  static BoundResult lower(double v, std::vector<std::vector<double>> w = {}) {
    return {v, BoundTag::lower, std::move(w)};
  }
};

}  // namespace qlab
