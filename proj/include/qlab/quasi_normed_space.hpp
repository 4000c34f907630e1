#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qlab/errors.hpp"

namespace qlab {

/// A finite-dimensional quasi-normed target space X = (R^d, ||.||).
///
/// Built-in norms: l_q for q > 0 (q = infinity allowed) and the weak-L1
/// quasi-norm of |x| over d atoms of mass one. A custom evaluator can be
/// supplied together with its modulus of concavity.
class QuasiNormedSpace {
 public:
  enum class Kind { lq, weak_l1, custom };

  static QuasiNormedSpace lq(std::size_t dim, double q) {
    detail::require(dim >= 1, "dimension must be >= 1");
    detail::require(q > 0.0, "l_q exponent must be > 0");
    QuasiNormedSpace x;
    x.kind_ = Kind::lq;
    x.dim_ = dim;
    x.q_ = q;
    x.kappa_ = q < 1.0 ? std::pow(2.0, 1.0 / q - 1.0) : 1.0;
    return x;
  }

  static QuasiNormedSpace weak_l1(std::size_t atoms) {
    detail::require(atoms >= 1, "dimension must be >= 1");
    QuasiNormedSpace x;
    x.kind_ = Kind::weak_l1;
    x.dim_ = atoms;
    x.kappa_ = 2.0;
    return x;
  }

  static QuasiNormedSpace custom(std::size_t dim, std::function<double(std::span<const double>)> norm,
                                 double kappa) {
    detail::require(dim >= 1, "dimension must be >= 1");
    detail::require(kappa >= 1.0, "modulus of concavity must be >= 1");
    QuasiNormedSpace x;
    x.kind_ = Kind::custom;
    x.dim_ = dim;
    x.kappa_ = kappa;
    x.custom_ = std::move(norm);
    return x;
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double q() const { return q_; }
  double kappa() const { return kappa_; }

  /// Banach (locally convex with constant 1) targets.
  bool is_banach() const { return kappa_ == 1.0; }

  double norm(std::span<const double> x) const {
    detail::require_dims(x.size() == dim_, "vector dimension does not match the target space");
    switch (kind_) {
      case Kind::lq:
        return lq_norm(x);
      case Kind::weak_l1:
        return weak_l1_norm(x);
      case Kind::custom:
        return custom_(x);
    }
    return 0.0;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::lq:
        return "l_" + std::to_string(q_) + "^" + std::to_string(dim_);
      case Kind::weak_l1:
        return "weak_l1^" + std::to_string(dim_);
      case Kind::custom:
        return "custom^" + std::to_string(dim_);
    }
    return "?";
  }

 private:
  QuasiNormedSpace() = default;

  double lq_norm(std::span<const double> x) const {
    if (std::isinf(q_)) {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      return m;
    }
    if (q_ == 1.0) {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    }
    if (q_ == 2.0) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    }
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), q_);
    return std::pow(s, 1.0 / q_);
  }

  static double weak_l1_norm(std::span<const double> x) {
    std::vector<double> a(x.size());
    std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
    std::sort(a.begin(), a.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, a[k] * static_cast<double>(k + 1));
    return best;
  }

  Kind kind_ = Kind::lq;
  std::size_t dim_ = 1;
  double q_ = 1.0;
  double kappa_ = 1.0;
  std::function<double(std::span<const double>)> custom_;
};

}  // namespace qlab
