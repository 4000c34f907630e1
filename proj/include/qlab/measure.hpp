#pragma once

// Finite atom-weighted measure spaces and the fields that live on them.
//
// Every subset of atoms is measurable, so a measure space is just a list of
// strictly positive atom masses. Fields are stored densely, one entry (or one
// d-vector) per atom.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "qlab/errors.hpp"

namespace qlab {

class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
    detail::require(!weights_.empty(), "measure space must have at least one atom");
    for (double w : weights_) {
      detail::require(std::isfinite(w) && w > 0.0, "atom weights must be finite and > 0");
    }
  }

  /// n atoms of mass 1.
  static MeasureSpace counting(std::size_t n) { return MeasureSpace(std::vector<double>(n, 1.0)); }

  /// n atoms of mass 1/n (the equipartition of [0,1]).
  static MeasureSpace uniform(std::size_t n) {
    return MeasureSpace(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

  double total_mass() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

  double mass_of(std::span<const std::size_t> atoms) const {
    double m = 0.0;
    for (auto i : atoms) m += weights_.at(i);
    return m;
  }

  bool operator==(const MeasureSpace&) const = default;

 private:
  std::vector<double> weights_;
};

/// Per-atom real values. Most gauges require nonnegative entries; signed
/// fields are allowed where an operation says so.
struct ScalarField {
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(std::vector<double> v) : values(std::move(v)) {}
  ScalarField(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::span<const double> span() const { return values; }

  bool is_nonnegative() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
  }
  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  }

  bool operator==(const ScalarField&) const = default;
};

/// Per-atom vectors of a common dimension, stored row-major.
class VectorField {
 public:
  VectorField(std::size_t atoms, std::size_t dim) : atoms_(atoms), dim_(dim), data_(atoms * dim, 0.0) {}

  static VectorField from_rows(const std::vector<std::vector<double>>& rows) {
    detail::require(!rows.empty(), "vector field needs at least one atom");
    VectorField f(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require_dims(rows[i].size() == f.dim_, "all vectors must have the same dimension");
      std::copy(rows[i].begin(), rows[i].end(), f.at(i).begin());
    }
    return f;
  }

  std::size_t size() const { return atoms_; }
  std::size_t dim() const { return dim_; }

  std::span<double> at(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> at(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(atoms_);
    for (std::size_t i = 0; i < atoms_; ++i) out.emplace_back(at(i).begin(), at(i).end());
    return out;
  }

  bool operator==(const VectorField&) const = default;

 private:
  std::size_t atoms_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// A finite sub-sigma-algebra: disjoint nonempty blocks covering every atom.
class Partition {
 public:
  Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t atom_count) : blocks_(std::move(blocks)) {
    std::vector<char> seen(atom_count, 0);
    std::size_t covered = 0;
    for (const auto& b : blocks_) {
      detail::require(!b.empty(), "partition blocks must be nonempty");
      for (auto i : b) {
        detail::require(i < atom_count, "partition index out of range");
        detail::require(!seen[i], "partition blocks must be disjoint");
        seen[i] = 1;
        ++covered;
      }
    }
    detail::require(covered == atom_count, "partition must cover every atom");
  }

  static Partition trivial(std::size_t n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return Partition({std::move(all)}, n);
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::vector<std::size_t>> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = {i};
    return Partition(std::move(b), n);
  }

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t atom_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.size();
    return n;
  }

 private:
  std::vector<std::vector<std::size_t>> blocks_;
};

/// mu{ f > s }. The strict inequality follows the usual distribution-function
/// convention; see distribution_mass_geq for the closed variant.
inline double distribution_mass(const MeasureSpace& space, const ScalarField& f, double s) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(s >= 0.0, "distribution level must be >= 0");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > s) m += space.weight(i);
  return m;
}

/// mu{ f >= s }.
inline double distribution_mass_geq(const MeasureSpace& space, const ScalarField& f, double s) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(s >= 0.0, "distribution level must be >= 0");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] >= s) m += space.weight(i);
  return m;
}

struct RearrangementStep {
  double value;
  double cumulative_mass;
  bool operator==(const RearrangementStep&) const = default;
};

/// Non-increasing rearrangement as a step list: value_k is taken on
/// (cumulative_mass_{k-1}, cumulative_mass_k]. Ties are merged, so the list
/// encodes the distribution function exactly.
inline std::vector<RearrangementStep> decreasing_rearrangement(const MeasureSpace& space, const ScalarField& f) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(f.is_nonnegative(), "rearrangement requires a nonnegative field");
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Sort by value, then by weight, so that summation order (and hence the
  // rounded cumulative masses) does not depend on the atom labelling.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (f[a] != f[b]) return f[a] > f[b];
    return space.weight(a) < space.weight(b);
  });
  std::vector<RearrangementStep> out;
  double mass = 0.0;
  for (auto i : order) {
    mass += space.weight(i);
    if (!out.empty() && out.back().value == f[i]) {
      out.back().cumulative_mass = mass;
    } else {
      out.push_back({f[i], mass});
    }
  }
  return out;
}

namespace detail {

/// Weighted mean computed as a shifted sum around the first value, so a block
/// of identical values averages to that value exactly.
inline double block_mean(const MeasureSpace& space, std::span<const std::size_t> block,
                         std::span<const double> values, std::size_t stride = 1, std::size_t offset = 0) {
  const double ref = values[block.front() * stride + offset];
  double num = 0.0;
  double den = 0.0;
  for (auto i : block) {
    num += space.weight(i) * (values[i * stride + offset] - ref);
    den += space.weight(i);
  }
  return ref + num / den;
}

}  // namespace detail

/// E(f | P): on every block the block average (1/mu(A)) sum_{w in A} w f(w).
inline ScalarField conditional_expectation(const MeasureSpace& space, const Partition& p, const ScalarField& f) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require_dims(p.atom_count() == space.size(), "partition must be defined on this space");
  ScalarField out(std::vector<double>(f.size()));
  for (const auto& block : p.blocks()) {
    const double m = detail::block_mean(space, block, f.values);
    for (auto i : block) out[i] = m;
  }
  return out;
}

inline VectorField conditional_expectation(const MeasureSpace& space, const Partition& p, const VectorField& f) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require_dims(p.atom_count() == space.size(), "partition must be defined on this space");
  VectorField out(f.size(), f.dim());
  std::span<const double> flat(f.at(0).data(), f.size() * f.dim());
  for (const auto& block : p.blocks()) {
    for (std::size_t k = 0; k < f.dim(); ++k) {
      const double m = detail::block_mean(space, block, flat, f.dim(), k);
      for (auto i : block) out.at(i)[k] = m;
    }
  }
  return out;
}

/// Product measure on A x B with row-major flattening: (i, j) -> i * |B| + j.
struct ProductSpace {
  MeasureSpace space;
  std::size_t rows;
  std::size_t cols;

  std::size_t flat(std::size_t i, std::size_t j) const { return i * cols + j; }
  std::pair<std::size_t, std::size_t> unflat(std::size_t k) const { return {k / cols, k % cols}; }
};

inline ProductSpace product_space(const MeasureSpace& a, const MeasureSpace& b) {
  std::vector<double> w;
  w.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) w.push_back(a.weight(i) * b.weight(j));
  return {MeasureSpace(std::move(w)), a.size(), b.size()};
}

/// Restriction to an atom subset, order preserved.
inline std::pair<MeasureSpace, ScalarField> restrict(const MeasureSpace& space, std::span<const std::size_t> atoms,
                                                     const ScalarField& f) {
  detail::require(!atoms.empty(), "restriction subset must be nonempty");
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  std::vector<double> w;
  std::vector<double> v;
  for (auto i : atoms) {
    detail::require(i < space.size(), "restriction index out of range");
    w.push_back(space.weight(i));
    v.push_back(f[i]);
  }
  return {MeasureSpace(std::move(w)), ScalarField(std::move(v))};
}

/// Integral sum_w mu(w) f(w).
inline double integral(const MeasureSpace& space, const ScalarField& f) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += space.weight(i) * f[i];
  return s;
}

}  // namespace qlab
