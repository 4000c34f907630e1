#pragma once

// Convexity constants of function quasi-norms.
//
// Sup-type constants (lattice convexity, leveling, Minkowski ratios) are
// reported as LOWER bounds carrying the sampled witness; inf-type quantities
// (the p-envelope) as UPPER bounds carrying the decomposition.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qlab/bound.hpp"
#include "qlab/errors.hpp"
#include "qlab/gauge.hpp"
#include "qlab/measure.hpp"
#include "qlab/rng.hpp"
#include "qlab/sampling.hpp"

namespace qlab {

/// Exponent p with 2^(1/p - 1) = kappa.
inline double aoki_exponent(double kappa) {
  detail::require(kappa >= 1.0, "modulus of concavity must be >= 1");
  return 1.0 / (1.0 + std::log2(kappa));
}

/// Nonnegative parts summing to a target field.
struct Decomposition {
  std::vector<ScalarField> parts;

  ScalarField sum(std::size_t n) const {
    ScalarField s(std::vector<double>(n, 0.0));
    for (const auto& p : parts)
      for (std::size_t i = 0; i < n; ++i) s[i] += p[i];
    return s;
  }
};

struct EnvelopeResult {
  BoundResult bound;  // UPPER (EXACT on the p-norm short-circuit)
  Decomposition decomposition;
};

struct EnvelopeOptions {
  /// Return the gauge itself when it is already a p-norm.
  bool analytic_shortcut = true;
  /// Extra starting decomposition (e.g. a concatenation of earlier witnesses).
  std::optional<Decomposition> initial;
};

namespace detail {

class EnvelopeSearch {
 public:
  EnvelopeSearch(const Gauge& g, double p, const MeasureSpace& space, const ScalarField& f)
      : g_(g), p_(p), space_(space), f_(f), n_(f.size()) {}

  double part_cost(const std::vector<double>& part) const { return std::pow(g_(space_, part), p_); }

  double cost(const std::vector<std::vector<double>>& parts) const {
    double s = 0.0;
    for (const auto& q : parts) s += part_cost(q);
    return s;
  }

  /// Local descent from `parts`; returns the final p-th power cost.
  double descend(std::vector<std::vector<double>>& parts, Rng& rng) const {
    prune(parts);
    std::vector<double> costs(parts.size());
    for (std::size_t j = 0; j < parts.size(); ++j) costs[j] = part_cost(parts[j]);
    auto total = [&] {
      double s = 0.0;
      for (double c : costs) s += c;
      return s;
    };
    double current = total();
    for (int pass = 0; pass < 40; ++pass) {
      const double before = current;
      // mass transfers at single atoms
      for (std::size_t w = 0; w < n_; ++w) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
          if (parts[i][w] <= 0.0) continue;
          for (std::size_t j = 0; j <= parts.size(); ++j) {
            if (j == i) continue;
            for (double frac : {1.0, 0.5, 0.1}) {
              const double amount = parts[i][w] * frac;
              auto src = parts[i];
              src[w] -= amount;
              if (frac == 1.0) src[w] = 0.0;
              if (j == parts.size()) {
                std::vector<double> fresh(n_, 0.0);
                fresh[w] = amount;
                const double trial = current - costs[i] + part_cost(src) + part_cost(fresh);
                if (trial < current * (1.0 - 1e-15)) {
                  parts[i] = std::move(src);
                  costs[i] = part_cost(parts[i]);
                  parts.push_back(std::move(fresh));
                  costs.push_back(part_cost(parts.back()));
                  current = total();
                  break;
                }
              } else {
                auto dst = parts[j];
                dst[w] += amount;
                const double trial = current - costs[i] - costs[j] + part_cost(src) + part_cost(dst);
                if (trial < current * (1.0 - 1e-15)) {
                  parts[i] = std::move(src);
                  parts[j] = std::move(dst);
                  costs[i] = part_cost(parts[i]);
                  costs[j] = part_cost(parts[j]);
                  current = total();
                  break;
                }
              }
            }
            if (parts[i][w] > 0.0 && j < parts.size()) refine_transfer(parts, costs, i, j, w, current);
            if (parts[i][w] <= 0.0) break;
          }
        }
      }
      // merges
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
          auto merged = parts[i];
          for (std::size_t w = 0; w < n_; ++w) merged[w] += parts[j][w];
          const double mc = part_cost(merged);
          if (current - costs[i] - costs[j] + mc < current * (1.0 - 1e-15)) {
            parts[i] = std::move(merged);
            costs[i] = mc;
            parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(j));
            costs.erase(costs.begin() + static_cast<std::ptrdiff_t>(j));
            current = total();
            --j;
          }
        }
      }
      // random support splits and proportional splits
      for (std::size_t k = 0; k < parts.size(); ++k) {
        std::vector<double> a(n_, 0.0);
        std::vector<double> b(n_, 0.0);
        const bool proportional = rng.coin(0.2);
        const double theta = rng.uniform(0.2, 0.8);
        for (std::size_t w = 0; w < n_; ++w) {
          if (proportional) {
            a[w] = theta * parts[k][w];
            b[w] = parts[k][w] - a[w];
          } else {
            (rng.coin() ? a : b)[w] = parts[k][w];
          }
        }
        const double ca = part_cost(a);
        const double cb = part_cost(b);
        if (current - costs[k] + ca + cb < current * (1.0 - 1e-15)) {
          parts[k] = std::move(a);
          costs[k] = ca;
          parts.push_back(std::move(b));
          costs.push_back(cb);
          current = total();
        }
      }
      prune(parts);
      costs.resize(parts.size());
      for (std::size_t j = 0; j < parts.size(); ++j) costs[j] = part_cost(parts[j]);
      current = total();
      if (!(current < before * (1.0 - 1e-13))) break;
    }
    return current;
  }

  /// Moves a fraction of part i on an atom subset into part j (or a new
  /// part), with a golden-section search on the fraction; repeated until no
  /// move helps. Subsets are exhaustive up to 8 atoms, sampled beyond.
  double polish(std::vector<std::vector<double>>& parts, Rng& rng) const {
    prune(parts);
    std::vector<std::vector<char>> subsets;
    if (n_ <= 8) {
      for (std::size_t mask = 1; mask < (std::size_t{1} << n_); ++mask) {
        std::vector<char> in(n_);
        for (std::size_t w = 0; w < n_; ++w) in[w] = static_cast<char>((mask >> w) & 1);
        subsets.push_back(std::move(in));
      }
    } else {
      subsets.emplace_back(n_, 1);
      for (int k = 0; k < 32; ++k) {
        std::vector<char> in(n_);
        for (auto& c : in) c = static_cast<char>(rng.coin());
        subsets.push_back(std::move(in));
      }
    }
    double current = cost(parts);
    for (int round = 0; round < 50; ++round) {
      const double before = current;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = 0; j <= parts.size(); ++j) {
          if (j == i) continue;
          for (const auto& in : subsets) {
            const bool fresh = j == parts.size();
            const std::vector<double> zero(n_, 0.0);
            const auto& target = fresh ? zero : parts[j];
            const double rest = current - part_cost(parts[i]) - (fresh ? 0.0 : part_cost(target));
            std::vector<double> src(n_), dst(n_);
            auto eval = [&](double t) {
              for (std::size_t w = 0; w < n_; ++w) {
                const double moved = in[w] ? t * parts[i][w] : 0.0;
                src[w] = parts[i][w] - moved;
                dst[w] = target[w] + moved;
              }
              return rest + part_cost(src) + part_cost(dst);
            };
            constexpr double kInvPhi = 0.6180339887498949;
            double lo = 0.0, hi = 1.0;
            double a = hi - kInvPhi, b = kInvPhi;
            double ca = eval(a), cb = eval(b);
            for (int k = 0; k < 40; ++k) {
              if (ca < cb) {
                hi = b;
                b = a;
                cb = ca;
                a = hi - kInvPhi * (hi - lo);
                ca = eval(a);
              } else {
                lo = a;
                a = b;
                ca = cb;
                b = lo + kInvPhi * (hi - lo);
                cb = eval(b);
              }
            }
            double t = ca < cb ? a : b;
            double c = std::min(ca, cb);
            const double whole = eval(1.0);
            if (whole < c) {
              t = 1.0;
              c = whole;
            }
            if (!(c < current * (1.0 - 1e-15))) continue;
            eval(t);
            if (t == 1.0)
              for (std::size_t w = 0; w < n_; ++w)
                if (in[w]) src[w] = 0.0;
            parts[i] = src;
            if (fresh) {
              parts.push_back(dst);
            } else {
              parts[j] = dst;
            }
            current = cost(parts);
          }
        }
      }
      prune(parts);
      current = cost(parts);
      if (!(current < before * (1.0 - 1e-13))) break;
    }
    return current;
  }

  /// Golden-section search on the amount moved from part i to part j at
  /// atom w; applied when it lowers the cost.
  void refine_transfer(std::vector<std::vector<double>>& parts, std::vector<double>& costs, std::size_t i,
                       std::size_t j, std::size_t w, double& current) const {
    const double held = parts[i][w];
    const double base = current - costs[i] - costs[j];
    auto src = parts[i];
    auto dst = parts[j];
    auto eval = [&](double t) {
      src[w] = held - t;
      dst[w] = parts[j][w] + t;
      return base + part_cost(src) + part_cost(dst);
    };
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 0.0, hi = held;
    double a = hi - kInvPhi * (hi - lo), b = lo + kInvPhi * (hi - lo);
    double ca = eval(a), cb = eval(b);
    for (int k = 0; k < 40; ++k) {
      if (ca < cb) {
        hi = b;
        b = a;
        cb = ca;
        a = hi - kInvPhi * (hi - lo);
        ca = eval(a);
      } else {
        lo = a;
        a = b;
        ca = cb;
        b = lo + kInvPhi * (hi - lo);
        cb = eval(b);
      }
    }
    const double t = ca < cb ? a : b;
    if (!(std::min(ca, cb) < current * (1.0 - 1e-15))) return;
    const double to = parts[j][w] + t;
    parts[i][w] = held - t;
    parts[j][w] = to;
    costs[i] = part_cost(parts[i]);
    costs[j] = part_cost(parts[j]);
    current = 0.0;
    for (double c : costs) current += c;
  }

  static void prune(std::vector<std::vector<double>>& parts) {
    std::erase_if(parts, [](const std::vector<double>& q) {
      return std::all_of(q.begin(), q.end(), [](double v) { return v <= 0.0; });
    });
  }

 private:
  const Gauge& g_;
  double p_;
  const MeasureSpace& space_;
  const ScalarField& f_;
  std::size_t n_;
};

}  // namespace detail

/// p-envelope inf{ (sum_j rho(f_j)^p)^(1/p) : f = sum_j f_j }: the largest
/// function p-norm below rho. Returns an UPPER bound with the decomposition
/// that attains it.
///
/// Starting points are the trivial decomposition, the split into single
/// atoms, options.initial, and random disjoint groupings; each is improved by
/// mass transfers, merges and support/proportional splits. `budget` is the
/// number of random restarts.
inline EnvelopeResult p_envelope(const Gauge& g, double p, const MeasureSpace& space, const ScalarField& f, int budget,
                                 std::uint64_t seed = 0, const EnvelopeOptions& options = {}) {
  detail::require(p > 0.0 && p <= 1.0, "envelope exponent must lie in (0, 1]");
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(f.is_nonnegative(), "envelope requires a nonnegative field");
  const std::size_t n = f.size();
  if (f.is_zero()) return {BoundResult::exact(0.0), {}};
  if (options.analytic_shortcut && g.is_p_norm_for(p)) {
    return {BoundResult::exact(g(space, f)), Decomposition{{f}}};
  }

  detail::EnvelopeSearch search(g, p, space, f);
  std::vector<std::vector<std::vector<double>>> starts;
  starts.push_back({f.values});
  {
    std::vector<std::vector<double>> singles;
    for (std::size_t w = 0; w < n; ++w) {
      if (f[w] <= 0.0) continue;
      std::vector<double> q(n, 0.0);
      q[w] = f[w];
      singles.push_back(std::move(q));
    }
    starts.push_back(std::move(singles));
  }
  {
    // layer cake: slices (f_(k) - f_(k+1)) on the k largest atoms
    std::vector<std::size_t> order(n);
    for (std::size_t w = 0; w < n; ++w) order[w] = w;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
    std::vector<std::vector<double>> layers;
    for (std::size_t k = 0; k < n; ++k) {
      const double next = k + 1 < n ? f[order[k + 1]] : 0.0;
      const double height = f[order[k]] - next;
      if (height <= 0.0) continue;
      std::vector<double> q(n, 0.0);
      for (std::size_t m = 0; m <= k; ++m) q[order[m]] = height;
      layers.push_back(std::move(q));
    }
    starts.push_back(std::move(layers));
  }
  if (options.initial) {
    std::vector<std::vector<double>> init;
    for (const auto& q : options.initial->parts) init.push_back(q.values);
    starts.push_back(std::move(init));
  }
  Rng rng(seed);
  for (int r = 0; r < budget; ++r) {
    const std::size_t k = 1 + rng.index(n);
    std::vector<std::vector<double>> groups(k, std::vector<double>(n, 0.0));
    for (std::size_t w = 0; w < n; ++w) groups[rng.index(k)][w] = f[w];
    starts.push_back(std::move(groups));
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_parts;
  for (auto& parts : starts) {
    double c = search.cost(parts);
    if (c < best) {
      best = c;
      best_parts = parts;
    }
    c = search.descend(parts, rng);
    if (c < best) {
      best = c;
      best_parts = parts;
    }
  }
  if (!best_parts.empty()) {
    auto polished = best_parts;
    const double c = search.polish(polished, rng);
    if (c < best) {
      best = c;
      best_parts = std::move(polished);
    }
  }
  Decomposition d;
  for (auto& q : best_parts) d.parts.emplace_back(std::move(q));
  const double value = std::pow(best, 1.0 / p);
  std::vector<std::vector<double>> witness;
  for (const auto& q : d.parts) witness.push_back(q.values);
  return {BoundResult::upper(value, std::move(witness)), std::move(d)};
}

enum class LatticeMode { convex, concave };

/// G = rho((sum f_j^p)^(1/p)), H = (sum rho(f_j)^p)^(1/p).
inline std::pair<double, double> lattice_terms(const Gauge& g, double p, const MeasureSpace& space,
                                               const std::vector<std::vector<double>>& family) {
  const std::size_t n = space.size();
  std::vector<double> combined(n, 0.0);
  double h = 0.0;
  for (const auto& fj : family) {
    for (std::size_t i = 0; i < n; ++i) combined[i] += std::pow(fj[i], p);
    h += std::pow(g(space, fj), p);
  }
  for (auto& v : combined) v = std::pow(v, 1.0 / p);
  return {g(space, combined), std::pow(h, 1.0 / p)};
}

/// Lower bound on the lattice p-convexity (G <= C H) or p-concavity
/// (H <= C G) constant. Witness: the family (f_j).
inline BoundResult lattice_constant_probe(const Gauge& g, LatticeMode mode, double p, const MeasureSpace& space,
                                          int trials, std::uint64_t seed) {
  detail::require(trials >= 1, "trials must be >= 1");
  detail::require(p > 0.0, "lattice exponent must be > 0");
  const std::size_t n = space.size();
  double best = 0.0;
  std::vector<std::vector<double>> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    const std::size_t count = 2 + rng.index(5);
    std::vector<std::vector<double>> family(count, std::vector<double>(n, 0.0));
    switch (t % 5) {
      case 0:  // equal copies
      {
        const auto base = sampling::field(rng, n).values;
        for (auto& fj : family) fj = base;
        break;
      }
      case 1:  // disjoint supports
        for (std::size_t i = 0; i < n; ++i) family[rng.index(count)][i] = rng.log_uniform(0.01, 100.0);
        break;
      case 2:  // single spikes at random atoms
        for (auto& fj : family) fj[rng.index(n)] = rng.log_uniform(0.1, 10.0);
        break;
      case 3:  // harmonic profiles in random arrangement
        for (auto& fj : family) fj = sampling::field(rng, n, sampling::Family::harmonic).values;
        break;
      default:
        for (auto& fj : family) fj = sampling::field(rng, n).values;
    }
    const auto [G, H] = lattice_terms(g, p, space, family);
    double ratio = 0.0;
    if (mode == LatticeMode::convex) {
      if (H > 0.0) ratio = G / H;
    } else {
      if (G > 0.0) ratio = H / G;
    }
    if (ratio > best) {
      best = ratio;
      witness = family;
    }
  }
  return BoundResult::lower(best, std::move(witness));
}

/// Witness against the L-convexity condition: f_j <= f, (1/n) sum f_j >=
/// (1 - eps) f and max_j rho(f_j) < eps rho(f).
struct LConvexityWitness {
  ScalarField f;
  std::vector<ScalarField> family;
  double max_part = 0.0;
  double whole = 0.0;
};

inline std::optional<LConvexityWitness> l_convexity_probe(const Gauge& g, double epsilon, const MeasureSpace& space,
                                                          int trials, std::uint64_t seed) {
  detail::require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  detail::require(trials >= 1, "trials must be >= 1");
  const std::size_t n = space.size();
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    const ScalarField f = t == 0 ? ScalarField(std::vector<double>(n, 1.0)) : sampling::field(rng, n);
    const double whole = g(space, f);
    if (!(whole > 0.0)) continue;
    const std::size_t max_pieces = std::max<std::size_t>(1, std::min<std::size_t>(n, 64));
    const std::size_t pieces = 1 + rng.index(max_pieces);
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = i < pieces ? i : rng.index(pieces);
    std::vector<ScalarField> family(pieces, ScalarField(std::vector<double>(n, 0.0)));
    switch (t % 3) {
      case 0:  // disjoint pieces: average is f / pieces
        for (std::size_t i = 0; i < n; ++i) family[label[i]][i] = f[i];
        break;
      case 1:  // f with one block bitten out: average is (1 - 1/pieces) f
        for (std::size_t j = 0; j < pieces; ++j)
          for (std::size_t i = 0; i < n; ++i) family[j][i] = label[i] == j ? 0.0 : f[i];
        break;
      default:
        for (auto& fj : family)
          for (std::size_t i = 0; i < n; ++i) fj[i] = rng.uniform() * f[i];
    }
    bool admissible = true;
    for (std::size_t i = 0; i < n && admissible; ++i) {
      double avg = 0.0;
      for (const auto& fj : family) avg += fj[i];
      avg /= static_cast<double>(pieces);
      if (avg < (1.0 - epsilon) * f[i]) admissible = false;
    }
    if (!admissible) continue;
    double max_part = 0.0;
    for (const auto& fj : family) max_part = std::max(max_part, g(space, fj));
    if (max_part < epsilon * whole) return LConvexityWitness{f, std::move(family), max_part, whole};
  }
  return std::nullopt;
}

/// Dense nonnegative matrix on a product of two atom spaces (row-major).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::vector<double> row(std::size_t i) const {
    return {data.begin() + static_cast<std::ptrdiff_t>(i * cols),
            data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols)};
  }
  std::vector<double> col(std::size_t j) const {
    std::vector<double> c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
  }
};

struct MiiReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs; 0 when rhs == 0
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Iterated gauges on S_A x S_B:
///   lhs = A( a -> B(f(a, .)) ),  rhs = B( b -> A(f(., b)) ).
/// A bounded ratio over all f is the Minkowski integral inequality for the
/// pair; with A = L_2, B = L_1 it is the classical one with constant 1.
inline MiiReport mii_check(const Gauge& outer, const MeasureSpace& space_a, const Gauge& inner,
                           const MeasureSpace& space_b, const Matrix& f) {
  detail::require_dims(f.rows == space_a.size() && f.cols == space_b.size(),
                       "matrix dimensions must match the two spaces");
  for (double v : f.data) detail::require(v >= 0.0, "MII check requires a nonnegative matrix");
  std::vector<double> row_vals(f.rows);
  for (std::size_t i = 0; i < f.rows; ++i) row_vals[i] = inner(space_b, f.row(i));
  std::vector<double> col_vals(f.cols);
  for (std::size_t j = 0; j < f.cols; ++j) col_vals[j] = outer(space_a, f.col(j));
  MiiReport r;
  r.lhs = outer(space_a, row_vals);
  r.rhs = inner(space_b, col_vals);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  r.rows = f.rows;
  r.cols = f.cols;
  return r;
}

struct MiiSweepResult {
  double max_ratio = 0.0;
  std::vector<double> max_ratio_per_dims;
  Matrix witness;
};

namespace detail {

inline Matrix sample_matrix(Rng& rng, std::size_t rows, std::size_t cols, int family) {
  Matrix m(rows, cols);
  switch (family % 6) {
    case 0: {  // partial permutation (identity-like)
      const auto perm = sampling::permutation(rng, std::max(rows, cols));
      for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
        const std::size_t i = rows >= cols ? perm[k] : k;
        const std::size_t j = rows >= cols ? k : perm[k];
        m(i, j) = 1.0;
      }
      break;
    }
    case 1: {  // rank one
      const auto u = sampling::field(rng, rows).values;
      const auto v = sampling::field(rng, cols).values;
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = u[i] * v[j];
      break;
    }
    case 2:
      for (auto& x : m.data) x = rng.log_uniform(1e-3, 1e3);
      break;
    case 3:
      for (auto& x : m.data)
        if (rng.coin(0.2)) x = rng.uniform();
      break;
    case 4: {  // a single heavy row or column
      if (rng.coin()) {
        const std::size_t i = rng.index(rows);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform();
      } else {
        const std::size_t j = rng.index(cols);
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = rng.uniform();
      }
      break;
    }
    default:
      for (auto& x : m.data) x = rng.uniform();
  }
  return m;
}

}  // namespace detail

/// Max mii_check ratio over seeded random matrices, `trials` per entry of
/// `dims` (rows, cols), counting measure on both factors.
inline MiiSweepResult mii_sweep(const Gauge& outer, const Gauge& inner,
                                const std::vector<std::pair<std::size_t, std::size_t>>& dims, int trials,
                                std::uint64_t seed) {
  detail::require(trials >= 1, "trials must be >= 1");
  MiiSweepResult out;
  std::uint64_t counter = 0;
  for (const auto& [rows, cols] : dims) {
    const auto sa = MeasureSpace::counting(rows);
    const auto sb = MeasureSpace::counting(cols);
    double local = 0.0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(sub_seed(seed, counter++));
      const Matrix m = detail::sample_matrix(rng, rows, cols, t);
      const auto rep = mii_check(outer, sa, inner, sb, m);
      local = std::max(local, rep.ratio);
      if (rep.ratio > out.max_ratio) {
        out.max_ratio = rep.ratio;
        out.witness = m;
      }
    }
    out.max_ratio_per_dims.push_back(local);
  }
  return out;
}

/// Lower bound on sup rho(E(f|P)) / rho(f). Witness: {f, block label per atom}.
inline BoundResult leveling_constant_probe(const Gauge& g, const MeasureSpace& space, int trials, std::uint64_t seed) {
  detail::require(trials >= 1, "trials must be >= 1");
  const std::size_t n = space.size();
  double best = 0.0;
  std::vector<std::vector<double>> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    ScalarField f;
    Partition part = Partition::trivial(n);
    switch (t % 3) {
      case 0:  // one spike, everything averaged
        f = sampling::field(rng, n, sampling::Family::spike);
        break;
      case 1:
        f = sampling::field(rng, n, sampling::Family::spike);
        part = sampling::partition(rng, n);
        break;
      default:
        f = sampling::field(rng, n);
        part = sampling::partition(rng, n);
    }
    const double base = g(space, f);
    if (!(base > 0.0)) continue;
    const double ratio = g(space, conditional_expectation(space, part, f)) / base;
    if (ratio > best) {
      best = ratio;
      std::vector<double> labels(n);
      for (std::size_t b = 0; b < part.blocks().size(); ++b)
        for (auto i : part.blocks()[b]) labels[i] = static_cast<double>(b);
      witness = {f.values, labels};
    }
  }
  return BoundResult::lower(best, std::move(witness));
}

}  // namespace qlab
