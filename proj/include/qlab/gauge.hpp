#pragma once

// Function quasi-norms on finite measure spaces.
//
// A Gauge is an immutable descriptor (L_p, weak-L1, Luxemburg/Orlicz,
// r-convexification, intersection). Evaluation always goes through a
// MeasureSpace so the same descriptor works for counting measure (sequence
// gauges) and for weighted atoms.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlab/bound.hpp"
#include "qlab/errors.hpp"
#include "qlab/measure.hpp"
#include "qlab/orlicz.hpp"
#include "qlab/quasi_normed_space.hpp"
#include "qlab/rng.hpp"
#include "qlab/sampling.hpp"

namespace qlab {

class Gauge;

/// Upper bound on (g1 cap g2)(f) = inf{ g1(u) + g2(v) : f = u + v }.
inline BoundResult intersect_eval(const Gauge& g1, const Gauge& g2, const MeasureSpace& space, const ScalarField& f,
                           int budget, std::uint64_t seed = 0);

class Gauge {
 public:
  enum class Kind { lp, weak_l1, orlicz, convexified, intersect };

  static Gauge lp(double p) {
    detail::require(p > 0.0 && std::isfinite(p), "L_p exponent must be finite and > 0");
    Gauge g(Kind::lp);
    g.p_ = p;
    g.kappa_ = p < 1.0 ? std::pow(2.0, 1.0 / p - 1.0) : 1.0;
    g.kappa_known_ = true;
    g.convexity_p_ = std::min(p, 1.0);
    return g;
  }

  static Gauge weak_l1() {
    Gauge g(Kind::weak_l1);
    g.kappa_ = 2.0;
    g.kappa_known_ = true;
    return g;
  }

  static Gauge orlicz(OrliczFunction phi) {
    Gauge g(Kind::orlicz);
    if (phi.builtin() == OrliczFunction::Builtin::power) {
      const double p = phi.exponent();
      g.kappa_ = p < 1.0 ? std::pow(2.0, 1.0 / p - 1.0) : 1.0;
      g.kappa_known_ = true;
      g.convexity_p_ = std::min(p, 1.0);
    }
    g.phi_ = std::make_shared<const OrliczFunction>(std::move(phi));
    return g;
  }

  /// rho^(r)(f) = rho(f^r)^(1/r).
  static Gauge convexified(Gauge base, double r) {
    detail::require(r > 0.0 && std::isfinite(r), "convexification exponent must be finite and > 0");
    Gauge g(Kind::convexified);
    g.r_ = r;
    // (f+g)^r <= c_r (f^r + g^r) with c_r = max(1, 2^(r-1)), then the
    // (1/r)-power of a two-term sum costs max(1, 2^(1/r-1)).
    const double c = std::max(1.0, std::pow(2.0, r - 1.0));
    g.kappa_ = std::pow(base.kappa_ * c, 1.0 / r) * std::max(1.0, std::pow(2.0, 1.0 / r - 1.0));
    g.kappa_known_ = false;
    if (base.kappa_known_ && base.kind_ == Kind::lp) {
      g.kappa_ = base.p_ * r < 1.0 ? std::pow(2.0, 1.0 / (base.p_ * r) - 1.0) : 1.0;
      g.kappa_known_ = true;
    }
    if (base.convexity_p_) g.convexity_p_ = std::min(1.0, *base.convexity_p_ * r);
    g.base_ = std::make_shared<const Gauge>(std::move(base));
    return g;
  }

  static Gauge intersect(Gauge g1, Gauge g2) {
    Gauge g(Kind::intersect);
    g.kappa_ = std::max(g1.kappa_, g2.kappa_);
    g.kappa_known_ = false;
    g.g1_ = std::make_shared<const Gauge>(std::move(g1));
    g.g2_ = std::make_shared<const Gauge>(std::move(g2));
    return g;
  }

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double r() const { return r_; }
  const OrliczFunction& phi() const { return *phi_; }
  const Gauge& base() const { return *base_; }
  const Gauge& first() const { return *g1_; }
  const Gauge& second() const { return *g2_; }

  /// Modulus of concavity: exact when kappa_known(), otherwise a valid upper
  /// bound (convexified, intersect) or the trivial 1 (non-power Orlicz).
  double kappa() const { return kappa_; }
  bool kappa_known() const { return kappa_known_; }
  /// A known exponent p for which the gauge is p-convex, if any.
  std::optional<double> convexity_p() const { return convexity_p_; }

  /// True when the gauge is a function p-norm for exponent p (so the trivial
  /// decomposition is optimal in the p-envelope).
  bool is_p_norm_for(double p) const {
    if (kind_ == Kind::lp) return p <= std::min(p_, 1.0) + 1e-15;
    if (kind_ == Kind::orlicz && phi_->builtin() == OrliczFunction::Builtin::power)
      return p <= std::min(phi_->exponent(), 1.0) + 1e-15;
    return false;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::lp:
        return "L_" + std::to_string(p_);
      case Kind::weak_l1:
        return "weak_L1";
      case Kind::orlicz:
        return "orlicz(" + phi_->name() + ")";
      case Kind::convexified:
        return "(" + base_->describe() + ")^(" + std::to_string(r_) + ")";
      case Kind::intersect:
        return "(" + g1_->describe() + " cap " + g2_->describe() + ")";
    }
    return "?";
  }

  /// Gauge value on a nonnegative field. Intersections return the default
  /// search's upper bound.
  double operator()(const MeasureSpace& space, std::span<const double> f) const {
    switch (kind_) {
      case Kind::lp:
        return lp_value(space, f, p_);
      case Kind::weak_l1:
        return weak_l1_value(space, f);
      case Kind::orlicz:
        return luxemburg(*phi_, space, ScalarField(std::vector<double>(f.begin(), f.end())), kOrliczTol).value;
      case Kind::convexified: {
        std::vector<double> fr(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) fr[i] = std::pow(f[i], r_);
        return std::pow((*base_)(space, fr), 1.0 / r_);
      }
      case Kind::intersect:
        return intersect_eval(*g1_, *g2_, space, ScalarField(std::vector<double>(f.begin(), f.end())),
                              kDefaultIntersectBudget)
            .value;
    }
    return 0.0;
  }

  double operator()(const MeasureSpace& space, const ScalarField& f) const { return (*this)(space, f.span()); }

  static constexpr double kOrliczTol = 1e-14;
  static constexpr int kDefaultIntersectBudget = 6;

  static double lp_value(const MeasureSpace& space, std::span<const double> f, double p) {
    double s = 0.0;
    if (p == 1.0) {
      for (std::size_t i = 0; i < f.size(); ++i) s += space.weight(i) * f[i];
      return s;
    }
    if (p == 2.0) {
      for (std::size_t i = 0; i < f.size(); ++i) s += space.weight(i) * f[i] * f[i];
      return std::sqrt(s);
    }
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] > 0.0) s += space.weight(i) * std::pow(f[i], p);
    if (p == 0.5) return s * s;
    return std::pow(s, 1.0 / p);
  }

  /// sup_s s mu{f > s} = max_k value_k * cumulative_mass_k over the decreasing rearrangement.
  static double weak_l1_value(const MeasureSpace& space, std::span<const double> f) {
    const auto steps = decreasing_rearrangement(space, ScalarField(std::vector<double>(f.begin(), f.end())));
    double best = 0.0;
    for (const auto& s : steps) best = std::max(best, s.value * s.cumulative_mass);
    return best;
  }

 private:
  explicit Gauge(Kind k) : kind_(k) {}

  Kind kind_;
  double p_ = 1.0;
  double r_ = 1.0;
  double kappa_ = 1.0;
  bool kappa_known_ = false;
  std::optional<double> convexity_p_;
  std::shared_ptr<const OrliczFunction> phi_;
  std::shared_ptr<const Gauge> base_;
  std::shared_ptr<const Gauge> g1_;
  std::shared_ptr<const Gauge> g2_;
};

/// Evaluate a gauge with certification tag. Everything except intersections
/// is exact (Orlicz: exact up to the bisection tolerance).
inline BoundResult eval_gauge(const Gauge& g, const MeasureSpace& space, const ScalarField& f) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(f.is_nonnegative(), "gauges are evaluated on nonnegative fields");
  if (g.kind() == Gauge::Kind::intersect)
    return intersect_eval(g.first(), g.second(), space, f, Gauge::kDefaultIntersectBudget);
  return BoundResult::exact(g(space, f));
}

/// Per-atom norm field |F|(w) = ||F(w)||_X.
inline ScalarField norm_field(const QuasiNormedSpace& target, const VectorField& F) {
  detail::require_dims(F.dim() == target.dim(), "vector field dimension does not match the target space");
  ScalarField out(std::vector<double>(F.size()));
  for (std::size_t i = 0; i < F.size(); ++i) out[i] = target.norm(F.at(i));
  return out;
}

/// ||F||_rho = rho(||F||_X).
inline BoundResult eval_vector_gauge(const Gauge& g, const MeasureSpace& space, const QuasiNormedSpace& target,
                                     const VectorField& F) {
  detail::require_dims(F.size() == space.size(), "field length must match the space");
  return eval_gauge(g, space, norm_field(target, F));
}

inline Gauge convexify(const Gauge& g, double r) { return Gauge::convexified(g, r); }

/// Per-atom split search: u = alpha f, v = (1 - alpha) f with alpha in
/// [0,1] optimised coordinate-wise; `budget` restarts (all-first, all-second,
/// half, then random). Never worse than min(g1(f), g2(f)). Witness: {u, v}.
inline BoundResult intersect_eval(const Gauge& g1, const Gauge& g2, const MeasureSpace& space, const ScalarField& f,
                                  int budget, std::uint64_t seed) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(f.is_nonnegative(), "gauges are evaluated on nonnegative fields");
  const std::size_t n = f.size();
  const double whole1 = g1(space, f);
  const double whole2 = g2(space, f);
  std::vector<double> best_alpha(n, whole1 <= whole2 ? 1.0 : 0.0);
  double best = std::min(whole1, whole2);
  if (budget <= 0 || best == 0.0) {
    auto u = f.values;
    std::vector<double> v(n, 0.0);
    if (whole1 > whole2) std::swap(u, v);
    return BoundResult::upper(best, {u, v});
  }

  std::vector<double> u(n);
  std::vector<double> v(n);
  auto cost = [&](const std::vector<double>& alpha) {
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = alpha[i] * f[i];
      v[i] = f[i] - u[i];
    }
    return g1(space, u) + g2(space, v);
  };

  // best split that sends every atom wholly to one side; concave parts
  // put their minima at such vertices
  std::vector<double> vertex(n, 1.0);
  if (n <= 12) {
    double vertex_cost = HUGE_VAL;
    std::vector<double> alpha(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      for (std::size_t i = 0; i < n; ++i) alpha[i] = (mask >> i) & 1 ? 1.0 : 0.0;
      const double c = cost(alpha);
      if (c < vertex_cost) {
        vertex_cost = c;
        vertex = alpha;
      }
    }
  }

  Rng rng(seed);
  for (int restart = 0; restart < budget; ++restart) {
    std::vector<double> alpha(n);
    for (std::size_t i = 0; i < n; ++i) {
      switch (restart) {
        case 0:
          alpha[i] = vertex[i];
          break;
        case 1:
          alpha[i] = 0.0;
          break;
        case 2:
          alpha[i] = 0.5;
          break;
        case 3:
          alpha[i] = 1.0;
          break;
        default:
          alpha[i] = rng.coin(0.3) ? static_cast<double>(rng.index(2)) : rng.uniform();
      }
    }
    double current = cost(alpha);
    for (int sweep = 0; sweep < 60; ++sweep) {
      const double before = current;
      for (std::size_t i = 0; i < n; ++i) {
        if (f[i] == 0.0) continue;
        const double keep = alpha[i];
        double arg = keep;
        for (int k = 0; k <= 20; ++k) {
          alpha[i] = k / 20.0;
          const double c = cost(alpha);
          if (c < current) {
            current = c;
            arg = alpha[i];
          }
        }
        // golden-section refinement around the grid minimiser
        double lo = std::max(0.0, arg - 0.05);
        double hi = std::min(1.0, arg + 0.05);
        constexpr double kInvPhi = 0.6180339887498949;
        for (int k = 0; k < 40; ++k) {
          const double a = hi - kInvPhi * (hi - lo);
          const double b = lo + kInvPhi * (hi - lo);
          alpha[i] = a;
          const double ca = cost(alpha);
          alpha[i] = b;
          const double cb = cost(alpha);
          if (ca < current) {
            current = ca;
            arg = a;
          }
          if (cb < current) {
            current = cb;
            arg = b;
          }
          if (ca < cb) {
            hi = b;
          } else {
            lo = a;
          }
        }
        alpha[i] = arg;
      }
      if (!(current < before * (1.0 - 1e-14))) break;
    }
    if (current < best) {
      best = current;
      best_alpha = alpha;
    }
  }
  cost(best_alpha);
  return BoundResult::upper(best, {u, v});
}

/// Associated gauge rho'(f) = sup{ sum mu f g : rho(g) <= 1 }.
///
/// Exact (Hoelder) for L_p with p >= 1. Otherwise a lower bound from
/// normalized indicators, power profiles of f and projected ascent. The
/// witness is the maximizing g with rho(g) = 1.
inline BoundResult dual_gauge(const Gauge& g, const MeasureSpace& space, const ScalarField& f, int budget,
                              std::uint64_t seed = 0) {
  detail::require_dims(f.size() == space.size(), "field length must match the space");
  detail::require(f.is_nonnegative(), "dual gauge requires a nonnegative field");
  const std::size_t n = f.size();
  if (f.is_zero()) return {0.0, g.kind() == Gauge::Kind::lp && g.p() >= 1.0 ? BoundTag::exact : BoundTag::lower, {}};

  auto pairing = [&](std::span<const double> h) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += space.weight(i) * f[i] * h[i];
    return s;
  };

  if (g.kind() == Gauge::Kind::lp && g.p() >= 1.0) {
    std::vector<double> w(n, 0.0);
    if (g.p() == 1.0) {
      const auto it = std::max_element(f.values.begin(), f.values.end());
      const auto k = static_cast<std::size_t>(it - f.values.begin());
      w[k] = 1.0 / space.weight(k);
      return {*it, BoundTag::exact, {w}};
    }
    const double q = g.p() / (g.p() - 1.0);
    const double norm = Gauge::lp_value(space, f.values, q);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(f[i] / norm, q - 1.0);
    return {norm, BoundTag::exact, {w}};
  }

  double best = 0.0;
  std::vector<double> best_g(n, 0.0);
  auto consider = [&](std::vector<double> h) {
    const double r = g(space, h);
    if (!(r > 0.0) || !std::isfinite(r)) return;
    const double val = pairing(h) / r;
    if (val > best) {
      best = val;
      for (auto& x : h) x /= r;
      best_g = std::move(h);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> h(n, 0.0);
    h[i] = 1.0;
    consider(std::move(h));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<double> h(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) h[order[j]] = 1.0;
    consider(std::move(h));
  }
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = std::pow(f[i], s);
    consider(std::move(h));
  }

  Rng rng(seed);
  for (int restart = 0; restart < budget; ++restart) {
    std::vector<double> h = restart == 0 ? best_g : sampling::field(rng, n).values;
    double current = g(space, h) > 0.0 ? pairing(h) / g(space, h) : 0.0;
    double step = 0.5;
    for (int it = 0; it < 200 && step > 1e-9; ++it) {
      std::vector<double> trial = h;
      for (std::size_t i = 0; i < n; ++i)
        trial[i] = std::max(0.0, trial[i] + step * (rng.normal() * 0.5 + f[i] / (1.0 + f[i])) * (1.0 + trial[i]));
      const double r = g(space, trial);
      if (r > 0.0) {
        const double val = pairing(trial) / r;
        if (val > current) {
          current = val;
          h = std::move(trial);
          continue;
        }
      }
      step *= 0.7;
    }
    consider(h);
  }
  return BoundResult::lower(best, {best_g});
}

/// Lower bound on the modulus of concavity: max over sampled pairs of
/// rho(f+g) / (rho(f) + rho(g)). Witness: {f, g}.
inline BoundResult concavity_modulus_probe(const Gauge& g, const MeasureSpace& space, int trials, std::uint64_t seed) {
  detail::require(trials >= 1, "trials must be >= 1");
  const std::size_t n = space.size();
  double best = 0.0;
  std::vector<std::vector<double>> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> a(n, 0.0);
    std::vector<double> b(n, 0.0);
    switch (t % 4) {
      case 0: {  // disjoint spikes of random heights
        const std::size_t i = rng.index(n);
        std::size_t j = rng.index(n);
        if (n > 1)
          while (j == i) j = rng.index(n);
        a[i] = rng.log_uniform(0.1, 10.0);
        b[j] = rng.log_uniform(0.1, 10.0);
        break;
      }
      case 1: {  // a profile and its reversal
        a = sampling::field(rng, n).values;
        std::sort(a.begin(), a.end(), std::greater<>());
        b.assign(a.rbegin(), a.rend());
        break;
      }
      case 2: {  // disjointly supported random fields
        for (std::size_t i = 0; i < n; ++i) (rng.coin() ? a : b)[i] = rng.log_uniform(0.01, 100.0);
        break;
      }
      default:
        a = sampling::field(rng, n).values;
        b = sampling::field(rng, n).values;
    }
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a[i] + b[i];
    const double den = g(space, a) + g(space, b);
    if (!(den > 0.0)) continue;
    const double ratio = g(space, s) / den;
    if (ratio > best) {
      best = ratio;
      witness = {a, b};
    }
  }
  return BoundResult::lower(best, std::move(witness));
}

}  // namespace qlab
