#pragma once

// The lambda-integral at finite scale: simple functions, series
// representations with their membership certificates, the amenability
// (representation-independence) check, and the construction showing that
// Riemann sums are unbounded on non-locally-convex L_p.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qlab/bound.hpp"
#include "qlab/errors.hpp"
#include "qlab/galb_tensor.hpp"
#include "qlab/gauge.hpp"
#include "qlab/measure.hpp"

namespace qlab {

struct SimplePiece {
  std::vector<std::size_t> atoms;
  std::vector<double> x;
};

/// sum_k x_k chi_{E_k} with pairwise disjoint E_k.
struct SimpleFunction {
  std::vector<SimplePiece> pieces;

  void validate(const MeasureSpace& space, std::size_t dim) const {
    std::vector<char> used(space.size(), 0);
    for (const auto& p : pieces) {
      detail::require_dims(p.x.size() == dim, "simple function vector has the wrong dimension");
      for (auto i : p.atoms) {
        detail::require(i < space.size(), "simple function atom out of range");
        detail::require(!used[i], "simple function pieces must be disjoint");
        used[i] = 1;
      }
    }
  }
};

/// sum_k mu(E_k) x_k.
inline std::vector<double> integrate_simple(const SimpleFunction& s, const MeasureSpace& space, std::size_t dim) {
  s.validate(space, dim);
  std::vector<double> out(dim, 0.0);
  for (const auto& p : s.pieces) {
    const double m = space.mass_of(p.atoms);
    for (std::size_t k = 0; k < dim; ++k) out[k] += m * p.x[k];
  }
  return out;
}

inline TensorRep to_tensor_rep(const SimpleFunction& s, const MeasureSpace& space, const QuasiNormedSpace& X,
                               const Gauge& lambda) {
  s.validate(space, X.dim());
  TensorRep rep{X, lambda, {}};
  for (const auto& p : s.pieces) {
    ScalarField chi(std::vector<double>(space.size(), 0.0));
    for (auto i : p.atoms) chi[i] = 1.0;
    rep.terms.push_back({p.x, std::move(chi)});
  }
  return rep;
}

struct SeriesIntegral {
  std::vector<double> value;
  /// lambda((||x_j|| ||f_j||_1)_j) of the given representation. EXACT as the
  /// value of that representation; representation-dependent.
  BoundResult gauge_of_profile;
  bool over_cap = false;
};

inline SeriesIntegral integrate_series(const TensorRep& rep, const MeasureSpace& space,
                                       double cap = std::numeric_limits<double>::infinity()) {
  SeriesIntegral out;
  out.value = i_map(rep, space);
  out.gauge_of_profile = BoundResult::exact(representation_cost(rep, space));
  out.over_cap = out.gauge_of_profile.value > cap;
  return out;
}

struct IndependenceReport {
  bool passed = true;
  bool premise_holds = false;  // max_w ||J1(w) - J2(w)|| <= tol
  double j_discrepancy = 0.0;
  double i_discrepancy = 0.0;
};

/// If the two representations agree pointwise (J) up to tol, their integrals
/// (I) must agree up to tol * mu(Omega).
inline IndependenceReport representation_independence_check(const TensorRep& rep1, const TensorRep& rep2,
                                                             const MeasureSpace& space, double tol) {
  detail::require_dims(rep1.target.dim() == rep2.target.dim(), "representations must share the target space");
  const VectorField J1 = j_map(rep1, space);
  const VectorField J2 = j_map(rep2, space);
  IndependenceReport r;
  std::vector<double> diff(rep1.target.dim());
  for (std::size_t w = 0; w < space.size(); ++w) {
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = J1.at(w)[k] - J2.at(w)[k];
    r.j_discrepancy = std::max(r.j_discrepancy, rep1.target.norm(diff));
  }
  const auto I1 = i_map(rep1, space);
  const auto I2 = i_map(rep2, space);
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = I1[k] - I2[k];
  r.i_discrepancy = rep1.target.norm(diff);
  r.premise_holds = r.j_discrepancy <= tol;
  r.passed = !r.premise_holds || r.i_discrepancy <= tol * space.total_mass();
  return r;
}

struct CounterexampleReport {
  double p = 0.0;
  std::size_t n = 0;
  double sup_part_norm = 0.0;
  double riemann_sum_norm = 0.0;
  double blowup_ratio = 0.0;
};

/// Equipartition of [0,1] into n atoms A_m of mass 1/n with x_m = n chi_{A_m}
/// in L_p: every x_m has norm n^(1 - 1/p) while sum_m mu(A_m) x_m = chi_Omega
/// has norm 1. All norms are computed with the L_p gauge.
inline CounterexampleReport rolewicz_counterexample(double p, std::size_t n) {
  detail::require(p > 0.0 && p <= 1.0, "counterexample needs 0 < p <= 1");
  detail::require(n >= 1, "counterexample needs n >= 1");
  const auto space = MeasureSpace::uniform(n);
  const Gauge lp = Gauge::lp(p);
  const double height = static_cast<double>(n);
  CounterexampleReport r;
  r.p = p;
  r.n = n;
  ScalarField riemann(std::vector<double>(n, 0.0));
  ScalarField part(std::vector<double>(n, 0.0));
  for (std::size_t m = 0; m < n; ++m) {
    part[m] = height;
    r.sup_part_norm = std::max(r.sup_part_norm, eval_gauge(lp, space, part).value);
    riemann[m] += space.weight(m) * height;
    part[m] = 0.0;
  }
  r.riemann_sum_norm = eval_gauge(lp, space, riemann).value;
  r.blowup_ratio = r.riemann_sum_norm / r.sup_part_norm;
  return r;
}

}  // namespace qlab
