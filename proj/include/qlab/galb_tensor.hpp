#pragma once

// Galb gauges lambda_X, tensor quasi-norms X (x)_lambda L_1(mu) and the
// canonical maps J (x (x) f -> x f) and I (x (x) f -> x int f).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "qlab/bound.hpp"
#include "qlab/errors.hpp"
#include "qlab/gauge.hpp"
#include "qlab/measure.hpp"
#include "qlab/quasi_normed_space.hpp"
#include "qlab/rng.hpp"
#include "qlab/sampling.hpp"

namespace qlab {

struct GalbWitness {
  std::vector<double> coefficients;
  std::vector<std::vector<double>> vectors;  // one per coefficient, ||x_n|| <= 1
  double value = 0.0;                        // ||sum a_n x_n||
};

struct GalbResult {
  BoundResult bound;
  GalbWitness witness;
};

namespace detail {

inline std::vector<double> unit(const QuasiNormedSpace& X, std::vector<double> v) {
  const double n = X.norm(v);
  if (n > 0.0)
    for (auto& x : v) x /= n;
  return v;
}

inline double combination_norm(const QuasiNormedSpace& X, std::span<const double> a,
                               const std::vector<std::vector<double>>& xs) {
  std::vector<double> s(X.dim(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n)
    for (std::size_t k = 0; k < X.dim(); ++k) s[k] += a[n] * xs[n][k];
  return X.norm(s);
}

}  // namespace detail

/// Lower bound on lambda_X(a) = sup{ ||sum a_n x_n|| : ||x_n|| <= 1 }.
///
/// Seeds: every x_n equal to one basis vector, and disjoint basis vectors.
/// Each restart then runs alternating per-vector ascent: with the other
/// vectors fixed, x_k is replaced by the best unit vector among basis
/// directions, the current partial sum direction, lattice profiles that fill
/// the small coordinates of the partial sum, and random perturbations.
///
/// With `closed_form`, l_q targets return exact values: sum a for q >= 1 and
/// (sum a^q)^(1/q) for q < 1 when dim >= support(a).
inline GalbResult galb_gauge_estimate(const QuasiNormedSpace& X, const std::vector<double>& a, int budget,
                                      std::uint64_t seed = 0, bool closed_form = true) {
  for (double v : a) detail::require(v >= 0.0 && std::isfinite(v), "galb coefficients must be finite and >= 0");
  const std::size_t d = X.dim();
  const std::size_t N = a.size();
  auto basis = [&](std::size_t i) {
    std::vector<double> e(d, 0.0);
    e[i % d] = 1.0;
    return detail::unit(X, std::move(e));
  };
  if (N == 0) return {BoundResult::exact(0.0), {a, {}, 0.0}};

  const std::size_t support = static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [](double v) { return v > 0.0; }));
  if (closed_form && X.kind() == QuasiNormedSpace::Kind::lq) {
    GalbWitness w{a, {}, 0.0};
    if (X.q() >= 1.0) {
      for (std::size_t n = 0; n < N; ++n) w.vectors.push_back(basis(0));
      w.value = detail::combination_norm(X, a, w.vectors);
      return {BoundResult::exact(w.value), std::move(w)};
    }
    if (d >= support) {
      std::size_t next = 0;
      for (std::size_t n = 0; n < N; ++n) w.vectors.push_back(a[n] > 0.0 ? basis(next++) : basis(0));
      w.value = detail::combination_norm(X, a, w.vectors);
      double s = 0.0;
      for (double v : a)
        if (v > 0.0) s += std::pow(v, X.q());
      return {BoundResult::exact(std::pow(s, 1.0 / X.q())), std::move(w)};
    }
  }

  GalbWitness best{a, {}, -1.0};
  auto consider = [&](const std::vector<std::vector<double>>& xs) {
    const double v = detail::combination_norm(X, a, xs);
    if (v > best.value) {
      best.value = v;
      best.vectors = xs;
    }
    return v;
  };
  {
    std::vector<std::vector<double>> same(N, basis(0));
    consider(same);
    std::vector<std::vector<double>> disjoint;
    for (std::size_t n = 0; n < N; ++n) disjoint.push_back(basis(n));
    consider(disjoint);
  }

  Rng rng(seed);
  const int sweeps_per_restart = 12;
  const int restarts = std::max(1, budget / sweeps_per_restart);
  std::vector<double> partial(d);
  for (int r = 0; r < restarts; ++r) {
    std::vector<std::vector<double>> xs;
    if (r == 0) {
      xs = best.vectors;
    } else {
      for (std::size_t n = 0; n < N; ++n) {
        std::vector<double> v(d);
        for (auto& c : v) c = rng.normal();
        xs.push_back(detail::unit(X, std::move(v)));
      }
    }
    double current = detail::combination_norm(X, a, xs);
    for (int sweep = 0; sweep < sweeps_per_restart; ++sweep) {
      const double before = current;
      for (std::size_t k = 0; k < N; ++k) {
        if (a[k] == 0.0) continue;
        std::fill(partial.begin(), partial.end(), 0.0);
        for (std::size_t n = 0; n < N; ++n)
          if (n != k)
            for (std::size_t i = 0; i < d; ++i) partial[i] += a[n] * xs[n][i];
        auto score = [&](const std::vector<double>& x) {
          std::vector<double> s = partial;
          for (std::size_t i = 0; i < d; ++i) s[i] += a[k] * x[i];
          return X.norm(s);
        };
        std::vector<std::vector<double>> cands;
        for (std::size_t i = 0; i < d; ++i) {
          auto e = basis(i);
          cands.push_back(e);
          for (auto& c : e) c = -c;
          cands.push_back(std::move(e));
        }
        if (X.norm(partial) > 0.0) cands.push_back(detail::unit(X, partial));
        // fill the small coordinates of the partial sum, sign-aligned
        {
          std::vector<std::size_t> order(d);
          std::iota(order.begin(), order.end(), std::size_t{0});
          std::sort(order.begin(), order.end(),
                    [&](std::size_t u, std::size_t v) { return std::abs(partial[u]) < std::abs(partial[v]); });
          std::vector<double> harmonic(d, 0.0);
          std::vector<double> flat(d, 0.0);
          std::vector<double> inverse(d, 0.0);
          const double scale = X.norm(partial) / static_cast<double>(d) + 1e-300;
          for (std::size_t j = 0; j < d; ++j) {
            const double sign = partial[order[j]] < 0.0 ? -1.0 : 1.0;
            harmonic[order[j]] = sign / static_cast<double>(j + 1);
            flat[order[j]] = sign;
            inverse[order[j]] = sign / (std::abs(partial[order[j]]) + scale);
          }
          cands.push_back(detail::unit(X, harmonic));
          cands.push_back(detail::unit(X, flat));
          cands.push_back(detail::unit(X, inverse));
          std::vector<double> aligned(d, 0.0);
          for (std::size_t j = 0; j < d; ++j) {
            const std::size_t idx = order[d - 1 - j];
            aligned[idx] = (partial[idx] < 0.0 ? -1.0 : 1.0) / static_cast<double>(j + 1);
          }
          cands.push_back(detail::unit(X, aligned));
        }
        for (int j = 0; j < 4; ++j) {
          std::vector<double> v = xs[k];
          const double eta = std::ldexp(1.0, -static_cast<int>(rng.index(20)));
          for (auto& c : v) c += eta * rng.normal();
          cands.push_back(detail::unit(X, std::move(v)));
        }
        double local = score(xs[k]);
        for (auto& c : cands) {
          if (X.norm(c) == 0.0) continue;
          const double s = score(c);
          if (s > local) {
            local = s;
            xs[k] = std::move(c);
          }
        }
        current = local;
      }
      if (!(current > before * (1.0 + 1e-15))) break;
    }
    consider(xs);
  }
  return {BoundResult::lower(best.value, best.vectors), std::move(best)};
}

struct GalbsCheckResult {
  double max_ratio = 0.0;
  std::vector<double> witness;
};

/// Max over sampled coefficient sequences of galb_estimate(a) / lambda(a),
/// lambda evaluated with counting measure. Sequences have length <= dim X:
/// spikes, flats, geometric decays, harmonic and random profiles.
inline GalbsCheckResult galbs_check(const Gauge& lambda, const QuasiNormedSpace& X, int trials, std::uint64_t seed,
                                    int budget = 60) {
  detail::require(trials >= 1, "trials must be >= 1");
  GalbsCheckResult out;
  const std::size_t d = X.dim();
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    const std::size_t len = t == 0 ? d : 1 + rng.index(d);
    std::vector<double> a(len, 0.0);
    switch (t % 5) {
      case 0:
        std::fill(a.begin(), a.end(), 1.0);
        break;
      case 1:
        a[rng.index(len)] = rng.log_uniform(0.1, 10.0);
        break;
      case 2: {
        const double r = rng.uniform(0.3, 0.95);
        double v = 1.0;
        for (auto& x : a) {
          x = v;
          v *= r;
        }
        break;
      }
      case 3:
        for (std::size_t k = 0; k < len; ++k) a[k] = 1.0 / static_cast<double>(k + 1);
        break;
      default:
        for (auto& x : a) x = rng.uniform();
    }
    const double den = lambda(MeasureSpace::counting(len), a);
    if (!(den > 0.0)) continue;
    const double num = galb_gauge_estimate(X, a, budget, sub_seed(seed ^ 0x5eedULL, static_cast<std::uint64_t>(t))).bound.value;
    const double ratio = num / den;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.witness = a;
    }
  }
  return out;
}

struct TensorTerm {
  std::vector<double> x;
  ScalarField f;
};

/// tau = sum_j x_j (x) f_j with x_j in X and f_j fields over a measure space.
struct TensorRep {
  QuasiNormedSpace target;
  Gauge lambda;
  std::vector<TensorTerm> terms;

  void validate(const MeasureSpace& space) const {
    for (const auto& t : terms) {
      detail::require_dims(t.x.size() == target.dim(), "tensor term vector has the wrong dimension");
      detail::require_dims(t.f.size() == space.size(), "tensor term field has the wrong length");
    }
  }
};

/// J(tau)(w) = sum_j f_j(w) x_j.
inline VectorField j_map(const TensorRep& rep, const MeasureSpace& space) {
  rep.validate(space);
  VectorField out(space.size(), rep.target.dim());
  for (const auto& t : rep.terms)
    for (std::size_t w = 0; w < space.size(); ++w) {
      auto v = out.at(w);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += t.f[w] * t.x[k];
    }
  return out;
}

/// I(tau) = sum_w mu(w) J(tau)(w): the integral computed through the atoms,
/// so J(tau) = 0 forces I(tau) = 0 identically.
inline std::vector<double> i_map(const TensorRep& rep, const MeasureSpace& space) {
  const VectorField J = j_map(rep, space);
  std::vector<double> out(rep.target.dim(), 0.0);
  for (std::size_t w = 0; w < space.size(); ++w)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += space.weight(w) * J.at(w)[k];
  return out;
}

/// I(tau) = sum_j (int f_j dmu) x_j.
inline std::vector<double> i_map_termwise(const TensorRep& rep, const MeasureSpace& space) {
  rep.validate(space);
  std::vector<double> out(rep.target.dim(), 0.0);
  for (const auto& t : rep.terms) {
    const double m = integral(space, t.f);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += m * t.x[k];
  }
  return out;
}

inline double l1_norm(const MeasureSpace& space, const ScalarField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += space.weight(i) * std::abs(f[i]);
  return s;
}

/// lambda((||x_j|| ||f_j||_1)_j): the cost of one representation.
inline double representation_cost(const TensorRep& rep, const MeasureSpace& space) {
  std::vector<double> profile;
  profile.reserve(rep.terms.size());
  for (const auto& t : rep.terms) profile.push_back(rep.target.norm(t.x) * l1_norm(space, t.f));
  if (profile.empty()) return 0.0;
  return rep.lambda(MeasureSpace::counting(profile.size()), profile);
}

/// || J(tau) ||_{L_1(mu, X)} = sum_w mu(w) ||J(tau)(w)||.
inline double bochner_norm(const TensorRep& rep, const MeasureSpace& space) {
  const VectorField J = j_map(rep, space);
  double s = 0.0;
  for (std::size_t w = 0; w < space.size(); ++w) s += space.weight(w) * rep.target.norm(J.at(w));
  return s;
}

struct TensorEstimate {
  BoundResult bound;  // UPPER
  TensorRep best;
};

namespace detail {

inline bool is_zero_vec(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

inline TensorRep drop_zero_terms(TensorRep rep) {
  std::erase_if(rep.terms, [](const TensorTerm& t) { return is_zero_vec(t.x) || t.f.is_zero(); });
  return rep;
}

/// Sum_w J(w) (x) chi_w.
inline TensorRep atomized(const TensorRep& rep, const MeasureSpace& space) {
  TensorRep out{rep.target, rep.lambda, {}};
  const VectorField J = j_map(rep, space);
  for (std::size_t w = 0; w < space.size(); ++w) {
    if (is_zero_vec(J.at(w))) continue;
    ScalarField chi(std::vector<double>(space.size(), 0.0));
    chi[w] = 1.0;
    out.terms.push_back({std::vector<double>(J.at(w).begin(), J.at(w).end()), std::move(chi)});
  }
  return out;
}

/// Sum_k e_k (x) J_k.
inline TensorRep coordinate_split(const TensorRep& rep, const MeasureSpace& space) {
  TensorRep out{rep.target, rep.lambda, {}};
  const VectorField J = j_map(rep, space);
  for (std::size_t k = 0; k < rep.target.dim(); ++k) {
    ScalarField row(std::vector<double>(space.size()));
    for (std::size_t w = 0; w < space.size(); ++w) row[w] = J.at(w)[k];
    if (row.is_zero()) continue;
    std::vector<double> e(rep.target.dim(), 0.0);
    e[k] = 1.0;
    out.terms.push_back({std::move(e), std::move(row)});
  }
  return out;
}

/// If v = c u (c != 0) returns c.
inline std::optional<double> colinear_factor(std::span<const double> u, std::span<const double> v) {
  std::size_t pivot = u.size();
  double best = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > best) {
      best = std::abs(u[i]);
      pivot = i;
    }
  if (pivot == u.size()) return std::nullopt;
  const double c = v[pivot] / u[pivot];
  if (c == 0.0) return std::nullopt;
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(v[i] - c * u[i]) > 1e-13 * scale) return std::nullopt;
  return c;
}

/// Merge terms whose vectors (or whose fields) are proportional.
inline TensorRep merge_colinear(TensorRep rep) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rep.terms.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < rep.terms.size() && !changed; ++j) {
        auto& ti = rep.terms[i];
        auto& tj = rep.terms[j];
        if (auto c = colinear_factor(ti.x, tj.x)) {  // x_j = c x_i
          for (std::size_t w = 0; w < ti.f.size(); ++w) ti.f[w] += *c * tj.f[w];
          rep.terms.erase(rep.terms.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        } else if (auto c2 = colinear_factor(ti.f.values, tj.f.values)) {  // f_j = c f_i
          for (std::size_t k = 0; k < ti.x.size(); ++k) ti.x[k] += *c2 * tj.x[k];
          rep.terms.erase(rep.terms.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  return drop_zero_terms(std::move(rep));
}

/// Normalise every term to ||x_j|| = 1; the cost is unchanged by homogeneity.
inline TensorRep normalized(TensorRep rep) {
  for (auto& t : rep.terms) {
    const double n = rep.target.norm(t.x);
    if (n > 0.0) {
      for (auto& v : t.x) v /= n;
      for (auto& v : t.f.values) v *= n;
    }
  }
  return rep;
}

}  // namespace detail

/// Upper bound on ||tau||_{X (x)_lambda L_1(mu)} =
/// inf{ lambda((||x_j|| ||f_j||_1)_j) : tau = sum x_j (x) f_j }.
///
/// Every move preserves J(tau): the given representation, its atomization,
/// its coordinate split, colinear merges, and shears
///   (x_i, f_i), (x_j, f_j) -> (x_i, f_i + t f_j), (x_j - t x_i, f_j)
/// (and the symmetric variant). `budget` is the number of attempted shears.
inline TensorEstimate tensor_norm_estimate(const TensorRep& rep, const MeasureSpace& space, int budget,
                                           std::uint64_t seed = 0) {
  detail::require(!rep.terms.empty(), "tensor representation must have at least one term");
  rep.validate(space);
  std::vector<TensorRep> starts;
  starts.push_back(detail::drop_zero_terms(rep));
  starts.push_back(detail::atomized(rep, space));
  starts.push_back(detail::coordinate_split(rep, space));
  starts.push_back(detail::merge_colinear(rep));
  starts.push_back(detail::merge_colinear(detail::atomized(rep, space)));
  starts.push_back(detail::merge_colinear(detail::coordinate_split(rep, space)));

  TensorRep best = starts.front();
  double best_cost = representation_cost(best, space);
  for (const auto& s : starts) {
    const double c = representation_cost(s, space);
    if (c < best_cost) {
      best_cost = c;
      best = s;
    }
  }

  Rng rng(seed);
  const int per_start = budget / static_cast<int>(starts.size());
  for (auto& cur : starts) {
    double cost = representation_cost(cur, space);
    for (int it = 0; it < per_start && cur.terms.size() >= 2; ++it) {
      const std::size_t i = rng.index(cur.terms.size());
      std::size_t j = rng.index(cur.terms.size() - 1);
      if (j >= i) ++j;
      TensorRep trial = cur;
      auto& ti = trial.terms[i];
      auto& tj = trial.terms[j];
      const bool shear_f = rng.coin();
      double t;
      if (shear_f) {
        // cancel one entry of f_i where possible
        const std::size_t w = rng.index(space.size());
        t = tj.f[w] != 0.0 && rng.coin(0.7) ? -ti.f[w] / tj.f[w] : rng.normal();
        for (std::size_t k = 0; k < ti.f.size(); ++k) ti.f[k] += t * tj.f[k];
        for (std::size_t k = 0; k < tj.x.size(); ++k) tj.x[k] -= t * ti.x[k];
      } else {
        const std::size_t k0 = rng.index(rep.target.dim());
        t = tj.x[k0] != 0.0 && rng.coin(0.7) ? -ti.x[k0] / tj.x[k0] : rng.normal();
        for (std::size_t k = 0; k < ti.x.size(); ++k) ti.x[k] += t * tj.x[k];
        for (std::size_t w = 0; w < tj.f.size(); ++w) tj.f[w] -= t * ti.f[w];
      }
      trial = detail::drop_zero_terms(std::move(trial));
      if (trial.terms.empty()) continue;
      const double c = representation_cost(trial, space);
      if (c < cost) {
        cost = c;
        cur = std::move(trial);
        if (c < best_cost) {
          best_cost = c;
          best = cur;
        }
      }
    }
  }
  best = detail::normalized(std::move(best));
  return {BoundResult::upper(best_cost), std::move(best)};
}

}  // namespace qlab
