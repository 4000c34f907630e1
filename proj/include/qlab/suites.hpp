#pragma once

// Named property suites. Each suite runs a fixed battery of seeded checks
// and returns a JSON report plus an exit code: 0 when every check passes,
// 1 when a violation was found (the report carries the witness).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlab/convexity.hpp"
#include "qlab/ftc_maximal.hpp"
#include "qlab/galb_tensor.hpp"
#include "qlab/gauge.hpp"
#include "qlab/integration.hpp"
#include "qlab/json_io.hpp"
#include "qlab/orlicz.hpp"
#include "qlab/rng.hpp"
#include "qlab/sampling.hpp"

namespace qlab::suites {

using io::json;

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::optional<int> trials;  // per-suite default when unset
  double tol = 1e-9;
  std::optional<int> budget;
  std::optional<json> outer;  // mii only
  std::optional<json> inner;
  double p = 0.5;                       // counterexample only
  std::optional<std::size_t> max_n;     // counterexample, mii, galb
};

struct SuiteOutcome {
  int exit_code = 0;
  json report;
  std::optional<json> table;  // {"columns":[...],"rows":[...]} for CSV output
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"orlicz-concavity", "mii", "galb", "leveling", "tensor-oracle",
                                          "amenability", "ftc", "counterexample"};
  return n;
}

namespace detail {

class Checks {
 public:
  void add(std::string name, bool passed, double value, double bound, json witness = nullptr) {
    json c{{"name", std::move(name)}, {"passed", passed}, {"value", value}, {"bound", bound}};
    if (!witness.is_null()) c["witness"] = std::move(witness);
    all_passed_ = all_passed_ && passed;
    checks_.push_back(std::move(c));
  }
  bool passed() const { return all_passed_; }
  const json& list() const { return checks_; }

 private:
  bool all_passed_ = true;
  json checks_ = json::array();
};

inline SuiteOutcome finish(const std::string& name, const SuiteConfig& cfg, int trials, const Checks& checks,
                           json extra = json::object()) {
  SuiteOutcome out;
  out.report = {{"suite", name}, {"seed", cfg.seed}, {"trials", trials}, {"tol", cfg.tol},
                {"passed", checks.passed()}, {"checks", checks.list()}};
  for (auto& [k, v] : extra.items()) out.report[k] = v;
  out.exit_code = checks.passed() ? 0 : 1;
  return out;
}

inline std::vector<double> scaled(std::vector<double> v, double s) {
  for (auto& x : v) x *= s;
  return v;
}

// ---- orlicz-concavity ----

inline SuiteOutcome orlicz_concavity(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(1000);
  Checks checks;
  json validations = json::object();
  for (const auto& phi : {OrliczFunction::loglog(), OrliczFunction::rational(), OrliczFunction::power(0.5)}) {
    const std::string label = phi.builtin() == OrliczFunction::Builtin::power ? "power(0.5)" : phi.name();
    const auto v = validate(phi);
    validations[label] = {{"zero_at_origin", v.zero_at_origin}, {"non_decreasing", v.non_decreasing},
                          {"concave", v.concave}, {"lc_condition_verified", v.lc_condition_verified}};
    const Gauge g = Gauge::orlicz(phi);
    double worst = 0.0;
    json witness = nullptr;
    int violations = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      const std::size_t n = 2 + rng.index(15);
      const std::size_t parts = 2 + rng.index(5);
      const auto space = MeasureSpace::counting(n);
      std::vector<double> total(n, 0.0);
      double lhs = 0.0;
      json fam = json::array();
      for (std::size_t j = 0; j < parts; ++j) {
        const auto f = scaled(sampling::field(rng, n).values, rng.log_uniform(1e-2, 1e2));
        for (std::size_t i = 0; i < n; ++i) total[i] += f[i];
        lhs += g(space, f);
        fam.push_back(f);
      }
      const double rhs = g(space, total);
      const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? HUGE_VAL : 0.0);
      if (lhs > rhs * (1.0 + cfg.tol)) {
        ++violations;
        if (witness.is_null()) witness = fam;
      }
      worst = std::max(worst, ratio);
    }
    checks.add("lattice 1-concavity " + label, violations == 0, worst, 1.0 + cfg.tol, witness);
  }
  return finish("orlicz-concavity", cfg, trials, checks, {{"validation", validations}});
}

// ---- mii ----

inline SuiteOutcome mii(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(200);
  const Gauge outer = cfg.outer ? io::gauge_from_json(*cfg.outer) : Gauge::lp(2.0);
  const Gauge inner = cfg.inner ? io::gauge_from_json(*cfg.inner) : Gauge::lp(1.0);
  const std::size_t max_n = std::max<std::size_t>(cfg.max_n.value_or(32), 4);
  std::vector<std::pair<std::size_t, std::size_t>> dims;
  for (std::size_t n = 4; n <= max_n; n *= 2) dims.emplace_back(n, n);
  const auto sweep = mii_sweep(outer, inner, dims, trials, cfg.seed);
  Checks checks;
  const bool classical = outer.kind() == Gauge::Kind::lp && inner.kind() == Gauge::Kind::lp && outer.p() >= inner.p();
  if (classical) {
    checks.add("classical Minkowski constant", sweep.max_ratio <= 1.0 + cfg.tol, sweep.max_ratio, 1.0 + cfg.tol,
               io::to_json(sweep.witness));
  } else {
    const double small = sweep.max_ratio_per_dims.front();
    const double large = sweep.max_ratio_per_dims.back();
    checks.add("bounded ratio across sizes", large <= 2.0 * small, large, 2.0 * small, io::to_json(sweep.witness));
  }
  json table{{"columns", {"n", "max_ratio", "identity_ratio"}}, {"rows", json::array()}};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const std::size_t n = dims[k].first;
    const auto id = mii_check(outer, MeasureSpace::counting(n), inner, MeasureSpace::counting(n), Matrix::identity(n));
    table["rows"].push_back({n, sweep.max_ratio_per_dims[k], id.ratio});
  }
  auto out = finish("mii", cfg, trials, checks,
                    {{"outer", io::to_json(outer)}, {"inner", io::to_json(inner)}, {"sizes", table}});
  out.table = table;
  return out;
}

// ---- galb ----

inline SuiteOutcome galb(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(20);
  const int budget = cfg.budget.value_or(40);
  Checks checks;

  // closed-form anchors against the generic ascent
  {
    const auto X = QuasiNormedSpace::lq(4, 0.5);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      std::vector<double> a(1 + rng.index(4));
      for (auto& x : a) x = rng.uniform(0.1, 2.0);
      const double exact = Gauge::lp(0.5)(MeasureSpace::counting(a.size()), a);
      const double est = galb_gauge_estimate(X, a, budget, cfg.seed + static_cast<std::uint64_t>(t), false).bound.value;
      worst = std::max(worst, std::abs(est - exact) / exact);
    }
    checks.add("l_1/2 ascent matches closed form", worst <= 1e-6, worst, 1e-6);
  }
  {
    const auto r = galbs_check(Gauge::lp(1.0), QuasiNormedSpace::lq(4, 2.0), trials, cfg.seed, budget);
    checks.add("L_1 dominates galb of l_2", r.max_ratio <= 1.0 + cfg.tol, r.max_ratio, 1.0 + cfg.tol, r.witness);
  }
  const std::size_t max_n = std::max<std::size_t>(cfg.max_n.value_or(64), 8);
  json table{{"columns", {"atoms", "max_ratio"}}, {"rows", json::array()}};
  std::vector<double> ratios;
  std::vector<double> worst_witness;
  for (std::size_t m = 8; m <= max_n; m *= 2) {
    const auto r = galbs_check(Gauge::orlicz(OrliczFunction::loglog()), QuasiNormedSpace::weak_l1(m), trials,
                               sub_seed(cfg.seed, m), budget);
    ratios.push_back(r.max_ratio);
    if (r.max_ratio >= *std::max_element(ratios.begin(), ratios.end())) worst_witness = r.witness;
    table["rows"].push_back({m, r.max_ratio});
  }
  checks.add("l log l galbs weak L1: bounded across sizes", ratios.back() <= 2.0 * ratios.front(), ratios.back(),
             2.0 * ratios.front(), worst_witness);
  auto out = finish("galb", cfg, trials, checks, {{"sizes", table}});
  out.table = table;
  return out;
}

// ---- leveling ----

inline SuiteOutcome leveling(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(300);
  const auto space = MeasureSpace::uniform(8);
  Checks checks;
  const auto half = leveling_constant_probe(Gauge::lp(0.5), space, trials, cfg.seed);
  checks.add("L_1/2 blow-up on 8 atoms", half.value >= 8.0 - 1e-6, half.value, 8.0 - 1e-6,
             io::to_json(half)["witness"]);
  for (double p : {1.0, 2.0}) {
    const auto r = leveling_constant_probe(Gauge::lp(p), space, trials, cfg.seed);
    checks.add("L_" + io::shortest(p) + " contraction", r.value <= 1.0 + cfg.tol, r.value, 1.0 + cfg.tol,
               io::to_json(r)["witness"]);
  }
  const auto weak = leveling_constant_probe(Gauge::weak_l1(), space, trials, cfg.seed);
  return finish("leveling", cfg, trials, checks, {{"weak_l1_lower_bound", weak.value}});
}

// ---- tensor-oracle ----

inline TensorRep random_rep(Rng& rng, const QuasiNormedSpace& X, const Gauge& lambda, std::size_t atoms) {
  TensorRep rep{X, lambda, {}};
  const std::size_t terms = 1 + rng.index(4);
  for (std::size_t j = 0; j < terms; ++j) {
    std::vector<double> x(X.dim());
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    std::vector<double> f(atoms);
    for (auto& v : f) v = rng.coin(0.8) ? rng.uniform(-1.0, 1.0) : 0.0;
    rep.terms.push_back({std::move(x), ScalarField(std::move(f))});
  }
  return rep;
}

inline SuiteOutcome tensor_oracle(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(100);
  const int budget = cfg.budget.value_or(10000);
  Checks checks;
  double worst_below = 0.0;
  double worst_gap = 0.0;
  json below_witness = nullptr;
  json gap_witness = nullptr;
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    const std::size_t atoms = 1 + rng.index(3);
    const std::size_t d = 1 + rng.index(3);
    const double qs[] = {1.0, 2.0, HUGE_VAL};
    const auto X = QuasiNormedSpace::lq(d, qs[rng.index(3)]);
    std::vector<double> w(atoms);
    for (auto& v : w) v = rng.uniform(0.2, 2.0);
    const MeasureSpace space(w);
    const auto rep = random_rep(rng, X, Gauge::lp(1.0), atoms);
    const double exact = bochner_norm(rep, space);
    const double est = tensor_norm_estimate(rep, space, budget, sub_seed(cfg.seed ^ 0x7e45ULL, t)).bound.value;
    if (exact - est > worst_below) {
      worst_below = exact - est;
      below_witness = io::to_json(rep);
    }
    if (est - exact > worst_gap) {
      worst_gap = est - exact;
      gap_witness = io::to_json(rep);
    }
  }
  checks.add("estimate never below the L_1(mu,X) norm", worst_below <= 1e-9, worst_below, 1e-9, below_witness);
  checks.add("estimate within 1e-3 of the L_1(mu,X) norm", worst_gap <= 1e-3, worst_gap, 1e-3, gap_witness);
  return finish("tensor-oracle", cfg, trials, checks, {{"budget", budget}});
}

// ---- amenability ----

/// A representation with the same J as `rep`, built from term splits,
/// shears (x_i, f_i), (x_j, f_j) -> (x_i, f_i + t f_j), (x_j - t x_i, f_j)
/// and inserted cancelling pairs.
inline TensorRep equal_j_variant(Rng& rng, TensorRep rep) {
  const int moves = 1 + static_cast<int>(rng.index(6));
  for (int m = 0; m < moves; ++m) {
    const auto kind = rng.index(3);
    if (kind == 0) {
      const std::size_t i = rng.index(rep.terms.size());
      const double s = rng.uniform(0.1, 0.9);
      TensorTerm extra{rep.terms[i].x, ScalarField(detail::scaled(rep.terms[i].f.values, 1.0 - s))};
      rep.terms[i].f = ScalarField(detail::scaled(rep.terms[i].f.values, s));
      rep.terms.push_back(std::move(extra));
    } else if (kind == 1 && rep.terms.size() >= 2) {
      const std::size_t i = rng.index(rep.terms.size());
      std::size_t j = rng.index(rep.terms.size() - 1);
      if (j >= i) ++j;
      const double t = rng.uniform(-2.0, 2.0);
      for (std::size_t w = 0; w < rep.terms[i].f.size(); ++w) rep.terms[i].f[w] += t * rep.terms[j].f[w];
      for (std::size_t k = 0; k < rep.terms[j].x.size(); ++k) rep.terms[j].x[k] -= t * rep.terms[i].x[k];
    } else {
      std::vector<double> x(rep.target.dim());
      for (auto& v : x) v = rng.uniform(-1.0, 1.0);
      std::vector<double> f(rep.terms.front().f.size());
      for (auto& v : f) v = rng.uniform(0.0, 1.0);
      auto neg = x;
      for (auto& v : neg) v = -v;
      rep.terms.push_back({x, ScalarField(f)});
      rep.terms.push_back({neg, ScalarField(f)});
    }
  }
  return rep;
}

inline SuiteOutcome amenability(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(1000);
  Checks checks;
  double worst_i = 0.0;
  double worst_j = 0.0;
  double worst_termwise = 0.0;
  int failures = 0;
  json witness = nullptr;
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    const std::size_t atoms = 1 + rng.index(6);
    const std::size_t d = 1 + rng.index(4);
    const auto X = rng.coin() ? QuasiNormedSpace::lq(d, 0.5) : QuasiNormedSpace::lq(d, 2.0);
    std::vector<double> w(atoms);
    for (auto& v : w) v = rng.uniform(0.1, 1.0);
    const MeasureSpace space(w);
    const auto rep1 = random_rep(rng, X, Gauge::lp(0.5), atoms);
    const auto rep2 = equal_j_variant(rng, rep1);
    const auto r = representation_independence_check(rep1, rep2, space, cfg.tol);
    worst_i = std::max(worst_i, r.i_discrepancy);
    worst_j = std::max(worst_j, r.j_discrepancy);
    if (!r.passed || !r.premise_holds) {
      ++failures;
      if (witness.is_null()) witness = {{"rep1", io::to_json(rep1)}, {"rep2", io::to_json(rep2)}};
    }
    const auto a = i_map(rep1, space);
    const auto b = i_map_termwise(rep1, space);
    for (std::size_t k = 0; k < a.size(); ++k)
      worst_termwise = std::max(worst_termwise, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
  }
  checks.add("representation independence on equal-J pairs", failures == 0, worst_i, cfg.tol, witness);
  checks.add("integral through atoms equals termwise integral", worst_termwise <= 1e-12, worst_termwise, 1e-12);
  return finish("amenability", cfg, trials, checks, {{"max_j_discrepancy", worst_j}});
}

// ---- ftc ----

/// x chi_[0,1/2) on a 1-D grid.
inline VectorField half_indicator(const GridSpace& grid, const std::vector<double>& x) {
  VectorField F(grid.size(), x.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.center(i) < 0.5)
      for (std::size_t k = 0; k < x.size(); ++k) F.at(i)[k] = x[k];
  return F;
}

/// Cells whose centers are at distance >= delta from the jump at 1/2.
inline std::vector<std::size_t> away_from_jump(const GridSpace& grid, double delta) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid.center(i) - 0.5) >= delta) out.push_back(i);
  return out;
}

inline ScalarField point_mass(const GridSpace& grid, std::size_t cell) {
  ScalarField f(std::vector<double>(grid.size(), 0.0));
  f[cell] = static_cast<double>(grid.size());
  return f;
}

/// Max over y of vector_maximal(J rep)(y) - lambda((M f_j(y))_j), for a
/// representation with unit-ball vectors; <= 0 up to rounding.
inline double series_domination_excess(const GridSpace& grid, const TensorRep& rep, const std::vector<double>& scales) {
  const auto space = grid.measure();
  const auto VM = vector_maximal(grid, rep.target, j_map(rep, space), scales);
  std::vector<ScalarField> Ms;
  for (const auto& t : rep.terms) Ms.push_back(hl_maximal(grid, t.f, scales));
  const auto counting = MeasureSpace::counting(rep.terms.size());
  double worst = -HUGE_VAL;
  std::vector<double> prof(rep.terms.size());
  for (std::size_t y = 0; y < grid.size(); ++y) {
    for (std::size_t j = 0; j < prof.size(); ++j) prof[j] = Ms[j][y];
    worst = std::max(worst, VM[y] - rep.lambda(counting, prof));
  }
  return worst;
}

inline TensorRep random_grid_rep(Rng& rng, const GridSpace& grid, bool banach) {
  const std::size_t d = 1 + rng.index(3);
  const auto X = banach ? QuasiNormedSpace::lq(d, 1.0) : QuasiNormedSpace::lq(d, 0.5);
  TensorRep rep{X, banach ? Gauge::lp(1.0) : Gauge::lp(0.5), {}};
  const std::size_t terms = 1 + rng.index(4);
  for (std::size_t j = 0; j < terms; ++j) {
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const double n = X.norm(x);
    if (n > 0.0)
      for (auto& v : x) v /= n * rng.uniform(1.0, 2.0);
    std::vector<double> f(grid.size(), 0.0);
    // piecewise constant with a few random jumps
    double level = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (rng.coin(0.1)) level = rng.coin(0.3) ? 0.0 : rng.uniform(-2.0, 2.0);
      f[i] = level;
    }
    rep.terms.push_back({std::move(x), ScalarField(std::move(f))});
  }
  return rep;
}

inline SuiteOutcome ftc(const SuiteConfig& cfg) {
  const int trials = cfg.trials.value_or(100);
  Checks checks;

  const GridSpace g256(1, 256);
  const std::vector<double> x{1.0, -2.0};
  const auto X2 = QuasiNormedSpace::lq(2, 2.0);
  const std::vector<double> schedule{0.25, 0.125, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto rows = differentiation_report(g256, X2, half_indicator(g256, x), away_from_jump(g256, 0.125), schedule);
  json table{{"columns", {"halfwidth", "max_error"}}, {"rows", json::array()}};
  double worst_small = 0.0;
  for (const auto& r : rows) {
    table["rows"].push_back({r.halfwidth, r.max_error});
    if (r.halfwidth < 0.125) worst_small = std::max(worst_small, r.max_error);
  }
  checks.add("differentiation exact below the jump distance", worst_small == 0.0, worst_small, 0.0);

  const GridSpace g4096(1, 4096);
  const double c = weak11_constant(g4096, point_mass(g4096, 2048), g4096.all_scales());
  checks.add("weak (1,1) constant of a point mass", c >= 1.8 && c <= 2.2, c, 2.2);

  double worst = -HUGE_VAL;
  json witness = nullptr;
  for (int t = 0; t < trials; ++t) {
    Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    const GridSpace grid = t % 4 == 3 ? GridSpace(2, 12) : GridSpace(1, 64);
    const auto rep = random_grid_rep(rng, grid, t % 2 == 0);
    const auto all = grid.all_scales();
    std::vector<double> scales;
    for (std::size_t k = 0; k < all.size(); k += 1 + rng.index(3)) scales.push_back(all[k]);
    const double e = series_domination_excess(grid, rep, scales);
    if (e > worst) {
      worst = e;
      if (e > 1e-9) witness = io::to_json(rep);
    }
  }
  checks.add("series domination of the vector maximal function", worst <= 1e-9, worst, 1e-9, witness);
  auto out = finish("ftc", cfg, trials, checks, {{"weak11_point_mass", c}, {"differentiation", table}});
  out.table = table;
  return out;
}

// ---- counterexample ----

inline SuiteOutcome counterexample(const SuiteConfig& cfg) {
  const std::size_t max_n = cfg.max_n.value_or(1024);
  const double p = cfg.p;
  Checks checks;
  json table{{"columns", {"p", "n", "sup_part_norm", "riemann_sum_norm", "ratio"}}, {"rows", json::array()}};
  double worst = 0.0;
  bool increasing = true;
  double prev = 0.0;
  for (std::size_t n = 1; n <= max_n; n *= 2) {
    const auto r = rolewicz_counterexample(p, n);
    const double nd = static_cast<double>(n);
    const double want_sup = std::pow(nd, 1.0 - 1.0 / p);
    const double want_ratio = std::pow(nd, 1.0 / p - 1.0);
    worst = std::max({worst, std::abs(r.sup_part_norm - want_sup) / want_sup, std::abs(r.riemann_sum_norm - 1.0),
                      std::abs(r.blowup_ratio - want_ratio) / want_ratio});
    if (n > 1 && p < 1.0 && !(r.blowup_ratio > prev)) increasing = false;
    prev = r.blowup_ratio;
    const auto j = io::to_json(r);
    table["rows"].push_back({j["p"], j["n"], j["sup_part_norm"], j["riemann_sum_norm"], j["ratio"]});
  }
  checks.add("closed forms n^(1-1/p), 1, n^(1/p-1)", worst <= 1e-12, worst, 1e-12);
  checks.add("blow-up strictly increasing in n", increasing || p == 1.0, increasing ? 1.0 : 0.0, 1.0);
  auto out = finish("counterexample", cfg, static_cast<int>(table["rows"].size()), checks, {{"table", table}});
  out.table = table;
  return out;
}

}  // namespace detail

/// Runs the named suite; unknown names raise InputError.
inline SuiteOutcome run(const std::string& name, const SuiteConfig& cfg) {
  if (cfg.trials && *cfg.trials < 1) throw InputError("trials must be >= 1");
  if (!(cfg.tol > 0.0)) throw InputError("tol must be > 0");
  if (name == "orlicz-concavity") return detail::orlicz_concavity(cfg);
  if (name == "mii") return detail::mii(cfg);
  if (name == "galb") return detail::galb(cfg);
  if (name == "leveling") return detail::leveling(cfg);
  if (name == "tensor-oracle") return detail::tensor_oracle(cfg);
  if (name == "amenability") return detail::amenability(cfg);
  if (name == "ftc") return detail::ftc(cfg);
  if (name == "counterexample") return detail::counterexample(cfg);
  throw InputError("unknown suite \"" + name + "\"");
}

}  // namespace qlab::suites
