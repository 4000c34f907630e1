// Acceptance gate: one PASS/FAIL line per criterion; nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qlab/convexity.hpp"
#include "qlab/galb_tensor.hpp"
#include "qlab/gauge.hpp"
#include "qlab/integration.hpp"
#include "qlab/rng.hpp"
#include "qlab/suites.hpp"

using namespace qlab;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s [%d] %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) { return io::format_number(v); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool suite_passes(const std::string& name, std::string& detail) {
  const auto out = suites::run(name, {});
  detail.clear();
  for (const auto& c : out.report["checks"]) {
    if (!detail.empty()) detail += "; ";
    detail += c["name"].get<std::string>() + " = " + num(c["value"].get<double>());
  }
  return out.exit_code == 0;
}

void rolewicz() {
  const Timer timer;
  double worst_part = 0.0, worst_ratio = 0.0;
  for (std::size_t n : {4u, 16u, 64u, 256u, 1024u}) {
    const auto r = rolewicz_counterexample(0.5, n);
    const double dn = static_cast<double>(n);
    worst_part = std::max(worst_part, std::abs(r.sup_part_norm - 1.0 / dn));
    worst_ratio = std::max(worst_ratio, std::abs(r.blowup_ratio - dn) / dn);
  }
  const double t = timer.seconds();
  report(1, worst_part <= 1e-12 && worst_ratio <= 1e-12 && t < 1.0, "Rolewicz blow-up for p = 1/2",
         "part error " + num(worst_part) + ", relative ratio error " + num(worst_ratio) + ", " + num(t) + " s");
}

void orlicz() {
  const Timer timer;
  std::string detail;
  const bool ok = suite_passes("orlicz-concavity", detail);
  const double t = timer.seconds();
  report(2, ok && t < 10.0, "Orlicz lattice 1-concavity over 1000 families", detail + ", " + num(t) + " s");
}

void aoki() {
  double worst = 0.0;
  for (double p : {1.0, 0.5, 1.0 / 3.0, 0.25}) worst = std::max(worst, std::abs(aoki_exponent(std::pow(2.0, 1.0 / p - 1.0)) - p));
  const auto probe = concavity_modulus_probe(Gauge::lp(0.5), MeasureSpace::counting(4), 10000, 2024);
  report(3, worst <= 1e-12 && probe.value >= 1.9, "Aoki exponent round trip and L_1/2 modulus",
         "round-trip error " + num(worst) + ", modulus " + num(probe.value));
}

void envelope() {
  Rng rng(404);
  double worst_oracle = 0.0, worst_l1 = 0.0;
  const Gauge half = Gauge::lp(0.5);
  for (std::size_t n : {2u, 3u}) {
    for (int t = 0; t < 5; ++t) {
      std::vector<double> w(n), f(n);
      for (auto& x : w) x = rng.uniform(0.5, 2.0);
      for (auto& x : f) x = rng.uniform(0.1, 3.0);
      const MeasureSpace s(w);
      const int steps = n == 2 ? 100 : 20;
      const double grid =
          oracle::envelope([&](const std::vector<double>& q) { return half(s, q); }, 1.0, f, static_cast<int>(n), steps);
      // l_1 sum of the single-atom values; cross terms make it the envelope
      double l1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) l1 += w[i] * w[i] * f[i];
      const double got = p_envelope(half, 1.0, s, ScalarField(f), 200, static_cast<std::uint64_t>(t)).bound.value;
      worst_oracle = std::max(worst_oracle, std::abs(got - grid) / grid);
      worst_l1 = std::max(worst_l1, std::abs(got - l1) / grid);
    }
  }
  const MeasureSpace s({0.5, 1.0, 2.0});
  const ScalarField f{1.0, 2.0, 0.5};
  double short_err = 0.0, generic_err = 0.0;
  bool exact_tags = true;
  for (double p : {0.25, 0.5, 1.0}) {
    const Gauge g = Gauge::lp(p);
    const double want = eval_gauge(g, s, f).value;
    const auto quick = p_envelope(g, p, s, f, 10);
    exact_tags = exact_tags && quick.bound.tag == BoundTag::exact;
    short_err = std::max(short_err, std::abs(quick.bound.value - want));
    EnvelopeOptions opt;
    opt.analytic_shortcut = false;
    generic_err = std::max(generic_err, std::abs(p_envelope(g, p, s, f, 50, 11, opt).bound.value - want) / want);
  }
  const bool ok = worst_oracle <= 0.01 && worst_l1 <= 0.01 && short_err == 0.0 && exact_tags && generic_err <= 1e-6;
  report(4, ok, "p-envelope against the grid oracle and the L_p short-circuit",
         "grid " + num(worst_oracle) + ", l_1 " + num(worst_l1) + ", short-circuit " + num(short_err) + ", generic " +
             num(generic_err));
}

void galb() {
  const Timer timer;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    Rng rng(sub_seed(505, static_cast<std::uint64_t>(t)));
    std::vector<double> a(1 + rng.index(4));
    for (auto& x : a) x = rng.uniform(0.1, 2.0);
    const std::size_t d = a.size() + rng.index(2);
    double sum = 0.0, root = 0.0;
    for (double x : a) {
      sum += x;
      root += std::sqrt(x);
    }
    const auto seed = static_cast<std::uint64_t>(t);
    const double l1 = galb_gauge_estimate(QuasiNormedSpace::lq(d, 1.0), a, 10000, seed, false).bound.value;
    const double lh = galb_gauge_estimate(QuasiNormedSpace::lq(d, 0.5), a, 10000, seed, false).bound.value;
    worst = std::max({worst, std::abs(l1 - sum) / sum, std::abs(lh - root * root) / (root * root)});
  }
  report(5, worst <= 1e-6, "galb anchors for l_1 and l_1/2 targets at budget 1e4",
         "worst relative error " + num(worst) + ", " + num(timer.seconds()) + " s");
}

void tensor() {
  std::string detail;
  report(6, suite_passes("tensor-oracle", detail), "tensor-norm estimate against the L_1(mu,X) norm", detail);
}

void amenability() {
  std::string detail;
  report(7, suite_passes("amenability", detail), "representation independence on 1000 equal-J pairs", detail);
}

void mii() {
  std::vector<std::pair<std::size_t, std::size_t>> dims{{1, 1},  {2, 2},  {4, 4},  {8, 8},   {16, 16},
                                                        {32, 32}, {3, 17}, {17, 3}, {8, 32}, {32, 8}};
  const auto classical = mii_sweep(Gauge::lp(2.0), Gauge::lp(1.0), dims, 100, 808);
  double swapped = HUGE_VAL;
  for (std::size_t n : {4u, 16u}) {
    const auto s = MeasureSpace::counting(n);
    const auto r = mii_check(Gauge::lp(1.0), s, Gauge::lp(2.0), s, Matrix::identity(n));
    swapped = std::min(swapped, r.ratio / (std::sqrt(static_cast<double>(n)) / 2.0));
  }
  const Gauge weak = Gauge::weak_l1(), loglog = Gauge::orlicz(OrliczFunction::loglog());
  const auto small = mii_sweep(weak, loglog, {{8, 8}}, 200, 809);
  const auto large = mii_sweep(weak, loglog, {{32, 32}}, 200, 809);
  const bool ok = classical.max_ratio <= 1.0 + 1e-9 && swapped >= 1.0 && large.max_ratio <= 2.0 * small.max_ratio;
  report(8, ok, "Minkowski integral inequality directions",
         "L_2/L_1 max " + num(classical.max_ratio) + ", swapped identity ratio / (sqrt(n)/2) min " + num(swapped) +
             ", weak/loglog 32x32 " + num(large.max_ratio) + " vs 8x8 " + num(small.max_ratio));
}

void leveling() {
  const auto space = MeasureSpace::uniform(8);
  const double half = leveling_constant_probe(Gauge::lp(0.5), space, 300, 909).value;
  const double one = leveling_constant_probe(Gauge::lp(1.0), space, 300, 909).value;
  const double two = leveling_constant_probe(Gauge::lp(2.0), space, 300, 909).value;
  report(9, half >= 8.0 - 1e-6 && one <= 1.0 + 1e-9 && two <= 1.0 + 1e-9, "leveling blow-up and contraction",
         "L_1/2 " + num(half) + ", L_1 " + num(one) + ", L_2 " + num(two));
}

void ftc() {
  const Timer timer;
  std::string detail;
  const bool ok = suite_passes("ftc", detail);
  const double t = timer.seconds();
  report(10, ok && t < 60.0, "differentiation, weak (1,1) point mass and series domination",
         detail + ", " + num(t) + " s");
}

}  // namespace

int main() {
  rolewicz();
  orlicz();
  aoki();
  envelope();
  galb();
  tensor();
  amenability();
  mii();
  leveling();
  ftc();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
