#include <gtest/gtest.h>

#include <cmath>

#include "qlab/integration.hpp"
#include "qlab/rng.hpp"

using namespace qlab;

TEST(SimpleIntegral, Examples) {
  const MeasureSpace s({0.5, 1.0, 2.0});
  const SimpleFunction f{{{{0, 1}, {1.0, 2.0}}, {{2}, {-1.0, 0.0}}}};
  EXPECT_EQ(integrate_simple(f, s, 2), (std::vector<double>{-0.5, 3.0}));
  EXPECT_EQ(integrate_simple(SimpleFunction{}, s, 2), (std::vector<double>{0.0, 0.0}));
  const SimpleFunction one{{{{0, 1, 2}, {4.0}}}};
  EXPECT_EQ(integrate_simple(one, s, 1), std::vector<double>{14.0});
}

TEST(SimpleIntegral, Errors) {
  const auto s = MeasureSpace::counting(3);
  EXPECT_THROW(integrate_simple(SimpleFunction{{{{0, 1}, {1.0}}, {{1}, {1.0}}}}, s, 1), InputError);
  EXPECT_THROW(integrate_simple(SimpleFunction{{{{3}, {1.0}}}}, s, 1), InputError);
  EXPECT_THROW(integrate_simple(SimpleFunction{{{{0}, {1.0, 2.0}}}}, s, 1), DimensionError);
}

TEST(SimpleIntegral, LinearInTheValues) {
  Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.index(6);
    std::vector<double> w(n);
    for (auto& v : w) v = rng.uniform(0.1, 2.0);
    const MeasureSpace s(w);
    SimpleFunction a, b, sum;
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> x{rng.normal(), rng.normal()}, y{rng.normal(), rng.normal()};
      a.pieces.push_back({{i}, x});
      b.pieces.push_back({{i}, y});
      sum.pieces.push_back({{i}, {x[0] + 3 * y[0], x[1] + 3 * y[1]}});
    }
    const auto ia = integrate_simple(a, s, 2), ib = integrate_simple(b, s, 2), is = integrate_simple(sum, s, 2);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(is[k], ia[k] + 3 * ib[k], 1e-12 * (1 + std::abs(is[k])));
  }
}

TEST(SimpleIntegral, AgreesWithTheTensorIntegral) {
  const MeasureSpace s({0.5, 1.0, 2.0, 0.25});
  const SimpleFunction f{{{{0, 3}, {1.0, 2.0}}, {{2}, {-1.0, 0.5}}}};
  const auto rep = to_tensor_rep(f, s, QuasiNormedSpace::lq(2, 0.5), Gauge::lp(0.5));
  ASSERT_EQ(rep.terms.size(), 2u);
  EXPECT_EQ(rep.terms[0].f.values, (std::vector<double>{1.0, 0.0, 0.0, 1.0}));
  const auto a = integrate_simple(f, s, 2), b = i_map(rep, s);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(a[k], b[k], 1e-15);
}

TEST(Series, GeometricCertificate) {
  // x_j = e_1, f_j = 2^-j on one unit atom, j = 1..10, lambda = l_{1/2}
  const auto s = MeasureSpace::counting(1);
  TensorRep rep{QuasiNormedSpace::lq(2, 1.0), Gauge::lp(0.5), {}};
  double value = 0.0, root = 0.0;
  for (int j = 1; j <= 10; ++j) {
    const double c = std::pow(2.0, -j);
    rep.terms.push_back({{1.0, 0.0}, ScalarField{c}});
    value += c;
    root += std::sqrt(c);
  }
  const auto r = integrate_series(rep, s, 5.0);
  EXPECT_NEAR(r.value[0], value, 1e-15);
  EXPECT_EQ(r.value[1], 0.0);
  EXPECT_NEAR(r.gauge_of_profile.value, root * root, 1e-12);
  EXPECT_EQ(r.gauge_of_profile.tag, BoundTag::exact);
  EXPECT_TRUE(r.over_cap);
  EXPECT_FALSE(integrate_series(rep, s, 6.0).over_cap);
  EXPECT_FALSE(integrate_series(rep, s).over_cap);
}

TEST(Series, CancellingTermsHaveZeroIntegralAndPositiveCost) {
  const auto s = MeasureSpace({0.3, 0.9});
  const TensorRep rep{QuasiNormedSpace::lq(1, 1.0), Gauge::lp(1.0),
                      {{{1.0}, ScalarField{2.0, 1.0}}, {{-1.0}, ScalarField{2.0, 1.0}}}};
  const auto r = integrate_series(rep, s);
  EXPECT_EQ(r.value, std::vector<double>{0.0});
  EXPECT_NEAR(r.gauge_of_profile.value, 3.0, 1e-12);
}

TEST(Independence, EqualPointwiseMeansEqualIntegrals) {
  const auto s = MeasureSpace({0.5, 1.5});
  const auto X = QuasiNormedSpace::lq(2, 0.5);
  const TensorRep a{X, Gauge::lp(0.5), {{{1.0, 1.0}, ScalarField{1.0, 2.0}}}};
  const TensorRep b{X,
                    Gauge::lp(0.5),
                    {{{1.0, 0.0}, ScalarField{1.0, 2.0}},
                     {{0.0, 1.0}, ScalarField{1.0, 2.0}},
                     {{5.0, -3.0}, ScalarField{0.0, 0.0}}}};
  const auto r = representation_independence_check(a, b, s, 1e-12);
  EXPECT_TRUE(r.premise_holds);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.j_discrepancy, 0.0);
  EXPECT_EQ(r.i_discrepancy, 0.0);
}

TEST(Independence, DifferentFunctionsDoNotTriggerThePremise) {
  const auto s = MeasureSpace::counting(2);
  const auto X = QuasiNormedSpace::lq(1, 1.0);
  const TensorRep a{X, Gauge::lp(1.0), {{{1.0}, ScalarField{1.0, 0.0}}}};
  const TensorRep b{X, Gauge::lp(1.0), {{{1.0}, ScalarField{0.0, 1.0}}}};
  const auto r = representation_independence_check(a, b, s, 1e-9);
  EXPECT_FALSE(r.premise_holds);
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.j_discrepancy, 1.0);
  EXPECT_EQ(r.i_discrepancy, 0.0);
  const TensorRep c{QuasiNormedSpace::lq(2, 1.0), Gauge::lp(1.0), {}};
  EXPECT_THROW(representation_independence_check(a, c, s, 1e-9), DimensionError);
}

TEST(Rolewicz, Examples) {
  const auto r = rolewicz_counterexample(0.5, 4);
  EXPECT_NEAR(r.sup_part_norm, 0.25, 1e-15);
  EXPECT_NEAR(r.riemann_sum_norm, 1.0, 1e-15);
  EXPECT_NEAR(r.blowup_ratio, 4.0, 1e-12);
  const auto big = rolewicz_counterexample(0.5, 1024);
  EXPECT_NEAR(big.blowup_ratio, 1024.0, 1e-9);
  EXPECT_NEAR(big.sup_part_norm, 1.0 / 1024.0, 1e-15);
  for (std::size_t n : {1u, 7u, 64u}) {
    const auto one = rolewicz_counterexample(1.0, n);
    EXPECT_NEAR(one.blowup_ratio, 1.0, 1e-12);
    EXPECT_NEAR(one.sup_part_norm, 1.0, 1e-12);
  }
  EXPECT_THROW(rolewicz_counterexample(1.5, 4), InputError);
  EXPECT_THROW(rolewicz_counterexample(0.5, 0), InputError);
}

TEST(Rolewicz, MatchesClosedFormAndGrows) {
  for (double p : {0.25, 0.5, 0.75}) {
    double prev = 0.0;
    for (std::size_t n = 1; n <= 4096; n *= 2) {
      const auto r = rolewicz_counterexample(p, n);
      const double want = std::pow(static_cast<double>(n), 1.0 / p - 1.0);
      EXPECT_NEAR(r.blowup_ratio, want, 1e-9 * want);
      EXPECT_GE(r.blowup_ratio, prev);
      prev = r.blowup_ratio;
    }
  }
}
