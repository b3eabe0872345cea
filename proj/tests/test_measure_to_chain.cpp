#include <gtest/gtest.h>

#include <cmath>

#include "rwpoly/families.hpp"
#include "rwpoly/measure_to_chain.hpp"

using namespace rwpoly;
namespace fam = rwpoly::families;

namespace {

// Jacobi weight (1-x)^a (1+x)^b: closed-form orthonormal recurrence.
double jacobi_b(int k, double a, double b) {
  const double s = 2 * k + a + b;
  if (k == 0) return (b - a) / (a + b + 2);
  return (b * b - a * a) / (s * (s + 2));
}

double jacobi_a(int k, double a, double b) {  // couples k-1 and k, k >= 1
  const double s = 2 * k + a + b;
  return std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1)));
}

}  // namespace

TEST(WeightSpec, RejectsNegativeExponents) {
  EXPECT_THROW(WeightSpec<double>("x", 1.0, -0.5, -0.5, Expression::parse("1", 'x')), Error);
  EXPECT_THROW(WeightSpec<double>("x", 1.0, 0.5, 0.5, Expression::parse("x", 'x')), Error);
}

TEST(Discretize, Moments) {
  const auto sc = discretize_weight(fam::weight_semicircle<quad>(), 2000);
  EXPECT_NEAR(static_cast<double>(sc.total_mass), 1.0, 1e-30);
  EXPECT_NEAR(static_cast<double>(moment(sc, 2)), 0.25, 1e-28);
  const auto d = discretize_weight(fam::weight_D<quad>(), 2000);
  EXPECT_NEAR(static_cast<double>(moment(d, 1)), 0.25, 1e-28);
  for (std::size_t k = 1; k < d.size(); ++k) ASSERT_LT(d.nodes[k - 1], d.nodes[k]);
}

TEST(Discretize, RefinementOracle) {
  // Doubling the grid leaves the first 50 moments unchanged.
  for (const auto& spec : {fam::weight_D<quad>(), fam::weight_E<quad>(),
                           WeightSpec<quad>("frac", quad(1), quad(0.3), quad(1.7), Expression::parse("1+x^2", 'x'))}) {
    const auto m1 = discretize_weight(spec, 2000);
    const auto m2 = discretize_weight(spec, 4000);
    for (std::size_t n = 0; n < 50; ++n) {
      EXPECT_NEAR(static_cast<double>(moment(m1, n) - moment(m2, n)), 0.0, 1e-20) << spec.label << " " << n;
    }
  }
}

TEST(Discretize, AtomsAreKept) {
  WeightSpec<quad> spec("atom", quad(1), quad(0.5), quad(0.5), Expression::parse("1", 'x'), {{quad(1), quad(0.25)}});
  const auto m = discretize_weight(spec, 1000);
  EXPECT_EQ(m.nodes.back(), quad(1));
  EXPECT_EQ(m.weights.back(), quad(0.25));
  EXPECT_NEAR(static_cast<double>(m.total_mass), 1.0, 1e-30);
}

TEST(Stieltjes, ArcsineFromChainQuadrature) {
  const auto m = quadrature_from_chain(fam::arcsine<quad>(), 100);
  const auto rc = stieltjes_recurrence(m, 10);
  EXPECT_NEAR(static_cast<double>(rc.a[0]), 1 / std::sqrt(2.0), 1e-12);
  for (std::size_t k = 1; k < rc.a.size(); ++k) EXPECT_NEAR(static_cast<double>(rc.a[k]), 0.5, 1e-12);
  for (const auto& b : rc.b) EXPECT_NEAR(static_cast<double>(b), 0.0, 1e-12);
}

TEST(Stieltjes, SemicircleAndJacobi) {
  const auto sc = stieltjes_recurrence(discretize_weight(fam::weight_semicircle<quad>(), 2000), 60);
  for (const auto& a : sc.a) EXPECT_NEAR(static_cast<double>(a), 0.5, 1e-12);
  for (const auto& b : sc.b) EXPECT_NEAR(static_cast<double>(b), 0.0, 1e-12);
  const auto d = stieltjes_recurrence(discretize_weight(fam::weight_D<quad>(), 4000), 200);
  for (int k = 0; k < 200; ++k) EXPECT_NEAR(static_cast<double>(d.b[k]), jacobi_b(k, 0.5, 1.5), 1e-12) << k;
  for (int k = 1; k < 200; ++k) EXPECT_NEAR(static_cast<double>(d.a[k - 1]), jacobi_a(k, 0.5, 1.5), 1e-12) << k;
}

TEST(ChainFromRecurrence, ArcsineAndSemicircle) {
  const auto a = chain_from_recurrence(recurrence_from_chain(fam::arcsine<quad>(), 20));
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.chain->at(0).p, quad(1));
  for (std::size_t j = 1; j < 20; ++j) {
    EXPECT_NEAR(static_cast<double>(a.chain->at(j).p), 0.5, 1e-30);
    EXPECT_NEAR(static_cast<double>(a.chain->at(j).q), 0.5, 1e-30);
  }
  const auto s = chain_from_recurrence(stieltjes_recurrence(discretize_weight(fam::weight_semicircle<quad>(), 2000), 40));
  ASSERT_TRUE(s.ok());
  for (int k = 0; k < 40; ++k) {
    EXPECT_NEAR(static_cast<double>(s.chain->at(k).p), (k + 2.0) / (2 * (k + 1.0)), 1e-12);
  }
}

TEST(ChainFromRecurrence, NegativeMeanFails) {
  RecurrenceCoefficients<double> rc{{0.4}, {-0.2, 0.0}};
  const auto r = chain_from_recurrence(rc);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failure->index, 0u);
  EXPECT_EQ(r.failure->reason, "r_0 < 0");
  EXPECT_FALSE(r.chain.has_value());
}

TEST(ChainFromRecurrence, RoundTripFamilies) {
  for (const auto& c : {fam::arcsine<quad>(), fam::lazy_arcsine<quad>(), fam::asymmetric<quad>(), fam::semicircle<quad>()}) {
    const auto rec = chain_from_recurrence(stieltjes_recurrence(quadrature_from_chain(c, 400), 30));
    ASSERT_TRUE(rec.ok());
    for (std::size_t j = 0; j < 30; ++j) {
      const auto s = c.at(j), t = rec.chain->at(j);
      EXPECT_NEAR(static_cast<double>(s.p), static_cast<double>(t.p), 1e-8);
      EXPECT_NEAR(static_cast<double>(s.q), static_cast<double>(t.q), 1e-8);
      EXPECT_NEAR(static_cast<double>(s.r), static_cast<double>(t.r), 1e-8);
    }
  }
}

TEST(ChainFromRecurrence, ScaleInvariance) {
  auto base = fam::weight_E<quad>();
  auto scaled = base;
  scaled.smooth = Expression::parse("7*(2+x)", 'x');
  const auto r1 = stieltjes_recurrence(discretize_weight(base, 2000), 50);
  const auto r2 = stieltjes_recurrence(discretize_weight(scaled, 2000), 50);
  for (std::size_t k = 0; k < 50; ++k) EXPECT_NEAR(static_cast<double>(r1.b[k] - r2.b[k]), 0.0, 1e-12);
  for (std::size_t k = 0; k < 49; ++k) EXPECT_NEAR(static_cast<double>(r1.a[k] - r2.a[k]), 0.0, 1e-12);
}

TEST(ChainFromRecurrence, WeightsDAndEAreRandomWalkMeasures) {
  const auto d = chain_from_recurrence(stieltjes_recurrence(discretize_weight(fam::weight_D<quad>(), 4000), 201));
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d.snapped, 0u);
  for (std::size_t k = 0; k <= 200; ++k) EXPECT_GT(d.chain->at(k).r, 0);
  const auto e = chain_from_recurrence(stieltjes_recurrence(discretize_weight(fam::weight_E<quad>(), 4000), 201));
  ASSERT_TRUE(e.ok());
  for (std::size_t k = 0; k <= 200; ++k) EXPECT_GE(e.chain->at(k).r, 0);
}
