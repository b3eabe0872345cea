#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rwpoly/extrapolation.hpp"

using namespace rwpoly;

TEST(EstimateLimit, ConstantSequence) {
  const auto e = estimate_limit(std::vector<double>(40, 1.0));
  EXPECT_EQ(e.kind, LimitKind::finite);
  EXPECT_EQ(e.value, 1.0);
  EXPECT_EQ(e.uncertainty, 0.0);
}

TEST(EstimateLimit, GeometricApproach) {
  std::vector<quad> s;
  for (int n = 0; n < 60; ++n) s.push_back(quad(1) / 3 + pow(quad(2), -n));
  const auto e = estimate_limit(s);
  EXPECT_EQ(e.method, LimitMethod::aitken);
  EXPECT_NEAR(static_cast<double>(e.value), 1.0 / 3, 1e-6);
}

TEST(EstimateLimit, Alternating) {
  std::vector<double> s;
  for (int n = 0; n < 40; ++n) s.push_back(n % 2 ? -1.0 : 1.0);
  EXPECT_EQ(estimate_limit(s).kind, LimitKind::oscillating);
}

TEST(EstimateLimit, AlgebraicApproach) {
  std::vector<quad> s;
  for (int n = 1; n <= 2000; ++n) s.push_back(2 + quad(3) / n + quad(1) / (quad(n) * n));
  const auto e = estimate_limit(s, 1);
  EXPECT_EQ(e.method, LimitMethod::levin);
  EXPECT_NEAR(static_cast<double>(e.value), 2.0, 1e-6);
  EXPECT_LE(static_cast<double>(abs(e.value - 2)), static_cast<double>(e.uncertainty) + 1e-12);
}

TEST(EstimateLimit, HarmonicSumsDiverge) {
  std::vector<double> s;
  double acc = 0;
  for (int n = 1; n <= 1000; ++n) s.push_back(acc += 1.0 / n);
  const auto e = estimate_limit(s, 1);
  EXPECT_EQ(e.kind, LimitKind::divergent);
  EXPECT_FALSE(e.is_finite());
}

TEST(EstimateLimit, TooShort) { EXPECT_THROW(estimate_limit(std::vector<double>(10, 1.0)), Error); }

TEST(ClassifySeries, Verdicts) {
  std::vector<quad> geometric, harmonic, square, zero_tail;
  for (int j = 0; j < 2000; ++j) {
    geometric.push_back(pow(quad(2), -j));
    harmonic.push_back(quad(1) / (j + 1));
    square.push_back(quad(1) / ((j + quad(1)) * (j + 1)));
    zero_tail.push_back(j < 5 ? quad(1) : quad(0));
  }
  const auto g = classify_series(geometric);
  EXPECT_EQ(g.verdict, Verdict::converges);
  EXPECT_NEAR(static_cast<double>(*g.extrapolated), 2.0, 1e-12);
  EXPECT_EQ(classify_series(harmonic).verdict, Verdict::diverges);
  const auto sq = classify_series(square);
  EXPECT_EQ(sq.verdict, Verdict::converges);
  EXPECT_NEAR(static_cast<double>(*sq.extrapolated), M_PI * M_PI / 6, 1e-6);
  const auto z = classify_series(zero_tail);
  EXPECT_EQ(z.verdict, Verdict::converges);
  EXPECT_EQ(*z.extrapolated, quad(5));
  for (std::size_t k = 1; k < sq.partial_sums.size(); ++k) ASSERT_GE(sq.partial_sums[k], sq.partial_sums[k - 1]);
}

TEST(ClassifySeries, BoundExceeded) {
  std::vector<double> big(100, 1e7);
  EXPECT_EQ(classify_series(big).verdict, Verdict::diverges);
  EXPECT_THROW(classify_series(std::vector<double>{1.0, -1.0}), Error);
}
