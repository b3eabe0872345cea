#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rwpoly/families.hpp"
#include "rwpoly/monte_carlo.hpp"
#include "rwpoly/spectral_measure.hpp"

using namespace rwpoly;
namespace fam = rwpoly::families;

TEST(Quadrature, ArcsineTwoPoint) {
  const auto m = quadrature_from_chain(fam::arcsine<double>(), 2);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m.nodes[0], -1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(m.nodes[1], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(m.weights[0], 0.5, 1e-15);
  EXPECT_NEAR(m.weights[1], 0.5, 1e-15);
  EXPECT_NEAR(moment(m, 1), 0.0, 1e-16);
  EXPECT_NEAR(moment(m, 2), 0.5, 1e-15);
}

TEST(Quadrature, MassAndSupport) {
  for (const auto& c : {fam::arcsine<quad>(), fam::lazy_arcsine<quad>(), fam::asymmetric<quad>(), fam::semicircle<quad>()}) {
    const auto m = quadrature_from_chain(c, 100);
    EXPECT_NEAR(static_cast<double>(m.total_mass), 1.0, 1e-13);
    for (std::size_t k = 1; k < m.size(); ++k) EXPECT_LT(m.nodes[k - 1], m.nodes[k]);
    for (const auto& w : m.weights) EXPECT_GT(w, 0);
  }
  const auto b = quadrature_from_chain(fam::lazy_arcsine<quad>(), 100);
  EXPECT_GE(b.nodes.front(), quad(-1e-8));
  EXPECT_LE(b.nodes.back(), quad(1) + quad(1e-8));
}

TEST(Quadrature, GaussExactness) {
  // moments of the N-point rule equal P_00(n) for n <= 2N - 1.
  for (const auto& c : {fam::lazy_arcsine<quad>(), fam::asymmetric<quad>(), fam::semicircle<quad>()}) {
    const std::size_t N = 30;
    const auto m = quadrature_from_chain(c, N);
    const auto rows = matrix_power_rows(c, 0, 0, 2 * N - 1);
    for (std::size_t n = 0; n <= 2 * N - 1; ++n) {
      EXPECT_NEAR(static_cast<double>(moment(m, n)), static_cast<double>(rows[n][0]), 1e-10) << c.label() << " " << n;
    }
  }
}

TEST(Cn, SymmetricAndOneSided) {
  const auto a = quadrature_from_chain(fam::arcsine<quad>(), 60);
  const auto seq = Cn_sequence(a, 119);
  for (std::size_t n = 0; n <= 119; ++n) {
    EXPECT_NEAR(static_cast<double>(seq[n]), 1.0, 1e-10);
    EXPECT_NEAR(static_cast<double>(compute_Cn(a, n).value), 1.0, 1e-10);
  }
  const auto b = quadrature_from_chain(fam::lazy_arcsine<quad>(), 60);
  for (std::size_t n = 0; n < 50; ++n) EXPECT_EQ(compute_Cn(b, n).value, quad(0));
}

TEST(Cn, SequenceMatchesDirectEvaluation) {
  const auto m = quadrature_from_chain(fam::killed_transient<quad>(), 200);
  const auto seq = Cn_sequence(m, 399);
  for (std::size_t n : {0ul, 1ul, 7ul, 100ul, 399ul}) {
    EXPECT_NEAR(static_cast<double>(seq[n] / compute_Cn(m, n).value), 1.0, 1e-25);
  }
}

TEST(LFunctional, Examples) {
  const auto b = fam::lazy_arcsine<quad>();
  const auto m = quadrature_from_chain(b, 400);
  std::function<quad(const quad&)> one = [](const quad&) { return quad(1); };
  EXPECT_NEAR(static_cast<double>(L_functional(m, one, 17)), 1.0, 1e-25);
  const auto q0q1 = q_combination(b, {quad(0), quad(1)});
  // Laplace principle: mass of x^n psi concentrates at eta = 1 where Q_1 = 1;
  // the deviation decays like 1/n.
  const double l500 = static_cast<double>(L_functional(m, q0q1, 500));
  EXPECT_NEAR(l500, 1.0, 0.01);
  const double l250 = static_cast<double>(L_functional(m, q0q1, 250));
  EXPECT_LT(std::abs(l500 - 1), std::abs(l250 - 1));
  const auto a = quadrature_from_chain(fam::arcsine<quad>(), 50);
  try {
    L_functional(a, one, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_denominator);
  }
}

TEST(Transitions, SpectralMatchesMatrix) {
  for (const auto& c : {fam::arcsine<quad>(), fam::lazy_arcsine<quad>(), fam::asymmetric<quad>(), fam::semicircle<quad>()}) {
    const auto m = quadrature_from_chain(c, 400);
    const auto grid = transition_grid(c, m, 10, 10, 100);
    double worst = 0;
    for (const auto& q : grid) worst = std::max(worst, static_cast<double>(abs(q.value_spectral - q.value_matrix)));
    EXPECT_LE(worst, 1e-8) << c.label();
  }
}

TEST(Transitions, RowSumsAndParity) {
  const auto a = fam::arcsine<quad>();
  const auto rows = matrix_power_rows(a, 3, 40, 30);
  for (std::size_t n = 0; n <= 30; ++n) {
    quad s = 0;
    for (std::size_t j = 0; j <= 40; ++j) {
      s += rows[n][j];
      if ((n + 3 + j) % 2 == 1) {
        EXPECT_EQ(rows[n][j], quad(0));
      }
    }
    EXPECT_NEAR(static_cast<double>(s), 1.0, 1e-12);
  }
  const auto t = transition_probability(a, 0, 0, 2, 10);
  EXPECT_NEAR(static_cast<double>(t.value_spectral), 0.5, 1e-25);
  EXPECT_NEAR(static_cast<double>(t.value_matrix), 0.5, 1e-25);
  const auto b1 = transition_probability(fam::lazy_arcsine<quad>(), 0, 0, 1, 10);
  EXPECT_NEAR(static_cast<double>(b1.value_matrix), 0.5, 1e-30);
  EXPECT_NEAR(static_cast<double>(b1.value_spectral), 0.5, 1e-25);
  EXPECT_THROW(transition_probability(a, 0, 0, 40, 10), Error);
}

TEST(MonteCarlo, DeterministicAndCalibrated) {
  const auto b = fam::lazy_arcsine<quad>();
  const auto e1 = monte_carlo_transition(b, 0, 0, 1, 100000, 7);
  const auto e2 = monte_carlo_transition(b, 0, 0, 1, 100000, 7, 3);
  EXPECT_EQ(e1.estimate, e2.estimate);
  EXPECT_LE(std::abs(e1.estimate - 0.5), 4 * e1.std_error);
  const auto a = monte_carlo_transition(fam::arcsine<quad>(), 0, 0, 2, 100000, 11);
  EXPECT_LE(std::abs(a.estimate - 0.5), 4 * a.std_error);
}

TEST(Srlp, PredictedLimits) {
  const auto b = fam::lazy_arcsine<quad>();
  EXPECT_NEAR(static_cast<double>(srlp_predicted_limit(b, 0, 0, 0, 0, quad(1), 10).predicted), 1.0, 1e-30);
  const auto s = srlp_predicted_limit(b, 0, 1, 0, 0, quad(1), 200);
  EXPECT_NEAR(static_cast<double>(s.predicted), 2.0, 1e-30);
  EXPECT_NEAR(static_cast<double>(s.empirical[200]), 2.0, 0.02);
  const auto s2 = srlp_predicted_limit(b, 1, 1, 0, 0, quad(1), 200);
  EXPECT_NEAR(static_cast<double>(s2.predicted), 2.0, 1e-30);
  EXPECT_NEAR(static_cast<double>(s2.empirical[200]), 2.0, 0.02);
}

TEST(Csv, MeasureAndGrid) {
  std::ostringstream os;
  write_csv(os, quadrature_from_chain(fam::arcsine<double>(), 2));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "node,weight");
  std::getline(in, line);
  const double node = std::stod(line.substr(0, line.find(',')));
  EXPECT_NEAR(node, -1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(line.substr(0, line.find(',')), format_real(node));
}
