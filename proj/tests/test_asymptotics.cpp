#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rwpoly/asymptotics.hpp"
#include "rwpoly/families.hpp"

using namespace rwpoly;
namespace fam = rwpoly::families;

TEST(Predictions, WeightsDAndE) {
  const auto d = prediction_Cw(edge_exponents(fam::weight_D<quad>()));
  EXPECT_EQ(d.value, 0);
  EXPECT_EQ(d.rule, "alpha<beta");
  const auto ex = edge_exponents(fam::weight_E<quad>());
  // Normalizing constant of (1-x^2)^{1/2}(2+x) is pi.
  EXPECT_NEAR(static_cast<double>(ex.w_at_eta), 3 / M_PI, 1e-15);
  EXPECT_NEAR(static_cast<double>(ex.w_at_minus_eta), 1 / M_PI, 1e-15);
  EXPECT_NEAR(static_cast<double>(prediction_Cw(ex).value), 1.0 / 3, 1e-25);
  const auto rw = prediction_rhow(ex);
  EXPECT_TRUE(rw.regularity_required);
  EXPECT_NEAR(static_cast<double>(rw.value), 1.0 / 3, 1e-25);
}

TEST(Predictions, SymmetricWeightGivesOneAndPeriodicChain) {
  const auto p = prediction_rhow(edge_exponents(fam::weight_semicircle<quad>()));
  EXPECT_NEAR(static_cast<double>(p.value), 1.0, 1e-25);
  const auto rec = chain_from_recurrence(stieltjes_recurrence(discretize_weight(fam::weight_semicircle<quad>(), 2000), 50));
  ASSERT_TRUE(rec.ok());
  EXPECT_TRUE(is_periodic(*rec.chain));
}

TEST(Predictions, AlphaAboveBetaIsSpecInconsistent) {
  EdgeExponents<double> ex{1.5, 0.5, 1.0, 1.0};
  try {
    prediction_Cw(ex);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::spec_inconsistent);
  }
  EXPECT_THROW(prediction_rhow(EdgeExponents<double>{0.5, 0.5, 0.0, 1.0}), Error);
}

TEST(Predictions, EpsilonWindow) {
  const auto e = prediction_thmC(discretize_weight(fam::weight_E<quad>(), 4000), quad(1));
  ASSERT_TRUE(e.limit.has_value());
  EXPECT_NEAR(static_cast<double>(e.ratio.back()), 1.0 / 3, 1e-3);
  EXPECT_NEAR(static_cast<double>(e.limit->value), 1.0 / 3, 1e-3);
  const auto d = prediction_thmC(discretize_weight(fam::weight_D<quad>(), 4000), quad(1));
  for (std::size_t k = 1; k < d.ratio.size(); ++k) EXPECT_LT(d.ratio[k], d.ratio[k - 1]);
  EXPECT_LT(static_cast<double>(d.ratio.back()), 1e-6);
}

TEST(RhoZeroCriterion, Examples) {
  const auto b = lemma_rho0_criterion(fam::lazy_arcsine<quad>(), quad(1), 2000);
  EXPECT_EQ(b.rho0_sum.verdict, Verdict::diverges);
  const auto a = lemma_rho0_criterion(fam::arcsine<quad>(), quad(1), 2000);
  EXPECT_EQ(a.rho0_sum.verdict, Verdict::converges);
  for (const auto& s : a.rho0_sum.partial_sums) EXPECT_EQ(s, 0);
  // Transient walk: L~ at the true edge converges (Q_j(eta) ~ j (q/p)^{j/2}).
  const auto c = lemma_rho0_criterion(fam::asymmetric<quad>(), 2 * sqrt(quad(21) / 100), 2000);
  EXPECT_EQ(c.L_tilde.verdict, Verdict::converges);
  EXPECT_THROW(lemma_rho0_criterion(fam::killed_transient<quad>(), quad(1), 100), Error);
}

TEST(Blumenthal, Examples) {
  const auto c = blumenthal_edges(fam::asymmetric<quad>());
  ASSERT_TRUE(c.applicable) << c.reason;
  EXPECT_NEAR(static_cast<double>(c.eta), 0.9165151389911680, 1e-15);
  EXPECT_NEAR(static_cast<double>(c.zeta), -0.9165151389911680, 1e-15);
  const auto b = blumenthal_edges(fam::lazy_arcsine<quad>());
  EXPECT_FALSE(b.applicable);
  EXPECT_NE(b.reason.find("r_n does not tend to 0"), std::string::npos);
  const auto s = blumenthal_edges(fam::semicircle<quad>());
  ASSERT_TRUE(s.applicable) << s.reason;
  EXPECT_NEAR(static_cast<double>(s.eta), 1.0, 1e-15);
}

TEST(Regularity, Examples) {
  const auto a = regularity_check(fam::arcsine<quad>(), quad(1), 2000);
  // gamma_n = 2^{n-1} sqrt(2)
  EXPECT_NEAR(static_cast<double>(a.root_sequence[9]), std::pow(std::pow(2.0, 9) * std::sqrt(2.0), 0.1), 1e-15);
  EXPECT_NEAR(static_cast<double>(a.limit.value), 2.0, 1e-6);
  const auto s = regularity_check(fam::semicircle<quad>(), quad(1), 2000);
  EXPECT_NEAR(static_cast<double>(s.limit.value), 2.0, 1e-6);
  const quad eta = 2 * sqrt(quad(21) / 100);
  const auto c = regularity_check(fam::asymmetric<quad>(), eta, 2000);
  EXPECT_NEAR(static_cast<double>(c.gap_two_over_eta), 0.0, 1e-6);
  EXPECT_GT(static_cast<double>(c.gap_two_eta), 0.3);
}

TEST(DankaTotik, SemicircleOracle) {
  const auto ex = edge_exponents(fam::weight_semicircle<quad>());
  const auto dt = danka_totik_check(fam::semicircle<quad>(), ex, quad(1), 1000);
  for (std::size_t n = 1; n <= 1000; n += 37) {
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(static_cast<double>(dt.top[n - 1]), 6 / ((1 + 1 / nn) * (2 + 1 / nn)), 1e-13);
  }
  EXPECT_NEAR(static_cast<double>(dt.top_limit.value), 3.0, 1e-6);
  EXPECT_NEAR(static_cast<double>(dt.bottom_limit.value), 3.0, 1e-6);
  // (2)^{-3/2} (2/pi) Gamma(3/2) Gamma(5/2) = 3 / 2^{7/2}
  EXPECT_NEAR(static_cast<double>(dt.paper_constant_top), 3 / std::pow(2.0, 3.5), 1e-15);
  EXPECT_NEAR(static_cast<double>(dt.calibration_factor), std::pow(2.0, 3.5), 1e-12);
  std::ostringstream os;
  write_csv(os, dt);
  EXPECT_EQ(os.str().substr(0, 38), "n,scaled_rho_eta,scaled_rho_minus_eta\n");
}

TEST(ConditionA, Examples) {
  EXPECT_TRUE(condition_a(fam::asymmetric<quad>(), 2000).holds);
  EXPECT_TRUE(condition_a(fam::semicircle<quad>(), 2000).holds);
  const auto r2 = condition_a(fam::square_holding<quad>(), 20000);
  EXPECT_TRUE(r2.holds);
  EXPECT_GT(r2.partial_sums.back(), 0);
  std::vector<quad> p(1000), q(1000), r(1000, quad(0));
  for (std::size_t j = 0; j < 1000; ++j) {
    p[j] = j == 0 ? quad(1) : (j % 2 ? quad(0.6) : quad(0.4));
    q[j] = j == 0 ? quad(0) : 1 - p[j];
  }
  const ChainSpec<quad> alternating("alt", p, q, r, {}, std::nullopt);
  EXPECT_FALSE(condition_a(alternating).holds);
}

TEST(MainVerdict, BranchOne) {
  const auto rep = theorem_main_verdict<quad>(fam::arcsine<quad>(), std::nullopt);
  EXPECT_EQ(rep.branch, Branch::i);
  EXPECT_EQ(rep.verdict, ConjectureVerdict::consistent);
  for (const auto& c : rep.Cn) EXPECT_NEAR(static_cast<double>(c), 1.0, 1e-10);
  for (const auto& r : rep.rho_ratio) EXPECT_NEAR(static_cast<double>(r), 1.0, 1e-10);
  std::ostringstream os;
  write_report(os, rep);
  EXPECT_NE(os.str().find("branch = i\n"), std::string::npos);
  EXPECT_NE(os.str().find("verdict = consistent\n"), std::string::npos);
}

TEST(MainVerdict, BranchTwo) {
  const auto rep = theorem_main_verdict<quad>(fam::lazy_arcsine<quad>(), std::nullopt);
  EXPECT_EQ(rep.branch, Branch::ii);
  EXPECT_EQ(rep.r_sum->verdict, Verdict::diverges);
  EXPECT_LE(static_cast<double>(rep.lim_Cn.value), 1e-6);
  EXPECT_LE(static_cast<double>(rep.lim_rho_ratio.value), 1e-6);
  EXPECT_EQ(rep.verdict, ConjectureVerdict::consistent);
  std::ostringstream os;
  write_sequences_csv(os, rep);
  EXPECT_EQ(os.str().substr(0, 20), "n,C_n,rho_ratio_n\n0,");
}

TEST(MainVerdict, KilledChainUsesTheAbsorptionCondition) {
  const auto rep = theorem_main_verdict<quad>(fam::killed_transient<quad>(), std::nullopt);
  ASSERT_TRUE(rep.killing_sum.has_value());
  EXPECT_EQ(rep.killing_sum->verdict, Verdict::converges);
  EXPECT_EQ(rep.branch, Branch::ii);
  EXPECT_TRUE(rep.zeta_gap);
  EXPECT_LE(static_cast<double>(rep.lim_rho_ratio.value), 1e-6);
  EXPECT_EQ(rep.verdict, ConjectureVerdict::consistent);
}

TEST(MainVerdict, AperiodicWithoutWeightIsNotClassified) {
  // R4: r_j summable and transient, so neither sum diverges.
  ConjectureOptions<quad> opt;
  opt.condition_a_terms = 2000;
  const auto rep = theorem_main_verdict<quad>(fam::geometric_holding<quad>(), std::nullopt, opt);
  EXPECT_NE(rep.branch, Branch::i);
  EXPECT_TRUE(rep.supC_holds);
}
