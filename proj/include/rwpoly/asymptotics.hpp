/**
 * @file asymptotics.hpp
 * @brief Limit estimates for C_n(psi) and rho_n(-eta)/rho_n(eta), the
 * edge-behaviour predictions and the three-branch conjecture report.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rwpoly/chain.hpp"
#include "rwpoly/chain_model.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/extrapolation.hpp"
#include "rwpoly/measure_to_chain.hpp"
#include "rwpoly/normalization.hpp"
#include "rwpoly/numeric.hpp"
#include "rwpoly/polynomials.hpp"
#include "rwpoly/spectral_measure.hpp"
#include "rwpoly/support_edges.hpp"

namespace rwpoly {

// ---------------------------------------------------------------------------
// Edge exponents and the weight-based predictions

/// w(x) = Psi'(x) / ((eta - x)^alpha (eta + x)^beta) with Psi' the density
/// of the normalized measure.
template <class Real>
struct EdgeExponents {
  Real alpha = 0;
  Real beta = 0;
  Real w_at_eta = 0;        // w(eta-)
  Real w_at_minus_eta = 0;  // w(-eta+)
};

template <class Real>
EdgeExponents<Real> edge_exponents(const WeightSpec<Real>& spec, std::size_t M = 4000) {
  Real Z = 0;
  discretize_weight(spec, M, &Z);
  const Real scale = (1 - spec.atom_mass()) / Z;
  return {spec.alpha, spec.beta, spec.smooth_at(spec.eta) * scale, spec.smooth_at(-spec.eta) * scale};
}

template <class Real>
struct Prediction {
  Real value = 0;
  std::string rule;            // "alpha<beta" or "alpha=beta"
  bool alpha_positive = true;  // the 0 < alpha part of 0 < alpha <= beta
  bool regularity_required = false;
};

namespace detail {

template <class Real>
Prediction<Real> edge_prediction(const EdgeExponents<Real>& ex, const std::string& where) {
  using std::abs;
  if (!is_finite(ex.alpha) || !is_finite(ex.beta) || ex.alpha < 0 || ex.beta < 0) {
    throw Error(ErrorCode::invalid_argument, where + ": exponents must be finite and nonnegative");
  }
  if (!(ex.w_at_eta > 0) || !is_finite(ex.w_at_eta) || !is_finite(ex.w_at_minus_eta)) {
    throw Error(ErrorCode::invalid_argument, where + ": needs finite w(-eta+) and w(eta-) > 0");
  }
  if (ex.alpha > ex.beta) {
    throw Error(ErrorCode::spec_inconsistent,
                where + ": alpha > beta cannot occur under conditions (i)-(iii); nothing is predicted");
  }
  Prediction<Real> p;
  p.alpha_positive = ex.alpha > 0;
  if (ex.alpha < ex.beta) {
    p.value = 0;
    p.rule = "alpha<beta";
  } else {
    p.value = ex.w_at_minus_eta / ex.w_at_eta;
    p.rule = "alpha=beta";
  }
  return p;
}

}  // namespace detail

/// Predicted lim C_n: 0 if alpha < beta, w(-eta+)/w(eta-) if alpha = beta.
template <class Real>
Prediction<Real> prediction_Cw(const EdgeExponents<Real>& ex) {
  return detail::edge_prediction(ex, "prediction_Cw");
}

/// Predicted lim rho_n(-eta)/rho_n(eta); same case split, and the measure
/// must in addition be regular.
template <class Real>
Prediction<Real> prediction_rhow(const EdgeExponents<Real>& ex) {
  auto p = detail::edge_prediction(ex, "prediction_rhow");
  p.regularity_required = true;
  return p;
}

/// Ratios psi([-eta, -eta + e]) / psi([eta - e, eta]) for e = 2^-1 .. 2^-k_max.
template <class Real>
struct EpsilonWindow {
  std::vector<Real> eps;
  std::vector<Real> ratio;
  std::optional<LimitEstimate<Real>> limit;
};

template <class Real>
EpsilonWindow<Real> prediction_thmC(const DiscreteMeasure<Real>& m, const Real& eta, std::size_t k_max = 24) {
  EpsilonWindow<Real> out;
  Real e = 1;
  for (std::size_t k = 1; k <= k_max; ++k) {
    e /= 2;
    CompensatedSum<Real> lo, hi;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.nodes[i] <= -eta + e) lo.add(m.weights[i]);
      if (m.nodes[i] >= eta - e) hi.add(m.weights[i]);
    }
    if (!(hi.value() > 0)) break;
    out.eps.push_back(e);
    out.ratio.push_back(lo.value() / hi.value());
  }
  if (out.ratio.size() >= 16) out.limit = estimate_limit(out.ratio);
  return out;
}

// ---------------------------------------------------------------------------
// Chain-side criteria

/// sum_j (1/(p_j pi_j Q_j Q_{j+1}(eta))) sum_{k<=j} r_k pi_k Q_k(eta)^2 and
/// L~ = sum_j 1/(p_j pi_j Q_j(eta) Q_{j+1}(eta)).
template <class Real>
struct Rho0Criterion {
  DivergenceVerdict<Real> rho0_sum;
  DivergenceVerdict<Real> L_tilde;
};

template <class Real>
Rho0Criterion<Real> lemma_rho0_criterion(const ChainSpec<Real>& chain, const Real& eta, std::size_t n,
                                         const DivergenceOptions<Real>& opt = {}) {
  using std::exp;
  using std::log;
  if (chain.has_killing()) {
    throw Error(ErrorCode::chain_has_killing, "lemma_rho0_criterion needs an honest chain");
  }
  const auto t = chain.table(n + 1);
  const auto Q = detail::positive_q_at(chain, n + 1, eta);
  const auto lp = log_potentials<Real>(t);
  std::vector<Real> outer(n + 1), nested(n + 1);
  LogSum<Real> inner;
  for (std::size_t j = 0; j <= n; ++j) {
    if (t.r[j] > 0) inner.add_log(log(t.r[j]) + lp[j] + 2 * Q[j].log_magnitude);
    const Real l_outer = -(log(t.p[j]) + lp[j] + Q[j].log_magnitude + Q[j + 1].log_magnitude);
    outer[j] = exp(l_outer);
    nested[j] = inner.empty() ? Real(0) : exp(inner.log() + l_outer);
  }
  return {classify_series(nested, opt), classify_series(outer, opt)};
}

/// sum_{j>=1} |p_j q_{j+1} - p_{j-1} q_j|; holds when the extrapolated tail
/// is below 1e-6.
template <class Real>
struct ConditionA {
  std::vector<Real> partial_sums;
  LimitEstimate<Real> limit;
  Real tail_estimate = 0;
  bool holds = false;
};

template <class Real>
ConditionA<Real> condition_a(const ChainSpec<Real>& chain, std::size_t n = 100000) {
  using std::abs;
  const std::size_t n_eff = std::min<std::size_t>(n, chain.horizon() - 1);
  if (n_eff < 20) throw Error(ErrorCode::truncation_too_small, "condition_a needs at least 20 coefficients");
  const auto t = chain.table(n_eff + 1);
  ConditionA<Real> out;
  CompensatedSum<Real> acc;
  for (std::size_t j = 1; j < n_eff; ++j) {
    acc.add(abs(t.p[j] * t.q[j + 1] - t.p[j - 1] * t.q[j]));
    out.partial_sums.push_back(acc.value());
  }
  out.limit = estimate_limit(out.partial_sums, 1);
  if (out.limit.is_finite()) {
    out.tail_estimate = abs(out.limit.value - out.partial_sums.back()) + out.limit.uncertainty;
    out.holds = out.tail_estimate < Real(1) / Real(1000000);
  } else {
    out.tail_estimate = infinity<Real>();
  }
  return out;
}

/// If r_n -> 0, p_{n-1} q_n -> b and L~ < infinity, then eta = 2 sqrt(b)
/// and zeta = -2 sqrt(b).
template <class Real>
struct BlumenthalEdges {
  bool applicable = false;
  std::string reason;
  Real r_limit = 0;
  Real pq_limit = 0;
  Real eta = 0;
  Real zeta = 0;
};

template <class Real>
BlumenthalEdges<Real> blumenthal_edges(const ChainSpec<Real>& chain, std::size_t depth = 2000) {
  using std::abs;
  using std::sqrt;
  BlumenthalEdges<Real> out;
  const std::size_t last = chain.has_tail() ? std::size_t{1000000} : chain.horizon() - 1;
  if (last < 100) {
    out.reason = "too few coefficients to decide the limits";
    return out;
  }
  const std::size_t idx[3] = {last / 100, last / 10, last};
  Real r[3], pq[3];
  for (int k = 0; k < 3; ++k) {
    const auto a = chain.at(idx[k] - 1), b = chain.at(idx[k]);
    r[k] = b.r;
    pq[k] = a.p * b.q;
  }
  const Real tol = Real(1) / Real(1000000);
  const Real r_unc = abs(r[2] - r[1]), pq_unc = abs(pq[2] - pq[1]);
  out.r_limit = r[2];
  out.pq_limit = pq[2];
  if (r_unc > tol || pq_unc > tol) {
    out.reason = "limits of r_n and p_{n-1} q_n are not decidable from the coefficients";
    return out;
  }
  if (abs(r[2]) > tol) {
    out.reason = "r_n does not tend to 0 (r_n -> " + format_real(static_cast<double>(r[2])) + ")";
    return out;
  }
  const Real eta = 2 * sqrt(pq[2]);
  try {
    const auto crit = lemma_rho0_criterion(chain, eta, std::min(depth, chain.horizon() - 2));
    if (crit.L_tilde.verdict == Verdict::diverges) {
      out.reason = "L~ diverges at 2 sqrt(lim p_{n-1} q_n)";
      return out;
    }
    if (crit.L_tilde.verdict == Verdict::undecided) {
      out.reason = "finiteness of L~ is undecided";
      return out;
    }
  } catch (const Error& e) {
    out.reason = std::string("L~ not computable: ") + e.what();
    return out;
  }
  out.applicable = true;
  out.eta = eta;
  out.zeta = -eta;
  out.reason = "premises hold numerically";
  return out;
}

/// gamma_k^{1/k} for k = 1..n with its limit, compared with 2 eta and 2/eta.
template <class Real>
struct RegularityCheck {
  std::vector<Real> root_sequence;
  LimitEstimate<Real> limit;
  Real eta = 1;
  Real gap_two_eta = 0;       // |lim - 2 eta|
  Real gap_two_over_eta = 0;  // |lim - 2/eta|
};

template <class Real>
RegularityCheck<Real> regularity_check(const ChainSpec<Real>& chain, const Real& eta, std::size_t n) {
  using std::abs;
  using std::exp;
  using std::log;
  if (chain.has_killing()) throw Error(ErrorCode::chain_has_killing, "regularity_check needs an honest chain");
  const auto t = chain.table(n + 1);
  RegularityCheck<Real> out;
  out.eta = eta;
  Real acc = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    acc += log(t.p[k - 1]) + log(t.q[k]);
    out.root_sequence.push_back(exp(-acc / (2 * Real(static_cast<long long>(k)))));
  }
  out.limit = estimate_limit(out.root_sequence, 1);
  out.gap_two_eta = abs(out.limit.value - 2 * eta);
  out.gap_two_over_eta = abs(out.limit.value - 2 / eta);
  return out;
}

/// n^{2 alpha + 2} rho_n(eta) and n^{2 beta + 2} rho_n(-eta) for n = 1..n_max
/// with the constants (2 eta)^{-a-1} w Gamma(a+1) Gamma(a+2) as printed, and
/// the factor that maps the printed constant onto the semicircle oracle
/// (n^3 rho_n(1) -> 3).
template <class Real>
struct DankaTotikCheck {
  std::vector<Real> top;     // n^{2a+2} rho_n(eta)
  std::vector<Real> bottom;  // n^{2b+2} rho_n(-eta)
  LimitEstimate<Real> top_limit;
  LimitEstimate<Real> bottom_limit;
  Real paper_constant_top = 0;
  Real paper_constant_bottom = 0;
  Real semicircle_paper_constant = 0;
  Real calibration_factor = 0;  // 3 / semicircle_paper_constant
};

template <class Real>
Real danka_totik_constant(const Real& eta, const Real& a, const Real& w) {
  using std::pow;
  return pow(2 * eta, -a - 1) * w * boost::math::tgamma(a + 1) * boost::math::tgamma(a + 2);
}

template <class Real>
DankaTotikCheck<Real> danka_totik_check(const ChainSpec<Real>& chain, const EdgeExponents<Real>& ex, const Real& eta,
                                        std::size_t n_max) {
  using std::exp;
  using std::log;
  DankaTotikCheck<Real> out;
  const auto lp = log_christoffel_sequence(chain, n_max, eta);
  const auto lm = log_christoffel_sequence(chain, n_max, Real(-eta));
  for (std::size_t n = 1; n <= n_max; ++n) {
    const Real ln = log(Real(static_cast<long long>(n)));
    out.top.push_back(exp((2 * ex.alpha + 2) * ln + lp[n - 1]));
    out.bottom.push_back(exp((2 * ex.beta + 2) * ln + lm[n - 1]));
  }
  out.top_limit = estimate_limit(out.top, 1);
  out.bottom_limit = estimate_limit(out.bottom, 1);
  out.paper_constant_top = danka_totik_constant(eta, ex.alpha, ex.w_at_eta);
  out.paper_constant_bottom = danka_totik_constant(eta, ex.beta, ex.w_at_minus_eta);
  const Real half = Real(1) / 2;
  out.semicircle_paper_constant = danka_totik_constant(Real(1), half, 2 / boost::math::constants::pi<Real>());
  out.calibration_factor = 3 / out.semicircle_paper_constant;
  return out;
}

// ---------------------------------------------------------------------------
// Conjecture report

enum class Branch { i, ii, iii, none };
enum class ConjectureVerdict { consistent, inconsistent, inconclusive };

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::i: return "i";
    case Branch::ii: return "ii";
    case Branch::iii: return "iii";
    case Branch::none: return "none-applicable";
  }
  return "?";
}

inline std::string to_string(ConjectureVerdict v) {
  switch (v) {
    case ConjectureVerdict::consistent: return "consistent";
    case ConjectureVerdict::inconsistent: return "inconsistent";
    case ConjectureVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

template <class Real>
struct ConjectureOptions {
  std::size_t truncation = 400;  // N: Gauss rule size and edge truncation
  std::size_t horizon = 799;     // n_max for both sequences
  std::size_t series_terms = 2000;
  std::size_t condition_a_terms = 100000;
  Real tolerance_floor = Real(2) / Real(100);
  Real edge_tolerance = Real(1) / Real(100000000);
};

template <class Real>
struct ConjectureReport {
  std::string label;
  bool periodic = false;
  bool killing = false;

  Real eta_hat = 1;
  Real zeta_hat = -1;
  Real eta_used = 1;
  std::string eta_source;  // "support-edges" or "weight-spec"

  std::optional<DivergenceVerdict<Real>> r_sum;        // (1/(p pi)) sum r pi
  std::optional<DivergenceVerdict<Real>> killing_sum;  // killed chains only
  std::optional<Rho0Criterion<Real>> rho0;
  std::optional<ConditionA<Real>> cond_a;
  std::optional<EdgeExponents<Real>> exponents;

  Branch branch = Branch::none;
  std::string branch_reason;
  std::optional<Real> predicted;
  std::string prediction_rule;

  std::vector<Real> Cn;         // C_0..C_{n_max}
  std::vector<Real> rho_ratio;  // index k-1 <-> n = k
  LimitEstimate<Real> lim_Cn;
  LimitEstimate<Real> lim_rho_ratio;
  Real edge_sensitivity = 0;  // |lim rho ratio at eta_eigen - at eta_used|

  Real supC_max_tail = 0;  // max of C_n over the last quarter
  bool supC_holds = true;  // max_tail <= lim rho ratio + 1e-3 (aperiodic only)
  bool zeta_gap = false;   // zeta_hat > -eta_hat + 0.01

  Real tolerance = 0;
  ConjectureVerdict verdict = ConjectureVerdict::inconclusive;
  std::string verdict_reason;
};

namespace detail {

template <class Real>
bool within(const LimitEstimate<Real>& e, const Real& target, const Real& tol) {
  using std::abs;
  return e.is_finite() && abs(e.value - target) <= e.uncertainty + tol;
}

}  // namespace detail

/// Branch classification, empirical limits and verdict for one chain; the
/// weight spec (if any) drives branch (iii) and fixes eta.
template <class Real>
ConjectureReport<Real> theorem_main_verdict(const ChainSpec<Real>& chain, const std::optional<WeightSpec<Real>>& spec,
                                            const ConjectureOptions<Real>& opt = {}) {
  using std::abs;
  ConjectureReport<Real> rep;
  rep.label = chain.label();
  rep.periodic = is_periodic(chain);
  rep.killing = chain.has_killing();

  const std::size_t N = opt.truncation;
  const auto edges = support_edges(chain, N, opt.edge_tolerance);
  rep.eta_hat = edges.eta_hat;
  rep.zeta_hat = edges.zeta_hat;
  rep.eta_used = spec ? spec->eta : edges.eta_hat;
  rep.eta_source = spec ? "weight-spec" : "support-edges";
  rep.zeta_gap = rep.zeta_hat > -rep.eta_hat + Real(1) / 100;

  const std::size_t terms = std::min(opt.series_terms, chain.horizon() - 2);
  {
    const auto t = chain.table(terms + 1);
    const auto lp = log_potentials<Real>(t);
    rep.r_sum = classify_series(detail::nested_summands<Real>(
        t, lp, [&](std::size_t m) { return detail::log_or_minus_inf(t.r[m]) + lp[m]; }));
  }
  if (rep.killing) {
    rep.killing_sum = killing_sum(chain, terms);
  } else {
    try {
      rep.rho0 = lemma_rho0_criterion(chain, rep.eta_used, terms);
    } catch (const Error&) {
    }
  }
  if (spec) rep.exponents = edge_exponents(*spec);

  // Branch classification.
  const bool r_div = rep.r_sum->verdict == Verdict::diverges;
  const bool absorption_uncertain = !rep.killing_sum || rep.killing_sum->verdict == Verdict::converges;
  const bool first = rep.killing ? (r_div && absorption_uncertain) : r_div;
  const bool second = rep.rho0 && rep.rho0->L_tilde.verdict == Verdict::diverges;
  if (rep.periodic) {
    rep.branch = Branch::i;
    rep.branch_reason = "chain is periodic";
    rep.predicted = Real(1);
    rep.prediction_rule = "periodic";
  } else if (first || second) {
    rep.branch = Branch::ii;
    rep.branch_reason = first ? (rep.killing ? "r-sum diverges and killing sum converges" : "r-sum diverges")
                              : "L~ diverges";
    rep.predicted = Real(0);
    rep.prediction_rule = "aperiodic with divergent sum";
  } else if (spec) {
    rep.cond_a = condition_a(chain, opt.condition_a_terms);
    const auto& ex = *rep.exponents;
    if (!rep.cond_a->holds) {
      rep.branch_reason = "condition (a) not established";
    } else if (!(ex.w_at_eta > 0)) {
      rep.branch_reason = "w(eta-) is not positive";
    } else {
      try {
        const auto p = prediction_Cw(ex);
        rep.branch = Branch::iii;
        rep.branch_reason = "aperiodic, sums finite or undecided, conditions (a)-(d) from the weight";
        rep.predicted = p.value;
        rep.prediction_rule = p.rule;
      } catch (const Error& e) {
        rep.branch_reason = e.what();
      }
    }
  } else {
    rep.branch_reason = "aperiodic, no divergent sum, and no weight spec for conditions (b)-(d)";
  }

  // Empirical sequences.
  const std::size_t n_max = opt.horizon;
  const auto measure = quadrature_from_chain(chain, N);
  rep.Cn = Cn_sequence(measure, std::min(n_max, 2 * N - 1));
  rep.lim_Cn = estimate_limit(std::vector<Real>(rep.Cn.begin() + 1, rep.Cn.end()), 1);
  rep.rho_ratio = christoffel_ratio_sequence(chain, n_max, rep.eta_used).ratio;
  rep.lim_rho_ratio = estimate_limit(rep.rho_ratio, 1);
  if (edges.eta_eigen != rep.eta_used) {
    const auto alt = estimate_limit(christoffel_ratio_sequence(chain, n_max, edges.eta_eigen).ratio, 1);
    rep.edge_sensitivity = alt.is_finite() && rep.lim_rho_ratio.is_finite() ? abs(alt.value - rep.lim_rho_ratio.value)
                                                                           : infinity<Real>();
  }

  const std::size_t q0 = rep.Cn.size() - rep.Cn.size() / 4;
  rep.supC_max_tail = *std::max_element(rep.Cn.begin() + static_cast<std::ptrdiff_t>(q0), rep.Cn.end());
  if (!rep.periodic && rep.lim_rho_ratio.is_finite()) {
    rep.supC_holds = rep.supC_max_tail <= rep.lim_rho_ratio.value + Real(1) / 1000;
  }

  // Verdict.
  const Real combined = rep.lim_Cn.uncertainty + rep.lim_rho_ratio.uncertainty;
  rep.tolerance = std::max(5 * combined, opt.tolerance_floor);
  if (!rep.lim_Cn.is_finite() || !rep.lim_rho_ratio.is_finite()) {
    rep.verdict = ConjectureVerdict::inconclusive;
    rep.verdict_reason = "a limit estimate is not finite (" + to_string(rep.lim_Cn.kind) + ", " +
                         to_string(rep.lim_rho_ratio.kind) + ")";
  } else if (abs(rep.lim_Cn.value - rep.lim_rho_ratio.value) > combined + rep.tolerance) {
    rep.verdict = ConjectureVerdict::inconsistent;
    rep.verdict_reason = "lim C_n and lim rho ratio differ beyond tolerance";
  } else if (rep.predicted && !(detail::within(rep.lim_Cn, *rep.predicted, rep.tolerance) &&
                                detail::within(rep.lim_rho_ratio, *rep.predicted, rep.tolerance))) {
    rep.verdict = ConjectureVerdict::inconclusive;
    rep.verdict_reason = "limits agree with each other but not with the branch prediction";
  } else {
    rep.verdict = ConjectureVerdict::consistent;
    rep.verdict_reason = rep.predicted ? "limits agree with each other and with the prediction" : "limits agree";
  }
  return rep;
}

namespace detail {

template <class Real>
void write_limit(std::ostream& os, const std::string& key, const LimitEstimate<Real>& e) {
  os << key << ".kind = " << to_string(e.kind) << '\n';
  os << key << ".value = " << format_real(e.value) << '\n';
  os << key << ".uncertainty = " << format_real(e.uncertainty) << '\n';
  os << key << ".method = " << to_string(e.method) << '\n';
  os << key << ".n_used = " << e.n_first << ".." << e.n_last << '\n';
}

template <class Real>
void write_verdict(std::ostream& os, const std::string& key, const DivergenceVerdict<Real>& v) {
  os << key << " = " << to_string(v.verdict) << '\n';
  os << key << ".terms = " << v.partial_sums.size() << '\n';
  if (!v.partial_sums.empty()) os << key << ".last_partial_sum = " << format_real(v.partial_sums.back()) << '\n';
  if (v.extrapolated) os << key << ".extrapolated = " << format_real(*v.extrapolated) << '\n';
  os << key << ".analysis = " << v.tail_analysis << '\n';
}

}  // namespace detail

/// Flat key = value block.
template <class Real>
void write_report(std::ostream& os, const ConjectureReport<Real>& r) {
  os << "label = " << r.label << '\n';
  os << "periodic = " << (r.periodic ? "true" : "false") << '\n';
  os << "killing = " << (r.killing ? "true" : "false") << '\n';
  os << "eta_hat = " << format_real(r.eta_hat) << '\n';
  os << "zeta_hat = " << format_real(r.zeta_hat) << '\n';
  os << "eta_used = " << format_real(r.eta_used) << '\n';
  os << "eta_source = " << r.eta_source << '\n';
  if (r.r_sum) detail::write_verdict(os, "r_sum", *r.r_sum);
  if (r.killing_sum) detail::write_verdict(os, "killing_sum", *r.killing_sum);
  if (r.rho0) {
    detail::write_verdict(os, "rho0_sum", r.rho0->rho0_sum);
    detail::write_verdict(os, "L_tilde", r.rho0->L_tilde);
  }
  if (r.cond_a) {
    os << "condition_a.holds = " << (r.cond_a->holds ? "true" : "false") << '\n';
    os << "condition_a.tail_estimate = " << format_real(r.cond_a->tail_estimate) << '\n';
  }
  if (r.exponents) {
    os << "alpha = " << format_real(r.exponents->alpha) << '\n';
    os << "beta = " << format_real(r.exponents->beta) << '\n';
    os << "w_at_eta = " << format_real(r.exponents->w_at_eta) << '\n';
    os << "w_at_minus_eta = " << format_real(r.exponents->w_at_minus_eta) << '\n';
  }
  os << "branch = " << to_string(r.branch) << '\n';
  os << "branch_reason = " << r.branch_reason << '\n';
  if (r.predicted) {
    os << "predicted = " << format_real(*r.predicted) << '\n';
    os << "prediction_rule = " << r.prediction_rule << '\n';
  }
  detail::write_limit(os, "lim_Cn", r.lim_Cn);
  detail::write_limit(os, "lim_rho_ratio", r.lim_rho_ratio);
  os << "edge_sensitivity = " << format_real(r.edge_sensitivity) << '\n';
  os << "supC.max_tail = " << format_real(r.supC_max_tail) << '\n';
  os << "supC.holds = " << (r.supC_holds ? "true" : "false") << '\n';
  os << "zeta_gap = " << (r.zeta_gap ? "true" : "false") << '\n';
  os << "tolerance = " << format_real(r.tolerance) << '\n';
  os << "verdict = " << to_string(r.verdict) << '\n';
  os << "verdict_reason = " << r.verdict_reason << '\n';
}

/// n, C_n, rho_ratio_n (empty where a sequence is shorter).
template <class Real>
void write_sequences_csv(std::ostream& os, const ConjectureReport<Real>& r) {
  os << "n,C_n,rho_ratio_n\n";
  const std::size_t n_max = std::max(r.Cn.size() - 1, r.rho_ratio.size());
  for (std::size_t n = 0; n <= n_max; ++n) {
    os << n << ',';
    if (n < r.Cn.size()) os << format_real(r.Cn[n]);
    os << ',';
    if (n >= 1 && n <= r.rho_ratio.size()) os << format_real(r.rho_ratio[n - 1]);
    os << '\n';
  }
}

template <class Real>
void write_csv(std::ostream& os, const DankaTotikCheck<Real>& dt) {
  os << "n,scaled_rho_eta,scaled_rho_minus_eta\n";
  for (std::size_t k = 0; k < dt.top.size(); ++k) {
    os << k + 1 << ',' << format_real(dt.top[k]) << ',' << format_real(dt.bottom[k]) << '\n';
  }
}

}  // namespace rwpoly
