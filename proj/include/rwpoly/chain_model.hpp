/**
 * @file chain_model.hpp
 * @brief Coefficient-level quantities of a birth-death chain: potential
 * coefficients, the classical series and periodicity.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/extrapolation.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

/// pi_0..pi_n; `logs` is exact in log space, `values` may overflow to inf.
template <class Real>
struct PotentialCoefficients {
  std::vector<SignedLog<Real>> logs;
  std::vector<Real> values;
};

template <class Real>
PotentialCoefficients<Real> potential_coefficients(const ChainSpec<Real>& chain, std::size_t n) {
  using std::exp;
  using std::log;
  PotentialCoefficients<Real> out;
  out.logs.reserve(n + 1);
  out.values.reserve(n + 1);
  Real lp = 0;
  Step<Real> prev = chain.at(0);
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > 0) {
      const Step<Real> cur = chain.at(j);
      lp += log(prev.p) - log(cur.q);
      prev = cur;
    }
    out.logs.push_back({1, lp});
    out.values.push_back(exp(lp));
  }
  return out;
}

/// log pi_0..log pi_{n-1} from a coefficient table.
template <class Real>
std::vector<Real> log_potentials(const typename ChainSpec<Real>::Table& t) {
  using std::log;
  std::vector<Real> lp(t.size());
  if (lp.empty()) return lp;
  lp[0] = 0;
  for (std::size_t j = 1; j < t.size(); ++j) lp[j] = lp[j - 1] + log(t.p[j - 1]) - log(t.q[j]);
  return lp;
}

namespace detail {

/// Summands (1/(p_j pi_j)) * sum_{m<=j} exp(log_inner(m)) for j = 0..n.
template <class Real>
std::vector<Real> nested_summands(const typename ChainSpec<Real>::Table& t, const std::vector<Real>& lp,
                                  const std::function<Real(std::size_t)>& log_inner) {
  using std::exp;
  using std::log;
  std::vector<Real> out(t.size());
  LogSum<Real> inner;
  for (std::size_t j = 0; j < t.size(); ++j) {
    inner.add_log(log_inner(j));
    out[j] = inner.empty() ? Real(0) : exp(inner.log() - log(t.p[j]) - lp[j]);
  }
  return out;
}

template <class Real>
Real log_or_minus_inf(const Real& v) {
  using std::log;
  return v > 0 ? log(v) : -infinity<Real>();
}

}  // namespace detail

/// L_k = sum_{j<=k} 1/(p_j pi_j); divergence means recurrence.
template <class Real>
DivergenceVerdict<Real> series_L(const ChainSpec<Real>& chain, std::size_t n,
                                 const DivergenceOptions<Real>& opt = {}) {
  using std::exp;
  using std::log;
  const auto t = chain.table(n + 1);
  const auto lp = log_potentials<Real>(t);
  std::vector<Real> a(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) a[j] = exp(-log(t.p[j]) - lp[j]);
  return classify_series(a, opt);
}

/// sum_{j<=k} (1/(p_j pi_j)) sum_{m<=j} r_m pi_m; divergence means
/// asymptotic aperiodicity.
template <class Real>
DivergenceVerdict<Real> asymptotic_aperiodicity_sum(const ChainSpec<Real>& chain, std::size_t n,
                                                    const DivergenceOptions<Real>& opt = {}) {
  if (chain.has_killing()) {
    throw Error(ErrorCode::chain_has_killing, "chain '" + chain.label() + "' has killing; the aperiodicity sum needs an honest chain");
  }
  const auto t = chain.table(n + 1);
  const auto lp = log_potentials<Real>(t);
  return classify_series(detail::nested_summands<Real>(
                             t, lp, [&](std::size_t m) { return detail::log_or_minus_inf(t.r[m]) + lp[m]; }),
                         opt);
}

/// sum_{j<=k} r_j / p_j.
template <class Real>
DivergenceVerdict<Real> rj_over_pj_sum(const ChainSpec<Real>& chain, std::size_t n,
                                       const DivergenceOptions<Real>& opt = {}) {
  const auto t = chain.table(n + 1);
  std::vector<Real> a(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) a[j] = t.r[j] / t.p[j];
  return classify_series(a, opt);
}

/// sum_{j<=k} (1/(p_j pi_j)) sum_{m<=j} kappa_m pi_m; divergence means
/// certain absorption.
template <class Real>
DivergenceVerdict<Real> killing_sum(const ChainSpec<Real>& chain, std::size_t n,
                                    const DivergenceOptions<Real>& opt = {}) {
  const auto t = chain.table(n + 1);
  const auto lp = log_potentials<Real>(t);
  return classify_series(detail::nested_summands<Real>(
                             t, lp, [&](std::size_t m) { return detail::log_or_minus_inf(t.kappa[m]) + lp[m]; }),
                         opt);
}

/// True iff every r_j vanishes. Throws undecidable_tail for tails outside
/// the decidable fragment.
template <class Real>
bool is_periodic(const ChainSpec<Real>& chain) {
  for (const Real& r : chain.prefix_r()) {
    if (r != 0) return false;
  }
  if (!chain.has_tail()) return true;
  return chain.tail()->r.is_identically_zero(static_cast<long long>(chain.prefix_size()));
}

enum class Recurrence { recurrent, transient, undecided };

inline std::string to_string(Recurrence r) {
  switch (r) {
    case Recurrence::recurrent: return "recurrent";
    case Recurrence::transient: return "transient";
    case Recurrence::undecided: return "undecided";
  }
  return "?";
}

/// Summary used by the chain-info report.
template <class Real>
struct ChainClassification {
  bool periodic = false;
  bool killing = false;
  Recurrence recurrence = Recurrence::undecided;
  DivergenceVerdict<Real> L;
  std::optional<DivergenceVerdict<Real>> aperiodicity;  // honest chains only
  DivergenceVerdict<Real> rj_pj;
  DivergenceVerdict<Real> killing_sum;
};

template <class Real>
ChainClassification<Real> classify(const ChainSpec<Real>& chain, std::size_t n) {
  ChainClassification<Real> c;
  c.periodic = is_periodic(chain);
  c.killing = chain.has_killing();
  c.L = series_L(chain, n);
  if (c.L.verdict == Verdict::diverges) c.recurrence = Recurrence::recurrent;
  if (c.L.verdict == Verdict::converges) c.recurrence = Recurrence::transient;
  if (!c.killing) c.aperiodicity = asymptotic_aperiodicity_sum(chain, n);
  c.rj_pj = rj_over_pj_sum(chain, n);
  c.killing_sum = killing_sum(chain, n);
  return c;
}

}  // namespace rwpoly
