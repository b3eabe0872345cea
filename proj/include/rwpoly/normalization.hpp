/**
 * @file normalization.hpp
 * @brief The normalized chain obtained from the similarity transform at the
 * top support point eta:
 *
 *     p~_j = (Q_{j+1}(eta)/Q_j(eta)) p_j / eta,
 *     q~_j = (Q_{j-1}(eta)/Q_j(eta)) q_j / eta,
 *     r~_j = r_j / eta,
 *
 * whose polynomials are Q~_n(x) = Q_n(eta x)/Q_n(eta).
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/numeric.hpp"
#include "rwpoly/polynomials.hpp"

namespace rwpoly {

template <class Real>
struct NormalizedChain {
  std::string base_label;
  Real eta_used = 1;
  std::vector<Real> p, q, r;  // indices 0..depth-1
  Real max_sum_deviation = 0;  // max_j |p~_j + q~_j + r~_j - 1|

  std::size_t depth() const { return p.size(); }

  /// Prefix-only chain; p~_j is taken as 1 - q~_j - r~_j so the exported
  /// rows sum to one exactly (the deviation is reported above).
  ChainSpec<Real> as_chain() const {
    std::vector<Real> pp(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) pp[j] = 1 - q[j] - r[j];
    return ChainSpec<Real>(base_label + "~", std::move(pp), q, r, {}, std::nullopt);
  }
};

namespace detail {

template <class Real>
Real ratio_of(const SignedLog<Real>& a, const SignedLog<Real>& b) {
  using std::exp;
  return exp(a.log_magnitude - b.log_magnitude);
}

template <class Real>
std::vector<SignedLog<Real>> positive_q_at(const ChainSpec<Real>& chain, std::size_t n, const Real& eta) {
  const auto t = chain.table(n);
  const auto q = q_logs<Real>(t, eta);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j].sign <= 0) {
      throw Error(ErrorCode::nonpositive_q, "Q_" + std::to_string(j) + "(" + format_real(static_cast<double>(eta)) +
                                                ") <= 0 for chain '" + chain.label() + "': eta lies below the top support point");
    }
  }
  return q;
}

}  // namespace detail

template <class Real>
NormalizedChain<Real> normalize(const ChainSpec<Real>& chain, const Real& eta, std::size_t depth) {
  using std::abs;
  if (!(eta > 0)) throw Error(ErrorCode::invalid_argument, "normalize needs eta > 0");
  if (depth < 1) throw Error(ErrorCode::invalid_argument, "normalize needs depth >= 1");
  const auto t = chain.table(depth);
  const auto Q = detail::positive_q_at(chain, depth, eta);  // Q_0..Q_depth
  NormalizedChain<Real> out;
  out.base_label = chain.label();
  out.eta_used = eta;
  out.p.resize(depth);
  out.q.resize(depth);
  out.r.resize(depth);
  for (std::size_t j = 0; j < depth; ++j) {
    out.p[j] = detail::ratio_of(Q[j + 1], Q[j]) * t.p[j] / eta;
    out.q[j] = j == 0 ? Real(0) : detail::ratio_of(Q[j - 1], Q[j]) * t.q[j] / eta;
    out.r[j] = t.r[j] / eta;
    out.max_sum_deviation = std::max(out.max_sum_deviation, abs(out.p[j] + out.q[j] + out.r[j] - 1));
  }
  if (out.max_sum_deviation > Real(1) / Real(1000000000000LL)) {
    throw Error(ErrorCode::identity_mismatch, "normalized chain of '" + chain.label() + "' fails p+q+r=1 by " +
                                                  format_real(static_cast<double>(out.max_sum_deviation)));
  }
  return out;
}

/// Q~_0..Q~_n at x by the tilde recurrence, with the quotient formula
/// Q_n(eta x)/Q_n(eta) as a cross-check.
template <class Real>
struct TildeTrace {
  EvalTrace<Real> trace;  // tilde recurrence
  std::vector<SignedLog<Real>> quotient;
  Real discrepancy = 0;  // max_k |rec - quot| / max(|rec|, |quot|)
};

template <class Real>
TildeTrace<Real> tilde_polynomials(const ChainSpec<Real>& chain, const Real& eta, std::size_t n, const Real& x) {
  using std::abs;
  using std::exp;
  TildeTrace<Real> out;
  const auto tilde = normalize(chain, eta, n + 1).as_chain();
  out.trace = eval_Q(tilde, n, x);
  out.trace.chain_label = chain.label() + "~";

  const auto t = chain.table(n);
  const auto at_eta = detail::q_logs<Real>(t, eta);
  const auto at_x = detail::q_logs<Real>(t, Real(eta * x));
  out.quotient.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto& v = at_x[k];
    out.quotient[k] = v.sign == 0 ? SignedLog<Real>{} : SignedLog<Real>{v.sign, v.log_magnitude - at_eta[k].log_magnitude};
    const auto& a = out.trace.values[k];
    const auto& b = out.quotient[k];
    if (a.sign == 0 && b.sign == 0) continue;
    const Real top = std::max(a.sign ? a.log_magnitude : -infinity<Real>(), b.sign ? b.log_magnitude : -infinity<Real>());
    const Real av = a.sign ? Real(a.sign) * exp(a.log_magnitude - top) : Real(0);
    const Real bv = b.sign ? Real(b.sign) * exp(b.log_magnitude - top) : Real(0);
    out.discrepancy = std::max(out.discrepancy, abs(av - bv));
  }
  return out;
}

}  // namespace rwpoly
