/**
 * @file polynomials.hpp
 * @brief Random walk polynomials Q_n, orthonormal p_n = sqrt(pi_n) Q_n and
 * the quantities built from them.
 *
 * Evaluation runs the forward recurrence
 *
 *     p_n Q_{n+1}(x) = (x - r_n) Q_n(x) - q_n Q_{n-1}(x),   Q_0 = 1,
 *
 * on a pair rescaled by exact powers of two, so values are carried as
 * sign + log magnitude and never overflow.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "rwpoly/chain.hpp"
#include "rwpoly/chain_model.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/extrapolation.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

template <class Real>
struct EvalTrace {
  Real x = 0;
  std::string chain_label;
  std::vector<SignedLog<Real>> values;             // Q_0..Q_n
  std::vector<SignedLog<Real>> orthonormal_values;  // p_0..p_n
  Real error_estimate = 0;                          // relative, accumulated

  std::size_t size() const { return values.size(); }
  Real Q(std::size_t k) const { return values[k].value(); }
};

namespace detail {

constexpr int rescale_bits = 256;

/// Sign/log values of Q_0..Q_steps at x (steps defaults to the table length)
/// together with the accumulated relative error estimate.
template <class Real>
std::vector<SignedLog<Real>> q_logs(const typename ChainSpec<Real>::Table& t, const Real& x, Real* error = nullptr,
                                    std::size_t steps = static_cast<std::size_t>(-1)) {
  using std::abs;
  using std::ldexp;
  using std::log;
  const std::size_t n = std::min(steps, t.size());
  std::vector<SignedLog<Real>> out;
  out.reserve(n + 1);
  const Real ln2 = log(Real(2));
  const Real big = ldexp(Real(1), rescale_bits);
  const Real small = ldexp(Real(1), -rescale_bits);
  const Real u = epsilon<Real>();

  long long scale = 0;  // Q_k = cur * 2^(rescale_bits * scale)
  Real prev = 0, cur = 1;
  Real err = 0;
  auto push = [&](const Real& v) {
    if (v == 0) {
      out.push_back({});
    } else {
      out.push_back({v > 0 ? 1 : -1, log(abs(v)) + Real(rescale_bits * scale) * ln2});
    }
  };
  push(cur);
  for (std::size_t k = 0; k < n; ++k) {
    const Real a = (x - t.r[k]) * cur;
    const Real b = t.q[k] * prev;
    Real next = (a - b) / t.p[k];
    const Real mag = (abs(a) + abs(b)) / t.p[k];
    if (abs(next) <= 2 * u * mag) next = 0;  // root sentinel
    const Real ref = std::max(abs(next), abs(cur));
    if (ref > 0) err += u * mag / ref;
    prev = cur;
    cur = next;
    const Real m = std::max(abs(cur), abs(prev));
    if (m > big) {
      cur = ldexp(cur, -rescale_bits);
      prev = ldexp(prev, -rescale_bits);
      ++scale;
    } else if (m > 0 && m < small) {
      cur = ldexp(cur, rescale_bits);
      prev = ldexp(prev, rescale_bits);
      --scale;
    }
    push(cur);
  }
  if (error) *error = err;
  return out;
}

template <class Real>
void check_precision(const Real& err, int digits, const std::string& where) {
  using std::pow;
  const Real limit = pow(Real(10), -Real(digits) / 2);
  if (err > limit) {
    throw Error(ErrorCode::precision_exhausted, where + ": estimated relative error " +
                                                    format_real(static_cast<double>(err)) + " exceeds 1e-" +
                                                    std::to_string(digits / 2));
  }
}

}  // namespace detail

/// Q_0..Q_n and p_0..p_n at x. `digits` is the accuracy the caller needs;
/// the evaluation fails when the error estimate exceeds half of them.
template <class Real>
EvalTrace<Real> eval_Q(const ChainSpec<Real>& chain, std::size_t n, const Real& x, int digits = working_digits<Real>()) {
  EvalTrace<Real> tr;
  tr.x = x;
  tr.chain_label = chain.label();
  const auto t = chain.table(n + 1);
  tr.values = detail::q_logs<Real>(t, x, &tr.error_estimate, n);
  detail::check_precision(tr.error_estimate, digits, "eval_Q(" + chain.label() + ")");
  const auto lp = log_potentials<Real>(t);
  tr.orthonormal_values.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto& v = tr.values[k];
    tr.orthonormal_values[k] = v.sign == 0 ? SignedLog<Real>{} : SignedLog<Real>{v.sign, v.log_magnitude + lp[k] / 2};
  }
  return tr;
}

template <class Real>
void write_csv(std::ostream& os, const EvalTrace<Real>& tr) {
  os << "n,sign_Q,log10_abs_Q,sign_p,log10_abs_p\n";
  for (std::size_t k = 0; k < tr.values.size(); ++k) {
    os << k << ',' << tr.values[k].sign << ',' << format_real(tr.values[k].log10_magnitude()) << ','
       << tr.orthonormal_values[k].sign << ',' << format_real(tr.orthonormal_values[k].log10_magnitude()) << '\n';
  }
}

/// gamma_n with gamma_n^{-2} = prod_{i=1}^n p_{i-1} q_i.
template <class Real>
SignedLog<Real> leading_coefficient(const ChainSpec<Real>& chain, std::size_t n) {
  using std::log;
  const auto t = chain.table(n + 1);
  Real acc = 0;
  for (std::size_t i = 1; i <= n; ++i) acc += log(t.p[i - 1]) + log(t.q[i]);
  return {1, -acc / 2};
}

/// log of the Christoffel function rho_k(x) = 1 / sum_{j<k} p_j(x)^2 for
/// k = 1..n.
template <class Real>
std::vector<Real> log_christoffel_sequence(const ChainSpec<Real>& chain, std::size_t n, const Real& x,
                                           int digits = working_digits<Real>()) {
  const auto t = chain.table(n);
  Real err = 0;
  const auto q = detail::q_logs<Real>(t, x, &err);
  detail::check_precision(err, digits, "christoffel(" + chain.label() + ")");
  const auto lp = log_potentials<Real>(t);
  std::vector<Real> out(n);
  LogSum<Real> acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (q[j].sign != 0) acc.add_log(lp[j] + 2 * q[j].log_magnitude);
    out[j] = -acc.log();
  }
  return out;
}

template <class Real>
Real christoffel(const ChainSpec<Real>& chain, std::size_t n, const Real& x, int digits = working_digits<Real>()) {
  using std::exp;
  if (n < 1) throw Error(ErrorCode::invalid_argument, "christoffel needs n >= 1");
  return exp(log_christoffel_sequence(chain, n, x, digits).back());
}

/// rho_k(-eta)/rho_k(eta) and Q_k(eta)^2/Q_k(-eta)^2 for k = 1..n_max.
template <class Real>
struct ChristoffelRatios {
  Real eta = 0;
  std::vector<Real> ratio;
  std::vector<Real> q_ratio;
};

template <class Real>
ChristoffelRatios<Real> christoffel_ratio_sequence(const ChainSpec<Real>& chain, std::size_t n_max, const Real& eta,
                                                   int digits = working_digits<Real>()) {
  using std::exp;
  ChristoffelRatios<Real> out;
  out.eta = eta;
  const auto t = chain.table(n_max);
  Real err_p = 0, err_m = 0;
  const auto qp = detail::q_logs<Real>(t, eta, &err_p);
  const auto qm = detail::q_logs<Real>(t, Real(-eta), &err_m);
  detail::check_precision(std::max(err_p, err_m), digits, "christoffel_ratio_sequence(" + chain.label() + ")");
  const auto lp = log_potentials<Real>(t);
  LogSum<Real> sp, sm;
  out.ratio.resize(n_max);
  out.q_ratio.resize(n_max);
  for (std::size_t k = 1; k <= n_max; ++k) {
    const std::size_t j = k - 1;
    if (qp[j].sign != 0) sp.add_log(lp[j] + 2 * qp[j].log_magnitude);
    if (qm[j].sign != 0) sm.add_log(lp[j] + 2 * qm[j].log_magnitude);
    out.ratio[j] = exp(sp.log() - sm.log());
    if (qm[k].sign == 0) {
      out.q_ratio[j] = infinity<Real>();
    } else if (qp[k].sign == 0) {
      out.q_ratio[j] = 0;
    } else {
      out.q_ratio[j] = exp(2 * (qp[k].log_magnitude - qm[k].log_magnitude));
    }
  }
  return out;
}

/// Relative residual of the Christoffel-Darboux identity
///   p_n pi_n (Q_n(x)Q_{n+1}(y) - Q_n(y)Q_{n+1}(x)) = (y - x) sum_{j<=n} pi_j Q_j(x) Q_j(y).
/// Both sides are formed after dividing by |Q_n(x)| |Q_n(y)| pi_n so that
/// large n does not overflow.
template <class Real>
Real cd_identity_residual(const ChainSpec<Real>& chain, std::size_t n, const Real& x, const Real& y) {
  using std::abs;
  using std::exp;
  if (x == y) throw Error(ErrorCode::invalid_argument, "cd_identity_residual needs x != y");
  const auto t = chain.table(n + 1);
  const auto qx = detail::q_logs<Real>(t, x);
  const auto qy = detail::q_logs<Real>(t, y);
  const auto lp = log_potentials<Real>(t);
  // Reference scale: the largest term of the right-hand sum.
  Real shift = -infinity<Real>();
  for (std::size_t j = 0; j <= n; ++j) {
    if (qx[j].sign != 0 && qy[j].sign != 0) shift = std::max(shift, lp[j] + qx[j].log_magnitude + qy[j].log_magnitude);
  }
  auto scaled = [&](const SignedLog<Real>& a, const SignedLog<Real>& b, const Real& extra) -> Real {
    if (a.sign == 0 || b.sign == 0) return Real(0);
    return Real(a.sign * b.sign) * exp(a.log_magnitude + b.log_magnitude + extra - shift);
  };
  CompensatedSum<Real> rhs;
  for (std::size_t j = 0; j <= n; ++j) rhs.add(scaled(qx[j], qy[j], lp[j]));
  const Real right = (y - x) * rhs.value();
  const Real pn = t.p[n];
  const Real left = pn * (scaled(qx[n], qy[n + 1], lp[n]) - scaled(qy[n], qx[n + 1], lp[n]));
  const Real den = std::max(abs(left), abs(right));
  if (den == 0) return Real(0);
  return abs(left - right) / den;
}

/// Q_0(1)..Q_n(1) by the recurrence, cross-checked against
///   Q_{n+1}(1) = 1 + sum_{j<=n} (1/(p_j pi_j)) sum_{k<=j} kappa_k pi_k Q_k(1).
template <class Real>
struct QAtOne {
  std::vector<SignedLog<Real>> logs;
  std::vector<Real> values;  // may be +inf past the range of Real
  Real max_identity_gap = 0;  // largest |log Q_rec - log Q_identity|
};

template <class Real>
QAtOne<Real> q_at_one_growth(const ChainSpec<Real>& chain, std::size_t n, int digits = working_digits<Real>()) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::pow;
  QAtOne<Real> out;
  const auto t = chain.table(n);
  out.logs = detail::q_logs<Real>(t, Real(1));
  const auto lp = log_potentials<Real>(t);
  LogSum<Real> inner;
  LogSum<Real> outer;
  outer.add_log(Real(0));  // the leading 1
  const Real tol = std::max(pow(Real(10), -Real(digits) / 2), Real(1000) * Real(static_cast<long long>(n + 1)) * epsilon<Real>());
  for (std::size_t k = 0; k <= n; ++k) {
    const auto& v = out.logs[k];
    if (v.sign <= 0) {
      throw Error(ErrorCode::identity_mismatch, "Q_" + std::to_string(k) + "(1) is not positive for chain '" + chain.label() + "'");
    }
    if (k > 0) {
      const Real gap = abs(v.log_magnitude - outer.log());
      out.max_identity_gap = std::max(out.max_identity_gap, gap);
      if (gap > tol) {
        throw Error(ErrorCode::identity_mismatch, "Q_" + std::to_string(k) + "(1) recurrence and double-sum identity differ by " +
                                                      format_real(static_cast<double>(gap)) + " in log for chain '" + chain.label() + "'");
      }
    }
    if (k < n) {
      if (t.kappa[k] > 0) inner.add_log(log(t.kappa[k]) + lp[k] + v.log_magnitude);
      if (!inner.empty()) outer.add_log(inner.log() - log(t.p[k]) - lp[k]);
    }
    out.values.push_back(exp(v.log_magnitude));
  }
  return out;
}

/// tau_j = 1 - Q_j(1)/Q_inf(1), the probability of eventual absorption from j.
template <class Real>
struct AbsorptionResult {
  std::vector<Real> tau;
  std::vector<Real> tau_uncertainty;
  Real q_infinity = 1;  // +inf when absorption is certain
  std::string route;    // "no-killing", "divergence", "extrapolation"
  DivergenceVerdict<Real> killing;
  std::optional<LimitEstimate<Real>> limit;
};

template <class Real>
AbsorptionResult<Real> absorption_probabilities(const ChainSpec<Real>& chain, std::size_t j_max, std::size_t n_trunc) {
  AbsorptionResult<Real> out;
  if (j_max > n_trunc) throw Error(ErrorCode::invalid_argument, "absorption_probabilities needs j_max <= n_trunc");
  if (!chain.has_killing()) {
    out.tau.assign(j_max + 1, Real(0));
    out.tau_uncertainty.assign(j_max + 1, Real(0));
    out.route = "no-killing";
    return out;
  }
  out.killing = killing_sum(chain, n_trunc);
  if (out.killing.verdict == Verdict::diverges) {
    out.q_infinity = infinity<Real>();
    out.tau.assign(j_max + 1, Real(1));
    out.tau_uncertainty.assign(j_max + 1, Real(0));
    out.route = "divergence";
    return out;
  }
  const auto q = q_at_one_growth(chain, n_trunc);
  auto est = estimate_limit(q.values, 0);
  out.limit = est;
  if (!est.is_finite()) {
    throw Error(ErrorCode::undecided_limit, "Q_n(1) has no finite limit estimate and the killing sum is " +
                                                to_string(out.killing.verdict) + " for chain '" + chain.label() + "'");
  }
  out.q_infinity = est.value;
  out.route = "extrapolation";
  for (std::size_t j = 0; j <= j_max; ++j) {
    Real tau = 1 - q.values[j] / est.value;
    if (tau < 0) tau = 0;
    out.tau.push_back(tau);
    out.tau_uncertainty.push_back(q.values[j] * est.uncertainty / (est.value * est.value));
  }
  return out;
}

}  // namespace rwpoly
