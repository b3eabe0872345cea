/**
 * @file support_edges.hpp
 * @brief Estimates of the top and bottom support points eta, zeta of the
 * random walk measure.
 *
 * Two independent computations at truncation N:
 *   - the extreme eigenvalues of the N x N Jacobi block (Sturm bisection),
 *     refined by Richardson extrapolation over N/4, N/2 and N assuming
 *     lambda_N = lambda + a N^{-2} + b N^{-3};
 *   - bisection on x for "Q_k(x) > 0 for all k <= N" (and for
 *     "(-1)^k Q_k(x) > 0" at the bottom).
 * At a finite horizon the positivity threshold is the largest zero of Q_N,
 * which is the largest eigenvalue of the same block, so the two raw values
 * agree up to arithmetic and `discrepancy` measures that agreement. The
 * truncation error is reported separately as `eta_shift` / `zeta_shift`.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/numeric.hpp"
#include "rwpoly/tridiagonal.hpp"

namespace rwpoly {

enum class EdgeMethod { jacobi_eigen, bisection_positivity, cross_checked };

inline std::string to_string(EdgeMethod m) {
  switch (m) {
    case EdgeMethod::jacobi_eigen: return "jacobi-eigen";
    case EdgeMethod::bisection_positivity: return "bisection-positivity";
    case EdgeMethod::cross_checked: return "cross-checked";
  }
  return "?";
}

template <class Real>
struct SupportEdges {
  Real eta_hat = 1;
  Real zeta_hat = -1;
  EdgeMethod method = EdgeMethod::jacobi_eigen;
  std::size_t truncation_size = 0;
  Real discrepancy = 0;

  Real eta_eigen = 0;      // largest eigenvalue of the N x N block
  Real eta_bisection = 0;  // upper end of the positivity bracket
  Real zeta_eigen = 0;
  Real zeta_bisection = 0;
  Real eta_shift = 0;   // eta_hat - eta_eigen
  Real zeta_shift = 0;  // zeta_eigen - zeta_hat
};

namespace detail {

/// True when Q_k(x) > 0 (alternating: (-1)^k Q_k(x) > 0) for k = 1..N.
template <class Real>
bool positive_through(const typename ChainSpec<Real>::Table& t, std::size_t N, const Real& x, bool alternating) {
  using std::abs;
  using std::ldexp;
  Real prev = 0, cur = 1;
  const Real big = ldexp(Real(1), 256);
  for (std::size_t k = 0; k < N; ++k) {
    Real next = ((x - t.r[k]) * cur - t.q[k] * prev) / t.p[k];
    prev = cur;
    cur = next;
    const bool odd = alternating && (k % 2 == 0);  // cur is Q_{k+1}
    if (odd ? !(cur < 0) : !(cur > 0)) return false;
    if (abs(cur) > big) {
      cur = ldexp(cur, -256);
      prev = ldexp(prev, -256);
    }
  }
  return true;
}

/// Threshold of a monotone predicate on [lo, hi]; returns the bracket.
template <class Real, class Pred>
std::pair<Real, Real> bisect_threshold(Real lo, Real hi, Pred holds_above) {
  for (int it = 0; it < 400; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (holds_above(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

}  // namespace detail

template <class Real>
SupportEdges<Real> support_edges(const ChainSpec<Real>& chain, std::size_t truncation, const Real& tol) {
  using std::abs;
  if (truncation < 50) throw Error(ErrorCode::invalid_argument, "support_edges needs truncation >= 50");
  SupportEdges<Real> out;
  out.truncation_size = truncation;
  const auto t = chain.table(truncation);

  const auto J = jacobi_matrix<Real>(t, truncation);
  const auto J_half = jacobi_matrix<Real>(t, truncation / 2);
  const auto J_quarter = jacobi_matrix<Real>(t, truncation / 4);
  const Real top = largest_eigenvalue(J), top_half = largest_eigenvalue(J_half), top_quarter = largest_eigenvalue(J_quarter);
  const Real bottom = smallest_eigenvalue(J), bottom_half = smallest_eigenvalue(J_half),
             bottom_quarter = smallest_eigenvalue(J_quarter);
  out.eta_eigen = top;
  out.zeta_eigen = bottom;

  // Positivity brackets. Q_k(1) >= 1 for every chain; the bottom predicate
  // holds at -1 - 2 (every zero lies in [-1, 1]).
  auto [eta_lo, eta_hi] = detail::bisect_threshold<Real>(Real(-1) - 1, Real(1) + 1, [&](const Real& x) {
    return detail::positive_through<Real>(t, truncation, x, false);
  });
  auto [zeta_lo, zeta_hi] = detail::bisect_threshold<Real>(Real(-1) - 1, Real(1) + 1, [&](const Real& x) {
    return !detail::positive_through<Real>(t, truncation, x, true);
  });
  out.eta_bisection = eta_hi;
  out.zeta_bisection = zeta_lo;
  (void)eta_lo;
  (void)zeta_hi;

  // Richardson for lambda_N = lambda + a N^{-2} + b N^{-3}, kept inside the
  // rigorous bounds.
  auto extrapolate = [](const Real& l1, const Real& l2, const Real& l4) {
    const Real d1 = l2 - l1, d2 = l4 - l2;
    const Real b = (d2 - 4 * d1) / 28;
    const Real a = (d1 - 7 * b) / 3;
    return l1 - a - b;
  };
  Real eta = extrapolate(top, top_half, top_quarter);
  eta = std::clamp(eta, top, Real(1));
  Real zeta = extrapolate(bottom, bottom_half, bottom_quarter);
  zeta = std::min(zeta, bottom);
  zeta = std::max(zeta, std::max(Real(-1), -eta));
  if (zeta > eta) zeta = eta;
  out.eta_hat = eta;
  out.zeta_hat = zeta;
  out.eta_shift = eta - top;
  out.zeta_shift = bottom - zeta;

  out.discrepancy = std::max(abs(out.eta_bisection - top), abs(out.zeta_bisection - bottom));
  if (out.discrepancy > 10 * tol) {
    throw Error(ErrorCode::methods_disagree, "support edges of '" + chain.label() + "': eigenvalue and positivity estimates differ by " +
                                                 format_real(static_cast<double>(out.discrepancy)));
  }
  out.method = out.discrepancy <= tol ? EdgeMethod::cross_checked : EdgeMethod::jacobi_eigen;
  return out;
}

}  // namespace rwpoly
