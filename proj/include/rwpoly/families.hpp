/**
 * @file families.hpp
 * @brief Reference chains with known spectral data.
 *
 *   A  arcsine walk: p_0 = 1, p_j = q_j = 1/2. Q_n = T_n, support [-1, 1].
 *   B  lazy arcsine: r_j = 1/2, p_0 = 1/2, p_j = q_j = 1/4. Q_n(x) = T_n(2x - 1).
 *   C  asymmetric walk: p_0 = 1, p_j = 0.7, q_j = 0.3. Edges +-2 sqrt(0.21).
 *   S  semicircle walk: p_n = (n + 2) / (2(n + 1)), q_n = 1 - p_n.
 *   K  transient walk killed only at 0 (tau_0 = 1/2).
 *   K0 lazy arcsine killed only at 0 (recurrent, tau_0 = 1).
 *
 * Weights on [-1, 1]:
 *   D  (1 - x)^{1/2} (1 + x)^{3/2}   (alpha < beta)
 *   E  (1 - x^2)^{1/2} (2 + x)        (alpha = beta, w(-1+)/w(1-) = 1/3)
 *   semicircle (1 - x^2)^{1/2}
 */
#pragma once

#include <string>

#include "rwpoly/chain.hpp"
#include "rwpoly/measure_to_chain.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly::families {

template <class Real>
Real frac(long long a, long long b) {
  return Real(a) / Real(b);
}

template <class Real>
ChainSpec<Real> arcsine() {
  return ChainSpec<Real>("A", {Real(1)}, {Real(0)}, {Real(0)}, {}, TailRule::parse("1/2", "1/2", "0"));
}

template <class Real>
ChainSpec<Real> lazy_arcsine() {
  return ChainSpec<Real>("B", {frac<Real>(1, 2)}, {Real(0)}, {frac<Real>(1, 2)}, {},
                         TailRule::parse("1/4", "1/4", "1/2"));
}

template <class Real>
ChainSpec<Real> asymmetric() {
  return ChainSpec<Real>("C", {Real(1)}, {Real(0)}, {Real(0)}, {}, TailRule::parse("7/10", "3/10", "0"));
}

template <class Real>
ChainSpec<Real> semicircle() {
  return chain_from_rules<Real>("S", "(j+2)/(2*(j+1))", "j/(2*(j+1))", "0");
}

template <class Real>
ChainSpec<Real> killed_transient() {
  return ChainSpec<Real>("K", {frac<Real>(1, 2)}, {Real(0)}, {frac<Real>(1, 4)}, {frac<Real>(1, 4)},
                         TailRule::parse("1/2", "1/4", "1/4"));
}

template <class Real>
ChainSpec<Real> killed_lazy_arcsine() {
  return ChainSpec<Real>("K0", {frac<Real>(1, 2)}, {Real(0)}, {frac<Real>(1, 4)}, {frac<Real>(1, 4)},
                         TailRule::parse("1/4", "1/4", "1/2"));
}

/// kappa_j = 0.1 everywhere, p_j = q_j = 0.45 for j >= 1 (p_0 = 0.9).
template <class Real>
ChainSpec<Real> constant_killing() {
  return ChainSpec<Real>("constant-killing", {frac<Real>(9, 10)}, {Real(0)}, {Real(0)}, {frac<Real>(1, 10)},
                         TailRule::parse("9/20", "9/20", "0", "1/10"));
}

/// Transient walk with r_j = 4^{-(j+1)}; the aperiodicity sum converges.
template <class Real>
ChainSpec<Real> geometric_holding() {
  return ChainSpec<Real>("R4", {frac<Real>(3, 4)}, {Real(0)}, {frac<Real>(1, 4)}, {},
                         TailRule::parse("7/10*(1-(1/4)^(j+1))", "3/10*(1-(1/4)^(j+1))", "(1/4)^(j+1)"));
}

/// Symmetric walk with r_j = 1/(4 j^2).
template <class Real>
ChainSpec<Real> square_holding() {
  return ChainSpec<Real>("R2", {Real(1)}, {Real(0)}, {Real(0)}, {},
                         TailRule::parse("(1-1/(4*j^2))/2", "(1-1/(4*j^2))/2", "1/(4*j^2)"));
}

template <class Real>
WeightSpec<Real> weight_D() {
  return WeightSpec<Real>("D", Real(1), frac<Real>(1, 2), frac<Real>(3, 2), Expression::parse("1", 'x'));
}

template <class Real>
WeightSpec<Real> weight_E() {
  return WeightSpec<Real>("E", Real(1), frac<Real>(1, 2), frac<Real>(1, 2), Expression::parse("2+x", 'x'));
}

template <class Real>
WeightSpec<Real> weight_semicircle() {
  return WeightSpec<Real>("semicircle", Real(1), frac<Real>(1, 2), frac<Real>(1, 2), Expression::parse("1", 'x'));
}

}  // namespace rwpoly::families
