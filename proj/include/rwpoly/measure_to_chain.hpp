/**
 * @file measure_to_chain.hpp
 * @brief From a weight (eta - x)^alpha (eta + x)^beta s(x) on [-eta, eta]
 * to a birth-death chain: discretization, discrete Stieltjes procedure and
 * the solve for (p, q, r).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/expression.hpp"
#include "rwpoly/numeric.hpp"
#include "rwpoly/spectral_measure.hpp"
#include "rwpoly/tridiagonal.hpp"

namespace rwpoly {

template <class Real>
struct WeightSpec {
  std::string label;
  Real eta = 1;
  Real alpha = 0;
  Real beta = 0;
  Expression smooth = Expression(rational(1));  // in x
  std::vector<std::pair<Real, Real>> atoms;     // (location, mass)

  WeightSpec() = default;
  WeightSpec(std::string label_, Real eta_, Real alpha_, Real beta_, Expression smooth_,
             std::vector<std::pair<Real, Real>> atoms_ = {})
      : label(std::move(label_)), eta(eta_), alpha(alpha_), beta(beta_), smooth(std::move(smooth_)), atoms(std::move(atoms_)) {
    validate();
  }

  Real smooth_at(const Real& x) const { return smooth.evaluate(x); }

  /// Unnormalized density (eta - x)^alpha (eta + x)^beta s(x).
  Real density(const Real& x) const {
    using std::pow;
    return pow(eta - x, alpha) * pow(eta + x, beta) * smooth_at(x);
  }

  Real atom_mass() const {
    Real m = 0;
    for (const auto& a : atoms) m += a.second;
    return m;
  }

  void validate() const {
    auto fail = [&](const std::string& what) { throw Error(ErrorCode::invalid_argument, "weight '" + label + "': " + what); };
    if (!(eta > 0) || eta > 1) fail("eta must lie in (0, 1]");
    if (alpha < 0 || beta < 0) fail("alpha and beta must be nonnegative");
    if (smooth.variable_name() != 'x' && !smooth.is_constant()) fail("smooth factor must be an expression in x");
    if (!(smooth_at(eta) > 0)) fail("smooth factor must be positive at eta");
    if (smooth_at(-eta) < 0) fail("smooth factor must be nonnegative at -eta");
    for (int k = 1; k < 64; ++k) {
      const Real x = -eta + 2 * eta * Real(k) / 64;
      if (!(smooth_at(x) > 0)) fail("smooth factor must be positive on (-eta, eta)");
    }
    for (const auto& a : atoms) {
      if (!(a.second > 0)) fail("atom masses must be positive");
      if (a.first < -1 || a.first > 1) fail("atoms must lie in [-1, 1]");
    }
    if (!(atom_mass() < 1)) fail("atoms carry all the mass");
  }
};

namespace detail {

/// Panels on [0, pi] in the angle variable: `uniform` equal panels with the
/// two end panels replaced by `levels` geometrically shrinking pieces.
template <class Real>
std::vector<std::pair<Real, Real>> angle_panels(std::size_t uniform, std::size_t levels, const Real& ratio) {
  const Real pi = boost::math::constants::pi<Real>();
  const Real h = pi / Real(static_cast<long long>(uniform));
  std::vector<std::pair<Real, Real>> out;
  // left end [0, h]
  std::vector<Real> cuts{h};
  Real c = h;
  for (std::size_t l = 0; l < levels; ++l) {
    c *= ratio;
    cuts.push_back(c);
  }
  cuts.push_back(Real(0));
  std::reverse(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) out.push_back({cuts[k], cuts[k + 1]});
  for (std::size_t k = 1; k + 1 < uniform; ++k) out.push_back({h * Real(static_cast<long long>(k)), h * Real(static_cast<long long>(k + 1))});
  // right end mirrored
  const std::size_t left_count = cuts.size() - 1;
  for (std::size_t k = left_count; k-- > 0;) out.push_back({pi - out[k].second, pi - out[k].first});
  return out;
}

}  // namespace detail

inline constexpr std::size_t panel_order = 60;
inline constexpr std::size_t refinement_levels = 12;

/// Composite Gauss-Legendre discretization in the angle x = eta cos(theta),
/// where the density becomes
///   2 eta (2 eta)^{alpha+beta} sin^{2 alpha+1}(theta/2) cos^{2 beta+1}(theta/2) s(eta cos theta).
/// Uses about M nodes (at least 60 * (2 * 12 + 1)). Atoms are appended.
/// `normalization` receives the integral of the unnormalized density.
template <class Real>
DiscreteMeasure<Real> discretize_weight(const WeightSpec<Real>& spec, std::size_t M, Real* normalization = nullptr) {
  using std::cos;
  using std::pow;
  using std::sin;
  if (M < 64) throw Error(ErrorCode::invalid_argument, "discretize_weight needs M >= 64");
  spec.validate();
  const std::size_t uniform = std::max<std::size_t>(3, M / panel_order > 2 * refinement_levels ? M / panel_order - 2 * refinement_levels : 3);
  const auto panels = detail::angle_panels<Real>(uniform, refinement_levels, Real(15) / 100);
  const auto [gx, gw] = gauss_legendre<Real>(panel_order);

  const Real two_eta = 2 * spec.eta;
  const Real pref = two_eta * pow(two_eta, spec.alpha + spec.beta);
  const Real ea = 2 * spec.alpha + 1, eb = 2 * spec.beta + 1;
  std::vector<std::pair<Real, Real>> pts;
  pts.reserve(panels.size() * panel_order + spec.atoms.size());
  CompensatedSum<Real> total;
  for (const auto& [a, b] : panels) {
    const Real half = (b - a) / 2, mid = (a + b) / 2;
    for (std::size_t k = 0; k < panel_order; ++k) {
      const Real th = mid + half * gx[k];
      const Real w = half * gw[k] * pref * pow(sin(th / 2), ea) * pow(cos(th / 2), eb) * spec.smooth_at(spec.eta * cos(th));
      if (w > 0) {
        pts.push_back({spec.eta * cos(th), w});
        total.add(w);
      }
    }
  }
  const Real Z = total.value();
  if (normalization) *normalization = Z;
  const Real scale = (1 - spec.atom_mass()) / Z;
  for (auto& p : pts) p.second *= scale;
  for (const auto& a : spec.atoms) pts.push_back(a);
  std::sort(pts.begin(), pts.end());

  DiscreteMeasure<Real> m;
  for (const auto& p : pts) {
    if (!m.nodes.empty() && p.first == m.nodes.back()) {
      m.weights.back() += p.second;
    } else {
      m.nodes.push_back(p.first);
      m.weights.push_back(p.second);
    }
  }
  CompensatedSum<Real> mass;
  for (const auto& w : m.weights) mass.add(w);
  m.total_mass = mass.value();
  m.source = "from-weight-spec(M=" + std::to_string(m.size()) + ")";
  return m;
}

/// b_0..b_{n-1} and a_1..a_{n-1} of the orthonormal recurrence
///   x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1};
/// a[k] stores a_{k+1}, the coupling of k and k+1.
template <class Real>
struct RecurrenceCoefficients {
  std::vector<Real> a;
  std::vector<Real> b;
  std::size_t length() const { return b.size(); }
};

/// Discrete Stieltjes procedure on vectors v_k(x_i) = sqrt(w_i) p_k(x_i).
template <class Real>
RecurrenceCoefficients<Real> stieltjes_recurrence(const DiscreteMeasure<Real>& m, std::size_t n) {
  using std::sqrt;
  if (n == 0 || 2 * n > m.size()) {
    throw Error(ErrorCode::invalid_argument, "stieltjes_recurrence needs 1 <= n <= nodes/2");
  }
  const std::size_t M = m.size();
  std::vector<Real> prev(M, Real(0)), cur(M), next(M);
  Real mass = 0;
  for (std::size_t i = 0; i < M; ++i) mass += m.weights[i];
  for (std::size_t i = 0; i < M; ++i) cur[i] = sqrt(m.weights[i] / mass);
  RecurrenceCoefficients<Real> rc;
  Real a_prev = 0;
  const Real tiny = sqrt(std::numeric_limits<Real>::min());
  for (std::size_t k = 0; k < n; ++k) {
    CompensatedSum<Real> bk;
    for (std::size_t i = 0; i < M; ++i) bk.add(m.nodes[i] * cur[i] * cur[i]);
    const Real b = bk.value();
    rc.b.push_back(b);
    if (k + 1 == n) break;
    CompensatedSum<Real> norm;
    for (std::size_t i = 0; i < M; ++i) {
      next[i] = (m.nodes[i] - b) * cur[i] - a_prev * prev[i];
      norm.add(next[i] * next[i]);
    }
    const Real a = sqrt(norm.value());
    if (!(a > tiny)) {
      throw Error(ErrorCode::breakdown, "Stieltjes procedure broke down at index " + std::to_string(k + 1));
    }
    for (std::size_t i = 0; i < M; ++i) next[i] /= a;
    rc.a.push_back(a);
    a_prev = a;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return rc;
}

/// Recurrence coefficients of a chain: b_k = r_k, a_k = sqrt(p_{k-1} q_k).
template <class Real>
RecurrenceCoefficients<Real> recurrence_from_chain(const ChainSpec<Real>& chain, std::size_t n) {
  const auto J = jacobi_matrix<Real>(chain.table(n), n);
  return {J.off, J.diag};
}

template <class Real>
struct RecoveryFailure {
  std::size_t index = 0;
  std::string reason;  // "r_k < 0", "p_k <= 0", "q_k <= 0"
};

/// Result of solving p_{k-1} q_k = a_k^2, r_k = b_k, p_k + q_k + r_k = 1.
/// `chain` holds the valid prefix; `failure` names the first violation.
template <class Real>
struct ChainRecovery {
  std::optional<ChainSpec<Real>> chain;
  std::size_t verified_through = 0;  // number of indices satisfying the conditions
  std::optional<RecoveryFailure<Real>> failure;
  std::size_t snapped = 0;  // |b_k| <= zero_tol set to 0

  bool ok() const { return !failure.has_value(); }
};

/// `zero_tol`: diagonal entries with |b_k| <= zero_tol are taken as 0.
template <class Real>
ChainRecovery<Real> chain_from_recurrence(const RecurrenceCoefficients<Real>& rc, const std::string& label = "recovered",
                                          const Real& zero_tol = Real(1) / Real(10000000000000LL)) {
  using std::abs;
  ChainRecovery<Real> out;
  std::vector<Real> p, q, r;
  const std::size_t n = rc.length();
  for (std::size_t k = 0; k < n; ++k) {
    Real b = rc.b[k];
    if (abs(b) <= zero_tol && b != 0) {
      b = 0;
      ++out.snapped;
    }
    if (b < 0) {
      out.failure = RecoveryFailure<Real>{k, "r_" + std::to_string(k) + " < 0"};
      break;
    }
    const Real qk = k == 0 ? Real(0) : rc.a[k - 1] * rc.a[k - 1] / p[k - 1];
    if (k > 0 && !(qk > 0)) {
      out.failure = RecoveryFailure<Real>{k, "q_" + std::to_string(k) + " <= 0"};
      break;
    }
    const Real pk = 1 - b - qk;
    if (!(pk > 0)) {
      out.failure = RecoveryFailure<Real>{k, "p_" + std::to_string(k) + " <= 0"};
      break;
    }
    p.push_back(pk);
    q.push_back(qk);
    r.push_back(b);
  }
  out.verified_through = p.size();
  if (!p.empty()) out.chain.emplace(label, std::move(p), std::move(q), std::move(r), std::vector<Real>{}, std::nullopt);
  return out;
}

}  // namespace rwpoly
