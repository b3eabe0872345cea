/**
 * @file spectral_measure.hpp
 * @brief Discrete approximations of the random walk measure psi and the
 * quantities read off from it: moments, C_n, transition probabilities.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rwpoly/chain.hpp"
#include "rwpoly/chain_model.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/numeric.hpp"
#include "rwpoly/polynomials.hpp"
#include "rwpoly/tridiagonal.hpp"

namespace rwpoly {

template <class Real>
struct DiscreteMeasure {
  std::vector<Real> nodes;    // strictly increasing
  std::vector<Real> weights;  // positive
  std::string source;         // "from-chain(N=...)" or "from-weight-spec(M=...)"
  Real total_mass = 0;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss rule of the N x N Jacobi block (Golub-Welsch).
template <class Real>
DiscreteMeasure<Real> quadrature_from_chain(const ChainSpec<Real>& chain, std::size_t N) {
  if (N < 2) throw Error(ErrorCode::invalid_argument, "quadrature_from_chain needs N >= 2");
  const auto t = chain.table(N);
  auto [nodes, weights] = gauss_rule(jacobi_matrix<Real>(t, N));
  DiscreteMeasure<Real> m;
  m.nodes = std::move(nodes);
  m.weights = std::move(weights);
  m.source = "from-chain(N=" + std::to_string(N) + ")";
  CompensatedSum<Real> mass;
  for (const Real& w : m.weights) mass.add(w);
  m.total_mass = mass.value();
  return m;
}

template <class Real>
Real moment(const DiscreteMeasure<Real>& m, std::size_t n) {
  CompensatedSum<Real> acc;
  for (std::size_t k = 0; k < m.size(); ++k) acc.add(m.weights[k] * pow_int(m.nodes[k], n));
  return acc.value();
}

template <class Real>
void write_csv(std::ostream& os, const DiscreteMeasure<Real>& m) {
  os << "node,weight\n";
  for (std::size_t k = 0; k < m.size(); ++k) os << format_real(m.nodes[k]) << ',' << format_real(m.weights[k]) << '\n';
}

// ---------------------------------------------------------------------------
// C_n(psi) = sum_{x<0} w (-x)^n / sum_{x>0} w x^n

template <class Real>
struct CnValue {
  Real value = 0;
  Real log_value = 0;      // log of value (-inf when the negative sum vanishes)
  Real log_negative = 0;   // log of the negative-side sum
  Real log_positive = 0;   // log of the positive-side sum
};

template <class Real>
CnValue<Real> compute_Cn(const DiscreteMeasure<Real>& m, std::size_t n) {
  using std::abs;
  using std::exp;
  using std::log;
  LogSum<Real> neg, pos;
  const Real nn = Real(static_cast<long long>(n));
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Real x = m.nodes[k];
    if (x == 0) continue;
    const Real lt = log(m.weights[k]) + nn * log(abs(x));
    (x < 0 ? neg : pos).add_log(lt);
  }
  if (pos.empty()) throw Error(ErrorCode::denominator_underflow, "measure has no positive node");
  CnValue<Real> c;
  c.log_negative = neg.log();
  c.log_positive = pos.log();
  c.log_value = c.log_negative - c.log_positive;
  c.value = neg.empty() ? Real(0) : exp(c.log_value);
  return c;
}

/// C_0..C_{n_max} by repeated multiplication with |x|, rescaled as needed.
template <class Real>
std::vector<Real> Cn_sequence(const DiscreteMeasure<Real>& m, std::size_t n_max) {
  using std::abs;
  using std::ldexp;
  std::vector<Real> pos_x, pos_w, neg_x, neg_w;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m.nodes[k] > 0) {
      pos_x.push_back(m.nodes[k]);
      pos_w.push_back(m.weights[k]);
    } else if (m.nodes[k] < 0) {
      neg_x.push_back(-m.nodes[k]);
      neg_w.push_back(m.weights[k]);
    }
  }
  if (pos_x.empty()) throw Error(ErrorCode::denominator_underflow, "measure has no positive node");
  const Real small = ldexp(Real(1), -256);
  std::vector<Real> out;
  out.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    CompensatedSum<Real> sp, sn;
    Real top = 0;
    for (const Real& w : pos_w) {
      sp.add(w);
      top = std::max(top, w);
    }
    for (const Real& w : neg_w) sn.add(w);
    out.push_back(sn.value() / sp.value());
    for (std::size_t k = 0; k < pos_w.size(); ++k) pos_w[k] *= pos_x[k];
    for (std::size_t k = 0; k < neg_w.size(); ++k) neg_w[k] *= neg_x[k];
    if (top < small) {
      for (auto& w : pos_w) w = ldexp(w, 256);
      for (auto& w : neg_w) w = ldexp(w, 256);
    }
  }
  return out;
}

/// L_n(f, psi) = int x^n f dpsi / int x^n dpsi.
template <class Real>
Real L_functional(const DiscreteMeasure<Real>& m, const std::function<Real(const Real&)>& f, std::size_t n) {
  using std::abs;
  using std::exp;
  using std::log;
  const Real nn = Real(static_cast<long long>(n));
  Real shift = -infinity<Real>();
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m.nodes[k] != 0 || n == 0) {
      const Real lx = n == 0 ? Real(0) : nn * log(abs(m.nodes[k]));
      shift = std::max(shift, log(m.weights[k]) + lx);
    }
  }
  CompensatedSum<Real> num, den, den_abs;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Real x = m.nodes[k];
    if (x == 0 && n > 0) continue;
    const Real lx = n == 0 ? Real(0) : nn * log(abs(x));
    Real term = exp(log(m.weights[k]) + lx - shift);
    if (x < 0 && n % 2 == 1) term = -term;
    num.add(term * f(x));
    den.add(term);
    den_abs.add(abs(term));
  }
  if (abs(den.value()) <= 64 * epsilon<Real>() * Real(static_cast<long long>(m.size())) * den_abs.value()) {
    throw Error(ErrorCode::zero_denominator, "int x^" + std::to_string(n) + " dpsi vanishes");
  }
  return num.value() / den.value();
}

/// f(x) = sum_k c_k Q_k(x) for the given chain.
template <class Real>
std::function<Real(const Real&)> q_combination(const ChainSpec<Real>& chain, std::vector<Real> coeffs) {
  const auto t = chain.table(coeffs.empty() ? 0 : coeffs.size() - 1);
  return [t, coeffs = std::move(coeffs)](const Real& x) {
    Real prev = 0, cur = 1, acc = 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      acc += coeffs[k] * cur;
      if (k + 1 < coeffs.size()) {
        const Real next = ((x - t.r[k]) * cur - t.q[k] * prev) / t.p[k];
        prev = cur;
        cur = next;
      }
    }
    return acc;
  };
}

// ---------------------------------------------------------------------------
// Transition probabilities.

struct MonteCarloEstimate {
  double estimate = 0;
  double std_error = 0;
  std::size_t samples = 0;
};

template <class Real>
struct TransitionQuery {
  std::size_t i = 0, j = 0, n = 0;
  Real value_spectral = 0;
  Real value_matrix = 0;
  std::optional<MonteCarloEstimate> value_mc;
};

/// Row i of P^n restricted to columns 0..j_max, for every n = 0..n_max.
/// The state space is truncated at i + n_max + 2, which is exact.
template <class Real>
std::vector<std::vector<Real>> matrix_power_rows(const ChainSpec<Real>& chain, std::size_t i, std::size_t j_max,
                                                 std::size_t n_max) {
  const std::size_t D = i + n_max + 2;
  if (D > chain.horizon()) {
    throw Error(ErrorCode::truncation_too_small, "chain '" + chain.label() + "' has " + std::to_string(chain.horizon()) +
                                                     " states, " + std::to_string(D) + " needed for exact matrix powers");
  }
  const auto t = chain.table(D);
  std::vector<Real> v(D, Real(0)), w(D, Real(0));
  v[i] = 1;
  std::vector<std::vector<Real>> rows;
  rows.reserve(n_max + 1);
  auto snapshot = [&] {
    std::vector<Real> row(j_max + 1, Real(0));
    for (std::size_t j = 0; j <= j_max && j < D; ++j) row[j] = v[j];
    rows.push_back(std::move(row));
  };
  snapshot();
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t k = 0; k < D; ++k) {
      Real acc = v[k] * t.r[k];
      if (k > 0) acc += v[k - 1] * t.p[k - 1];
      if (k + 1 < D) acc += v[k + 1] * t.q[k + 1];
      w[k] = acc;
    }
    std::swap(v, w);
    snapshot();
  }
  return rows;
}

/// P_ij(n) = pi_j sum_k w_k x_k^n Q_i(x_k) Q_j(x_k) for all i <= i_max,
/// j <= j_max, n <= n_max from one quadrature.
template <class Real>
std::vector<TransitionQuery<Real>> transition_grid(const ChainSpec<Real>& chain, const DiscreteMeasure<Real>& m,
                                                   std::size_t i_max, std::size_t j_max, std::size_t n_max) {
  const std::size_t deg = std::max(i_max, j_max);
  const auto t = chain.table(deg + 1);
  const auto pi = potential_coefficients(chain, deg);
  // Q_0..Q_deg at every node.
  std::vector<std::vector<Real>> Q(m.size(), std::vector<Real>(deg + 1));
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Real x = m.nodes[k];
    Real prev = 0, cur = 1;
    Q[k][0] = 1;
    for (std::size_t d = 0; d < deg; ++d) {
      const Real next = ((x - t.r[d]) * cur - t.q[d] * prev) / t.p[d];
      prev = cur;
      cur = next;
      Q[k][d + 1] = cur;
    }
  }
  std::vector<std::vector<std::vector<Real>>> mat(i_max + 1);
  for (std::size_t i = 0; i <= i_max; ++i) mat[i] = matrix_power_rows(chain, i, j_max, n_max);

  std::vector<TransitionQuery<Real>> out;
  std::vector<Real> wx(m.weights);  // w_k x_k^n
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t i = 0; i <= i_max; ++i) {
      for (std::size_t j = 0; j <= j_max; ++j) {
        CompensatedSum<Real> acc;
        for (std::size_t k = 0; k < m.size(); ++k) acc.add(wx[k] * Q[k][i] * Q[k][j]);
        TransitionQuery<Real> tq;
        tq.i = i;
        tq.j = j;
        tq.n = n;
        tq.value_spectral = pi.values[j] * acc.value();
        tq.value_matrix = mat[i][n][j];
        out.push_back(tq);
      }
    }
    for (std::size_t k = 0; k < m.size(); ++k) wx[k] *= m.nodes[k];
  }
  return out;
}

template <class Real>
TransitionQuery<Real> transition_probability(const ChainSpec<Real>& chain, std::size_t i, std::size_t j, std::size_t n,
                                             std::size_t N) {
  if (2 * N < n + i + j + 2) {
    throw Error(ErrorCode::truncation_too_small, "quadrature size N=" + std::to_string(N) + " cannot integrate degree " +
                                                     std::to_string(n + i + j) + " exactly");
  }
  const auto m = quadrature_from_chain(chain, N);
  const auto pi = potential_coefficients(chain, j);
  const auto qi = q_combination(chain, [&] {
    std::vector<Real> c(i + 1, Real(0));
    c[i] = 1;
    return c;
  }());
  const auto qj = q_combination(chain, [&] {
    std::vector<Real> c(j + 1, Real(0));
    c[j] = 1;
    return c;
  }());
  CompensatedSum<Real> acc;
  for (std::size_t k = 0; k < m.size(); ++k) {
    acc.add(m.weights[k] * pow_int(m.nodes[k], n) * qi(m.nodes[k]) * qj(m.nodes[k]));
  }
  TransitionQuery<Real> tq;
  tq.i = i;
  tq.j = j;
  tq.n = n;
  tq.value_spectral = pi.values[j] * acc.value();
  tq.value_matrix = matrix_power_rows(chain, i, j, n)[n][j];
  return tq;
}

template <class Real>
void write_csv(std::ostream& os, const std::vector<TransitionQuery<Real>>& grid) {
  os << "i,j,n,spectral,matrix,mc_est,mc_se\n";
  for (const auto& q : grid) {
    os << q.i << ',' << q.j << ',' << q.n << ',' << format_real(q.value_spectral) << ',' << format_real(q.value_matrix)
       << ',';
    if (q.value_mc) {
      os << format_real(q.value_mc->estimate) << ',' << format_real(q.value_mc->std_error);
    } else {
      os << ',';
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Strong ratio limits.

template <class Real>
struct SrlpComparison {
  Real predicted = 0;
  std::vector<Real> empirical;  // P_ij(n)/P_kl(n) for n = 0..horizon, NaN where P_kl(n) = 0
};

template <class Real>
SrlpComparison<Real> srlp_predicted_limit(const ChainSpec<Real>& chain, std::size_t i, std::size_t j, std::size_t k,
                                          std::size_t l, const Real& eta, std::size_t horizon) {
  using std::abs;
  const std::size_t deg = std::max({i, j, k, l});
  const auto tr = eval_Q(chain, deg, eta);
  const auto pi = potential_coefficients(chain, deg);
  auto Qv = [&](std::size_t d) { return tr.values[d]; };
  if (Qv(k).sign <= 0 || Qv(l).sign <= 0) {
    throw Error(ErrorCode::division_sentinel, "Q_k or Q_l vanishes at the supplied eta; the edge estimate is too low");
  }
  SrlpComparison<Real> out;
  const auto num = Qv(i), num2 = Qv(j), den = Qv(k), den2 = Qv(l);
  const int sign = num.sign * num2.sign;
  using std::exp;
  out.predicted = sign == 0 ? Real(0)
                            : Real(sign) * exp(pi.logs[j].log_magnitude + num.log_magnitude + num2.log_magnitude -
                                               pi.logs[l].log_magnitude - den.log_magnitude - den2.log_magnitude);
  const auto rows_i = matrix_power_rows(chain, i, j, horizon);
  const auto rows_k = matrix_power_rows(chain, k, l, horizon);
  out.empirical.resize(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) {
    const Real d = rows_k[n][l];
    out.empirical[n] = d == 0 ? std::numeric_limits<Real>::quiet_NaN() : rows_i[n][j] / d;
  }
  return out;
}

}  // namespace rwpoly
