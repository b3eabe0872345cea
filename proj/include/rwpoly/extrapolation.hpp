/**
 * @file extrapolation.hpp
 * @brief Limits of sequences and trinary divergence verdicts for series.
 *
 * `estimate_limit` classifies the tail of a sequence (constant, oscillating
 * between parities, geometrically or algebraically convergent) and applies
 * Aitken's delta-squared process or Levin's u-transform accordingly.
 *
 * `classify_series` turns the summands of a nonnegative series into a
 * diverges / converges / undecided verdict. Exact divergence is not machine
 * decidable, so the verdict is a heuristic with explicit thresholds:
 *   - diverges when a partial sum exceeds `bound`, or when the log-log slope
 *     of the summands over the last decade of indices is >= -1 - margin;
 *   - converges when extrapolated limits taken at n/100, n/10 and n agree
 *     within relative `rel_tol` (Levin's u-transform);
 *   - undecided otherwise.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rwpoly/error.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

enum class LimitKind { finite, divergent, oscillating };
enum class LimitMethod { tail_window, aitken, levin };

inline std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::finite: return "finite";
    case LimitKind::divergent: return "divergent";
    case LimitKind::oscillating: return "oscillating/none";
  }
  return "?";
}

inline std::string to_string(LimitMethod m) {
  switch (m) {
    case LimitMethod::tail_window: return "tail-window";
    case LimitMethod::aitken: return "aitken";
    case LimitMethod::levin: return "levin";
  }
  return "?";
}

template <class Real>
struct LimitEstimate {
  LimitKind kind = LimitKind::finite;
  Real value = 0;  // +-inf for divergent, last tail mean for oscillating
  Real uncertainty = 0;
  LimitMethod method = LimitMethod::tail_window;
  std::size_t n_first = 0;  // index range the estimate was built from
  std::size_t n_last = 0;

  bool is_finite() const { return kind == LimitKind::finite; }
};

namespace detail {

/// Least-squares slope of y against x.
template <class Real>
Real fit_slope(const std::vector<Real>& xs, const std::vector<Real>& ys) {
  const std::size_t m = xs.size();
  if (m < 2) return Real(0);
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= Real(static_cast<long long>(m));
  my /= Real(static_cast<long long>(m));
  Real sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx == 0 ? Real(0) : sxy / sxx;
}

template <class Real>
Real median(std::vector<Real> v) {
  if (v.empty()) return Real(0);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

template <class Real>
Real pow_real(const Real& base, const Real& e) {
  using std::pow;
  return pow(base, e);
}

}  // namespace detail

/// Aitken's delta-squared extrapolant built from s[k-2], s[k-1], s[k].
template <class Real>
Real aitken(const std::vector<Real>& s, std::size_t k) {
  const Real d1 = s[k - 1] - s[k - 2];
  const Real d2 = s[k] - s[k - 1];
  const Real den = d2 - d1;
  if (den == 0) return s[k];
  return s[k] - d2 * d2 / den;
}

/// Levin u-transform of order k from the partial sums s[m] and terms a[m],
/// remainder estimates (m + 1) a[m], on the nodes m = last - j step,
/// j = 0..k. With x_m = 1/(m + 1) the limit is D^k[s/w] / D^k[1/w], D^k the
/// k-th divided difference in x. Widely spaced nodes keep the differences
/// well conditioned at large m.
template <class Real>
Real levin_u(const std::vector<Real>& s, const std::vector<Real>& a, std::size_t last, int k, std::size_t step = 1) {
  const std::size_t span = static_cast<std::size_t>(k) * step;
  if (k < 1 || step < 1 || last < span) return s[last];
  std::vector<Real> x(static_cast<std::size_t>(k) + 1), inv_w(x.size()), sw(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const std::size_t m = last - j * step;
    if (a[m] == 0) return s[last];
    const Real mm = Real(static_cast<long long>(m + 1));
    x[j] = 1 / mm;
    inv_w[j] = a[last] / (mm * a[m]);  // common factor a[last] cancels
    sw[j] = s[m] * inv_w[j];
  }
  const Real h = x[1] - x[0];
  Real num = 0, den = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    Real prod = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i != j) prod *= (x[j] - x[i]) / h;
    }
    num += sw[j] / prod;
    den += inv_w[j] / prod;
  }
  return num / den;
}

/// Node spacing for levin_u at index `last`: about last/(3k), reduced until
/// the terms across the stencil differ by at most a factor 1000.
template <class Real>
std::size_t levin_step(const std::vector<Real>& a, std::size_t last, int k) {
  using std::abs;
  const std::size_t kk = static_cast<std::size_t>(k);
  std::size_t step = std::max<std::size_t>(1, last / (3 * kk));
  while (step > 1 && (a[last] == 0 || abs(a[last - kk * step]) > 1000 * abs(a[last]))) step /= 2;
  return step;
}

/// Limit of a sequence; values[k] is term number first_index + k.
template <class Real>
LimitEstimate<Real> estimate_limit(const std::vector<Real>& values, std::size_t first_index = 0) {
  using std::abs;
  using std::log;
  const std::size_t len = values.size();
  if (len < 16) throw Error(ErrorCode::invalid_argument, "estimate_limit needs at least 16 terms");

  const std::size_t window = std::max<std::size_t>(8, len / 4);
  const std::size_t w0 = len - window;
  LimitEstimate<Real> est;
  est.n_first = first_index + w0;
  est.n_last = first_index + len - 1;

  Real lo = values[w0], hi = values[w0], scale = 0;
  for (std::size_t k = w0; k < len; ++k) {
    lo = std::min(lo, values[k]);
    hi = std::max(hi, values[k]);
    scale = std::max(scale, abs(values[k]));
  }
  const Real tiny = 16 * epsilon<Real>() * std::max(scale, Real(1e-300));

  std::vector<Real> d;
  for (std::size_t k = w0; k + 1 < len; ++k) d.push_back(values[k + 1] - values[k]);

  // Constant tail, up to accumulated rounding drift.
  using std::pow;
  if (hi - lo <= std::max(tiny, pow(epsilon<Real>(), Real(3) / 4) * scale)) {
    est.value = values.back();
    est.uncertainty = hi - lo;
    est.method = LimitMethod::tail_window;
    return est;
  }

  // Parity oscillation: successive differences alternate in sign and the
  // even/odd subsequences sit apart.
  std::size_t alternations = 0, pairs = 0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    if (abs(d[k]) <= tiny || abs(d[k + 1]) <= tiny) continue;
    ++pairs;
    if ((d[k] > 0) != (d[k + 1] > 0)) ++alternations;
  }
  if (pairs > 0 && alternations * 10 >= pairs * 8) {
    Real e_lo = infinity<Real>(), e_hi = -infinity<Real>(), o_lo = infinity<Real>(), o_hi = -infinity<Real>();
    Real e_sum = 0, o_sum = 0;
    long long e_n = 0, o_n = 0;
    for (std::size_t k = w0; k < len; ++k) {
      if ((first_index + k) % 2 == 0) {
        e_lo = std::min(e_lo, values[k]);
        e_hi = std::max(e_hi, values[k]);
        e_sum += values[k];
        ++e_n;
      } else {
        o_lo = std::min(o_lo, values[k]);
        o_hi = std::max(o_hi, values[k]);
        o_sum += values[k];
        ++o_n;
      }
    }
    const Real gap = abs(e_sum / Real(e_n) - o_sum / Real(o_n));
    const Real spread = std::max(e_hi - e_lo, o_hi - o_lo);
    if (gap > 10 * spread + tiny) {
      est.kind = LimitKind::oscillating;
      est.value = (e_sum + o_sum) / Real(e_n + o_n);
      est.uncertainty = gap / 2;
      return est;
    }
  }

  bool increasing = true, decreasing = true;
  for (const Real& dk : d) {
    if (dk > tiny) decreasing = false;
    if (dk < -tiny) increasing = false;
  }

  if (!increasing && !decreasing) {
    Real sum = 0;
    for (std::size_t k = w0; k < len; ++k) sum += values[k];
    est.value = sum / Real(static_cast<long long>(window));
    est.uncertainty = (hi - lo) / 2;
    est.method = LimitMethod::tail_window;
    return est;
  }

  // Geometric or algebraic decay of the differences?
  std::vector<Real> ratios;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    if (d[k] != 0) ratios.push_back(d[k + 1] / d[k]);
  }
  const Real rho = detail::median(ratios);

  if (rho <= Real(0.9)) {
    const std::size_t last = len - 1;
    const Real a0 = aitken(values, last);
    const Real a1 = aitken(values, last - 1);
    const Real a2 = aitken(values, last - 2);
    est.value = a0;
    est.uncertainty = std::max(abs(a0 - a1), abs(a0 - a2)) + tiny;
    est.method = LimitMethod::aitken;
    return est;
  }

  // Algebraic: |d_k| ~ C k^{-(p+1)}.
  std::vector<Real> xs, ys;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] == 0) continue;
    xs.push_back(log(Real(static_cast<long long>(first_index + w0 + k + 1))));
    ys.push_back(log(abs(d[k])));
  }
  const Real p = -detail::fit_slope(xs, ys) - 1;
  if (p <= Real(0.05)) {
    est.kind = LimitKind::divergent;
    est.value = increasing ? infinity<Real>() : -infinity<Real>();
    est.uncertainty = infinity<Real>();
    return est;
  }
  // Levin u on the sequence viewed as partial sums of its differences.
  std::vector<Real> steps(len, Real(0));
  for (std::size_t k = 1; k < len; ++k) steps[k] = values[k] - values[k - 1];
  const std::size_t last = len - 1;
  const Real l0 = levin_u(values, steps, last, 6, levin_step(steps, last, 6));
  const std::size_t mid = w0 + (last - w0) / 2;
  const Real l1 = levin_u(values, steps, mid, 6, levin_step(steps, mid, 6));
  est.value = l0;
  est.uncertainty = 2 * abs(l0 - l1) + tiny;
  est.method = LimitMethod::levin;
  return est;
}

// ---------------------------------------------------------------------------

enum class Verdict { diverges, converges, undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::diverges: return "diverges";
    case Verdict::converges: return "converges";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

template <class Real>
struct DivergenceVerdict {
  std::vector<Real> partial_sums;
  Verdict verdict = Verdict::undecided;
  std::string tail_analysis;
  std::optional<Real> extrapolated;  // set when verdict == converges
};

template <class Real>
struct DivergenceOptions {
  Real bound = Real(100000000);  // 1e8
  Real slope_margin = Real(0.05);
  Real rel_tol = Real(1) / Real(1000000);  // 1e-6
};

/// Verdict for a series of nonnegative summands a_0, a_1, ...
template <class Real>
DivergenceVerdict<Real> classify_series(const std::vector<Real>& summands,
                                        const DivergenceOptions<Real>& opt = {}) {
  using std::abs;
  using std::log;
  DivergenceVerdict<Real> out;
  const std::size_t n = summands.size();
  CompensatedSum<Real> acc;
  out.partial_sums.reserve(n);
  bool overflow = false;
  for (const Real& a : summands) {
    if (a < 0) throw Error(ErrorCode::invalid_argument, "classify_series expects nonnegative summands");
    if (!is_finite(a)) overflow = true;
    if (overflow) {
      out.partial_sums.push_back(infinity<Real>());
      continue;
    }
    acc.add(a);
    out.partial_sums.push_back(acc.value());
  }
  if (overflow) {
    out.verdict = Verdict::diverges;
    out.tail_analysis = "summand overflows the working precision";
    return out;
  }
  if (n < 8) {
    out.tail_analysis = "too few terms";
    return out;
  }
  const Real last_sum = out.partial_sums.back();
  if (last_sum > opt.bound) {
    out.verdict = Verdict::diverges;
    out.tail_analysis = "partial sums exceed bound " + format_real(opt.bound);
    return out;
  }

  const std::size_t decade = std::max<std::size_t>(1, n / 10);
  bool tail_zero = true;
  for (std::size_t j = decade; j < n; ++j) {
    if (summands[j] != 0) tail_zero = false;
  }
  if (tail_zero) {
    out.verdict = Verdict::converges;
    out.extrapolated = last_sum;
    out.tail_analysis = "summands vanish identically over the last decade";
    return out;
  }

  // Log-log slope of the summands over [k/10, k).
  auto slope_upto = [&](std::size_t k) {
    std::vector<Real> xs, ys;
    for (std::size_t j = std::max<std::size_t>(1, k / 10); j < k; ++j) {
      if (summands[j] > 0) {
        xs.push_back(log(Real(static_cast<long long>(j))));
        ys.push_back(log(summands[j]));
      }
    }
    return detail::fit_slope(xs, ys);
  };
  const Real slope = slope_upto(n);
  if (slope >= -1 - opt.slope_margin) {
    out.verdict = Verdict::diverges;
    out.tail_analysis = "summands decay no faster than c/j (log-log slope " +
                        format_real(static_cast<double>(slope)) + ")";
    return out;
  }

  // Tail-corrected limit using the first k terms.
  auto limit_upto = [&](std::size_t k) -> Real {
    if (k < 8) return out.partial_sums[k - 1];
    if (slope_upto(k) >= -1) return infinity<Real>();
    return levin_u(out.partial_sums, summands, k - 1, 6, levin_step(summands, k - 1, 6));
  };

  std::size_t k1 = n / 100, k2 = n / 10, k3 = n;
  if (k1 < 8) {
    k1 = std::max<std::size_t>(8, n / 4);
    k2 = std::max<std::size_t>(k1 + 1, n / 2);
  }
  const Real e1 = limit_upto(k1), e2 = limit_upto(k2), e3 = limit_upto(k3);
  const Real ref = std::max(abs(e3), Real(1e-300));
  if (is_finite(e3) && is_finite(e2) && is_finite(e1) && abs(e3 - e2) <= opt.rel_tol * ref &&
      abs(e2 - e1) <= opt.rel_tol * ref) {
    out.verdict = Verdict::converges;
    out.extrapolated = e3;
    out.tail_analysis = "tail-corrected limits stable over two decades (slope " +
                        format_real(static_cast<double>(slope)) + ")";
    return out;
  }
  out.tail_analysis = "no stable extrapolation (slope " + format_real(static_cast<double>(slope)) + ")";
  return out;
}

}  // namespace rwpoly
