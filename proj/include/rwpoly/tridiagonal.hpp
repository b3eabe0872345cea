/**
 * @file tridiagonal.hpp
 * @brief Symmetric tridiagonal (Jacobi) matrices: Sturm counts, extreme
 * eigenvalues by bisection and Gauss rules by implicit QL.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

/// diag[k], k < n; off[k] couples k and k+1, k < n-1.
template <class Real>
struct Jacobi {
  std::vector<Real> diag;
  std::vector<Real> off;
  std::size_t size() const { return diag.size(); }
};

/// Leading N x N block of the chain's Jacobi operator:
/// diagonal r_j, off-diagonal sqrt(p_{j-1} q_j).
template <class Real>
Jacobi<Real> jacobi_matrix(const typename ChainSpec<Real>::Table& t, std::size_t N) {
  using std::sqrt;
  if (N > t.size()) throw Error(ErrorCode::truncation_too_small, "coefficient table shorter than the requested truncation");
  Jacobi<Real> J;
  J.diag.assign(t.r.begin(), t.r.begin() + static_cast<std::ptrdiff_t>(N));
  J.off.resize(N > 0 ? N - 1 : 0);
  for (std::size_t k = 1; k < N; ++k) J.off[k - 1] = sqrt(t.p[k - 1] * t.q[k]);
  return J;
}

/// Number of eigenvalues strictly below x (LDL^T inertia).
template <class Real>
std::size_t sturm_count(const Jacobi<Real>& J, const Real& x) {
  using std::abs;
  const std::size_t n = J.size();
  const Real tiny = epsilon<Real>() * epsilon<Real>();
  std::size_t count = 0;
  Real d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    Real v = J.diag[k] - x;
    if (k > 0) v -= J.off[k - 1] * J.off[k - 1] / d;
    if (v == 0) v = -tiny;
    if (v < 0) ++count;
    d = v;
  }
  return count;
}

/// Gershgorin interval containing the spectrum.
template <class Real>
std::pair<Real, Real> gershgorin(const Jacobi<Real>& J) {
  using std::abs;
  Real lo = infinity<Real>(), hi = -infinity<Real>();
  for (std::size_t k = 0; k < J.size(); ++k) {
    Real rad = 0;
    if (k > 0) rad += abs(J.off[k - 1]);
    if (k + 1 < J.size()) rad += abs(J.off[k]);
    lo = std::min(lo, J.diag[k] - rad);
    hi = std::max(hi, J.diag[k] + rad);
  }
  return {lo, hi};
}

/// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
template <class Real>
Real kth_eigenvalue(const Jacobi<Real>& J, std::size_t k) {
  using std::abs;
  auto [lo, hi] = gershgorin(J);
  const Real width = hi - lo;
  lo -= width * epsilon<Real>() + epsilon<Real>();
  hi += width * epsilon<Real>() + epsilon<Real>();
  // invariant: count(lo) <= k < count(hi)
  for (int it = 0; it < 400; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(J, mid) <= k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

template <class Real>
Real largest_eigenvalue(const Jacobi<Real>& J) {
  return kth_eigenvalue(J, J.size() - 1);
}

template <class Real>
Real smallest_eigenvalue(const Jacobi<Real>& J) {
  return kth_eigenvalue(J, 0);
}

/// Nodes (ascending) and weights of the Gauss rule of J: eigenvalues and
/// squared first eigenvector components, by implicit QL with Wilkinson-type
/// shifts tracking only the first row of the eigenvector matrix.
template <class Real>
std::pair<std::vector<Real>, std::vector<Real>> gauss_rule(const Jacobi<Real>& J) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = J.size();
  std::vector<Real> d = J.diag;
  std::vector<Real> e(n, Real(0));
  for (std::size_t k = 0; k + 1 < n; ++k) e[k] = J.off[k];
  std::vector<Real> z(n, Real(0));
  if (n > 0) z[0] = 1;
  const Real eps = epsilon<Real>();
  auto hyp = [](const Real& a, const Real& b) {
    using std::sqrt;
    using std::abs;
    const Real aa = abs(a), bb = abs(b);
    if (aa > bb) return aa * sqrt(1 + (bb / aa) * (bb / aa));
    if (bb == 0) return Real(0);
    return bb * sqrt(1 + (aa / bb) * (aa / bb));
  };

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const Real dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error(ErrorCode::eigensolver_failure, "implicit QL did not converge");
        Real g = (d[l + 1] - d[l]) / (2 * e[l]);
        Real r = hyp(g, Real(1));
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? abs(r) : -abs(r)));
        Real s = 1, c = 1, p = 0;
        bool underflow = false;
        std::size_t i = m;
        while (i-- > l) {
          Real f = s * e[i];
          const Real b = c * e[i];
          r = hyp(f, g);
          e[i + 1] = r;
          if (r == 0) {
            d[i + 1] -= p;
            e[m] = 0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  std::vector<Real> nodes(n), weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    nodes[k] = d[order[k]];
    weights[k] = z[order[k]] * z[order[k]];
  }
  return {nodes, weights};
}

/// n-point Gauss-Legendre rule on [-1, 1].
template <class Real>
std::pair<std::vector<Real>, std::vector<Real>> gauss_legendre(std::size_t n) {
  using std::sqrt;
  Jacobi<Real> J;
  J.diag.assign(n, Real(0));
  J.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) {
    const Real kk = Real(static_cast<long long>(k));
    J.off[k - 1] = kk / sqrt(4 * kk * kk - 1);
  }
  auto rule = gauss_rule(J);
  for (auto& w : rule.second) w *= 2;
  // Symmetrize: the rule is exactly symmetric about 0.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const Real x = (rule.first[n - 1 - k] - rule.first[k]) / 2;
    const Real w = (rule.second[n - 1 - k] + rule.second[k]) / 2;
    rule.first[k] = -x;
    rule.first[n - 1 - k] = x;
    rule.second[k] = w;
    rule.second[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.first[n / 2] = 0;
  return rule;
}

}  // namespace rwpoly
