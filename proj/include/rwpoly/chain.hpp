/**
 * @file chain.hpp
 * @brief Birth-death chains with optional killing.
 *
 * A chain is given by a finite prefix of one-step probabilities
 * (p_j, q_j, r_j, kappa_j) and, optionally, closed-form tail rules in the
 * index `j` used for every j past the prefix. A chain without tail rules is
 * "prefix-only" and can only be queried inside its prefix.
 */
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rwpoly/error.hpp"
#include "rwpoly/expression.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

/// Closed-form rules for the coefficients beyond the prefix.
struct TailRule {
  Expression p;
  Expression q;
  Expression r;
  Expression kappa;

  static TailRule parse(const std::string& p, const std::string& q, const std::string& r,
                        const std::string& kappa = "0") {
    return {Expression::parse(p, 'j'), Expression::parse(q, 'j'), Expression::parse(r, 'j'),
            Expression::parse(kappa, 'j')};
  }
};

template <class Real>
struct Step {
  Real p;
  Real q;
  Real r;
  Real kappa;
};

template <class Real>
class ChainSpec {
 public:
  static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

  ChainSpec() = default;

  /// Builds and validates a chain. `kappa` may be empty (no killing).
  ChainSpec(std::string label, std::vector<Real> p, std::vector<Real> q, std::vector<Real> r,
            std::vector<Real> kappa, std::optional<TailRule> tail)
      : label_(std::move(label)),
        p_(std::move(p)),
        q_(std::move(q)),
        r_(std::move(r)),
        kappa_(std::move(kappa)),
        tail_(std::move(tail)) {
    if (kappa_.empty()) kappa_.assign(p_.size(), Real(0));
    validate();
  }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  std::size_t prefix_size() const { return p_.size(); }
  bool has_tail() const { return tail_.has_value(); }
  const std::optional<TailRule>& tail() const { return tail_; }

  /// One past the largest admissible index.
  std::size_t horizon() const { return tail_ ? unbounded : p_.size(); }

  const std::vector<Real>& prefix_p() const { return p_; }
  const std::vector<Real>& prefix_q() const { return q_; }
  const std::vector<Real>& prefix_r() const { return r_; }
  const std::vector<Real>& prefix_kappa() const { return kappa_; }

  Step<Real> at(std::size_t j) const {
    if (j < p_.size()) return {p_[j], q_[j], r_[j], kappa_[j]};
    if (!tail_) {
      throw Error(ErrorCode::malformed_chain, "index " + std::to_string(j) +
                                                  " is beyond the prefix-only chain '" + label_ + "' (length " +
                                                  std::to_string(p_.size()) + ")");
    }
    Real jj = Real(static_cast<long long>(j));
    Step<Real> s{tail_->p.evaluate(jj), tail_->q.evaluate(jj), tail_->r.evaluate(jj), tail_->kappa.evaluate(jj)};
    check_step(j, s);
    return s;
  }

  /// Coefficients 0..n-1 as parallel arrays.
  struct Table {
    std::vector<Real> p, q, r, kappa;
    std::size_t size() const { return p.size(); }
  };

  Table table(std::size_t n) const {
    if (n > horizon()) {
      throw Error(ErrorCode::malformed_chain, "chain '" + label_ + "' has only " + std::to_string(horizon()) +
                                                  " coefficients, " + std::to_string(n) + " requested");
    }
    Table t;
    t.p.reserve(n);
    t.q.reserve(n);
    t.r.reserve(n);
    t.kappa.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      Step<Real> s = at(j);
      t.p.push_back(s.p);
      t.q.push_back(s.q);
      t.r.push_back(s.r);
      t.kappa.push_back(s.kappa);
    }
    return t;
  }

  /// True when some kappa_j may be positive. Exact for tail rules.
  bool has_killing() const {
    for (const auto& k : kappa_) {
      if (k > 0) return true;
    }
    if (tail_) return !tail_->kappa.is_identically_zero(static_cast<long long>(p_.size()));
    return false;
  }

  /// Tolerance for p+q+r+kappa = 1 on floating prefixes.
  static Real sum_tolerance() {
    Real base = Real(1) / Real(100000000000000LL);  // 1e-14
    Real floor = 64 * epsilon<Real>();
    return base > floor ? base : floor;
  }

 private:
  void check_step(std::size_t j, const Step<Real>& s) const {
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::malformed_chain, "chain '" + label_ + "': " + what + " at j=" + std::to_string(j));
    };
    if (!is_finite(s.p) || !is_finite(s.q) || !is_finite(s.r) || !is_finite(s.kappa)) fail("non-finite coefficient");
    if (!(s.p > 0)) fail("p_j must be positive");
    if (j == 0 && s.q != 0) fail("q_0 must be zero");
    if (j > 0 && !(s.q > 0)) fail("q_j must be positive");
    if (s.r < 0) fail("r_j must be nonnegative");
    if (s.kappa < 0) fail("kappa_j must be nonnegative");
  }

  void validate() {
    using std::abs;
    if (q_.size() != p_.size() || r_.size() != p_.size() || kappa_.size() != p_.size()) {
      throw Error(ErrorCode::malformed_chain, "chain '" + label_ + "': prefix lists differ in length");
    }
    if (p_.empty() && !tail_) throw Error(ErrorCode::malformed_chain, "chain '" + label_ + "' is empty");
    for (std::size_t j = 0; j < p_.size(); ++j) {
      Step<Real> s{p_[j], q_[j], r_[j], kappa_[j]};
      check_step(j, s);
      if (abs(s.p + s.q + s.r + s.kappa - 1) > sum_tolerance()) {
        throw Error(ErrorCode::malformed_chain,
                    "chain '" + label_ + "': p+q+r+kappa != 1 at j=" + std::to_string(j));
      }
    }
    if (!tail_) return;
    // Sample the tail: the first stretch densely, then powers of two up to 2^20.
    std::vector<std::size_t> samples;
    const std::size_t start = p_.size();
    for (std::size_t j = start; j < start + 64; ++j) samples.push_back(j);
    for (std::size_t k = 7; k <= 20; ++k) samples.push_back(start + (std::size_t{1} << k));
    for (std::size_t j : samples) {
      Step<Real> s = at(j);
      const rational jr(static_cast<long long>(j));
      auto ep = tail_->p.evaluate_exact(jr);
      auto eq = tail_->q.evaluate_exact(jr);
      auto er = tail_->r.evaluate_exact(jr);
      auto ek = tail_->kappa.evaluate_exact(jr);
      if (ep && eq && er && ek) {
        if (*ep + *eq + *er + *ek != 1) {
          throw Error(ErrorCode::malformed_chain,
                      "chain '" + label_ + "': tail rule p+q+r+kappa != 1 exactly at j=" + std::to_string(j));
        }
      } else if (abs(s.p + s.q + s.r + s.kappa - 1) > sum_tolerance()) {
        throw Error(ErrorCode::malformed_chain,
                    "chain '" + label_ + "': tail rule p+q+r+kappa != 1 at j=" + std::to_string(j));
      }
    }
  }

  std::string label_;
  std::vector<Real> p_, q_, r_, kappa_;
  std::optional<TailRule> tail_;
};

/// Build a chain entirely from tail rules (valid from j = 0).
template <class Real>
ChainSpec<Real> chain_from_rules(std::string label, const std::string& p, const std::string& q,
                                 const std::string& r, const std::string& kappa = "0") {
  return ChainSpec<Real>(std::move(label), {}, {}, {}, {}, TailRule::parse(p, q, r, kappa));
}

}  // namespace rwpoly
