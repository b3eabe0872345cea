/**
 * @file numeric.hpp
 * @brief Real-number backends, overflow-safe representations and summation.
 *
 * Every numeric template in rwpoly is parameterised on a `Real` type. Three
 * backends are wired in:
 *   - `double` (15-16 significant digits),
 *   - `quad` (IEEE binary128 through libquadmath, 34 digits, the default),
 *   - `mpfr_real` (MPFR, any number of digits chosen at run time).
 *
 * `with_precision` maps a requested number of decimal digits onto the
 * cheapest backend that provides it.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <system_error>
#include <vector>

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "rwpoly/error.hpp"

namespace rwpoly {

using quad = boost::multiprecision::float128;
using mpfr_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                                boost::multiprecision::et_off>;

inline constexpr int default_digits = 34;

template <class Real>
Real infinity() {
  return std::numeric_limits<Real>::infinity();
}

template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

/// Decimal digits actually carried by `Real` (run-time for MPFR).
template <class Real>
int working_digits() {
  if constexpr (std::is_same_v<Real, mpfr_real>) {
    return static_cast<int>(mpfr_real::default_precision());
  } else {
    return std::numeric_limits<Real>::digits10;
  }
}

template <class Real>
Real from_rational(long long num, long long den = 1) {
  return Real(num) / Real(den);
}

/// x^n by repeated squaring.
template <class Real>
Real pow_int(Real x, std::size_t n) {
  Real acc = 1;
  while (n > 0) {
    if (n & 1) acc *= x;
    x *= x;
    n >>= 1;
  }
  return acc;
}

template <class Real>
bool is_finite(const Real& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

/// Value carried as sign and natural log of the magnitude; sign 0 means an
/// exact zero with log magnitude -inf.
template <class Real>
struct SignedLog {
  int sign = 0;
  Real log_magnitude = -infinity<Real>();

  static SignedLog from_value(const Real& v) {
    using std::abs;
    using std::log;
    if (v == 0) return {};
    return {v > 0 ? 1 : -1, log(abs(v))};
  }

  Real value() const {
    using std::exp;
    if (sign == 0) return Real(0);
    return sign * exp(log_magnitude);
  }

  Real log10_magnitude() const {
    using std::log;
    if (sign == 0) return -infinity<Real>();
    return log_magnitude / log(Real(10));
  }
};

/// Neumaier compensated summation.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& x) {
    using std::abs;
    Real t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }
  void scale(const Real& f) {
    sum_ *= f;
    comp_ *= f;
  }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

/// Sum of nonnegative terms supplied through their natural logarithms.
/// The running sum is kept relative to the largest term seen so far.
template <class Real>
class LogSum {
 public:
  void add_log(const Real& log_term) {
    using std::exp;
    if (log_term == -infinity<Real>()) return;
    if (empty_) {
      shift_ = log_term;
      empty_ = false;
      acc_.add(Real(1));
      return;
    }
    if (log_term > shift_) {
      acc_.scale(exp(shift_ - log_term));
      shift_ = log_term;
      acc_.add(Real(1));
    } else {
      acc_.add(exp(log_term - shift_));
    }
  }

  void add(const Real& term) {
    using std::log;
    if (term < 0) throw Error(ErrorCode::invalid_argument, "LogSum accepts nonnegative terms only");
    if (term > 0) add_log(log(term));
  }

  /// log of the sum; -inf when nothing positive was added.
  Real log() const {
    using std::log;
    if (empty_) return -infinity<Real>();
    return shift_ + log(acc_.value());
  }

  Real value() const {
    using std::exp;
    if (empty_) return Real(0);
    return exp(log());
  }

  bool empty() const { return empty_; }

 private:
  bool empty_ = true;
  Real shift_ = 0;
  CompensatedSum<Real> acc_;
};

template <class Real>
Real parse_real(const std::string& text) {
  try {
    if constexpr (std::is_same_v<Real, double>) {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } else {
      return Real(text);
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "not a real number: '" + text + "'");
  }
}

/// Shortest scientific decimal that parses back to exactly `x`.
template <class Real>
std::string format_real(const Real& x) {
  if (!is_finite(x)) {
    if (x != x) return "nan";
    return x > 0 ? "inf" : "-inf";
  }
  if constexpr (std::is_same_v<Real, double>) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific);
    return std::string(buf, res.ptr);
  } else {
    const int max_digits = std::is_same_v<Real, mpfr_real>
                               ? working_digits<Real>() + 3
                               : std::numeric_limits<Real>::max_digits10;
    std::string text;
    for (int d = 1; d <= max_digits; ++d) {
      text = x.str(d, std::ios_base::scientific);
      if (Real(text) == x) return text;
    }
    return text;
  }
}

/// Restores the global MPFR default precision on scope exit.
class MpfrPrecisionScope {
 public:
  explicit MpfrPrecisionScope(int digits) : saved_(mpfr_real::default_precision()) {
    mpfr_real::default_precision(static_cast<unsigned>(digits));
  }
  ~MpfrPrecisionScope() { mpfr_real::default_precision(saved_); }
  MpfrPrecisionScope(const MpfrPrecisionScope&) = delete;
  MpfrPrecisionScope& operator=(const MpfrPrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Invoke `f.template operator()<Real>()` with the backend matching `digits`.
template <class F>
decltype(auto) with_precision(int digits, F&& f) {
  if (digits < 15) {
    throw Error(ErrorCode::invalid_argument, "working precision must be at least 15 digits");
  }
  if (digits <= std::numeric_limits<double>::digits10 + 1) {
    return f.template operator()<double>();
  }
  if (digits <= 34) {
    return f.template operator()<quad>();
  }
  MpfrPrecisionScope scope(digits);
  return f.template operator()<mpfr_real>();
}

}  // namespace rwpoly
