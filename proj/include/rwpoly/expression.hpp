/**
 * @file expression.hpp
 * @brief Closed-form coefficient expressions ("tail rules" and smooth factors).
 *
 * Grammar (whitespace is ignored):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := '-' unary | power
 *     power   := primary ('^' unary)?          right associative
 *     primary := number | identifier | '(' expr ')'
 *     number  := digits ['.' digits]
 *
 * Exactly one identifier is allowed per expression: `j` for chain tails and
 * `x` for weight smooth factors. Constants are stored as exact rationals
 * (a decimal such as 0.7 is 7/10) and constant subexpressions are folded at
 * parse time, so `print(parse(s))` is a fixed point of `print . parse`.
 *
 * Identically-zero testing is decided exactly for the supported tail forms:
 * rational functions of `j`, and products/sums with exponentials `c^(a*j+b)`
 * with a positive rational base `c`. Anything else raises `undecidable_tail`.
 */
#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rwpoly/error.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

class Expression {
 public:
  enum class Op { number, variable, negate, add, sub, mul, div, pow };

  Expression() : Expression(rational(0)) {}
  explicit Expression(rational value) : node_(std::make_shared<Node>(Node{Op::number, std::move(value), {}, {}})) {}

  static Expression parse(const std::string& text, char variable);
  static Expression variable(char name) {
    Expression e;
    e.node_ = std::make_shared<Node>(Node{Op::variable, rational(0), {}, {}});
    e.var_ = name;
    return e;
  }

  std::string to_string() const { return print(*node_, 0); }

  char variable_name() const { return var_; }
  bool is_constant() const { return node_->op == Op::number; }
  const rational& constant_value() const { return node_->value; }

  template <class Real>
  Real evaluate(const Real& at) const {
    return eval<Real>(*node_, at);
  }

  /// Exact value at an integer point, when the expression is exactly
  /// evaluable there (no irrational powers).
  std::optional<rational> evaluate_exact(const rational& at) const { return eval_exact(*node_, at); }

  /// True when the expression is identically zero for all integer j >= from.
  bool is_identically_zero(long long from = 0) const;

 private:
  struct Node {
    Op op;
    rational value;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  struct Parser;
  struct ZeroBound {
    // Bound on the shape of the numerator/denominator after clearing
    // fractions: number of exponential terms and polynomial degree.
    bigint num_terms = 1, num_degree = 0, den_terms = 1, den_degree = 0;
  };

  static NodePtr make(Op op, NodePtr a, NodePtr b = nullptr);
  static NodePtr number(rational v) { return std::make_shared<Node>(Node{Op::number, std::move(v), {}, {}}); }
  static std::optional<rational> exact_integer_power(const rational& base, const rational& exponent);

  static int precedence(Op op) {
    switch (op) {
      case Op::add:
      case Op::sub: return 1;
      case Op::mul:
      case Op::div: return 2;
      case Op::negate: return 3;
      case Op::pow: return 4;
      default: return 5;
    }
  }

  std::string print(const Node& n, int parent_prec, bool right_of_same = false) const;
  static std::string print_number(const rational& v);

  template <class Real>
  static Real eval(const Node& n, const Real& at);
  static std::optional<rational> eval_exact(const Node& n, const rational& at);
  static bool depends_on_variable(const Node& n);
  static std::optional<ZeroBound> zero_bound(const Node& n);
  static std::optional<std::pair<rational, rational>> affine_in_variable(const Node& n);

  NodePtr node_;
  char var_ = 'j';
};

// ---------------------------------------------------------------------------

inline Expression::NodePtr Expression::make(Op op, NodePtr a, NodePtr b) {
  // Constant folding keeps printing canonical.
  if (a->op == Op::number && (!b || b->op == Op::number)) {
    switch (op) {
      case Op::negate: return number(-a->value);
      case Op::add: return number(a->value + b->value);
      case Op::sub: return number(a->value - b->value);
      case Op::mul: return number(a->value * b->value);
      case Op::div:
        if (b->value == 0) throw Error(ErrorCode::parse_error, "division by constant zero");
        return number(a->value / b->value);
      case Op::pow:
        if (auto v = exact_integer_power(a->value, b->value)) return number(*v);
        break;
      default: break;
    }
  }
  return std::make_shared<Node>(Node{op, rational(0), std::move(a), std::move(b)});
}

inline std::optional<rational> Expression::exact_integer_power(const rational& base, const rational& exponent) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(exponent) != 1) return std::nullopt;
  bigint e = numerator(exponent);
  if (e > 4096 || e < -4096) return std::nullopt;
  long long k = static_cast<long long>(e);
  if (base == 0) {
    if (k <= 0) return std::nullopt;
    return rational(0);
  }
  bigint num = boost::multiprecision::pow(numerator(base), static_cast<unsigned>(k < 0 ? -k : k));
  bigint den = boost::multiprecision::pow(denominator(base), static_cast<unsigned>(k < 0 ? -k : k));
  return k < 0 ? rational(den, num) : rational(num, den);
}

struct Expression::Parser {
  const std::string& text;
  char var;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool accept(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::parse_error,
                what + " at position " + std::to_string(pos) + " in expression '" + text + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Op::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::negate, unary());
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos >= text.size()) fail("unexpected end");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string whole = text.substr(start, pos - start);
      std::string frac;
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t fs = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        frac = text.substr(fs, pos - fs);
        if (frac.empty()) fail("digits expected after '.'");
      }
      bigint num(whole + frac);
      bigint den = boost::multiprecision::pow(bigint(10), static_cast<unsigned>(frac.size()));
      return number(rational(num, den));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string name = text.substr(start, pos - start);
      if (name.size() != 1 || name[0] != var) fail("unknown identifier '" + name + "'");
      return std::make_shared<Node>(Node{Op::variable, rational(0), {}, {}});
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

inline Expression Expression::parse(const std::string& text, char variable) {
  Parser p{text, variable};
  NodePtr root = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  Expression e;
  e.node_ = std::move(root);
  e.var_ = variable;
  return e;
}

inline std::string Expression::print_number(const rational& v) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  std::string s = numerator(v).str();
  if (denominator(v) != 1) s += "/" + denominator(v).str();
  return s;
}

inline std::string Expression::print(const Node& n, int parent_prec, bool right_of_same) const {
  auto wrap = [&](std::string s, int prec) {
    bool need = prec < parent_prec || (prec == parent_prec && right_of_same);
    return need ? "(" + s + ")" : s;
  };
  switch (n.op) {
    case Op::number: {
      std::string s = print_number(n.value);
      int prec = 5;
      if (n.value < 0) prec = 3;
      if (boost::multiprecision::denominator(n.value) != 1) prec = n.value < 0 ? 3 : 2;
      // A rational literal reads as a division; negative literals as negations.
      if (prec < 5 && parent_prec >= 2) return "(" + s + ")";
      return wrap(s, prec);
    }
    case Op::variable: return std::string(1, var_);
    case Op::negate: return wrap("-" + print(*n.lhs, 3), 3);
    case Op::add: return wrap(print(*n.lhs, 1) + " + " + print(*n.rhs, 1, true), 1);
    case Op::sub: return wrap(print(*n.lhs, 1) + " - " + print(*n.rhs, 1, true), 1);
    case Op::mul: return wrap(print(*n.lhs, 2) + "*" + print(*n.rhs, 2, true), 2);
    case Op::div: return wrap(print(*n.lhs, 2) + "/" + print(*n.rhs, 2, true), 2);
    case Op::pow: {
      // Right associative: parenthesise a power appearing as the base.
      std::string base = print(*n.lhs, 5);
      return wrap(base + "^" + print(*n.rhs, 3), 4);
    }
  }
  return {};
}

template <class Real>
Real Expression::eval(const Node& n, const Real& at) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  using std::pow;
  switch (n.op) {
    case Op::number: {
      if constexpr (std::is_same_v<Real, double>) {
        return static_cast<double>(n.value);
      } else if constexpr (std::is_same_v<Real, mpfr_real>) {
        // the generic rational -> mpfr conversion does not terminate here
        return Real(numerator(n.value).str()) / Real(denominator(n.value).str());
      } else {
        return static_cast<Real>(n.value);
      }
    }
    case Op::variable: return at;
    case Op::negate: return -eval<Real>(*n.lhs, at);
    case Op::add: return eval<Real>(*n.lhs, at) + eval<Real>(*n.rhs, at);
    case Op::sub: return eval<Real>(*n.lhs, at) - eval<Real>(*n.rhs, at);
    case Op::mul: return eval<Real>(*n.lhs, at) * eval<Real>(*n.rhs, at);
    case Op::div: return eval<Real>(*n.lhs, at) / eval<Real>(*n.rhs, at);
    case Op::pow: {
      Real b = eval<Real>(*n.lhs, at);
      if (n.rhs->op == Op::number && denominator(n.rhs->value) == 1 &&
          abs(numerator(n.rhs->value)) <= 64) {
        // Integer powers by repeated multiplication: exact sign for negative bases.
        long long k = static_cast<long long>(numerator(n.rhs->value));
        Real acc = 1;
        for (long long i = 0; i < (k < 0 ? -k : k); ++i) acc *= b;
        return k < 0 ? Real(1) / acc : acc;
      }
      return pow(b, eval<Real>(*n.rhs, at));
    }
  }
  return Real(0);
}

inline std::optional<rational> Expression::eval_exact(const Node& n, const rational& at) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::variable: return at;
    case Op::negate: {
      auto a = eval_exact(*n.lhs, at);
      if (!a) return std::nullopt;
      return -*a;
    }
    default: break;
  }
  auto a = eval_exact(*n.lhs, at);
  auto b = eval_exact(*n.rhs, at);
  if (!a || !b) return std::nullopt;
  switch (n.op) {
    case Op::add: return *a + *b;
    case Op::sub: return *a - *b;
    case Op::mul: return *a * *b;
    case Op::div:
      if (*b == 0) return std::nullopt;
      return *a / *b;
    case Op::pow: return exact_integer_power(*a, *b);
    default: return std::nullopt;
  }
}

inline bool Expression::depends_on_variable(const Node& n) {
  if (n.op == Op::variable) return true;
  if (n.op == Op::number) return false;
  return depends_on_variable(*n.lhs) || (n.rhs && depends_on_variable(*n.rhs));
}

inline std::optional<std::pair<rational, rational>> Expression::affine_in_variable(const Node& n) {
  // Returns (slope, intercept) when n is affine in the variable.
  switch (n.op) {
    case Op::number: return std::pair{rational(0), n.value};
    case Op::variable: return std::pair{rational(1), rational(0)};
    case Op::negate: {
      auto a = affine_in_variable(*n.lhs);
      if (!a) return std::nullopt;
      return std::pair{-a->first, -a->second};
    }
    case Op::add:
    case Op::sub: {
      auto a = affine_in_variable(*n.lhs);
      auto b = affine_in_variable(*n.rhs);
      if (!a || !b) return std::nullopt;
      if (n.op == Op::add) return std::pair{a->first + b->first, a->second + b->second};
      return std::pair{a->first - b->first, a->second - b->second};
    }
    case Op::mul: {
      auto a = affine_in_variable(*n.lhs);
      auto b = affine_in_variable(*n.rhs);
      if (!a || !b) return std::nullopt;
      if (a->first != 0 && b->first != 0) return std::nullopt;
      return std::pair{a->first * b->second + b->first * a->second, a->second * b->second};
    }
    case Op::div: {
      auto a = affine_in_variable(*n.lhs);
      auto b = affine_in_variable(*n.rhs);
      if (!a || !b || b->first != 0 || b->second == 0) return std::nullopt;
      return std::pair{a->first / b->second, a->second / b->second};
    }
    default: return std::nullopt;
  }
}

inline std::optional<Expression::ZeroBound> Expression::zero_bound(const Node& n) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  switch (n.op) {
    case Op::number: return ZeroBound{};
    case Op::variable: return ZeroBound{1, 1, 1, 0};
    case Op::negate: return zero_bound(*n.lhs);
    default: break;
  }
  if (n.op == Op::pow) {
    if (!depends_on_variable(*n.rhs)) {
      // polynomial-type power with an integer exponent
      if (n.rhs->op != Op::number || denominator(n.rhs->value) != 1) return std::nullopt;
      bigint k = numerator(n.rhs->value);
      auto a = zero_bound(*n.lhs);
      if (!a) return std::nullopt;
      bigint kk = k < 0 ? bigint(-k) : k;
      if (kk > 64) return std::nullopt;
      unsigned ku = static_cast<unsigned>(kk);
      ZeroBound r{boost::multiprecision::pow(a->num_terms, ku), a->num_degree * kk,
                  boost::multiprecision::pow(a->den_terms, ku), a->den_degree * kk};
      if (k < 0) {
        std::swap(r.num_terms, r.den_terms);
        std::swap(r.num_degree, r.den_degree);
      }
      return r;
    }
    // exponential c^(a*j+b): constant positive base, affine exponent
    if (depends_on_variable(*n.lhs) || n.lhs->op != Op::number || n.lhs->value <= 0) return std::nullopt;
    auto aff = affine_in_variable(*n.rhs);
    if (!aff || denominator(aff->first) != 1 || denominator(aff->second) != 1) return std::nullopt;
    return ZeroBound{};
  }
  auto a = zero_bound(*n.lhs);
  auto b = zero_bound(*n.rhs);
  if (!a || !b) return std::nullopt;
  switch (n.op) {
    case Op::add:
    case Op::sub:
      return ZeroBound{a->num_terms * b->den_terms + b->num_terms * a->den_terms,
                       std::max(a->num_degree + b->den_degree, b->num_degree + a->den_degree),
                       a->den_terms * b->den_terms, a->den_degree + b->den_degree};
    case Op::mul:
      return ZeroBound{a->num_terms * b->num_terms, a->num_degree + b->num_degree,
                       a->den_terms * b->den_terms, a->den_degree + b->den_degree};
    case Op::div:
      return ZeroBound{a->num_terms * b->den_terms, a->num_degree + b->den_degree,
                       a->den_terms * b->num_terms, a->den_degree + b->num_degree};
    default: return std::nullopt;
  }
}

inline bool Expression::is_identically_zero(long long from) const {
  if (node_->op == Op::number) return node_->value == 0;
  auto bound = zero_bound(*node_);
  if (!bound) {
    throw Error(ErrorCode::undecidable_tail,
                "zero test is not decidable for expression '" + to_string() + "'");
  }
  // A nonzero exponential polynomial sum_i c_i^j P_i(j) with positive bases
  // has at most sum_i (deg P_i + 1) - 1 real zeros.
  bigint zeros = bound->num_terms * (bound->num_degree + 1);
  if (zeros > 20000) {
    throw Error(ErrorCode::undecidable_tail, "expression '" + to_string() + "' is too large to zero-test");
  }
  long long needed = static_cast<long long>(zeros);
  long long checked = 0;
  for (long long j = from; checked < needed; ++j) {
    auto v = eval_exact(*node_, rational(j));
    if (!v) {
      // Pole of the denominator: skip, the denominator has finitely many.
      if (j - from > needed + 64 + 4 * static_cast<long long>(bound->den_degree)) {
        throw Error(ErrorCode::undecidable_tail, "cannot evaluate '" + to_string() + "' exactly");
      }
      continue;
    }
    if (*v != 0) return false;
    ++checked;
  }
  return true;
}

}  // namespace rwpoly
