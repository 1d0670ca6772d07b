#pragma once

// The Weyl algebra A_m(Q) = Q<X_1..X_m, d_1..d_m>, d_i X_j - X_j d_i = delta_ij,
// graded by deg X_i = 1, deg d_i = -1. Elements are kept in normal order
// (every X to the left of every d), which makes equality a map comparison.

#include "lcg/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lcg {

using Exponents = std::vector<unsigned>;

/// X^x d^d in normal order.
struct WeylMonomial {
  Exponents x;
  Exponents d;

  unsigned order() const;
  int degree() const;
  auto operator<=>(const WeylMonomial&) const = default;
};

class WeylElement {
 public:
  explicit WeylElement(std::size_t m = 0) : m_(m) {}

  static WeylElement constant(std::size_t m, const Rational& c);
  /// X_i and d_i, 1-based as in the text syntax.
  static WeylElement x(std::size_t m, std::size_t i);
  static WeylElement d(std::size_t m, std::size_t i);
  static WeylElement monomial(Exponents x, Exponents d, const Rational& c = 1);

  std::size_t variables() const { return m_; }
  const std::map<WeylMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * mono, dropping the term if the coefficient cancels.
  void add_term(const WeylMonomial& mono, const Rational& c);

  WeylElement& operator+=(const WeylElement& other);
  WeylElement& operator-=(const WeylElement& other);
  WeylElement& operator*=(const Rational& c);

  friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
  friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
  friend WeylElement operator-(WeylElement a) { return a *= Rational(-1); }
  friend WeylElement operator*(WeylElement a, const Rational& c) { return a *= c; }
  friend WeylElement operator*(const Rational& c, WeylElement a) { return a *= c; }
  /// Normal-ordered product. Throws std::invalid_argument on mismatched m.
  friend WeylElement operator*(const WeylElement& a, const WeylElement& b);
  friend bool operator==(const WeylElement&, const WeylElement&) = default;

 private:
  std::size_t m_;
  std::map<WeylMonomial, Rational> terms_;
};

WeylElement multiply(const WeylElement& a, const WeylElement& b);
WeylElement power(const WeylElement& a, unsigned k);

/// Grading of an element: |x| - |d| when uniform over the terms. The zero
/// element reports degree 0.
struct GradedDegree {
  std::optional<int> value;  // empty when inhomogeneous

  bool homogeneous() const { return value.has_value(); }
  friend bool operator==(const GradedDegree&, const GradedDegree&) = default;
};

GradedDegree degree(const WeylElement& a);

/// X_1 d_1 + ... + X_m d_m. Throws std::invalid_argument for m = 0.
WeylElement euler(std::size_t m);

/// Algebra automorphism X_i -> d_i, d_i -> -X_i, and its inverse.
WeylElement fourier(const WeylElement& a);
WeylElement inverse_fourier(const WeylElement& a);

/// Canonical text form, e.g. "x1*d1 + 1", "x1*d1^2 + 2*d1", "-1/2*x2".
std::string to_string(const WeylElement& a);

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses the text syntax:
///
///   expr   := ['+'|'-'] term { ('+'|'-') term }
///   term   := factor { '*' factor }
///   factor := atom [ '^' integer ]
///   atom   := integer [ '/' integer ] | 'x' index | 'd' index | '(' expr ')'
///
/// Whitespace is ignored. `m` defaults to the largest index that appears
/// (at least 1); an explicit m smaller than that is an error.
WeylElement parse_weyl(std::string_view text, std::size_t m = 0);

/// Finite set of Laurent monomials X^v (v in Z^m) on which the Weyl algebra
/// acts by d_i X^v = v_i X^(v - e_i) and X_i X^v = X^(v + e_i).
class LaurentBasis {
 public:
  LaurentBasis(std::size_t m, std::vector<std::vector<int>> monomials);

  std::size_t variables() const { return m_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<int>& monomial(std::size_t k) const { return monomials_.at(k); }
  std::optional<std::size_t> index_of(const std::vector<int>& v) const;

 private:
  std::size_t m_;
  std::vector<std::vector<int>> monomials_;
  std::map<std::vector<int>, std::size_t> index_;
};

class WindowOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Action of `a` on a coefficient vector over `basis`. A nonzero image
/// outside the basis throws WindowOverflow instead of being dropped.
std::vector<Rational> apply(const WeylElement& a, const LaurentBasis& basis, std::span<const Rational> v);

}  // namespace lcg
