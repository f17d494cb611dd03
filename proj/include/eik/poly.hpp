#pragma once

#include "eik/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eik {

/// Exponent vector; length always equals the ring's variable count.
using Monomial = std::vector<std::uint32_t>;

/// Graded lexicographic order: lower total degree first, lexicographic
/// comparison of exponent vectors as the tie-break.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using TermMap = std::map<Monomial, Rational, GradedLexLess>;

template <class T>
struct ScalarFrom {
  static T from(const Rational& r) { return r.template convert_to<T>(); }
};
template <>
struct ScalarFrom<Rational> {
  static Rational from(const Rational& r) { return r; }
};

/// Sparse multivariate polynomial with exact rational coefficients over a
/// fixed set of variables. Zero coefficients are never stored; polynomials
/// over rings with different variable counts do not mix.
class Poly {
 public:
  Poly() : nvars_(0) {}
  explicit Poly(int nvars);

  static Poly constant(int nvars, const Rational& c);
  static Poly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  const TermMap& terms() const { return terms_; }
  Rational coeff(const Monomial& m) const;

  void add_term(const Monomial& m, const Rational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;
  bool operator==(const Poly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  /// Partial derivative with respect to variable `index`.
  Poly diff(int index) const;

  /// Same polynomial viewed in a ring with `new_nvars >= nvars()` variables
  /// (the existing variables keep their indices).
  Poly extended(int new_nvars) const;

  Poly pow(unsigned k) const;

  /// Evaluate over any commutative ring element constructible from Rational
  /// via ScalarFrom<T> (Rational itself, double, long double, Dual<...>).
  template <class T>
  T eval(std::span<const T> point) const;

  /// Canonical text form, leading term first; round-trips through parse().
  std::string str(std::span<const std::string> names) const;

  /// Parse the grammar  poly := [sign] term (sign term)*,
  /// term := factor ('*' factor)*, factor := int ['/' int] | name ['^' int].
  /// Every name must appear in `names`; the result lives in a ring with
  /// names.size() variables.
  static Poly parse(std::string_view text, std::span<const std::string> names);

 private:
  int nvars_;
  TermMap terms_;
  void check_compatible(const Poly& o) const;
};

/// Compose a univariate polynomial with `arg`: f(arg). Horner over the ring
/// of `arg`.
Poly subst_univariate(const Poly& f, const Poly& arg);

/// Variable name conventions used across the tool.
std::vector<std::string> xu_names(int n);        // x0..xn, u
std::vector<std::string> xu_grad_names(int n);   // x0..xn, u, u0..un
std::vector<std::string> tau_names(int k);       // t1..tk

template <class T>
T Poly::eval(std::span<const T> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("eval: point size != variable count");
  T acc = ScalarFrom<T>::from(Rational(0));
  for (const auto& [mono, c] : terms_) {
    T term = ScalarFrom<T>::from(c);
    for (int v = 0; v < nvars_; ++v)
      for (std::uint32_t e = 0; e < mono[v]; ++e) term = term * point[v];
    acc = acc + term;
  }
  return acc;
}

}  // namespace eik
