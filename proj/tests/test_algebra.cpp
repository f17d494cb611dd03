#include "eik/dual.hpp"
#include "eik/poly.hpp"
#include "eik/rational.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace eik;

namespace {

const std::vector<std::string> kXU2 = xu_names(1);  // x0, x1, u

Poly P(const std::string& text, std::span<const std::string> names) {
  return Poly::parse(text, names);
}

}  // namespace

// ---------------------------------------------------------------- rationals

TEST_CASE("rational parse and canonical format") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(parse_rational("2/4") == Rational(1) / Rational(2));
  CHECK(parse_rational("-6/4") == Rational(-3) / Rational(2));
  CHECK(format_rational(Rational(7)) == "7");
  CHECK(format_rational(Rational(-3) / Rational(2)) == "-3/2");
  CHECK(format_rational(parse_rational("10/5")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

// -------------------------------------------------------------- arithmetic

TEST_CASE("basic construction and arithmetic") {
  const Poly x0 = Poly::variable(3, 0);
  const Poly u = Poly::variable(3, 2);
  const Poly p = x0 * x0 - u * u;

  CHECK(p.degree() == 2);
  CHECK(!p.is_zero());
  CHECK((p - p).is_zero());
  CHECK((p - p).degree() == -1);
  CHECK(p + p == Rational(2) * p);
  CHECK(p * Poly::constant(3, 0) == Poly(3));

  // (x0 + u)(x0 - u) = x0^2 - u^2
  CHECK((x0 + u) * (x0 - u) == p);
}

TEST_CASE("variable count mismatch is rejected") {
  const Poly a = Poly::variable(2, 0);
  const Poly b = Poly::variable(3, 0);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
  CHECK(a.extended(3) + b == Rational(2) * b);
  CHECK_THROWS_AS(b.extended(2), std::invalid_argument);
}

// -------------------------------------------------------------------- diff

TEST_CASE("partial derivatives") {
  const Poly p = P("x0^2 - u^2", kXU2);
  CHECK(p.diff(0) == P("2*x0", kXU2));
  CHECK(p.diff(2) == P("-2*u", kXU2));

  const auto names3 = xu_names(2);  // x0 x1 x2 u
  const Poly q = P("x1*x2 + u^3", names3);
  CHECK(q.diff(3) == P("3*u^2", names3));
  CHECK(q.diff(0).is_zero());
  CHECK_THROWS_AS(q.diff(4), std::invalid_argument);
}

// -------------------------------------------------------------------- eval

TEST_CASE("evaluation, exact and floating") {
  const Poly p = P("x0^2 - x1^2", kXU2);
  const std::vector<Rational> pt{Rational(2), Rational(1), Rational(0)};
  CHECK(p.eval<Rational>(pt) == Rational(3));

  CHECK(Poly::constant(3, 1).eval<Rational>(pt) == Rational(1));

  const Poly ucube = P("u^3", kXU2);
  const std::vector<Rational> pt2{Rational(0), Rational(0), Rational(-2)};
  CHECK(ucube.eval<Rational>(pt2) == Rational(-8));

  const std::vector<double> fpt{2.0, 1.0, 0.0};
  CHECK(p.eval<double>(fpt) == doctest::Approx(3.0).epsilon(1e-15));

  const std::vector<Rational> bad{Rational(1)};
  CHECK_THROWS_AS(p.eval<Rational>(bad), std::invalid_argument);
}

// -------------------------------------------------------------- properties

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 40; ++trial) {
    const Poly a = testutil::random_poly(3, 4, 5, rng);
    const Poly b = testutil::random_poly(3, 4, 5, rng);
    const Poly c = testutil::random_poly(3, 4, 5, rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("product rule holds exactly") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Poly a = testutil::random_poly(3, 4, 4, rng);
    const Poly b = testutil::random_poly(3, 4, 4, rng);
    for (int v = 0; v < 3; ++v)
      CHECK((a * b).diff(v) == a.diff(v) * b + a * b.diff(v));
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Poly a = testutil::random_poly(3, 3, 4, rng);
    const Poly b = testutil::random_poly(3, 3, 4, rng);
    const auto pt = testutil::random_point(3, rng);
    CHECK((a * b).eval<Rational>(pt) == a.eval<Rational>(pt) * b.eval<Rational>(pt));
    CHECK((a + b).eval<Rational>(pt) == a.eval<Rational>(pt) + b.eval<Rational>(pt));
  }
}

TEST_CASE("pow and univariate substitution") {
  const Poly x0 = Poly::variable(2, 0);
  const Poly x1 = Poly::variable(2, 1);
  CHECK((x0 + x1).pow(2) == x0 * x0 + Rational(2) * (x0 * x1) + x1 * x1);
  CHECK((x0 + x1).pow(0) == Poly::constant(2, 1));

  // f(t) = t^2 + 1 composed with t = x0 + x1
  Poly f(1);
  f.add_term(Monomial{2}, Rational(1));
  f.add_term(Monomial{0}, Rational(1));
  CHECK(subst_univariate(f, x0 + x1) ==
        (x0 + x1) * (x0 + x1) + Poly::constant(2, 1));
  CHECK_THROWS_AS(subst_univariate(x0, x1), std::invalid_argument);
}

// ------------------------------------------------------------- text format

TEST_CASE("printer produces canonical text and parser round-trips") {
  const auto names = xu_names(2);
  const Poly p = P("3/2*x0^2*u - x1 + 5", names);
  CHECK(p.str(names) == "3/2*x0^2*u - x1 + 5");
  CHECK(Poly::parse(p.str(names), names) == p);

  CHECK(Poly(4).str(names) == "0");
  CHECK(P("0", names).is_zero());
  CHECK(P("u - u", names).is_zero());
  CHECK(P("-x0", names).str(names) == "-x0");
  CHECK(P("x1 + x0", names).str(names) == "x0 + x1");
  CHECK(P("2*x0*x0", names).str(names) == "2*x0^2");
  CHECK(P("1/2*u + 1/2*u", names).str(names) == "u");
}

TEST_CASE("round trip on random polynomials") {
  std::mt19937_64 rng(4242);
  const auto names = xu_grad_names(2);
  for (int trial = 0; trial < 60; ++trial) {
    const Poly a = testutil::random_poly(static_cast<int>(names.size()), 3, 6, rng);
    CHECK(Poly::parse(a.str(names), names) == a);
  }
}

TEST_CASE("parser rejects malformed input") {
  const auto names = xu_names(1);
  CHECK_THROWS_AS(P("", names), std::invalid_argument);
  CHECK_THROWS_AS(P("x9", names), std::invalid_argument);
  CHECK_THROWS_AS(P("2//3", names), std::invalid_argument);
  CHECK_THROWS_AS(P("x0^", names), std::invalid_argument);
  CHECK_THROWS_AS(P("x0 x1", names), std::invalid_argument);
  CHECK_THROWS_AS(P("1/0", names), std::invalid_argument);
  CHECK_THROWS_AS(P("u/x0", names), std::invalid_argument);
}

// -------------------------------------------------------------------- dual

TEST_CASE("dual numbers differentiate compositions") {
  using D = Dual<double>;
  const double x = 0.7;
  D t(x, 1.0);
  const D f = sin(t * t);
  CHECK(f.v == doctest::Approx(std::sin(x * x)).epsilon(1e-15));
  CHECK(f.d == doctest::Approx(2 * x * std::cos(x * x)).epsilon(1e-14));

  const D g = sqrt(D(4.0, 1.0));
  CHECK(g.v == doctest::Approx(2.0));
  CHECK(g.d == doctest::Approx(0.25));

  const D h = exp(cos(t)) / t;
  const double hv = std::exp(std::cos(x)) / x;
  const double hd = (-std::sin(x) * std::exp(std::cos(x)) * x - std::exp(std::cos(x))) / (x * x);
  CHECK(h.v == doctest::Approx(hv).epsilon(1e-14));
  CHECK(h.d == doctest::Approx(hd).epsilon(1e-12));
}

TEST_CASE("polynomial eval over dual numbers matches diff") {
  std::mt19937_64 rng(31337);
  const Poly p = testutil::random_poly(3, 4, 6, rng);
  std::vector<Dual<double>> at{{0.3, 0.0}, {-1.1, 0.0}, {0.9, 0.0}};
  for (int v = 0; v < 3; ++v) {
    for (int w = 0; w < 3; ++w) at[w].d = (w == v) ? 1.0 : 0.0;
    const auto r = p.eval<Dual<double>>(at);
    std::vector<double> pt{0.3, -1.1, 0.9};
    const double exact = p.diff(v).eval<double>(pt);
    CHECK(r.d == doctest::Approx(exact).epsilon(1e-12));
  }
}
