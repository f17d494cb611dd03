#pragma once

#include "eik/poly.hpp"

#include <cmath>

namespace eik {

/// Forward-mode first-order dual number: v + d*eps with eps^2 = 0.
/// Seed d = 1 on the variable being differentiated.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(T value) : v(value) {}
  Dual(T value, T deriv) : v(value), d(deriv) {}

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
  }
};

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (T(2) * s)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -a.d * sin(a.v)};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, a.d * e};
}

template <class T>
struct ScalarFrom<Dual<T>> {
  static Dual<T> from(const Rational& r) {
    return Dual<T>(r.template convert_to<T>());
  }
};

}  // namespace eik
