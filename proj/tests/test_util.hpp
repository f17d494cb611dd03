#pragma once

#include "eik/poly.hpp"

#include <random>
#include <string>
#include <vector>

namespace eik::testutil {

/// Random sparse polynomial with small rational coefficients, for property
/// tests. Deterministic under a fixed rng state.
inline Poly random_poly(int nvars, int max_degree, int max_terms,
                        std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> expo(0, max_degree);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  Poly p(nvars);
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial m(nvars);
    for (int v = 0; v < nvars; ++v) m[v] = static_cast<std::uint32_t>(expo(rng));
    p.add_term(m, Rational(num(rng)) / Rational(den(rng)));
  }
  return p;
}

inline std::vector<Rational> random_point(int nvars, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<Rational> pt;
  for (int v = 0; v < nvars; ++v)
    pt.push_back(Rational(num(rng)) / Rational(den(rng)));
  return pt;
}

}  // namespace eik::testutil
