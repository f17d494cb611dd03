#include "eik/symmetry.hpp"

namespace eik {

namespace {

std::string idx2(const char* stem, int a, int b) {
  return std::string(stem) + std::to_string(a) + std::to_string(b);
}

}  // namespace

std::vector<NamedField> symmeik1_catalog(int n) {
  if (n < 1) throw std::invalid_argument("symmeik1_catalog: n must be >= 1");
  const int nv = nvars_base(n);
  const Poly zero(nv);
  auto X = [&](int mu) { return Poly::variable(nv, var_x(mu)); };
  const Poly U = Poly::variable(nv, var_u(n));
  auto metric = [](int mu) { return Rational(mu == 0 ? 1 : -1); };

  // s^2 = <x, x> - u^2
  Poly s2(nv);
  for (int mu = 0; mu <= n; ++mu) s2 += metric(mu) * (X(mu) * X(mu));
  s2 -= U * U;

  std::vector<NamedField> cat;
  auto zero_xi = [&] { return std::vector<Poly>(n + 1, zero); };

  for (int mu = 0; mu <= n; ++mu) {
    auto xi = zero_xi();
    xi[mu] = Poly::constant(nv, 1);
    cat.push_back({"P" + std::to_string(mu), VectorField(n, std::move(xi), zero)});
  }
  cat.push_back({"Pu", VectorField(n, zero_xi(), Poly::constant(nv, 1))});

  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      auto xi = zero_xi();
      xi[b] = X(a);
      xi[a] = -X(b);
      cat.push_back({idx2("J", a, b), VectorField(n, std::move(xi), zero)});
    }
  for (int a = 1; a <= n; ++a) {
    auto xi = zero_xi();
    xi[a] = X(0);
    xi[0] = X(a);
    cat.push_back({idx2("J", 0, a), VectorField(n, std::move(xi), zero)});
  }

  {
    auto xi = zero_xi();
    xi[0] = U;
    cat.push_back({"Ju0", VectorField(n, std::move(xi), X(0))});
  }
  for (int a = 1; a <= n; ++a) {
    auto xi = zero_xi();
    xi[a] = U;
    cat.push_back({"Ju" + std::to_string(a), VectorField(n, std::move(xi), -X(a))});
  }

  {
    std::vector<Poly> xi;
    for (int mu = 0; mu <= n; ++mu) xi.push_back(X(mu));
    cat.push_back({"D", VectorField(n, std::move(xi), U)});
  }

  for (int mu = 0; mu <= n; ++mu) {
    std::vector<Poly> xi;
    for (int beta = 0; beta <= n; ++beta) {
      Poly c = Rational(2) * (X(mu) * X(beta));
      if (beta == mu) c -= metric(mu) * s2;
      xi.push_back(std::move(c));
    }
    cat.push_back({"K" + std::to_string(mu),
                   VectorField(n, std::move(xi), Rational(2) * (X(mu) * U))});
  }
  {
    std::vector<Poly> xi;
    for (int beta = 0; beta <= n; ++beta) xi.push_back(Rational(2) * (U * X(beta)));
    Poly eta = s2 + Rational(2) * (U * U);
    cat.push_back({"Ku", VectorField(n, std::move(xi), std::move(eta))});
  }
  return cat;
}

VectorField symmeik0_field(int n, const Symmeik0Params& params) {
  if (n < 1) throw std::invalid_argument("symmeik0_field: n must be >= 1");
  if (static_cast<int>(params.c.size()) != n + 1 ||
      static_cast<int>(params.a.size()) != n + 1)
    throw std::invalid_argument("symmeik0_field: c and a need n+1 entries");
  const int nv = nvars_base(n);
  auto X = [&](int mu) { return Poly::variable(nv, var_x(mu)); };
  const Poly U = Poly::variable(nv, var_u(n));
  auto metric = [](int mu) { return Rational(mu == 0 ? 1 : -1); };
  auto of_u = [&](const Poly& univ) { return subst_univariate(univ, U); };

  auto b_lower = [&](int mu, int nu) -> Poly {
    if (mu == nu) return Poly(1);
    if (mu < nu) return params.b_upper.at(mu).at(nu);
    return -params.b_upper.at(nu).at(mu);
  };

  // <c(u), x> and <x, x>
  Poly cx(nv), xx(nv);
  for (int mu = 0; mu <= n; ++mu) {
    cx += metric(mu) * (of_u(params.c[mu]) * X(mu));
    xx += metric(mu) * (X(mu) * X(mu));
  }

  std::vector<Poly> xi;
  xi.reserve(n + 1);
  for (int beta = 0; beta <= n; ++beta) {
    Poly comp = Rational(2) * (cx * X(beta));
    comp -= xx * of_u(params.c[beta]);
    for (int nu = 0; nu <= n; ++nu) {
      Poly b = b_lower(beta, nu);
      if (b.is_zero()) continue;
      comp += metric(beta) * (of_u(b) * X(nu));
    }
    comp += of_u(params.d) * X(beta);
    comp += of_u(params.a[beta]);
    xi.push_back(std::move(comp));
  }
  return VectorField(n, std::move(xi), of_u(params.eta));
}

Symmeik0Params random_symmeik0(int n, int max_degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 2);
  auto rand_univ = [&] {
    Poly p(1);
    for (int d = 0; d <= max_degree; ++d)
      p.add_term(Monomial{static_cast<std::uint32_t>(d)},
                 Rational(num(rng), den(rng)));
    return p;
  };

  Symmeik0Params out;
  for (int mu = 0; mu <= n; ++mu) out.c.push_back(rand_univ());
  out.b_upper.assign(n + 1, std::vector<Poly>(n + 1, Poly(1)));
  for (int mu = 0; mu <= n; ++mu)
    for (int nu = mu + 1; nu <= n; ++nu) out.b_upper[mu][nu] = rand_univ();
  out.d = rand_univ();
  for (int mu = 0; mu <= n; ++mu) out.a.push_back(rand_univ());
  out.eta = rand_univ();
  return out;
}

}  // namespace eik
