#include "eik/catalog_json.hpp"
#include "eik/symmetry.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace eik;

namespace {

Poly parse_xu(const std::string& text, int n) {
  const auto names = xu_names(n);
  return Poly::parse(text, names);
}

VectorField field_from(int n, const std::vector<std::string>& xi,
                       const std::string& eta) {
  std::vector<Poly> xiv;
  for (const auto& s : xi) xiv.push_back(parse_xu(s, n));
  return VectorField(n, std::move(xiv), parse_xu(eta, n));
}

// Lambda * (u_mu u_mu - c) in the full ring, from an is_symmetry certificate.
Poly certificate_product(const SymmetryVerdict& v, const EikonalProblem& p) {
  const int nv = nvars_full(p.n);
  Poly lam = v.lambda0.extended(nv);
  for (int nu = 0; nu <= p.n; ++nu)
    lam += v.lambda1[nu].extended(nv) * Poly::variable(nv, var_grad(p.n, nu));
  Poly eq(nv);
  for (int mu = 0; mu <= p.n; ++mu) {
    Poly sq = Poly::variable(nv, var_grad(p.n, mu));
    sq *= sq;
    eq += Rational(p.metric(mu)) * sq;
  }
  eq -= Poly::constant(nv, p.c);
  return lam * eq;
}

const NamedField& find_op(const std::vector<NamedField>& cat,
                          const std::string& name) {
  for (const auto& nf : cat)
    if (nf.name == name) return nf;
  throw std::runtime_error("operator not in catalog: " + name);
}

}  // namespace

// ------------------------------------------------------------- prolongation

TEST_CASE("prolongation of constant translation vanishes") {
  const EikonalProblem p(2, 1);
  const auto pr = prolong1(field_from(2, {"1", "0", "0"}, "0"), p);
  for (const Poly& z : pr.zeta) CHECK(z.is_zero());
}

TEST_CASE("prolongation of u d_u gives zeta_mu = u_mu") {
  const EikonalProblem p(2, 1);
  const auto pr = prolong1(field_from(2, {"0", "0", "0"}, "u"), p);
  for (int mu = 0; mu <= 2; ++mu)
    CHECK(pr.zeta[mu] == Poly::variable(nvars_full(2), var_grad(2, mu)));
}

TEST_CASE("prolongation of a rotation mixes the two gradient slots") {
  const EikonalProblem p(2, 1);
  // J_12 = x_1 d_2 - x_2 d_1
  const auto pr = prolong1(field_from(2, {"0", "-x2", "x1"}, "0"), p);
  const int nv = nvars_full(2);
  CHECK(pr.zeta[0].is_zero());
  CHECK(pr.zeta[1] == -Poly::variable(nv, var_grad(2, 2)));
  CHECK(pr.zeta[2] == Poly::variable(nv, var_grad(2, 1)));
}

// ----------------------------------------------------------------- residual

TEST_CASE("residual decomposition of d_u is identically zero") {
  const EikonalProblem p(2, 1);
  const auto d = invariance_residual(prolong1(field_from(2, {"0", "0", "0"}, "1"), p), p);
  for (int mu = 0; mu <= 2; ++mu) {
    CHECK(d.L[mu].is_zero());
    CHECK(d.G[mu].is_zero());
    for (int nu = 0; nu <= 2; ++nu) CHECK(d.Q[mu][nu].is_zero());
  }
  CHECK(d.C.is_zero());
}

TEST_CASE("residual decomposition of x_0 d_0") {
  const EikonalProblem p(1, 1);
  const auto d = invariance_residual(prolong1(field_from(1, {"x0", "0"}, "0"), p), p);
  CHECK(d.Q[0][0] == Poly::constant(nvars_base(1), -2));
  CHECK(d.Q[1][1].is_zero());
  CHECK(d.Q[0][1].is_zero());
  for (int mu = 0; mu <= 1; ++mu) CHECK(d.L[mu].is_zero());
  CHECK(d.C.is_zero());
}

TEST_CASE("residual decomposition of the dilation vanishes") {
  const EikonalProblem p(3, 1);
  const auto cat = symmeik1_catalog(3);
  const auto d = invariance_residual(prolong1(find_op(cat, "D").field, p), p);
  for (int mu = 0; mu <= 3; ++mu) {
    CHECK(d.L[mu].is_zero());
    for (int nu = 0; nu <= 3; ++nu) CHECK(d.Q[mu][nu].is_zero());
  }
  CHECK(d.C.is_zero());
}

TEST_CASE("decomposition reassembles the direct contraction exactly") {
  std::mt19937_64 rng(555);
  for (int n : {1, 2, 3}) {
    const EikonalProblem p(n, n % 2);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Poly> xi;
      for (int mu = 0; mu <= n; ++mu)
        xi.push_back(testutil::random_poly(nvars_base(n), 3, 4, rng));
      VectorField f(n, std::move(xi), testutil::random_poly(nvars_base(n), 3, 4, rng));
      const auto pr = prolong1(f, p);
      CHECK(invariance_residual(pr, p).reassemble() == residual_poly(pr, p));
    }
  }
}

// -------------------------------------------------------------- is_symmetry

TEST_CASE("full c=1 catalog passes exactly with a valid certificate") {
  for (int n : {2, 3, 4}) {
    const EikonalProblem p(n, 1);
    const auto cat = symmeik1_catalog(n);
    const std::size_t expected = static_cast<std::size_t>((n + 3) * (n + 4) / 2);
    CHECK(cat.size() == expected);
    for (const auto& nf : cat) {
      INFO("operator ", nf.name, " n=", n);
      const auto v = is_symmetry(nf.field, p);
      CHECK(v.yes);
      CHECK(certificate_product(v, p) == residual_poly(prolong1(nf.field, p), p));
    }
  }
}

TEST_CASE("catalog sizes are 15, 21, 28 for n = 2, 3, 4") {
  CHECK(symmeik1_catalog(2).size() == 15);
  CHECK(symmeik1_catalog(3).size() == 21);
  CHECK(symmeik1_catalog(4).size() == 28);
}

TEST_CASE("gradient-mixing operators carry an affine multiplier") {
  const EikonalProblem p(3, 1);
  const auto cat = symmeik1_catalog(3);
  const auto v = is_symmetry(find_op(cat, "Ku").field, p);
  REQUIRE(v.yes);
  CHECK(v.lambda0.is_zero());
  // Lambda = -4 <x, u> in raw components: lambda1_nu = -4 x_nu.
  for (int nu = 0; nu <= 3; ++nu)
    CHECK(v.lambda1[nu] ==
          Rational(-4) * Poly::variable(nvars_base(3), var_x(nu)));
}

TEST_CASE("negative controls fail with a named component") {
  const EikonalProblem p(3, 1);
  const auto v1 = is_symmetry(field_from(3, {"x0", "0", "0", "0"}, "0"), p);
  CHECK(!v1.yes);
  CHECK(v1.violated == "Q11");

  const auto v2 = is_symmetry(field_from(3, {"x1", "0", "0", "0"}, "0"), p);
  CHECK(!v2.yes);
  CHECK(v2.violated == "Q01");
}

TEST_CASE("c=0 conformal family with u-dependent coefficients") {
  // c^0(u) = u, everything else zero.
  const int n = 3;
  Symmeik0Params prm;
  Poly zero1(1);
  Poly uu = Poly::variable(1, 0);
  prm.c.assign(n + 1, zero1);
  prm.c[0] = uu;
  prm.b_upper.assign(n + 1, std::vector<Poly>(n + 1, zero1));
  prm.d = zero1;
  prm.a.assign(n + 1, zero1);
  prm.eta = zero1;

  const EikonalProblem p(n, 0);
  const auto f = symmeik0_field(n, prm);
  const auto v = is_symmetry(f, p);
  CHECK(v.yes);
  CHECK(certificate_product(v, p) == residual_poly(prolong1(f, p), p));
}

TEST_CASE("random symmeik0 instantiations are exact symmetries of c=0") {
  std::mt19937_64 rng(2024);
  const EikonalProblem p(2, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = symmeik0_field(2, random_symmeik0(2, 3, rng));
    const auto v = is_symmetry(f, p);
    REQUIRE(v.yes);
    CHECK(certificate_product(v, p) == residual_poly(prolong1(f, p), p));
  }
}

TEST_CASE("symmetric lowered b block is not a symmetry") {
  // b_{01} = b_{10} = u corresponds to xi = (u x_1, -u x_0).
  const EikonalProblem p(1, 0);
  const auto v = is_symmetry(field_from(1, {"u*x1", "-1*u*x0"}, "0"), p);
  CHECK(!v.yes);
  CHECK(v.violated == "Q01");
}

TEST_CASE("symmeik1 operators are not symmetries of the wrong equation") {
  const EikonalProblem p0(3, 0);
  const auto cat = symmeik1_catalog(3);
  // K_u mixes eta and xi in a way tuned to c = 1.
  CHECK(!is_symmetry(find_op(cat, "Ku").field, p0).yes);
  // Translations are symmetries of both.
  CHECK(is_symmetry(find_op(cat, "P0").field, p0).yes);
}

// ... commutators

TEST_CASE("commutator identities in the catalog") {
  const auto cat = symmeik1_catalog(3);
  const auto& J01 = find_op(cat, "J01").field;
  const auto& J12 = find_op(cat, "J12").field;
  const auto& J02 = find_op(cat, "J02").field;
  CHECK(commutator(J01, J12) == J02);

  const auto& P0 = find_op(cat, "P0").field;
  const auto& D = find_op(cat, "D").field;
  CHECK(commutator(P0, D) == P0);

  const auto& J23 = find_op(cat, "J23").field;
  CHECK(commutator(J01, J23) == VectorField::zero(3));
}

TEST_CASE("commutator is antisymmetric and satisfies Jacobi") {
  std::mt19937_64 rng(777);
  const int n = 2;
  auto rnd = [&] {
    std::vector<Poly> xi;
    for (int mu = 0; mu <= n; ++mu)
      xi.push_back(testutil::random_poly(nvars_base(n), 2, 3, rng));
    return VectorField(n, std::move(xi),
                       testutil::random_poly(nvars_base(n), 2, 3, rng));
  };
  for (int trial = 0; trial < 6; ++trial) {
    const auto A = rnd(), B = rnd(), C = rnd();
    CHECK(commutator(A, B) == Rational(-1) * commutator(B, A));
    const auto jac = commutator(A, commutator(B, C)) +
                     commutator(B, commutator(C, A)) +
                     commutator(C, commutator(A, B));
    CHECK(jac == VectorField::zero(n));
  }
}

// ------------------------------------------------------------ sampled check

TEST_CASE("sampled check accepts smooth non-polynomial symmetries") {
  const EikonalProblem p(2, 0);
  SmoothField f;
  f.n = 2;
  auto zero = [](std::span<const Dual<long double>>) {
    return Dual<long double>(0.0L);
  };
  f.xi = {zero, zero, zero};
  f.eta = [](std::span<const Dual<long double>> at) {
    return sin(at[3]);  // eta = sin(u)
  };
  CHECK(sampled_symmetry_check(f, p, 2000, 42) <= 1e-12);
}

TEST_CASE("sampled check accepts catalog operators and rejects non-symmetries") {
  const EikonalProblem p(2, 1);
  const auto cat = symmeik1_catalog(2);
  CHECK(sampled_symmetry_check(to_smooth(find_op(cat, "Ju1").field), p, 2000, 1) <=
        1e-12);
  CHECK(sampled_symmetry_check(to_smooth(find_op(cat, "Ku").field), p, 2000, 2) <=
        1e-12);

  const auto bad = field_from(2, {"x1", "0", "0"}, "0");
  CHECK(sampled_symmetry_check(to_smooth(bad), p, 2000, 3) > 0.1);
}

// -------------------------------------------------------------------- flows

TEST_CASE("translation flow shifts the coordinate") {
  const auto cat = symmeik1_catalog(2);
  const std::vector<GraphPoint> pts{{{0.2, -0.4, 1.0}, 0.7}};
  const auto out = flow_map(find_op(cat, "P1").field, 1.0, pts);
  REQUIRE(out.size() == 1);
  CHECK(out[0].x[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(out[0].x[1] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(out[0].x[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(out[0].u == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("dilation flow is the exponential map") {
  const auto cat = symmeik1_catalog(2);
  const double t = 0.5;
  const std::vector<GraphPoint> pts{{{1.0, 2.0, -1.5}, 0.8}};
  const auto out = flow_map(find_op(cat, "D").field, t, pts);
  const double s = std::exp(t);
  CHECK(out[0].x[0] == doctest::Approx(1.0 * s).epsilon(1e-11));
  CHECK(out[0].x[1] == doctest::Approx(2.0 * s).epsilon(1e-11));
  CHECK(out[0].x[2] == doctest::Approx(-1.5 * s).epsilon(1e-11));
  CHECK(out[0].u == doctest::Approx(0.8 * s).epsilon(1e-11));
}

TEST_CASE("boost flow matches the hyperbolic rotation") {
  const auto cat = symmeik1_catalog(2);
  const double phi = 0.3;
  const std::vector<GraphPoint> pts{{{1.1, -0.2, 0.5}, 0.0}};
  const auto out = flow_map(find_op(cat, "J01").field, phi, pts);
  const double c = std::cosh(phi), s = std::sinh(phi);
  CHECK(out[0].x[0] == doctest::Approx(1.1 * c - 0.2 * s).epsilon(1e-10));
  CHECK(out[0].x[1] == doctest::Approx(-0.2 * c + 1.1 * s).epsilon(1e-10));
  CHECK(out[0].x[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("flow error control rejects blowing-up trajectories") {
  // dx0/deps = x0^2 from x0 = 1 blows up at eps = 1.
  const auto f = field_from(1, {"x0^2", "0"}, "0");
  const std::vector<GraphPoint> pts{{{1.0, 0.0}, 0.0}};
  CHECK_THROWS_AS(flow_map(f, 1.2, pts), FlowStepError);
}

// ---------------------------------------------------------------- discrete

TEST_CASE("discrete catalog transforms solutions to solutions") {
  const EikonalProblem p(2, 1);
  const auto maps = discrete_catalog(p);
  // time reflection, 2 space reflections, u negation, 1 swap, hodograph
  CHECK(maps.size() == 6);

  // A c=1 gradient sample: u = x_0 boosted, grad = (cosh a, sinh a, 0).
  const double a = 0.6;
  std::vector<double> x{0.3, -0.7, 0.2};
  double u = 0.9;
  std::vector<double> g{std::cosh(a), std::sinh(a), 0.0};
  auto residual = [](const std::vector<double>& gr) {
    return gr[0] * gr[0] - gr[1] * gr[1] - gr[2] * gr[2] - 1.0;
  };
  REQUIRE(residual(g) == doctest::Approx(0.0).epsilon(1e-15));

  for (const auto& m : maps) {
    auto x2 = x;
    auto g2 = g;
    double u2 = u;
    REQUIRE(m.apply(x2, u2, g2));
    INFO("map ", m.name);
    CHECK(residual(g2) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("hodograph is an involution and needs u_1 != 0") {
  const EikonalProblem p(2, 1);
  const auto maps = discrete_catalog(p);
  const auto& hodo = maps.back();
  REQUIRE(hodo.name == "hodograph");

  std::vector<double> x{0.4, 1.2, -0.3};
  double u = 2.0;
  std::vector<double> g{std::sqrt(1 + 0.25 + 0.09), 0.5, 0.3};
  auto x2 = x;
  auto g2 = g;
  double u2 = u;
  REQUIRE(hodo.apply(x2, u2, g2));
  REQUIRE(hodo.apply(x2, u2, g2));
  for (int i = 0; i <= 2; ++i) {
    CHECK(x2[i] == doctest::Approx(x[i]).epsilon(1e-14));
    CHECK(g2[i] == doctest::Approx(g[i]).epsilon(1e-14));
  }
  CHECK(u2 == doctest::Approx(u).epsilon(1e-14));

  std::vector<double> gz{1.0, 0.0, 0.0};
  CHECK(!hodo.apply(x2, u2, gz));
}

// ------------------------------------------------------------ catalog files

TEST_CASE("catalog JSON round trip") {
  const auto tmp = std::filesystem::temp_directory_path() / "eik_cat_test.json";
  Catalog cat;
  cat.n = 2;
  cat.c = 1;
  for (const auto& nf : symmeik1_catalog(2))
    cat.entries.push_back({nf.name, nf.field, true});
  save_catalog(cat, tmp);
  const Catalog back = load_catalog(tmp);
  REQUIRE(back.entries.size() == cat.entries.size());
  CHECK(back.n == 2);
  CHECK(back.c == 1);
  for (std::size_t i = 0; i < cat.entries.size(); ++i) {
    CHECK(back.entries[i].name == cat.entries[i].name);
    CHECK(back.entries[i].field == cat.entries[i].field);
    CHECK(back.entries[i].expect_yes);
  }
  std::filesystem::remove(tmp);
}
