#include "eik/symmetry.hpp"

#include <algorithm>
#include <cmath>

namespace eik {

EikonalProblem::EikonalProblem(int n_, int c_) : n(n_), c(c_) {
  if (n < 1) throw std::invalid_argument("EikonalProblem: n must be >= 1");
  if (c != 0 && c != 1) throw std::invalid_argument("EikonalProblem: c must be 0 or 1");
}

VectorField::VectorField(int n_, std::vector<Poly> xi_, Poly eta_)
    : n(n_), xi(std::move(xi_)), eta(std::move(eta_)) {
  if (static_cast<int>(xi.size()) != n + 1)
    throw std::invalid_argument("VectorField: xi needs n+1 components");
  for (const Poly& p : xi)
    if (p.nvars() != nvars_base(n))
      throw std::invalid_argument("VectorField: xi component in wrong ring");
  if (eta.nvars() != nvars_base(n))
    throw std::invalid_argument("VectorField: eta in wrong ring");
}

VectorField VectorField::zero(int n) {
  Poly z(nvars_base(n));
  return VectorField(n, std::vector<Poly>(n + 1, z), z);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.n != b.n) throw std::invalid_argument("vector field dimension mismatch");
  VectorField out = a;
  for (int mu = 0; mu <= a.n; ++mu) out.xi[mu] += b.xi[mu];
  out.eta += b.eta;
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.n != b.n) throw std::invalid_argument("vector field dimension mismatch");
  VectorField out = a;
  for (int mu = 0; mu <= a.n; ++mu) out.xi[mu] -= b.xi[mu];
  out.eta -= b.eta;
  return out;
}

VectorField operator*(const Rational& c, const VectorField& f) {
  VectorField out = f;
  for (Poly& p : out.xi) p *= c;
  out.eta *= c;
  return out;
}

bool operator==(const VectorField& a, const VectorField& b) {
  return a.n == b.n && a.xi == b.xi && a.eta == b.eta;
}

namespace {

// Apply the first-order differential operator A to a base-ring function g.
Poly apply_field(const VectorField& a, const Poly& g) {
  const int n = a.n;
  Poly out(nvars_base(n));
  for (int mu = 0; mu <= n; ++mu) out += a.xi[mu] * g.diff(var_x(mu));
  out += a.eta * g.diff(var_u(n));
  return out;
}

}  // namespace

VectorField commutator(const VectorField& a, const VectorField& b) {
  if (a.n != b.n) throw std::invalid_argument("vector field dimension mismatch");
  const int n = a.n;
  std::vector<Poly> xi;
  xi.reserve(n + 1);
  for (int mu = 0; mu <= n; ++mu)
    xi.push_back(apply_field(a, b.xi[mu]) - apply_field(b, a.xi[mu]));
  Poly eta = apply_field(a, b.eta) - apply_field(b, a.eta);
  return VectorField(n, std::move(xi), std::move(eta));
}

Prolongation1 prolong1(const VectorField& f, const EikonalProblem& p) {
  if (f.n != p.n) throw std::invalid_argument("field/problem dimension mismatch");
  const int n = p.n;
  const int nv = nvars_full(n);

  // Embed base-ring objects into the full ring once.
  auto lift = [&](const Poly& q) { return q.extended(nv); };
  std::vector<Poly> grad;
  grad.reserve(n + 1);
  for (int mu = 0; mu <= n; ++mu) grad.push_back(Poly::variable(nv, var_grad(n, mu)));

  Prolongation1 out;
  out.base = f;
  out.zeta.reserve(n + 1);
  const Poly eta_u = lift(f.eta.diff(var_u(n)));
  for (int mu = 0; mu <= n; ++mu) {
    Poly z = lift(f.eta.diff(var_x(mu))) + eta_u * grad[mu];
    for (int nu = 0; nu <= n; ++nu) {
      z -= lift(f.xi[nu].diff(var_x(mu))) * grad[nu];
      z -= lift(f.xi[nu].diff(var_u(n))) * grad[mu] * grad[nu];
    }
    out.zeta.push_back(std::move(z));
  }
  return out;
}

Poly residual_poly(const Prolongation1& pr, const EikonalProblem& p) {
  const int n = p.n;
  const int nv = nvars_full(n);
  Poly r(nv);
  for (int mu = 0; mu <= n; ++mu) {
    Poly term = Poly::variable(nv, var_grad(n, mu)) * pr.zeta[mu];
    term *= Rational(2 * p.metric(mu));
    r += term;
  }
  return r;
}

ResidualDecomposition invariance_residual(const Prolongation1& pr,
                                          const EikonalProblem& p) {
  const int n = p.n;
  const VectorField& f = pr.base;

  ResidualDecomposition d;
  d.n = n;
  d.Q.assign(n + 1, std::vector<Poly>(n + 1, Poly(nvars_base(n))));
  d.L.assign(n + 1, Poly(nvars_base(n)));
  d.C = Poly(nvars_base(n));
  d.G.assign(n + 1, Poly(nvars_base(n)));

  const Poly eta_u = f.eta.diff(var_u(n));
  for (int mu = 0; mu <= n; ++mu) {
    const Rational m_mu(p.metric(mu));
    d.L[mu] = Rational(2) * m_mu * f.eta.diff(var_x(mu));
    d.G[mu] = Rational(-2) * f.xi[mu].diff(var_u(n));
    d.Q[mu][mu] = Rational(2) * m_mu * (eta_u - f.xi[mu].diff(var_x(mu)));
    for (int nu = mu + 1; nu <= n; ++nu) {
      const Rational m_nu(p.metric(nu));
      Poly q = -(m_mu * f.xi[nu].diff(var_x(mu)) + m_nu * f.xi[mu].diff(var_x(nu)));
      d.Q[mu][nu] = q;
      d.Q[nu][mu] = std::move(q);
    }
  }
  return d;
}

Poly ResidualDecomposition::reassemble() const {
  const int nv = nvars_full(n);
  auto lift = [&](const Poly& q) { return q.extended(nv); };
  std::vector<Poly> grad;
  for (int mu = 0; mu <= n; ++mu) grad.push_back(Poly::variable(nv, var_grad(n, mu)));

  Poly r = lift(C);
  for (int mu = 0; mu <= n; ++mu) {
    r += lift(L[mu]) * grad[mu];
    for (int nu = mu; nu <= n; ++nu) {
      Poly t = lift(Q[mu][nu]) * grad[mu] * grad[nu];
      if (nu != mu) t *= Rational(2);
      r += t;
    }
  }
  Poly gdot(nv), quad(nv);
  for (int nu = 0; nu <= n; ++nu) {
    gdot += lift(G[nu]) * grad[nu];
    Poly sq = grad[nu] * grad[nu];
    sq *= Rational(nu == 0 ? 1 : -1);
    quad += sq;
  }
  r += gdot * quad;
  return r;
}

SymmetryVerdict is_symmetry(const VectorField& f, const EikonalProblem& p) {
  auto d = invariance_residual(prolong1(f, p), p);
  const int n = p.n;
  SymmetryVerdict v;
  v.lambda0 = Poly(nvars_base(n));
  v.lambda1.assign(n + 1, Poly(nvars_base(n)));

  auto block = [](const char* prefix, int a, int b = -1) {
    std::string s(prefix);
    s += std::to_string(a);
    if (b >= 0) s += std::to_string(b);
    return s;
  };

  // Candidate multiplier from the (0,0) block, then everything else must fit.
  Poly lambda0 = Rational(p.metric(0)) * d.Q[0][0];
  for (int mu = 1; mu <= n; ++mu) {
    if (!(d.Q[mu][mu] == Rational(p.metric(mu)) * lambda0)) {
      v.violated = block("Q", mu, mu);
      return v;
    }
  }
  for (int mu = 0; mu <= n; ++mu)
    for (int nu = mu + 1; nu <= n; ++nu)
      if (!d.Q[mu][nu].is_zero()) {
        v.violated = block("Q", mu, nu);
        return v;
      }
  for (int mu = 0; mu <= n; ++mu) {
    Poly want = Rational(-p.c) * d.G[mu];
    if (!(d.L[mu] == want)) {
      v.violated = block("L", mu);
      return v;
    }
  }
  if (!d.C.is_zero() || (p.c != 0 && !lambda0.is_zero())) {
    v.violated = "C";
    return v;
  }
  v.yes = true;
  v.lambda0 = std::move(lambda0);
  v.lambda1 = d.G;
  return v;
}

SmoothField to_smooth(const VectorField& f) {
  SmoothField s;
  s.n = f.n;
  for (const Poly& p : f.xi)
    s.xi.push_back([p](std::span<const Dual<long double>> at) {
      return p.eval<Dual<long double>>(at);
    });
  const Poly eta = f.eta;
  s.eta = [eta](std::span<const Dual<long double>> at) {
    return eta.eval<Dual<long double>>(at);
  };
  return s;
}

double sampled_symmetry_check(const SmoothField& f, const EikonalProblem& p,
                              int samples, std::uint64_t seed) {
  if (f.n != p.n) throw std::invalid_argument("field/problem dimension mismatch");
  const int n = p.n;
  const int nb = nvars_base(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);

  std::vector<Dual<long double>> at(nb);
  std::vector<long double> xi_val(n + 1), eta_d(nb);
  std::vector<std::vector<long double>> xi_d(n + 1, std::vector<long double>(nb));
  std::vector<long double> uu(n + 1);

  long double worst = 0.0L;
  for (int s = 0; s < samples; ++s) {
    for (int v = 0; v < nb; ++v) at[v] = Dual<long double>(box(rng));
    long double spatial = 0.0L;
    for (int a = 1; a <= n; ++a) {
      uu[a] = box(rng);
      spatial += uu[a] * uu[a];
    }
    uu[0] = std::sqrt(static_cast<long double>(p.c) + spatial);

    for (int v = 0; v < nb; ++v) {
      at[v].d = 1.0L;
      for (int nu = 0; nu <= n; ++nu) {
        Dual<long double> r = f.xi[nu](at);
        xi_val[nu] = r.v;
        xi_d[nu][v] = r.d;
      }
      eta_d[v] = f.eta(at).d;
      at[v].d = 0.0L;
    }

    long double res = 0.0L;
    for (int mu = 0; mu <= n; ++mu) {
      long double zeta = eta_d[var_x(mu)] + eta_d[var_u(n)] * uu[mu];
      for (int nu = 0; nu <= n; ++nu) {
        zeta -= xi_d[nu][var_x(mu)] * uu[nu];
        zeta -= xi_d[nu][var_u(n)] * uu[mu] * uu[nu];
      }
      res += 2.0L * p.metric(mu) * uu[mu] * zeta;
    }
    worst = std::max(worst, std::abs(res));
  }
  return static_cast<double>(worst);
}

std::vector<GraphPoint> flow_map(const VectorField& f, double eps,
                                 std::span<const GraphPoint> pts,
                                 const FlowOptions& opt) {
  const int n = f.n;
  const int nb = nvars_base(n);
  if (opt.steps < 1) throw std::invalid_argument("flow_map: steps must be positive");

  auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
    std::span<const double> at(y);
    for (int mu = 0; mu <= n; ++mu) dy[mu] = f.xi[mu].eval<double>(at);
    dy[n + 1] = f.eta.eval<double>(at);
  };
  auto rk4 = [&](std::vector<double>& y, double h) {
    std::vector<double> k1(nb), k2(nb), k3(nb), k4(nb), t(nb);
    rhs(y, k1);
    for (int i = 0; i < nb; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    rhs(t, k2);
    for (int i = 0; i < nb; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    rhs(t, k3);
    for (int i = 0; i < nb; ++i) t[i] = y[i] + h * k3[i];
    rhs(t, k4);
    for (int i = 0; i < nb; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  std::vector<GraphPoint> out;
  out.reserve(pts.size());
  const double h = eps / opt.steps;
  for (const GraphPoint& p0 : pts) {
    if (static_cast<int>(p0.x.size()) != n + 1)
      throw std::invalid_argument("flow_map: point dimension mismatch");
    std::vector<double> y(nb);
    std::copy(p0.x.begin(), p0.x.end(), y.begin());
    y[n + 1] = p0.u;
    for (int s = 0; s < opt.steps; ++s) {
      std::vector<double> full = y, half = y;
      rk4(full, h);
      rk4(half, 0.5 * h);
      rk4(half, 0.5 * h);
      double err = 0;
      for (int i = 0; i < nb; ++i) err = std::max(err, std::abs(full[i] - half[i]));
      if (!(err <= opt.max_local_error))
        throw FlowStepError("flow step error " + std::to_string(err) +
                            " exceeds bound; reduce eps or raise steps");
      y = std::move(half);
    }
    GraphPoint q;
    q.x.assign(y.begin(), y.begin() + n + 1);
    q.u = y[n + 1];
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<DiscreteMap> discrete_catalog(const EikonalProblem& p) {
  const int n = p.n;
  std::vector<DiscreteMap> maps;

  maps.push_back({"reflect-x0", [](std::vector<double>& x, double&,
                                   std::vector<double>& g) {
                    x[0] = -x[0];
                    g[0] = -g[0];
                    return true;
                  }});
  for (int a = 1; a <= n; ++a)
    maps.push_back({"reflect-x" + std::to_string(a),
                    [a](std::vector<double>& x, double&, std::vector<double>& g) {
                      x[a] = -x[a];
                      g[a] = -g[a];
                      return true;
                    }});
  maps.push_back({"negate-u", [](std::vector<double>&, double& u,
                                 std::vector<double>& g) {
                    u = -u;
                    for (double& gi : g) gi = -gi;
                    return true;
                  }});
  for (int a = 1; a < n; ++a)
    maps.push_back({"swap-x" + std::to_string(a) + "-x" + std::to_string(a + 1),
                    [a](std::vector<double>& x, double&, std::vector<double>& g) {
                      std::swap(x[a], x[a + 1]);
                      std::swap(g[a], g[a + 1]);
                      return true;
                    }});
  if (p.c == 1)
    maps.push_back({"hodograph", [n](std::vector<double>& x, double& u,
                                     std::vector<double>& g) {
                      if (g[1] == 0.0) return false;
                      std::swap(x[1], u);
                      const double inv = 1.0 / g[1];
                      for (int mu = 0; mu <= n; ++mu)
                        if (mu != 1) g[mu] = -g[mu] * inv;
                      g[1] = inv;
                      return true;
                    }});
  return maps;
}

}  // namespace eik
