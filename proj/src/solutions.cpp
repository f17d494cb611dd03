#include "eik/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace eik {

double minkowski_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("minkowski_dot: size mismatch");
  double acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc -= a[i] * b[i];
  return acc;
}

double eval_rank0(const Rank0Solution& s, std::span<const double> x,
                  const EikonalProblem& p) {
  if (static_cast<int>(s.c.size()) != p.dim())
    throw std::invalid_argument("eval_rank0: coefficient count != n+1");
  if (x.size() != s.c.size())
    throw std::invalid_argument("eval_rank0: point dimension mismatch");
  const double norm = minkowski_dot(s.c, s.c);
  if (std::abs(norm - p.c) > 1e-12)
    throw std::invalid_argument("eval_rank0: <c,c> != c, not a solution");
  double u = s.c0;
  for (std::size_t i = 0; i < x.size(); ++i) u += s.c[i] * x[i];
  return u;
}

ParametricSolution::ParametricSolution(int n_, int k_, Poly psi_,
                                       std::vector<Poly> w_)
    : n(n_), k(k_), psi(std::move(psi_)), w(std::move(w_)) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("ParametricSolution: need 1 <= k <= n");
  if (static_cast<int>(w.size()) != n - k)
    throw std::invalid_argument("ParametricSolution: w needs n-k entries");
  if (psi.nvars() != k)
    throw std::invalid_argument("ParametricSolution: psi must live in k variables");
  for (const Poly& p : w)
    if (p.nvars() != k)
      throw std::invalid_argument("ParametricSolution: w entry in wrong ring");
}

namespace {

struct EnvelopeWork {
  const ParametricSolution* s;
  std::vector<Poly> w_d;                  // w_d[m*k + b] = dw_m/dtau_b
  std::vector<Poly> w_dd;                 // w_dd[(m*k + b)*k + d]
  std::vector<Poly> psi_d;                // k entries
  std::vector<Poly> psi_dd;               // k*k entries

  explicit EnvelopeWork(const ParametricSolution& sol) : s(&sol) {
    const int k = sol.k, m_count = sol.n - sol.k;
    for (int m = 0; m < m_count; ++m)
      for (int b = 0; b < k; ++b) w_d.push_back(sol.w[m].diff(b));
    for (int m = 0; m < m_count; ++m)
      for (int b = 0; b < k; ++b)
        for (int d = 0; d < k; ++d) w_dd.push_back(w_d[m * k + b].diff(d));
    for (int b = 0; b < k; ++b) psi_d.push_back(sol.psi.diff(b));
    for (int b = 0; b < k; ++b)
      for (int d = 0; d < k; ++d) psi_dd.push_back(psi_d[b].diff(d));
  }
};

double eval_at(const Poly& p, std::span<const double> tau) {
  return p.eval<double>(tau);
}

}  // namespace

double parametric_value(const ParametricSolution& s, std::span<const double> x,
                        std::span<const double> tau) {
  const int n = s.n, k = s.k;
  if (static_cast<int>(x.size()) != n + 1)
    throw std::invalid_argument("parametric_value: point dimension mismatch");
  if (static_cast<int>(tau.size()) != k)
    throw std::invalid_argument("parametric_value: parameter dimension mismatch");
  double tt = 0, ww = 0, u = 0;
  for (int b = 0; b < k; ++b) {
    tt += tau[b] * tau[b];
    u -= x[1 + b] * tau[b];
  }
  for (int m = 0; m < n - k; ++m) {
    const double wm = eval_at(s.w[m], tau);
    ww += wm * wm;
    u += wm * x[1 + k + m];
  }
  u += x[0] * std::sqrt(1.0 + tt + ww);
  u += eval_at(s.psi, tau);
  return u;
}

std::vector<double> envelope_gradient(const ParametricSolution& s,
                                      std::span<const double> tau) {
  const int n = s.n, k = s.k;
  if (static_cast<int>(tau.size()) != k)
    throw std::invalid_argument("envelope_gradient: parameter dimension mismatch");
  std::vector<double> g(n + 1);
  double tt = 0, ww = 0;
  for (int b = 0; b < k; ++b) {
    tt += tau[b] * tau[b];
    g[1 + b] = -tau[b];
  }
  for (int m = 0; m < n - k; ++m) {
    const double wm = eval_at(s.w[m], tau);
    ww += wm * wm;
    g[1 + k + m] = wm;
  }
  g[0] = std::sqrt(1.0 + tt + ww);
  return g;
}

void stationarity(const ParametricSolution& s, std::span<const double> x,
                  std::span<const double> tau, std::vector<double>& S,
                  std::vector<std::vector<double>>& J) {
  EnvelopeWork work(s);
  const int n = s.n, k = s.k, mc = n - k;
  if (static_cast<int>(x.size()) != n + 1 || static_cast<int>(tau.size()) != k)
    throw std::invalid_argument("stationarity: dimension mismatch");

  std::vector<double> wv(mc), wd(mc * k), wdd(mc * k * k);
  for (int m = 0; m < mc; ++m) {
    wv[m] = eval_at(s.w[m], tau);
    for (int b = 0; b < k; ++b) wd[m * k + b] = eval_at(work.w_d[m * k + b], tau);
    for (int b = 0; b < k; ++b)
      for (int d = 0; d < k; ++d)
        wdd[(m * k + b) * k + d] = eval_at(work.w_dd[(m * k + b) * k + d], tau);
  }
  double tt = 0, ww = 0;
  for (int b = 0; b < k; ++b) tt += tau[b] * tau[b];
  for (int m = 0; m < mc; ++m) ww += wv[m] * wv[m];
  const double rho = std::sqrt(1.0 + tt + ww);

  // r_b = d rho^2 / (2 dtau_b) = tau_b + sum_m w_m w_{m,b}
  std::vector<double> r(k);
  for (int b = 0; b < k; ++b) {
    r[b] = tau[b];
    for (int m = 0; m < mc; ++m) r[b] += wv[m] * wd[m * k + b];
  }

  S.assign(k, 0.0);
  for (int b = 0; b < k; ++b) {
    double v = -x[1 + b] + x[0] * r[b] / rho + eval_at(work.psi_d[b], tau);
    for (int m = 0; m < mc; ++m) v += wd[m * k + b] * x[1 + k + m];
    S[b] = v;
  }

  J.assign(k, std::vector<double>(k, 0.0));
  for (int b = 0; b < k; ++b)
    for (int d = 0; d < k; ++d) {
      double rbd = (b == d) ? 1.0 : 0.0;
      for (int m = 0; m < mc; ++m)
        rbd += wd[m * k + d] * wd[m * k + b] + wv[m] * wdd[(m * k + b) * k + d];
      double v = x[0] * (rbd / rho - r[b] * r[d] / (rho * rho * rho));
      for (int m = 0; m < mc; ++m) v += wdd[(m * k + b) * k + d] * x[1 + k + m];
      v += eval_at(work.psi_dd[b * k + d], tau);
      J[b][d] = v;
    }
}

namespace {

// Solve A d = rhs in place by LU with partial pivoting; false when singular.
bool lu_solve(std::vector<std::vector<double>> A, std::vector<double> rhs,
              std::vector<double>& out) {
  const int k = static_cast<int>(rhs.size());
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int row = col + 1; row < k; ++row)
      if (std::abs(A[row][col]) > std::abs(A[pivot][col])) pivot = row;
    if (A[pivot][col] == 0.0 || !std::isfinite(A[pivot][col])) return false;
    std::swap(A[col], A[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < k; ++row) {
      const double f = A[row][col] / A[col][col];
      A[row][col] = 0;
      for (int c2 = col + 1; c2 < k; ++c2) A[row][c2] -= f * A[col][c2];
      rhs[row] -= f * rhs[col];
    }
  }
  out.assign(k, 0.0);
  for (int row = k - 1; row >= 0; --row) {
    double v = rhs[row];
    for (int c2 = row + 1; c2 < k; ++c2) v -= A[row][c2] * out[c2];
    out[row] = v / A[row][row];
  }
  return std::all_of(out.begin(), out.end(),
                     [](double d) { return std::isfinite(d); });
}

struct NewtonProblem {
  int k;
  std::function<bool(std::span<const double>)> in_domain;
  std::function<void(std::span<const double>, std::vector<double>&,
                     std::vector<std::vector<double>>&)>
      system;
  std::function<double(std::span<const double>)> value;
};

struct Candidate {
  std::vector<double> tau;
  double u;
  int iters;
};

double norm2sq(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

std::vector<Candidate> multistart_newton(const NewtonProblem& np,
                                         const EnvelopeOptions& opt) {
  const int k = np.k;
  std::mt19937_64 rng(opt.seed);
  const double cell =
      (opt.box_hi - opt.box_lo) / std::max(1, opt.starts_per_axis - 1);
  std::uniform_real_distribution<double> jitter(-0.35 * cell, 0.35 * cell);

  // Lattice of starts with seeded jitter, clamped to the box.
  std::vector<std::vector<double>> starts;
  std::vector<int> idx(k, 0);
  for (;;) {
    std::vector<double> t(k);
    for (int b = 0; b < k; ++b) {
      double base = opt.box_lo + idx[b] * cell;
      t[b] = std::clamp(base + jitter(rng), opt.box_lo, opt.box_hi);
    }
    starts.push_back(std::move(t));
    int b = 0;
    while (b < k && ++idx[b] == opt.starts_per_axis) idx[b++] = 0;
    if (b == k) break;
  }

  std::vector<Candidate> found;
  std::vector<double> S, d;
  std::vector<std::vector<double>> J;
  for (const auto& start : starts) {
    std::vector<double> tau = start;
    if (!np.in_domain(tau)) continue;
    bool converged = false;
    int iters = 0;
    np.system(tau, S, J);
    for (; iters < opt.max_iters; ++iters) {
      double phi = norm2sq(S);
      if (std::sqrt(phi) <= opt.tol) {
        converged = true;
        break;
      }
      if (!lu_solve(J, S, d)) break;
      for (double& di : d) di = -di;
      // Armijo backtracking on |S|^2.
      double alpha = 1.0;
      bool stepped = false;
      std::vector<double> trial(k);
      while (alpha >= 1e-10) {
        for (int b = 0; b < k; ++b) trial[b] = tau[b] + alpha * d[b];
        if (np.in_domain(trial)) {
          np.system(trial, S, J);
          if (norm2sq(S) <= (1.0 - 1e-4 * alpha) * phi) {
            tau = trial;
            stepped = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!stepped) break;
    }
    if (!converged) continue;
    // Polish: full Newton steps sharpen the root toward machine precision.
    for (int extra = 0; extra < 2; ++extra) {
      np.system(tau, S, J);
      if (!lu_solve(J, S, d)) break;
      std::vector<double> trial(k);
      for (int b = 0; b < k; ++b) trial[b] = tau[b] - d[b];
      if (!np.in_domain(trial)) break;
      std::vector<double> S2;
      std::vector<std::vector<double>> J2;
      np.system(trial, S2, J2);
      if (norm2sq(S2) < norm2sq(S)) {
        tau = trial;
      } else {
        break;
      }
    }
    Candidate c;
    c.tau = tau;
    c.u = np.value(tau);
    c.iters = iters;
    found.push_back(std::move(c));
  }
  return found;
}

std::vector<EnvelopeRoot> dedup_and_rank(std::vector<Candidate> cands,
                                         const EnvelopeOptions& opt) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.u != b.u) return a.u < b.u;
    return std::lexicographical_compare(a.tau.begin(), a.tau.end(),
                                        b.tau.begin(), b.tau.end());
  });
  std::vector<EnvelopeRoot> roots;
  for (const Candidate& c : cands) {
    bool dup = false;
    for (const EnvelopeRoot& r : roots) {
      double dist2 = 0;
      for (std::size_t b = 0; b < c.tau.size(); ++b) {
        const double d = c.tau[b] - r.tau[b];
        dist2 += d * d;
      }
      if (std::sqrt(dist2) <= opt.dedup_radius) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    EnvelopeRoot r;
    r.tau = c.tau;
    r.u = c.u;
    r.newton_iters = c.iters;
    r.branch_id = static_cast<int>(roots.size());
    roots.push_back(std::move(r));
    if (static_cast<int>(roots.size()) > opt.max_roots)
      throw DegenerateEnvelopeError(
          "envelope is degenerate at this point: root count exceeds " +
          std::to_string(opt.max_roots));
  }
  return roots;
}

}  // namespace

std::vector<EnvelopeRoot> solve_envelope(const ParametricSolution& s,
                                         std::span<const double> x,
                                         const EnvelopeOptions& opt) {
  if (static_cast<int>(x.size()) != s.n + 1)
    throw std::invalid_argument("solve_envelope: point dimension mismatch");
  if (!(opt.box_lo < opt.box_hi))
    throw std::invalid_argument("solve_envelope: empty search box");
  EnvelopeWork work(s);
  const int k = s.k, mc = s.n - s.k;
  std::vector<double> xcopy(x.begin(), x.end());

  NewtonProblem np;
  np.k = k;
  const double guard = 10.0 * (opt.box_hi - opt.box_lo);
  np.in_domain = [&, guard](std::span<const double> tau) {
    for (double t : tau)
      if (!std::isfinite(t) || std::abs(t) > std::abs(opt.box_hi) + guard)
        return false;
    return true;
  };
  np.system = [&](std::span<const double> tau, std::vector<double>& S,
                  std::vector<std::vector<double>>& J) {
    // Inline of stationarity() reusing the precomputed derivative tables.
    std::vector<double> wv(mc), wd(mc * k), wdd(mc * k * k);
    for (int m = 0; m < mc; ++m) {
      wv[m] = eval_at(s.w[m], tau);
      for (int b = 0; b < k; ++b) wd[m * k + b] = eval_at(work.w_d[m * k + b], tau);
      for (int b = 0; b < k; ++b)
        for (int d2 = 0; d2 < k; ++d2)
          wdd[(m * k + b) * k + d2] = eval_at(work.w_dd[(m * k + b) * k + d2], tau);
    }
    double tt = 0, ww = 0;
    for (int b = 0; b < k; ++b) tt += tau[b] * tau[b];
    for (int m = 0; m < mc; ++m) ww += wv[m] * wv[m];
    const double rho = std::sqrt(1.0 + tt + ww);
    std::vector<double> r(k);
    for (int b = 0; b < k; ++b) {
      r[b] = tau[b];
      for (int m = 0; m < mc; ++m) r[b] += wv[m] * wd[m * k + b];
    }
    S.assign(k, 0.0);
    for (int b = 0; b < k; ++b) {
      double v = -xcopy[1 + b] + xcopy[0] * r[b] / rho + eval_at(work.psi_d[b], tau);
      for (int m = 0; m < mc; ++m) v += wd[m * k + b] * xcopy[1 + k + m];
      S[b] = v;
    }
    J.assign(k, std::vector<double>(k, 0.0));
    for (int b = 0; b < k; ++b)
      for (int d2 = 0; d2 < k; ++d2) {
        double rbd = (b == d2) ? 1.0 : 0.0;
        for (int m = 0; m < mc; ++m)
          rbd += wd[m * k + d2] * wd[m * k + b] + wv[m] * wdd[(m * k + b) * k + d2];
        double v = xcopy[0] * (rbd / rho - r[b] * r[d2] / (rho * rho * rho));
        for (int m = 0; m < mc; ++m) v += wdd[(m * k + b) * k + d2] * xcopy[1 + k + m];
        v += eval_at(work.psi_dd[b * k + d2], tau);
        J[b][d2] = v;
      }
  };
  np.value = [&](std::span<const double> tau) {
    return parametric_value(s, xcopy, tau);
  };

  return dedup_and_rank(multistart_newton(np, opt), opt);
}

EnvelopeOptions euclid2_defaults() {
  EnvelopeOptions opt;
  opt.box_lo = -0.99;
  opt.box_hi = 0.99;
  opt.starts_per_axis = 9;
  return opt;
}

std::vector<EnvelopeRoot> eval_euclid2(const Poly& psi, double x1, double x2,
                                       const EnvelopeOptions& opt) {
  if (psi.nvars() != 1)
    throw std::invalid_argument("eval_euclid2: psi must be univariate");
  if (!(opt.box_lo < opt.box_hi) || opt.box_lo <= -1.0 || opt.box_hi >= 1.0)
    throw std::invalid_argument("eval_euclid2: search box must sit inside (-1, 1)");
  const Poly psi_d = psi.diff(0);
  const Poly psi_dd = psi_d.diff(0);

  NewtonProblem np;
  np.k = 1;
  np.in_domain = [](std::span<const double> tau) {
    return std::isfinite(tau[0]) && 1.0 - tau[0] * tau[0] > 1e-30;
  };
  np.system = [&](std::span<const double> tau, std::vector<double>& S,
                  std::vector<std::vector<double>>& J) {
    const double t = tau[0];
    const double rho = std::sqrt(1.0 - t * t);
    S.assign(1, x1 - x2 * t / rho + psi_d.eval<double>(tau));
    J.assign(1, {-x2 / (rho * rho * rho) + psi_dd.eval<double>(tau)});
  };
  np.value = [&](std::span<const double> tau) {
    const double t = tau[0];
    return x1 * t + x2 * std::sqrt(1.0 - t * t) + psi.eval<double>(tau);
  };

  return dedup_and_rank(multistart_newton(np, opt), opt);
}

double cone_distance_euclid2(double x1, double x2, double apex1, double apex2) {
  const double d1 = x1 - apex1, d2 = x2 - apex2;
  if (d1 == 0.0 && d2 == 0.0) return 0.0;
  // Move the larger component into the x_2 slot and make it positive; the
  // axis swap and both reflections are discrete symmetries of the equation,
  // and the distance is even under all of them.
  double a = d1, b = d2;
  if (std::abs(a) > std::abs(b)) std::swap(a, b);
  b = std::abs(b);
  const Poly psi0(1);
  auto roots = eval_euclid2(psi0, a, b);
  if (roots.empty())
    throw std::runtime_error("cone_distance_euclid2: no envelope root found");
  // Positive branch = largest root; with psi = 0 it equals the distance.
  return roots.back().u;
}

double point_residual(std::span<const double> grad, const EikonalProblem& p) {
  if (static_cast<int>(grad.size()) != p.dim())
    throw std::invalid_argument("point_residual: gradient dimension mismatch");
  return minkowski_dot(grad, grad) - p.c;
}

}  // namespace eik
