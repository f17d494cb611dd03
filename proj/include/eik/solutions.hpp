#pragma once

#include "eik/poly.hpp"
#include "eik/symmetry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace eik {

/// Affine solution u = sum_mu c_mu x_mu + c0 with gradient c obeying
/// <c, c>_M = c(problem).
struct Rank0Solution {
  std::vector<double> c;  // n+1
  double c0 = 0;
};
double minkowski_dot(std::span<const double> a, std::span<const double> b);
double eval_rank0(const Rank0Solution& s, std::span<const double> x,
                  const EikonalProblem& p);

/// Rank-k envelope family for the c = 1 equation (1 <= k <= n):
///   u(x; tau) = -sum_b x_b tau_b + x_0 rho + sum_m w_m(tau) x_{k+m} + psi(tau),
///   rho = sqrt(1 + |tau|^2 + |w(tau)|^2),
/// with psi and the w_m univariate/multivariate polynomials in tau_1..tau_k.
/// On stationary points the gradient is (rho, -tau_1..-tau_k, w_1..w_{n-k}),
/// so <grad, grad>_M = 1 identically.
struct ParametricSolution {
  int n = 0;
  int k = 0;
  Poly psi;               // ring of k variables t1..tk
  std::vector<Poly> w;    // n-k entries, same ring

  ParametricSolution() = default;
  ParametricSolution(int n_, int k_, Poly psi_, std::vector<Poly> w_);
};

/// Envelope value at fixed parameters (no stationarity imposed).
double parametric_value(const ParametricSolution& s, std::span<const double> x,
                        std::span<const double> tau);

/// Stationarity system S_b = du/dtau_b and its Jacobian, evaluated at tau.
void stationarity(const ParametricSolution& s, std::span<const double> x,
                  std::span<const double> tau, std::vector<double>& S,
                  std::vector<std::vector<double>>& J);

/// Gradient of the enveloped solution expressed through the parameters.
std::vector<double> envelope_gradient(const ParametricSolution& s,
                                      std::span<const double> tau);

struct DegenerateEnvelopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnvelopeOptions {
  double box_lo = -5.0;
  double box_hi = 5.0;
  int starts_per_axis = 7;
  std::uint64_t seed = 0;
  int max_iters = 50;
  double tol = 1e-12;
  double dedup_radius = 1e-8;
  int max_roots = 64;
};

struct EnvelopeRoot {
  std::vector<double> tau;
  double u = 0;
  int newton_iters = 0;
  int branch_id = 0;
};

/// Damped multistart Newton on the stationarity system. Converged roots are
/// deduplicated at dedup_radius, sorted by (u, tau lex), and numbered by
/// branch_id. More than max_roots distinct roots raises
/// DegenerateEnvelopeError (the envelope has a continuum there).
std::vector<EnvelopeRoot> solve_envelope(const ParametricSolution& s,
                                         std::span<const double> x,
                                         const EnvelopeOptions& opt = {});

EnvelopeOptions euclid2_defaults();

/// Two-dimensional Euclidean analogue u_x1^2 + u_x2^2 = 1 via the envelope
///   u = x_1 tau + x_2 sqrt(1 - tau^2) + psi(tau),  tau in (-1, 1).
/// psi is univariate (t1). The search box must stay inside (-1, 1);
/// defaults: [-0.99, 0.99], 9 starts.
std::vector<EnvelopeRoot> eval_euclid2(const Poly& psi, double x1, double x2,
                                       const EnvelopeOptions& opt = euclid2_defaults());

/// Distance-to-apex evaluator built on eval_euclid2 with psi = 0, extended to
/// the whole plane by the reflection and axis-swap symmetries (the bare
/// envelope chart only covers x_2 > 0). Exact value |x - apex|, 0 at the apex.
double cone_distance_euclid2(double x1, double x2, double apex1 = 0,
                             double apex2 = 0);

/// Pointwise residual <g, g>_M - c of a gradient sample.
double point_residual(std::span<const double> grad, const EikonalProblem& p);

}  // namespace eik
