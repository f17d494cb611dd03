#pragma once

#include "eik/dual.hpp"
#include "eik/poly.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace eik {

/// The equation  M^{mu nu} u_mu u_nu = c  on R^{n+1} with coordinates
/// x_0 (time) and x_1..x_n (space), metric signature (+, -, ..., -).
/// c = 1 is the massive (eikonal) case, c = 0 the null case.
struct EikonalProblem {
  int n = 3;
  int c = 1;

  EikonalProblem() = default;
  EikonalProblem(int n_, int c_);
  int dim() const { return n + 1; }
  int metric(int mu) const { return mu == 0 ? 1 : -1; }
};

/// Variable layout shared by every polynomial in this module.
/// Base ring (coefficients of vector fields): x0..xn, u -> n+2 variables.
/// Full ring (objects that also see the gradient): x0..xn, u, u0..un.
inline int nvars_base(int n) { return n + 2; }
inline int nvars_full(int n) { return 2 * n + 3; }
inline int var_x(int mu) { return mu; }
inline int var_u(int n) { return n + 1; }
inline int var_grad(int n, int mu) { return n + 2 + mu; }

/// Point symmetry generator X = xi^mu(x,u) d_mu + eta(x,u) d_u.
/// Coefficients live in the base ring.
struct VectorField {
  int n = 0;
  std::vector<Poly> xi;  // n+1 entries
  Poly eta;

  VectorField() = default;
  VectorField(int n_, std::vector<Poly> xi_, Poly eta_);
  static VectorField zero(int n);
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Rational& c, const VectorField& f);
bool operator==(const VectorField& a, const VectorField& b);

/// Lie bracket [A, B] = AB - BA acting on (x, u).
VectorField commutator(const VectorField& a, const VectorField& b);

/// First prolongation: the gradient components
///   zeta_mu = D_mu eta - sum_nu (D_mu xi^nu) u_nu
/// with total derivative D_mu = d_mu + u_mu d_u, expanded in the full ring.
struct Prolongation1 {
  VectorField base;
  std::vector<Poly> zeta;  // n+1 entries in the full ring
};
Prolongation1 prolong1(const VectorField& f, const EikonalProblem& p);

/// The invariance residual R = X^(1)(M^{mu nu} u_mu u_nu - c)
///                           = 2 sum_mu M_mu u_mu zeta_mu,
/// organized by shape in the gradient:
///   R = sum_{mu,nu} Q_{mu nu} u_mu u_nu + sum_mu L_mu u_mu + C
///       + (sum_nu G_nu u_nu) (sum_mu M_mu u_mu^2)   (double sum, Q symmetric)
/// with Q, L, C, G polynomials in the base ring, Q symmetric. The cubic block
/// G_nu = -2 d(xi^nu)/du is zero whenever xi does not depend on u;
/// reassemble() rebuilds R exactly in the full ring.
struct ResidualDecomposition {
  int n = 0;
  std::vector<std::vector<Poly>> Q;  // (n+1) x (n+1), symmetric
  std::vector<Poly> L;               // n+1
  Poly C;
  std::vector<Poly> G;               // n+1

  Poly reassemble() const;
};
ResidualDecomposition invariance_residual(const Prolongation1& pr,
                                          const EikonalProblem& p);
/// Direct contraction 2 sum_mu M_mu u_mu zeta_mu in the full ring; used as an
/// independent route against reassemble().
Poly residual_poly(const Prolongation1& pr, const EikonalProblem& p);

/// Exact symmetry verdict. When yes, the residual factors as
///   R = Lambda * (M^{mu nu} u_mu u_nu - c),
/// Lambda = lambda0(x,u) + sum_nu lambda1_nu(x,u) u_nu  (base-ring entries);
/// lambda1 vanishes whenever xi is u-independent. When no, `violated` names
/// the first failing block (e.g. "Q11", "L0", "C").
struct SymmetryVerdict {
  bool yes = false;
  Poly lambda0;
  std::vector<Poly> lambda1;
  std::string violated;
};
SymmetryVerdict is_symmetry(const VectorField& f, const EikonalProblem& p);

/// Coefficient functions for fields that are smooth but not polynomial.
/// Arguments: the base point (x0..xn, u) as dual numbers.
using SmoothFn =
    std::function<Dual<long double>(std::span<const Dual<long double>>)>;
struct SmoothField {
  int n = 0;
  std::vector<SmoothFn> xi;
  SmoothFn eta;
};
SmoothField to_smooth(const VectorField& f);

/// Monte-Carlo residual check on the solution manifold: samples x and the
/// spatial gradient components from [-2,2], sets u_0 = sqrt(c + u_a u_a),
/// evaluates the prolonged action with forward-mode derivatives, and returns
/// the largest |R| seen. Exact symmetries come back at rounding level.
double sampled_symmetry_check(const SmoothField& f, const EikonalProblem& p,
                              int samples, std::uint64_t seed);

/// Graph point (x, u) transported by the flow exp(eps X).
struct GraphPoint {
  std::vector<double> x;  // n+1
  double u = 0;
};
struct FlowOptions {
  int steps = 256;
  double max_local_error = 1e-8;
};
struct FlowStepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
std::vector<GraphPoint> flow_map(const VectorField& f, double eps,
                                 std::span<const GraphPoint> pts,
                                 const FlowOptions& opt = {});

/// Discrete symmetries: reflections, spatial permutation generators, and for
/// c = 1 the hodograph swap x_1 <-> u. apply() maps a point plus gradient and
/// returns false where the map is undefined (hodograph at u_1 = 0).
struct DiscreteMap {
  std::string name;
  std::function<bool(std::vector<double>& x, double& u,
                     std::vector<double>& grad)>
      apply;
};
std::vector<DiscreteMap> discrete_catalog(const EikonalProblem& p);

/// Named generator catalogs.
struct NamedField {
  std::string name;
  VectorField field;
};

/// Full point-symmetry algebra of the c = 1 equation:
/// P_mu, P_u, rotations J_ab, boosts J_0a, gradient mixers J_u0 and J_ua,
/// dilation D, special conformal K_mu and K_u. Size (n+3)(n+4)/2.
std::vector<NamedField> symmeik1_catalog(int n);

/// Generator family of the c = 0 equation. Coefficient functions of u enter
/// as univariate polynomials (ring t1 := u):
///   xi^beta = 2 <c(u), x> x_beta - <x, x> c^beta(u)
///             + b^beta_nu(u) x_nu + d(u) x_beta + a^beta(u),
///   eta free,
/// where <,> is the Minkowski pairing and b must be antisymmetric after
/// lowering (b_{mu nu} = -b_{nu mu}); the generator takes the strictly upper
/// triangle and antisymmetrizes.
struct Symmeik0Params {
  std::vector<Poly> c;                  // n+1 univariate polys in u
  std::vector<std::vector<Poly>> b_upper;  // b[mu][nu] for mu < nu (lowered indices)
  Poly d;
  std::vector<Poly> a;                  // n+1
  Poly eta;                             // univariate in u
};
VectorField symmeik0_field(int n, const Symmeik0Params& params);
Symmeik0Params random_symmeik0(int n, int max_degree, std::mt19937_64& rng);

}  // namespace eik
