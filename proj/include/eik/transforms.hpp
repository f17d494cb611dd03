#pragma once

#include "eik/grid.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace eik {

/// Target lattice for an inverted axis.
struct Axis {
  double origin = 0;
  double spacing = 1;
  int count = 0;
};

struct MonotonicityError : std::runtime_error {
  int slice;
  explicit MonotonicityError(int slice_, const std::string& what)
      : std::runtime_error(what), slice(slice_) {}
};
struct MissingDataError : std::runtime_error {
  int slice;
  explicit MissingDataError(int slice_, const std::string& what)
      : std::runtime_error(what), slice(slice_) {}
};

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes). Built on
/// strictly monotone data it stays monotone, so it can be inverted.
class Pchip {
 public:
  static Pchip fit(std::vector<double> x, std::vector<double> f);
  double eval(double at) const;
  /// Solve eval(x) = target; requires strictly monotone data covering target.
  double invert(double target) const;
  double front() const { return f_.front(); }
  double back() const { return f_.back(); }
  bool increasing() const { return inc_; }

 private:
  std::vector<double> x_, f_, d_;
  bool inc_ = true;
};

/// Cubic Hermite interpolation of (xs, fs) with prescribed slopes.
double hermite_eval(const std::vector<double>& xs, const std::vector<double>& fs,
                    const std::vector<double>& slopes, double at);

struct TransformOptions {
  std::optional<Axis> target;       // default: common attained range, same count
  double max_missing_frac = 0.5;    // per-slice missing budget on input
};

/// Discrete Legendre transform in the first axis:
///   H(y_1, x') = x_1 y_1 - u(x_1, x'),  u_{x_1}(x_1, x') = y_1.
/// The gradient is formed by second-order differences (one-sided at run
/// ends), inverted per slice by monotone interpolation; u is interpolated
/// with Hermite cubics carrying the gradient as slope data. Target nodes
/// outside a slice's attained gradient range become missing. Applying the
/// transform twice (target = original axis) reproduces u up to O(h^2).
GridField legendre_1var(const GridField& u, const TransformOptions& opt = {});

/// max |H_{y_2}^2 + y_1^2 - 1| over interior non-missing nodes: the image of
/// the two-dimensional Euclidean eikonal equation under legendre_1var.
double verify_linearized_ode(const GridField& H);

/// Hodograph transform: invert u along axis 0 per spatial column,
///   w(y_0, x_a) = the x_0 with u(x_0, x_a) = y_0.
GridField hodograph(const GridField& u, const TransformOptions& opt = {});

/// max |v_{y_a} v_{y_a} - 2 v_{y_0}| (Hamilton-Jacobi normal form).
double verify_hj(const GridField& v);

}  // namespace eik
