#pragma once

#include "eik/grid.hpp"

#include <functional>
#include <vector>

namespace eik {

/// Distance-type boundary problem for |grad w| = 1 on a regular grid
/// (all axes spatial, unit speed).
struct FmmSource {
  std::vector<int> idx;
  double value = 0;
};
struct FmmProblem {
  std::vector<double> origin, spacing;
  std::vector<int> shape;
  std::vector<FmmSource> sources;
};

struct FmmResult {
  GridField field;
  /// Values in acceptance order; nondecreasing by construction (audited).
  std::vector<double> accepted;
};

/// First-order fast marching: upwind quadratic update, min-heap acceptance,
/// heap ties broken by node index. Throws if monotone acceptance is violated.
FmmResult solve_fmm(const FmmProblem& p);

/// Recheck every accepted non-source node against its own upwind quadratic
/// update using the final field; returns the max discrepancy.
double fmm_update_residual(const FmmResult& r, const FmmProblem& p);

struct ErrorNorms {
  double linf = 0;
  double l2 = 0;  // root mean square
  std::size_t nodes = 0;
};

/// Compare a numeric field against a per-point analytic evaluator
/// (non-finite numeric nodes are skipped).
ErrorNorms compare(const GridField& numeric,
                   const std::function<double(std::span<const double>)>& analytic);

/// Pointwise L-infinity distance of two fields on identical geometry.
double linf_diff(const GridField& a, const GridField& b);

/// log2(err_coarse / err_fine): measured convergence order under h -> h/2.
double convergence_order(double err_coarse, double err_fine);

}  // namespace eik
