#pragma once

#include <functional>
#include <vector>

#include "ouvg/types.hpp"

namespace ouvg {

struct SimplexOptions {
  double size_tol = 1e-6;  ///< stop when the simplex characteristic size falls below this
  int max_iter = 2000;
};

struct SimplexResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Best objective value after each iteration.
  std::vector<double> trace;
};

/// Derivative-free Nelder-Mead minimization (GSL nmsimplex2). Non-finite objective
/// values are treated as +infinity.
SimplexResult minimize_simplex(const std::function<double(const Vector&)>& f, const Vector& x0,
                               const Vector& step, const SimplexOptions& options = {});

}  // namespace ouvg
