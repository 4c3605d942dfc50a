#pragma once

#include <optional>
#include <vector>

#include "prcsync/prc.hpp"

namespace prcsync {

enum class BvpOrder { automatic, fourth, second };

struct BvpOptions {
  int modes = 32;
  /// Harmonics are doubled up to this count while the off-grid residual
  /// exceeds `residual_tolerance`.
  int max_modes = 256;
  int max_iterations = 50;
  double tolerance = 1e-12;  // sup-norm of the collocation residual
  double residual_tolerance = 1e-8;
  BvpOrder order = BvpOrder::automatic;
};

struct ResidualNorms {
  double ode = 0.0;          // sup |E| of the Euler-Lagrange equation
  double constraint = 0.0;   // |int a D^2 + b D'^2 + c D''^2 - 1|
  double periodicity = 0.0;  // max_k |D^(k)(0) - D^(k)(1)|, k up to the ODE order - 1
};

struct BvpSolution {
  ConstraintParams params;
  double sigma = 0.0;
  Prc delta;
  double nu1 = 0.0;
  /// Multiplier of the translation term mu D' added to make the Newton system
  /// square; it vanishes at a true solution.
  double unfolding = 0.0;
  int ode_order = 4;
  ResidualNorms residuals;
  int iterations = 0;
};

/// Periodic Euler-Lagrange problem of the reduced functional
///   a nu D + (1 - b nu) D'' + c nu D'''' + (sigma^2/2)(D'^3 + 3 D D' D'') = 0,
/// with int a D^2 + b D'^2 + c D''^2 = 1 and D(0) = 0, D'(0) < 0. For c = 0 the
/// same equation is second order.
///
/// Fourier collocation with `modes` harmonics on 2 modes + 1 points, unknowns
/// (coefficients, nu, mu), Newton with the analytic Jacobian and step halving
/// on residual increase. The initial guess defaults to the leading-order
/// optimum; any guess is first translated so that a falling zero sits at 0.
/// A collocation solution is only accepted once the residual between the
/// collocation points is small too, otherwise the mode count is doubled.
///
/// For c = 0 the coefficient of D'' is (1 - b nu) + (3 sigma^2/2) D D', which
/// reaches zero at a finite sigma (about 0.27 for (1, 1, 0)); past that point
/// no smooth periodic solution continues the branch and the solver reports
/// ConvergenceError.
///
/// Throws InadmissibleCase unless the case is a unique optimum,
/// InvalidArgument for sigma >= 0.5 or an order that does not match c, and
/// ConvergenceError (with the final residual) if Newton fails.
BvpSolution solve_euler_lagrange(const ConstraintParams& cp, NoiseAmplitude sigma,
                                 const std::optional<Prc>& init = std::nullopt,
                                 const BvpOptions& opts = {});

/// Recomputes the three residuals of `delta` and `nu1` on a separate grid of
/// `grid` points, straight from the Fourier series. The unfolding term is
/// left out.
ResidualNorms el_residual(const BvpSolution& sol, const ConstraintParams& cp,
                          NoiseAmplitude sigma, int grid = 1000);

/// Solves for each sigma in turn, warm-starting from the previous solution.
/// Failures are rethrown as ConvergenceError naming the failing index.
std::vector<BvpSolution> continuation_in_sigma(const ConstraintParams& cp,
                                               const std::vector<double>& sigmas,
                                               const BvpOptions& opts = {});

}  // namespace prcsync
