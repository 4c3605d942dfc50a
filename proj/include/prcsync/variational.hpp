#pragma once

#include <string_view>
#include <vector>

#include "prcsync/prc.hpp"

namespace prcsync {

enum class CaseClass { no_periodic_solution, unique_optimum, solution_family };

std::string_view to_string(CaseClass c) noexcept;

struct ConstraintCase {
  ConstraintParams params;
  CaseClass classification = CaseClass::unique_optimum;
};

/// Classifies (a, b, c) by the periodic roots of the characteristic
/// polynomial a nu + (1 - b nu) y^2 + c nu y^4 with y = 2 pi i:
///   a = c = 0              -> no periodic solution;
///   a = 0, c > 0           -> double root at y = 0, a one-parameter family;
///   a > 0                  -> unique optimum, unless c > 0 and the second
///                             root pair is itself periodic
///                             (a = 16 pi^4 k^2 c, integer k >= 2), which
///                             again leaves a family.
/// Throws InvalidArgument for negative or all-zero weights.
ConstraintCase classify_constraint_case(const ConstraintParams& cp);

/// Leading multiplier 4 pi^2 / (a + 4 b pi^2 + 16 c pi^4). Throws
/// InadmissibleCase unless the case is a unique optimum.
double nu10(const ConstraintParams& cp);

/// J(D) = a nu D + (1 - b nu) D'' + c nu D'''' applied exactly in Fourier space.
Prc apply_leading_operator(const Prc& prc, const ConstraintParams& cp, double nu);

/// Small-noise expansion of the optimal PRC, D = D0 + sigma^2 D1 + O(sigma^4).
///
/// D1 here is half of the product term as usually printed, so that
/// `optimal` = D0 + sigma^2 D1 reads
///   -sqrt2 sin(2 pi t)/sqrt(S) + (sigma^2/2) sqrt2 pi sin(2 pi t) sin(4 pi t) / ((a - 144 c pi^4) sqrt(S))
/// with S = a + 4 b pi^2 + 16 c pi^4. With this convention D1 solves
///   J(D1) = -(1/2) (D0'^3 + 3 D0 D0' D0''),
/// the order-sigma^2 part of the Euler-Lagrange equation of the reduced
/// functional (see docs/math_notes.md).
struct PerturbationSolution {
  ConstraintParams params;
  double sigma = 0.0;
  Prc delta0;
  Prc delta1;
  Prc optimal;
  double nu10 = 0.0;
  double nu11 = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  std::vector<double> nu20_theta;
  std::vector<double> nu20;  // D0 D0'' on nu20_theta
};

enum class Branch { negative, positive };

/// Throws InadmissibleCase unless (a, b, c) is a unique optimum, and for the
/// resonant denominator a = 144 c pi^4.
PerturbationSolution optimal_prc_perturbative(const ConstraintParams& cp, NoiseAmplitude sigma,
                                              Branch branch = Branch::negative,
                                              std::size_t grid = 512);

/// Right-hand side -(1/2)(D0'^3 + 3 D0 D0' D0'') of the first-order equation,
/// sampled on theta_j = j/n.
std::vector<double> first_order_forcing(const Prc& delta0, std::size_t n);

/// Member K of the (0, b, 1) family,
///   [K (1 - cos 2 pi t) - sqrt(1 - K^2) sin 2 pi t] / sqrt(2 pi^2 (b + 4 pi^2)).
/// Throws InvalidArgument for |K| > 1.
Prc family_prc(double k, double b);

/// Argmin over K in [-1, 1] of the family closed form, found from the sign
/// of d lambda / dK. Throws InvalidArgument for sigma = 0, where lambda does
/// not depend on K.
double family_optimal_K(double b, NoiseAmplitude sigma);

/// Zeros of the derivative of the sigma^2-accurate optimal PRC in [0,1).
std::vector<double> extrema_locations(const ConstraintParams& cp, NoiseAmplitude sigma);

}  // namespace prcsync
