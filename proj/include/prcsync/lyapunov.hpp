#pragma once

#include <optional>
#include <string_view>

#include "prcsync/density.hpp"
#include "prcsync/prc.hpp"

namespace prcsync {

enum class LyapunovMethod { analytic, uniform_approx, family_closed_form, monte_carlo };

std::string_view to_string(LyapunovMethod method) noexcept;

/// Lyapunov exponent of the synchronous state (units 1/time). The standard
/// error is present exactly for Monte Carlo estimates.
struct LyapunovEstimate {
  double value = 0.0;
  LyapunovMethod method = LyapunovMethod::analytic;
  std::optional<double> std_error;
};

/// (sigma^2/2) int_0^1 D'' D P dtheta by periodic quadrature on the density
/// grid. Throws InvalidArgument on a malformed grid.
LyapunovEstimate lyapunov_analytic(const Prc& prc, NoiseAmplitude sigma,
                                   const StationaryDensity& density);

/// Uniform-density approximation -(sigma^2/2) int (D')^2, from the Fourier
/// coefficients.
LyapunovEstimate lyapunov_uniform_approx(const Prc& prc, NoiseAmplitude sigma);

/// The K-family closed form with (a, c) = (0, 1), expressed without the
/// overall sigma^2/2 factor:
///   -1/(b + 4 pi^2) + (sigma^4/4) (4K^4 + 10K^2 + 1) / (4 pi^2 (b + 4 pi^2)^3).
/// This equals int D'' D P for the family member K with P the fourth-order
/// density. Throws InvalidArgument for |K| > 1.
double family_lambda_reduced(double k, double b, NoiseAmplitude sigma);

/// The same closed form in physical units, i.e. (sigma^2/2) times
/// family_lambda_reduced, directly comparable with lyapunov_analytic.
LyapunovEstimate lyapunov_family(double k, double b, NoiseAmplitude sigma);

}  // namespace prcsync
