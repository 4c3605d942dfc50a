#include "prcsync/lyapunov.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "prcsync/errors.hpp"

namespace prcsync {

std::string_view to_string(LyapunovMethod method) noexcept {
  switch (method) {
    case LyapunovMethod::analytic: return "analytic";
    case LyapunovMethod::uniform_approx: return "uniform-approx";
    case LyapunovMethod::family_closed_form: return "family-closed-form";
    case LyapunovMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

LyapunovEstimate lyapunov_analytic(const Prc& prc, NoiseAmplitude sigma,
                                   const StationaryDensity& density) {
  density.check_grid();
  std::vector<double> integrand(density.size());
  std::array<double, 3> jet{};
  for (std::size_t i = 0; i < density.size(); ++i) {
    prc.eval_jet(density.theta[i], jet);
    integrand[i] = jet[2] * jet[0] * density.values[i];
  }
  return {0.5 * sigma.squared() * periodic_quadrature(integrand), LyapunovMethod::analytic,
          std::nullopt};
}

LyapunovEstimate lyapunov_uniform_approx(const Prc& prc, NoiseAmplitude sigma) {
  return {-0.5 * sigma.squared() * prc.mean_square(1), LyapunovMethod::uniform_approx,
          std::nullopt};
}

double family_lambda_reduced(double k, double b, NoiseAmplitude sigma) {
  if (!(std::abs(k) <= 1.0)) throw InvalidArgument("family parameter K must lie in [-1, 1]");
  if (!std::isfinite(b) || b < 0.0) throw InvalidArgument("b must be finite and nonnegative");
  const double big_b = b + 4.0 * kPi * kPi;
  const double s4 = sigma.squared() * sigma.squared();
  const double k2 = k * k;
  return -1.0 / big_b +
         0.25 * s4 * (4.0 * k2 * k2 + 10.0 * k2 + 1.0) /
             (4.0 * kPi * kPi * big_b * big_b * big_b);
}

LyapunovEstimate lyapunov_family(double k, double b, NoiseAmplitude sigma) {
  return {0.5 * sigma.squared() * family_lambda_reduced(k, b, sigma),
          LyapunovMethod::family_closed_form, std::nullopt};
}

}  // namespace prcsync
