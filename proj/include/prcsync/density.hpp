#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "prcsync/prc.hpp"

namespace prcsync {

enum class DensityMethod { perturbative, exact, empirical };

std::string_view to_string(DensityMethod method) noexcept;

/// Stationary phase density P sampled on a uniform periodic grid, together
/// with the probability flux J of the stationary Fokker-Planck equation
///   -J = -P + (sigma^2/2) D (D P)'.
struct StationaryDensity {
  std::vector<double> theta;   // theta_i = (i + offset)/n
  std::vector<double> values;  // P(theta_i)
  double flux = 1.0;
  DensityMethod method = DensityMethod::perturbative;
  double sigma = 0.0;
  int series_order = 0;  // 2 or 4 for perturbative, 0 otherwise

  std::size_t size() const noexcept { return values.size(); }
  /// Mean of the samples, i.e. the periodic-quadrature integral of P.
  double integral() const;
  /// Throws InvalidArgument unless theta is uniform with spacing 1/n and
  /// matches values in length.
  void check_grid() const;
};

/// Open arc (left, right) of the circle on which D keeps one sign. For a PRC
/// without zeros the single arc is the whole circle and `periodic` is set.
struct Subinterval {
  double left = 0.0;
  double right = 1.0;  // may exceed 1 for the arc that wraps through theta = 0
  int sign = 1;
  bool periodic = false;
};

struct IntervalDecomposition {
  std::vector<double> roots;  // sorted, in [0,1)
  std::vector<Subinterval> intervals;

  /// Index of the arc containing theta (reduced mod 1), or -1 at a root.
  int locate(double theta) const;
};

/// Splits the circle at the simple zeros of prc. Throws DegenerateRoot for
/// tangent or coincident zeros and InvalidArgument for the zero curve.
IntervalDecomposition decompose_intervals(const Prc& prc, int grid = 4096);

/// Small-noise series. Order 2: P = 1 + (sigma^2/2) D D', J = 1. Order 4 adds
/// (sigma^4/4)[2 D^2 D'^2 + D^3 D'' + I] with I = int (D D')^2, and
/// J = 1 + (sigma^4/4) I. Logs a warning above sigma = 0.3.
StationaryDensity density_perturbative(const Prc& prc, NoiseAmplitude sigma, int order,
                                       std::size_t n = 512);

struct ExactDensityOptions {
  std::size_t n = 512;
  int root_grid = 4096;
  double root_buffer = 1e-4;  // linear blend to P = J this close to a root
  double rel_tol = 1e-12;
  double abs_tol = 1e-13;
  double s_max = 50.0;  // truncation of the exponential weight e^{-s}
};

/// Stationary density from the integrating-factor solution of the singular
/// flux equation, solved arc by arc between zeros of D.
///
/// With Q = D P and z' = -2/(sigma^2 D^2) the bounded solution on an arc
/// ending at the zero b is
///   Q(x) = (2J/sigma^2) int_x^b exp(z(t) - z(x)) / D(t) dt,
/// and the exponent z(t) - z(x) <= 0 throughout, so nothing overflows.
/// Substituting s = z(x) - z(t) turns this into
///   P(x) = J int_0^inf e^{-s} D(tau(s)) / D(x) ds,  dtau/ds = sigma^2 D(tau)^2 / 2,
/// which is integrated with an adaptive Dormand-Prince scheme. P = J at
/// every zero of D, and J is fixed by normalising int P = 1.
StationaryDensity density_exact(const Prc& prc, NoiseAmplitude sigma,
                                const ExactDensityOptions& opts = {});

/// sup_i | -J + P - (sigma^2/2) D (D P)' | with (D P)' from the
/// trigonometric interpolant of the grid samples.
double stationarity_residual(const StationaryDensity& density, const Prc& prc,
                             NoiseAmplitude sigma);

/// Pointwise flux estimate P - (sigma^2/2) D (D P)' on the density grid; equals J
/// everywhere for a stationary density.
std::vector<double> local_flux(const StationaryDensity& density, const Prc& prc,
                               NoiseAmplitude sigma);

/// Probability mass of each of `bins` equal bins of [0,1), integrating the
/// trigonometric interpolant of the density exactly.
std::vector<double> bin_probabilities(const StationaryDensity& density, int bins);

}  // namespace prcsync
