#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prcsync/density.hpp"
#include "prcsync/lyapunov.hpp"
#include "prcsync/prc.hpp"

namespace prcsync {

/// One Euler-Maruyama path of the Ito phase equation
///   dtheta = [1 + (sigma^2/2) D'(theta) D(theta)] dt + sigma D(theta) dW,
/// recorded at every step. Phases are stored modulo 1.
struct PhaseTrajectory {
  double dt = 1e-3;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<double> times;
  std::vector<double> phases;

  double duration() const noexcept { return times.empty() ? 0.0 : times.back(); }
};

/// Throws InvalidArgument if dt > 1e-3/sigma (for sigma > 0), dt <= 0 or
/// T < 10, and UnstableStep if a single step moves the phase by more than 1/4.
/// Draws come from CounterRng(seed, stream); theta0 is the initial phase.
PhaseTrajectory simulate_phase(const Prc& prc, NoiseAmplitude sigma, double duration,
                               double dt, std::uint64_t seed, double theta0 = 0.0,
                               std::uint64_t stream = 0);

/// y = log(phi) along one path, from the linearised separation equation
///   dy = (sigma^2/2) D'' D dt + sigma D' dW
/// driven by the same increments as the phase.
struct LogSeparation {
  std::vector<double> times;
  std::vector<double> values;

  struct Slope {
    double value;
    double std_error;
  };
  /// Least-squares slope of y against t with its ordinary standard error.
  Slope slope() const;
};

LogSeparation log_separation(const Prc& prc, NoiseAmplitude sigma, double duration,
                             double dt, std::uint64_t seed, int record_every = 100,
                             std::uint64_t stream = 0);

enum class LyapunovMcVariant {
  linearized,  // integrate dy alongside theta
  pair,        // two commonly driven oscillators with renormalised separation
};

struct LyapunovMcOptions {
  double duration = 5000.0;
  double dt = 1e-3;
  int realizations = 32;
  std::uint64_t seed = 0;
  LyapunovMcVariant variant = LyapunovMcVariant::linearized;
  double pair_offset = 1e-6;
  double pair_lower = 1e-9;
  double pair_upper = 1e-3;
};

/// Mean of y(T)/T over independent realisations (stream r for realisation r)
/// with its standard error. Reduction is in realisation order, so the result
/// does not depend on the worker count.
LyapunovEstimate estimate_lyapunov_mc(const Prc& prc, NoiseAmplitude sigma,
                                      const LyapunovMcOptions& opts = {});

/// Per-realisation exponents behind estimate_lyapunov_mc.
std::vector<double> lyapunov_mc_samples(const Prc& prc, NoiseAmplitude sigma,
                                        const LyapunovMcOptions& opts = {});

struct EnsembleSeries {
  std::vector<double> times;
  std::vector<double> order_parameter;  // R(t) = |<exp(2 pi i theta)>|
  std::vector<double> median_distance;  // median pairwise circular distance
};

/// N uncoupled oscillators driven by one scalar Wiener process. Initial
/// phases are uniform on [0,1) from stream 1 unless given explicitly; the
/// common increments come from stream 0.
EnsembleSeries ensemble_sync(const Prc& prc, NoiseAmplitude sigma, int n_oscillators,
                             double duration, double dt, std::uint64_t seed,
                             int record_every = 100,
                             std::optional<std::vector<double>> initial_phases = std::nullopt);

/// Phases of every oscillator at every step (small runs and tests only).
std::vector<std::vector<double>> ensemble_paths(const Prc& prc, NoiseAmplitude sigma,
                                                const std::vector<double>& initial_phases,
                                                double duration, double dt,
                                                std::uint64_t seed);

/// First recorded time at which the median pairwise distance drops below
/// `threshold`, if it does.
std::optional<double> time_to_synchrony(const EnsembleSeries& series, double threshold);

/// Normalised occupation histogram of the phase after burn_in, on bin
/// centres. Throws InvalidArgument for fewer than 1e4 retained samples or less
/// than 100 time units after burn-in.
StationaryDensity empirical_density(const PhaseTrajectory& traj, int bins, double burn_in);

/// Goodness of fit of the occupation histogram against a reference density.
///
/// Samples along one path are strongly correlated, so the statistic is built
/// on renewal cycles: the lifted phase is cut at successive integer
/// crossings, which yields i.i.d. cycles. For cycle c, r_ci = tau_ci - p_i T_c
/// (time in bin i minus its expected share) has mean zero under the
/// reference; Hotelling's T^2 on the first bins-1 components gives an
/// F(k, m-k) statistic.
struct HistogramTest {
  int bins = 0;
  int cycles = 0;
  int dof = 0;
  double hotelling_t2 = 0.0;
  double f_statistic = 0.0;
  double p_value = 0.0;
  std::vector<double> observed;  // occupation fraction per bin
  std::vector<double> expected;  // reference mass per bin
};

HistogramTest histogram_consistency(const PhaseTrajectory& traj,
                                    const StationaryDensity& reference, int bins,
                                    double burn_in);

}  // namespace prcsync
