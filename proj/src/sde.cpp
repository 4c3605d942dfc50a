#include "prcsync/sde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "prcsync/errors.hpp"
#include "prcsync/parallel.hpp"
#include "prcsync/rng.hpp"

namespace prcsync {

namespace {

// D, D', D'' at a phase already reduced to [0,1); the inner loop of every
// simulation, so it avoids the general jet machinery.
class Jet3 {
 public:
  explicit Jet3(const Prc& prc)
      : order_(prc.order()),
        alpha_(prc.cos_coeffs().begin(), prc.cos_coeffs().end()),
        beta_(prc.sin_coeffs().begin(), prc.sin_coeffs().end()) {}

  void operator()(double x, double& d0, double& d1, double& d2) const {
    const double c1 = std::cos(kTwoPi * x);
    const double s1 = std::sin(kTwoPi * x);
    double ck = c1, sk = s1;
    d0 = alpha_[0];
    d1 = 0.0;
    d2 = 0.0;
    for (int k = 1; k <= order_; ++k) {
      const double a = alpha_[k], b = beta_[k - 1];
      const double even = a * ck + b * sk;
      const double odd = b * ck - a * sk;
      const double omega = kTwoPi * k;
      d0 += even;
      d1 += omega * odd;
      d2 -= omega * omega * even;
      const double next_c = ck * c1 - sk * s1;
      sk = sk * c1 + ck * s1;
      ck = next_c;
    }
  }

 private:
  int order_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

inline double frac(double v) { return v - std::floor(v); }

void check_step(NoiseAmplitude sigma, double duration, double dt, double min_duration) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (!(duration >= min_duration)) {
    std::ostringstream os;
    os << "duration must be at least " << min_duration;
    throw InvalidArgument(os.str());
  }
  if (sigma.value() > 0.0 && dt > 1e-3 / sigma.value()) {
    throw InvalidArgument("time step exceeds the stability guard dt <= 1e-3/sigma");
  }
}

std::size_t step_count(double duration, double dt) {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

[[noreturn]] void unstable(double t, double increment) {
  std::ostringstream os;
  os << "unstable Euler-Maruyama step at t = " << t << ": phase increment " << increment;
  throw UnstableStep(os.str());
}

// Advances the deviation psi = theta - t by one step; returns the phase increment.
inline double em_step(double& psi, double d0, double d1, double half_s2, double sigma,
                      double dt, double dw) {
  const double delta = half_s2 * d0 * d1 * dt + sigma * d0 * dw;
  psi += delta;
  return dt + delta;
}

double circular_distance(double x, double y) {
  double d = std::abs(x - y);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

PhaseTrajectory simulate_phase(const Prc& prc, NoiseAmplitude sigma, double duration,
                               double dt, std::uint64_t seed, double theta0,
                               std::uint64_t stream) {
  check_step(sigma, duration, dt, 10.0);
  const std::size_t steps = step_count(duration, dt);
  const Jet3 jet(prc);
  CounterRng rng(seed, stream);
  const double s = sigma.value();
  const double half_s2 = 0.5 * sigma.squared();
  const double sqrt_dt = std::sqrt(dt);

  PhaseTrajectory traj;
  traj.dt = dt;
  traj.seed = seed;
  traj.stream = stream;
  traj.times.resize(steps + 1);
  traj.phases.resize(steps + 1);
  double psi = theta0;
  traj.times[0] = 0.0;
  traj.phases[0] = frac(theta0);
  double d0, d1, d2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    jet(frac(t + psi), d0, d1, d2);
    const double dw = s > 0.0 ? sqrt_dt * rng.normal() : 0.0;
    const double inc = em_step(psi, d0, d1, half_s2, s, dt, dw);
    if (std::abs(inc) > 0.25) unstable(t, inc);
    const double t_next = static_cast<double>(i + 1) * dt;
    traj.times[i + 1] = t_next;
    traj.phases[i + 1] = frac(t_next + psi);
  }
  return traj;
}

LogSeparation::Slope LogSeparation::slope() const {
  const std::size_t n = times.size();
  if (n < 3 || values.size() != n) throw InvalidArgument("need at least 3 samples for a slope");
  const double mt = std::accumulate(times.begin(), times.end(), 0.0) / n;
  const double my = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (times[i] - mt) * (times[i] - mt);
    sxy += (times[i] - mt) * (values[i] - my);
  }
  const double beta = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = values[i] - my - beta * (times[i] - mt);
    rss += r * r;
  }
  return {beta, std::sqrt(rss / static_cast<double>(n - 2) / sxx)};
}

LogSeparation log_separation(const Prc& prc, NoiseAmplitude sigma, double duration,
                             double dt, std::uint64_t seed, int record_every,
                             std::uint64_t stream) {
  check_step(sigma, duration, dt, 10.0);
  if (record_every < 1) throw InvalidArgument("record_every must be positive");
  const std::size_t steps = step_count(duration, dt);
  const Jet3 jet(prc);
  CounterRng rng(seed, stream);
  const double s = sigma.value();
  const double half_s2 = 0.5 * sigma.squared();
  const double sqrt_dt = std::sqrt(dt);

  LogSeparation out;
  out.times.push_back(0.0);
  out.values.push_back(0.0);
  double psi = 0.0, y = 0.0, d0, d1, d2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    jet(frac(t + psi), d0, d1, d2);
    const double dw = s > 0.0 ? sqrt_dt * rng.normal() : 0.0;
    y += half_s2 * d2 * d0 * dt + s * d1 * dw;
    const double inc = em_step(psi, d0, d1, half_s2, s, dt, dw);
    if (std::abs(inc) > 0.25) unstable(t, inc);
    if ((i + 1) % static_cast<std::size_t>(record_every) == 0) {
      out.times.push_back(static_cast<double>(i + 1) * dt);
      out.values.push_back(y);
    }
  }
  return out;
}

namespace {

double linearized_exponent(const Jet3& jet, NoiseAmplitude sigma, std::size_t steps, double dt,
                           std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  const double s = sigma.value();
  const double half_s2 = 0.5 * sigma.squared();
  const double sqrt_dt = std::sqrt(dt);
  double psi = rng.uniform();
  double y = 0.0, d0, d1, d2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    jet(frac(t + psi), d0, d1, d2);
    const double dw = s > 0.0 ? sqrt_dt * rng.normal() : 0.0;
    y += half_s2 * d2 * d0 * dt + s * d1 * dw;
    const double inc = em_step(psi, d0, d1, half_s2, s, dt, dw);
    if (std::abs(inc) > 0.25) unstable(t, inc);
  }
  return y / (static_cast<double>(steps) * dt);
}

double pair_exponent(const Jet3& jet, NoiseAmplitude sigma, std::size_t steps, double dt,
                     std::uint64_t seed, std::uint64_t stream, const LyapunovMcOptions& opts) {
  CounterRng rng(seed, stream);
  const double s = sigma.value();
  const double half_s2 = 0.5 * sigma.squared();
  const double sqrt_dt = std::sqrt(dt);
  double psi = rng.uniform();
  double phi = opts.pair_offset;  // theta_2 - theta_1 on the lifted line
  double log_scale = 0.0;
  double a0, a1, a2, b0, b1, b2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    jet(frac(t + psi), a0, a1, a2);
    jet(frac(t + psi + phi), b0, b1, b2);
    const double dw = s > 0.0 ? sqrt_dt * rng.normal() : 0.0;
    phi += half_s2 * (b0 * b1 - a0 * a1) * dt + s * (b0 - a0) * dw;
    const double inc = em_step(psi, a0, a1, half_s2, s, dt, dw);
    if (std::abs(inc) > 0.25) unstable(t, inc);
    const double mag = std::abs(phi);
    if (mag == 0.0) throw Error("oscillator pair merged exactly; separation lost");
    if (mag < opts.pair_lower || mag > opts.pair_upper) {
      log_scale += std::log(mag / opts.pair_offset);
      phi = std::copysign(opts.pair_offset, phi);
    }
  }
  log_scale += std::log(std::abs(phi) / opts.pair_offset);
  return log_scale / (static_cast<double>(steps) * dt);
}

}  // namespace

std::vector<double> lyapunov_mc_samples(const Prc& prc, NoiseAmplitude sigma,
                                        const LyapunovMcOptions& opts) {
  check_step(sigma, opts.duration, opts.dt, 10.0);
  if (opts.realizations < 8) throw InvalidArgument("need at least 8 realisations");
  const std::size_t steps = step_count(opts.duration, opts.dt);
  const Jet3 jet(prc);
  std::vector<double> samples(opts.realizations);
  parallel_for(samples.size(), [&](std::size_t r) {
    samples[r] = opts.variant == LyapunovMcVariant::linearized
                     ? linearized_exponent(jet, sigma, steps, opts.dt, opts.seed, r)
                     : pair_exponent(jet, sigma, steps, opts.dt, opts.seed, r, opts);
  });
  return samples;
}

LyapunovEstimate estimate_lyapunov_mc(const Prc& prc, NoiseAmplitude sigma,
                                      const LyapunovMcOptions& opts) {
  const std::vector<double> samples = lyapunov_mc_samples(prc, sigma, opts);
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (n - 1.0) / n);
  return {mean, LyapunovMethod::monte_carlo, se};
}

namespace {

void record_ensemble(const std::vector<double>& phases, double t, EnsembleSeries& out,
                     std::vector<double>& scratch) {
  std::complex<double> mean(0.0, 0.0);
  for (double x : phases) mean += std::polar(1.0, kTwoPi * x);
  mean /= static_cast<double>(phases.size());
  scratch.clear();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    for (std::size_t j = i + 1; j < phases.size(); ++j) {
      scratch.push_back(circular_distance(phases[i], phases[j]));
    }
  }
  const std::size_t mid = scratch.size() / 2;
  std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
  double median = scratch[mid];
  if (scratch.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(scratch.begin(), scratch.begin() + mid));
  }
  out.times.push_back(t);
  out.order_parameter.push_back(std::abs(mean));
  out.median_distance.push_back(median);
}

}  // namespace

EnsembleSeries ensemble_sync(const Prc& prc, NoiseAmplitude sigma, int n_oscillators,
                             double duration, double dt, std::uint64_t seed, int record_every,
                             std::optional<std::vector<double>> initial_phases) {
  check_step(sigma, duration, dt, dt);
  if (n_oscillators < 2) throw InvalidArgument("an ensemble needs at least 2 oscillators");
  if (record_every < 1) throw InvalidArgument("record_every must be positive");
  std::vector<double> psi;
  if (initial_phases) {
    if (initial_phases->size() != static_cast<std::size_t>(n_oscillators)) {
      throw InvalidArgument("initial phase count does not match the ensemble size");
    }
    psi = *initial_phases;
  } else {
    CounterRng init(seed, 1);
    psi.resize(n_oscillators);
    for (double& p : psi) p = frac(init.uniform());
  }
  const std::size_t steps = step_count(duration, dt);
  const Jet3 jet(prc);
  CounterRng rng(seed, 0);
  const double s = sigma.value();
  const double half_s2 = 0.5 * sigma.squared();
  const double sqrt_dt = std::sqrt(dt);

  EnsembleSeries out;
  std::vector<double> phases(psi.size()), scratch;
  auto snapshot = [&](double t) {
    for (std::size_t j = 0; j < psi.size(); ++j) phases[j] = frac(t + psi[j]);
    record_ensemble(phases, t, out, scratch);
  };
  snapshot(0.0);
  double d0, d1, d2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double dw = s > 0.0 ? sqrt_dt * rng.normal() : 0.0;
    for (double& p : psi) {
      jet(frac(t + p), d0, d1, d2);
      const double inc = em_step(p, d0, d1, half_s2, s, dt, dw);
      if (std::abs(inc) > 0.25) unstable(t, inc);
    }
    if ((i + 1) % static_cast<std::size_t>(record_every) == 0) {
      snapshot(static_cast<double>(i + 1) * dt);
    }
  }
  return out;
}

std::vector<std::vector<double>> ensemble_paths(const Prc& prc, NoiseAmplitude sigma,
                                                const std::vector<double>& initial_phases,
                                                double duration, double dt,
                                                std::uint64_t seed) {
  check_step(sigma, duration, dt, dt);
  const std::size_t steps = step_count(duration, dt);
  const Jet3 jet(prc);
  CounterRng rng(seed, 0);
  const double s = sigma.value();
  const double half_s2 = 0.5 * sigma.squared();
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> psi = initial_phases;
  std::vector<std::vector<double>> paths(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) paths[j].push_back(frac(psi[j]));
  double d0, d1, d2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double dw = s > 0.0 ? sqrt_dt * rng.normal() : 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      jet(frac(t + psi[j]), d0, d1, d2);
      const double inc = em_step(psi[j], d0, d1, half_s2, s, dt, dw);
      if (std::abs(inc) > 0.25) unstable(t, inc);
      paths[j].push_back(frac(static_cast<double>(i + 1) * dt + psi[j]));
    }
  }
  return paths;
}

std::optional<double> time_to_synchrony(const EnsembleSeries& series, double threshold) {
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    if (series.median_distance[i] < threshold) return series.times[i];
  }
  return std::nullopt;
}

namespace {

std::size_t burn_in_index(const PhaseTrajectory& traj, double burn_in) {
  if (traj.times.empty()) throw InvalidArgument("empty trajectory");
  if (traj.duration() - burn_in < 100.0) {
    throw InvalidArgument("need at least 100 time units after burn-in");
  }
  const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), burn_in);
  return static_cast<std::size_t>(it - traj.times.begin());
}

int bin_of(double x, int bins) {
  return std::min(bins - 1, static_cast<int>(x * bins));
}

}  // namespace

StationaryDensity empirical_density(const PhaseTrajectory& traj, int bins, double burn_in) {
  if (bins < 1) throw InvalidArgument("bin count must be positive");
  const std::size_t start = burn_in_index(traj, burn_in);
  const std::size_t samples = traj.phases.size() - start;
  if (samples < 10000) throw InvalidArgument("fewer than 1e4 samples after burn-in");
  std::vector<double> counts(bins, 0.0);
  for (std::size_t i = start; i < traj.phases.size(); ++i) {
    counts[bin_of(traj.phases[i], bins)] += 1.0;
  }
  StationaryDensity d;
  d.method = DensityMethod::empirical;
  d.theta.resize(bins);
  d.values.resize(bins);
  for (int i = 0; i < bins; ++i) {
    d.theta[i] = (i + 0.5) / bins;
    d.values[i] = counts[i] * bins / static_cast<double>(samples);
  }
  return d;
}

HistogramTest histogram_consistency(const PhaseTrajectory& traj,
                                    const StationaryDensity& reference, int bins,
                                    double burn_in) {
  if (bins < 2) throw InvalidArgument("histogram test needs at least 2 bins");
  const std::size_t start = burn_in_index(traj, burn_in);
  const std::size_t n = traj.phases.size();

  HistogramTest out;
  out.bins = bins;
  out.dof = bins - 1;
  out.expected = bin_probabilities(reference, bins);

  // Lift the phase and cut it at successive integer levels.
  std::vector<std::vector<double>> cycles;  // time per bin, per complete cycle
  double lifted = traj.phases[start];
  double next_level = std::floor(lifted) + 1.0;
  bool open = false;
  std::vector<double> current(bins, 0.0);
  for (std::size_t i = start; i + 1 < n; ++i) {
    if (open) current[bin_of(traj.phases[i], bins)] += traj.dt;
    double step = traj.phases[i + 1] - traj.phases[i];
    step -= std::round(step);
    lifted += step;
    if (lifted >= next_level) {
      if (open) cycles.push_back(current);
      std::fill(current.begin(), current.end(), 0.0);
      open = true;
      next_level = std::floor(lifted) + 1.0;
    }
  }
  const int m = static_cast<int>(cycles.size());
  const int k = out.dof;
  out.cycles = m;
  if (m <= k + 10) throw InvalidArgument("too few complete cycles for the histogram test");

  Eigen::MatrixXd r(m, k);
  std::vector<double> occupied(bins, 0.0);
  double total = 0.0;
  for (int c = 0; c < m; ++c) {
    const double period = std::accumulate(cycles[c].begin(), cycles[c].end(), 0.0);
    total += period;
    for (int i = 0; i < bins; ++i) occupied[i] += cycles[c][i];
    for (int i = 0; i < k; ++i) r(c, i) = cycles[c][i] - out.expected[i] * period;
  }
  out.observed.resize(bins);
  for (int i = 0; i < bins; ++i) out.observed[i] = occupied[i] / total;

  const Eigen::VectorXd mean = r.colwise().mean();
  const Eigen::MatrixXd centered = r.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(m - 1);
  const Eigen::VectorXd solved = cov.ldlt().solve(mean);
  out.hotelling_t2 = static_cast<double>(m) * mean.dot(solved);
  out.f_statistic = static_cast<double>(m - k) / (static_cast<double>(k) * (m - 1)) *
                    out.hotelling_t2;
  const boost::math::fisher_f dist(k, m - k);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.f_statistic));
  return out;
}

}  // namespace prcsync
