#include "prcsync/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "prcsync/errors.hpp"

namespace prcsync {

std::string_view to_string(DensityMethod method) noexcept {
  switch (method) {
    case DensityMethod::perturbative: return "perturbative";
    case DensityMethod::exact: return "exact";
    case DensityMethod::empirical: return "empirical";
  }
  return "unknown";
}

double StationaryDensity::integral() const { return periodic_quadrature(values); }

void StationaryDensity::check_grid() const {
  const std::size_t n = values.size();
  if (n == 0 || theta.size() != n) {
    throw InvalidArgument("density grid and values differ in length or are empty");
  }
  const double h = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = theta[0] + static_cast<double>(i) * h;
    if (std::abs(theta[i] - expected) > 1e-9) {
      throw InvalidArgument("density grid is not uniform with spacing 1/n");
    }
  }
}

namespace {

std::vector<double> uniform_grid(std::size_t n, double offset = 0.0) {
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = (static_cast<double>(i) + offset) / static_cast<double>(n);
  }
  return theta;
}

// Trigonometric interpolant of samples living on theta_i = (i + offset)/n.
Prc interpolant(const std::vector<double>& theta, const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  const int order = static_cast<int>((n - 1) / 2);
  if (order < 1) throw InvalidArgument("need at least 3 grid points to interpolate");
  const Prc fit = Prc::fit_uniform(samples, order);
  return theta.front() == 0.0 ? fit : fit.shifted(-theta.front());
}

double circular_distance(double x, double y) {
  double d = std::abs(x - y);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

int IntervalDecomposition::locate(double theta) const {
  const double x = theta - std::floor(theta);
  for (double r : roots) {
    if (circular_distance(x, r) == 0.0) return -1;
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (iv.periodic) return static_cast<int>(i);
    if ((x > iv.left && x < iv.right) || (x + 1.0 > iv.left && x + 1.0 < iv.right)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

IntervalDecomposition decompose_intervals(const Prc& prc, int grid) {
  IntervalDecomposition out;
  out.roots = find_roots(prc, 0, grid);
  if (out.roots.empty()) {
    out.intervals.push_back({0.0, 1.0, prc(0.0) > 0.0 ? 1 : -1, true});
    return out;
  }
  const std::size_t m = out.roots.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double left = out.roots[i];
    const double right = (i + 1 < m) ? out.roots[i + 1] : out.roots.front() + 1.0;
    const double mid = 0.5 * (left + right);
    out.intervals.push_back({left, right, prc(mid) > 0.0 ? 1 : -1, false});
  }
  return out;
}

StationaryDensity density_perturbative(const Prc& prc, NoiseAmplitude sigma, int order,
                                       std::size_t n) {
  if (order != 2 && order != 4) throw InvalidArgument("series order must be 2 or 4");
  if (n < 3) throw InvalidArgument("density grid needs at least 3 points");
  if (sigma.value() > 0.3) {
    std::clog << "prcsync: warning: perturbative density used at sigma = " << sigma.value()
              << ", outside the small-noise regime\n";
  }
  const double s2 = sigma.squared();
  const double s4 = s2 * s2;

  // int (D D')^2 from a grid fine enough to integrate the degree-4N product exactly.
  const std::size_t fine = static_cast<std::size_t>(4 * prc.order() + 8);
  double dd_sq = 0.0;
  {
    std::array<double, 3> jet{};
    for (std::size_t j = 0; j < fine; ++j) {
      prc.eval_jet(static_cast<double>(j) / static_cast<double>(fine), jet);
      dd_sq += (jet[0] * jet[1]) * (jet[0] * jet[1]);
    }
    dd_sq /= static_cast<double>(fine);
  }

  StationaryDensity d;
  d.theta = uniform_grid(n);
  d.values.resize(n);
  d.method = DensityMethod::perturbative;
  d.sigma = sigma.value();
  d.series_order = order;
  d.flux = order == 4 ? 1.0 + 0.25 * s4 * dd_sq : 1.0;
  std::array<double, 3> jet{};
  for (std::size_t i = 0; i < n; ++i) {
    prc.eval_jet(d.theta[i], jet);
    const double D = jet[0], D1 = jet[1], D2 = jet[2];
    double p = 1.0 + 0.5 * s2 * D * D1;
    if (order == 4) {
      p += 0.25 * s4 * (2.0 * D * D * D1 * D1 + D * D * D * D2 + dd_sq);
    }
    d.values[i] = p;
  }
  return d;
}

namespace {

using FlowState = std::array<double, 2>;  // (tau, G)

// G(x) = int_0^smax e^{-s} D(tau(s)) / D(x) ds along dtau/ds = sigma^2 D^2 / 2,
// never letting tau step past the zero `bound` that terminates the arc.
double flow_average(const Prc& prc, double sigma2, double x, double bound, bool periodic,
                    const ExactDensityOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  const double dx = prc(x);
  auto system = [&](const FlowState& st, FlowState& dst, double s) {
    const double d = prc(st[0]);
    dst[0] = 0.5 * sigma2 * d * d;
    dst[1] = std::exp(-s) * d / dx;
  };
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol,
                                         odeint::runge_kutta_dopri5<FlowState>());
  FlowState state{x, 0.0};
  double s = 0.0;
  double ds = 1e-3;
  int attempts = 0;
  while (s < opts.s_max) {
    if (++attempts > 1000000) throw Error("stationary-density flow did not terminate");
    ds = std::min(ds, opts.s_max - s);
    const double s_before = s;
    const double ds_before = ds;
    const FlowState saved = state;
    if (stepper.try_step(system, state, s, ds) != odeint::success) continue;
    if (!periodic && state[0] >= bound) {
      state = saved;
      stepper.reset();
      s = s_before;
      ds = 0.5 * ds_before;
    }
  }
  return state[1];
}

}  // namespace

StationaryDensity density_exact(const Prc& prc, NoiseAmplitude sigma,
                                const ExactDensityOptions& opts) {
  if (opts.n < 3) throw InvalidArgument("density grid needs at least 3 points");
  StationaryDensity d;
  d.theta = uniform_grid(opts.n);
  d.values.assign(opts.n, 1.0);
  d.method = DensityMethod::exact;
  d.sigma = sigma.value();
  d.flux = 1.0;

  const bool flat = std::all_of(prc.cos_coeffs().begin() + 1, prc.cos_coeffs().end(),
                                [](double v) { return v == 0.0; }) &&
                    std::all_of(prc.sin_coeffs().begin(), prc.sin_coeffs().end(),
                                [](double v) { return v == 0.0; });
  if (sigma.value() == 0.0 || flat) return d;  // uniform rotation

  const IntervalDecomposition parts = decompose_intervals(prc, opts.root_grid);
  const double sigma2 = sigma.squared();
  const double eps = opts.root_buffer;

  // G = P/J on the grid; J follows from normalisation at the end.
  auto arc_value = [&](double x) {
    const double xr = x - std::floor(x);
    const int idx = parts.locate(xr);
    if (idx < 0) return 1.0;
    const Subinterval& iv = parts.intervals[idx];
    double bound = iv.right;
    double start = xr;
    if (!iv.periodic && start <= iv.left) start += 1.0;
    return flow_average(prc, sigma2, start, bound, iv.periodic, opts);
  };

  for (std::size_t i = 0; i < opts.n; ++i) {
    const double x = d.theta[i];
    double nearest = 1.0;
    double root = 0.0;
    for (double r : parts.roots) {
      const double dist = circular_distance(x, r);
      if (dist < nearest) {
        nearest = dist;
        root = r;
      }
    }
    if (nearest == 0.0) {
      d.values[i] = 1.0;
    } else if (nearest < eps) {
      // Which side of the root: signed offset in (-1/2, 1/2].
      double offset = x - root;
      offset -= std::round(offset);
      const double edge = arc_value(root + (offset > 0.0 ? eps : -eps));
      d.values[i] = 1.0 + (edge - 1.0) * (nearest / eps);
    } else {
      d.values[i] = arc_value(x);
    }
  }

  const double mass = d.integral();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error("stationary density construction produced a non-positive mass");
  }
  d.flux = 1.0 / mass;
  for (double& v : d.values) v *= d.flux;
  return d;
}

std::vector<double> local_flux(const StationaryDensity& density, const Prc& prc,
                               NoiseAmplitude sigma) {
  density.check_grid();
  const std::size_t n = density.size();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = prc(density.theta[i]) * density.values[i];
  const Prc dq = interpolant(density.theta, q).derivative(1);
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = density.theta[i];
    flux[i] = density.values[i] - 0.5 * sigma.squared() * prc(x) * dq(x);
  }
  return flux;
}

double stationarity_residual(const StationaryDensity& density, const Prc& prc,
                             NoiseAmplitude sigma) {
  const std::vector<double> flux = local_flux(density, prc, sigma);
  double worst = 0.0;
  for (double f : flux) worst = std::max(worst, std::abs(f - density.flux));
  return worst;
}

std::vector<double> bin_probabilities(const StationaryDensity& density, int bins) {
  density.check_grid();
  if (bins < 1) throw InvalidArgument("bin count must be positive");
  const Prc p = interpolant(density.theta, density.values);
  auto antiderivative = [&](double x) {
    double sum = p.cos_coeff(0) * x;
    for (int k = 1; k <= p.order(); ++k) {
      const double omega = kTwoPi * k;
      sum += (p.cos_coeff(k) * std::sin(omega * x) - p.sin_coeff(k) * std::cos(omega * x)) /
             omega;
    }
    return sum;
  };
  std::vector<double> mass(bins);
  double previous = antiderivative(0.0);
  for (int i = 0; i < bins; ++i) {
    const double current = antiderivative(static_cast<double>(i + 1) / bins);
    mass[i] = current - previous;
    previous = current;
  }
  return mass;
}

}  // namespace prcsync
