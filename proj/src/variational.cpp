#include "prcsync/variational.hpp"

#include <array>
#include <cmath>

#include "prcsync/errors.hpp"

namespace prcsync {

namespace {

constexpr double kPi2 = kPi * kPi;
constexpr double kPi4 = kPi2 * kPi2;

double smoothness_weight(const ConstraintParams& cp) {
  return cp.a + 4.0 * cp.b * kPi2 + 16.0 * cp.c * kPi4;
}

double resonant_denominator(const ConstraintParams& cp) { return cp.a - 144.0 * cp.c * kPi4; }

}  // namespace

std::string_view to_string(CaseClass c) noexcept {
  switch (c) {
    case CaseClass::no_periodic_solution: return "no-periodic-solution";
    case CaseClass::unique_optimum: return "unique-optimum";
    case CaseClass::solution_family: return "solution-family";
  }
  return "unknown";
}

ConstraintCase classify_constraint_case(const ConstraintParams& cp) {
  cp.validate();
  ConstraintCase out{cp, CaseClass::unique_optimum};
  if (cp.a == 0.0) {
    out.classification =
        cp.c == 0.0 ? CaseClass::no_periodic_solution : CaseClass::solution_family;
    return out;
  }
  if (cp.c > 0.0) {
    // Second root pair y^2 = -a/(4 pi^2 c); periodic iff it equals -(2 pi k)^2.
    const double k2 = cp.a / (16.0 * kPi4 * cp.c);
    const double k = std::round(std::sqrt(k2));
    if (k >= 2.0 && std::abs(k2 - k * k) <= 1e-12 * k * k) {
      out.classification = CaseClass::solution_family;
    }
  }
  return out;
}

double nu10(const ConstraintParams& cp) {
  const ConstraintCase cc = classify_constraint_case(cp);
  if (cc.classification != CaseClass::unique_optimum) {
    throw InadmissibleCase(std::string("leading multiplier undefined: case is ") +
                           std::string(to_string(cc.classification)));
  }
  return 4.0 * kPi2 / smoothness_weight(cp);
}

Prc apply_leading_operator(const Prc& prc, const ConstraintParams& cp, double nu) {
  const int n = prc.order();
  std::vector<double> c(n + 1), s(n);
  c[0] = cp.a * nu * prc.cos_coeff(0);
  for (int k = 1; k <= n; ++k) {
    const double w2 = (kTwoPi * k) * (kTwoPi * k);
    const double symbol = cp.a * nu - (1.0 - cp.b * nu) * w2 + cp.c * nu * w2 * w2;
    c[k] = symbol * prc.cos_coeff(k);
    s[k - 1] = symbol * prc.sin_coeff(k);
  }
  return Prc::from_fourier(c, s);
}

std::vector<double> first_order_forcing(const Prc& delta0, std::size_t n) {
  std::vector<double> out(n);
  std::array<double, 3> jet{};
  for (std::size_t j = 0; j < n; ++j) {
    delta0.eval_jet(static_cast<double>(j) / static_cast<double>(n), jet);
    out[j] = -0.5 * (jet[1] * jet[1] * jet[1] + 3.0 * jet[0] * jet[1] * jet[2]);
  }
  return out;
}

PerturbationSolution optimal_prc_perturbative(const ConstraintParams& cp, NoiseAmplitude sigma,
                                              Branch branch, std::size_t grid) {
  const double nu = nu10(cp);
  const double denom = resonant_denominator(cp);
  if (std::abs(denom) <= 1e-12 * std::max(cp.a, 144.0 * cp.c * kPi4)) {
    throw InadmissibleCase("resonant case a = 144 c pi^4: first-order correction undefined");
  }
  const double root_s = std::sqrt(smoothness_weight(cp));
  const double c0 = (branch == Branch::negative ? -1.0 : 1.0) * std::sqrt(2.0) / root_s;

  PerturbationSolution sol;
  sol.params = cp;
  sol.sigma = sigma.value();
  sol.nu10 = nu;
  sol.nu11 = 0.0;  // forcing ~ cos(6 pi t) is orthogonal to the null space
  sol.c0 = c0;
  sol.c1 = 0.0;

  const std::array<double, 1> none{0.0};
  const std::array<double, 1> fundamental{c0};
  sol.delta0 = Prc::from_fourier(none, fundamental);

  // sin u sin 2u = (cos u - cos 3u)/2; D1 = -(pi c0 / (2 denom)) sin u sin 2u.
  const double product = -kPi * c0 / (2.0 * denom);
  const std::array<double, 4> d1_cos{0.0, 0.5 * product, 0.0, -0.5 * product};
  sol.delta1 = Prc::from_fourier(d1_cos, {});
  sol.optimal = sol.delta0 + sigma.squared() * sol.delta1;

  sol.nu20_theta.resize(grid);
  sol.nu20.resize(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(grid);
    sol.nu20_theta[j] = t;
    sol.nu20[j] = sol.delta0.eval(t, 0) * sol.delta0.eval(t, 2);
  }
  return sol;
}

Prc family_prc(double k, double b) {
  if (!(std::abs(k) <= 1.0)) throw InvalidArgument("family parameter K must lie in [-1, 1]");
  if (!std::isfinite(b) || b < 0.0) throw InvalidArgument("b must be finite and nonnegative");
  const double scale = 1.0 / std::sqrt(2.0 * kPi2 * (b + 4.0 * kPi2));
  const std::array<double, 2> c{k * scale, -k * scale};
  const std::array<double, 1> s{-std::sqrt(1.0 - k * k) * scale};
  return Prc::from_fourier(c, s);
}

double family_optimal_K(double b, NoiseAmplitude sigma) {
  if (sigma.value() == 0.0) {
    throw InvalidArgument("the family exponent is independent of K at sigma = 0");
  }
  if (!std::isfinite(b) || b < 0.0) throw InvalidArgument("b must be finite and nonnegative");
  const double big_b = b + 4.0 * kPi2;
  const double s4 = sigma.squared() * sigma.squared();
  const double scale = 0.25 * s4 / (4.0 * kPi2 * big_b * big_b * big_b);
  auto slope = [&](double k) { return scale * (16.0 * k * k * k + 20.0 * k); };
  auto value = [&](double k) { return scale * (4.0 * k * k * k * k + 10.0 * k * k + 1.0); };

  // The slope is strictly increasing (its own derivative 48K^2 + 20 > 0), so
  // it has at most one zero; otherwise the minimum sits at an endpoint.
  double lo = -1.0, hi = 1.0;
  if (slope(lo) >= 0.0) return lo;
  if (slope(hi) <= 0.0) return hi;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    const double g = slope(mid);
    if (g == 0.0) return mid;
    (g < 0.0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  return value(k) <= std::min(value(-1.0), value(1.0)) ? k : (value(-1.0) < value(1.0) ? -1.0 : 1.0);
}

std::vector<double> extrema_locations(const ConstraintParams& cp, NoiseAmplitude sigma) {
  const PerturbationSolution sol = optimal_prc_perturbative(cp, sigma);
  return find_roots(sol.optimal, 1);
}

}  // namespace prcsync
