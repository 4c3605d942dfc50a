#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prcsync/density.hpp"
#include "prcsync/errors.hpp"
#include "prcsync/lyapunov.hpp"
#include "prcsync/variational.hpp"
#include "support.hpp"

using namespace prcsync;

namespace {

StationaryDensity uniform_density(std::size_t n) {
  StationaryDensity d;
  d.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.theta[i] = static_cast<double>(i) / n;
  d.values.assign(n, 1.0);
  return d;
}

// Brute-force (sigma^2/2) mean of D'' D P on a fine grid, P from the order-4 series
// written out independently of the library.
double brute_lambda_order4(const Prc& p, double sigma, int n = 4096) {
  double dd = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    dd += std::pow(p.eval(t, 0) * p.eval(t, 1), 2);
  }
  dd /= n;
  const double s2 = sigma * sigma;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double d0 = p.eval(t, 0), d1 = p.eval(t, 1), d2 = p.eval(t, 2);
    const double P = 1.0 + 0.5 * s2 * d0 * d1 +
                     0.25 * s2 * s2 * (2.0 * d0 * d0 * d1 * d1 + d0 * d0 * d0 * d2 + dd);
    sum += d2 * d0 * P;
  }
  return 0.5 * s2 * sum / n;
}

}  // namespace

TEST_CASE("analytic examples") {
  const NoiseAmplitude s(0.05);
  CHECK(lyapunov_analytic(Prc::constant(3.0), s, uniform_density(64)).value == 0.0);
  const auto t2 = lyapunov_analytic(prcsync::test::type2(), s, uniform_density(512));
  CHECK(t2.value == doctest::Approx(-2.0 * kPi * kPi * 0.0025).epsilon(1e-12));
  CHECK(t2.value == doctest::Approx(-0.0493480).epsilon(1e-6));
  CHECK(t2.method == LyapunovMethod::analytic);
  CHECK_FALSE(t2.std_error.has_value());
  const auto t1 = lyapunov_analytic(prcsync::test::type1(), s, uniform_density(512));
  CHECK(t1.value == doctest::Approx(-0.0164493).epsilon(1e-5));
  StationaryDensity bad = uniform_density(16);
  bad.theta[3] = 0.9;
  CHECK_THROWS_AS(lyapunov_analytic(prcsync::test::type2(), s, bad), InvalidArgument);
}

TEST_CASE("uniform approximation") {
  const NoiseAmplitude s(0.05);
  CHECK(lyapunov_uniform_approx(prcsync::test::type2(), s).value ==
        doctest::Approx(-0.0493480).epsilon(1e-6));
  CHECK(lyapunov_uniform_approx(Prc::constant(1.0), s).value == 0.0);
  const double ratio = lyapunov_uniform_approx(prcsync::test::type2(), s).value /
                       lyapunov_uniform_approx(prcsync::test::type1(), s).value;
  CHECK(std::abs(ratio - 3.0) < 1e-10);
}

TEST_CASE("randomised: integration by parts, sign and sign symmetry") {
  std::mt19937_64 gen(5);
  const NoiseAmplitude s(0.1);
  for (int trial = 0; trial < 100; ++trial) {
    const Prc p = prcsync::test::random_prc(gen);
    const double a = lyapunov_analytic(p, s, uniform_density(512)).value;
    const double u = lyapunov_uniform_approx(p, s).value;
    CHECK(std::abs(a - u) < 1e-10);
    CHECK(a < 0.0);
    const double plus = lyapunov_analytic(p, s, density_perturbative(p, s, 4)).value;
    const double minus =
        lyapunov_analytic(-1.0 * p, s, density_perturbative(-1.0 * p, s, 4)).value;
    CHECK(std::abs(plus - minus) <= 1e-14 + 1e-12 * std::abs(plus));
  }
}

TEST_CASE("family closed form: scale equals the order-4 analytic value") {
  for (double b : {0.0, 1.0}) {
    for (double sigma : {0.05, 0.1, 0.3}) {
      for (double k : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
        const Prc p = family_prc(k, b);
        const double oracle = brute_lambda_order4(p, sigma);
        const double lib = lyapunov_family(k, b, NoiseAmplitude(sigma)).value;
        CHECK(lib == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(family_lambda_reduced(k, b, NoiseAmplitude(sigma)) ==
              doctest::Approx(oracle / (0.5 * sigma * sigma)).epsilon(1e-12));
        const double via_density =
            lyapunov_analytic(p, NoiseAmplitude(sigma),
                              density_perturbative(p, NoiseAmplitude(sigma), 4))
                .value;
        CHECK(via_density == doctest::Approx(oracle).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("family closed form examples") {
  CHECK(family_lambda_reduced(0.0, 1.0, NoiseAmplitude(0.0)) ==
        doctest::Approx(-1.0 / (1.0 + 4.0 * kPi * kPi)));
  CHECK(family_lambda_reduced(0.0, 1.0, NoiseAmplitude(0.0)) == doctest::Approx(-0.0247045).epsilon(1e-5));
  const double s = 0.2;
  const double diff = family_lambda_reduced(1.0, 1.0, NoiseAmplitude(s)) -
                      family_lambda_reduced(0.0, 1.0, NoiseAmplitude(s));
  CHECK(diff / std::pow(s, 4) == doctest::Approx(1.337e-6).epsilon(1e-3));
  CHECK(family_lambda_reduced(-1.0, 1.0, NoiseAmplitude(s)) ==
        family_lambda_reduced(1.0, 1.0, NoiseAmplitude(s)));
  CHECK_THROWS_AS(family_lambda_reduced(1.01, 1.0, NoiseAmplitude(s)), InvalidArgument);
  CHECK(lyapunov_family(0.0, 1.0, NoiseAmplitude(s)).method == LyapunovMethod::family_closed_form);
}

TEST_CASE("family minimum on a 201-point grid") {
  const NoiseAmplitude s(0.1);
  const double l0 = family_lambda_reduced(0.0, 1.0, s);
  for (int i = 0; i <= 200; ++i) {
    const double k = -1.0 + 0.01 * i;
    if (i == 100) continue;
    CHECK(family_lambda_reduced(k, 1.0, s) > l0);
  }
}

TEST_CASE("method tags") {
  CHECK(to_string(LyapunovMethod::uniform_approx) == "uniform-approx");
  CHECK(to_string(LyapunovMethod::monte_carlo) == "monte-carlo");
  CHECK(to_string(LyapunovMethod::family_closed_form) == "family-closed-form");
}
