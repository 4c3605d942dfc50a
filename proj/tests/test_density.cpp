#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prcsync/density.hpp"
#include "prcsync/errors.hpp"
#include "support.hpp"

using namespace prcsync;
using prcsync::test::type2;

namespace {

double sup_gap(const StationaryDensity& x, const StationaryDensity& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x.values[i] - y.values[i]));
  return m;
}

}  // namespace

TEST_CASE("perturbative examples") {
  const Prc p = type2();
  const StationaryDensity zero = density_perturbative(p, NoiseAmplitude(0.0), 4);
  for (double v : zero.values) CHECK(v == 1.0);
  CHECK(zero.flux == 1.0);

  // Grid of 512 contains theta = 1/8 at index 64.
  const StationaryDensity o2 = density_perturbative(p, NoiseAmplitude(0.1), 2);
  CHECK(o2.values[64] == doctest::Approx(1.0 + 0.01 * kPi).epsilon(1e-12));
  CHECK(o2.flux == 1.0);

  const StationaryDensity o4 = density_perturbative(p, NoiseAmplitude(0.1), 4);
  CHECK(o4.flux == doctest::Approx(1.0 + 1e-4 * kPi * kPi / 2.0).epsilon(1e-12));
  CHECK(std::abs(o4.integral() - 1.0) < 1e-14);
  CHECK_THROWS_AS(density_perturbative(p, NoiseAmplitude(0.1), 3), InvalidArgument);
}

TEST_CASE("exact density for the type II curve") {
  const Prc p = type2();
  const StationaryDensity d = density_exact(p, NoiseAmplitude(0.1));
  CHECK(std::abs(d.flux - (1.0 + 1e-4 * kPi * kPi / 2.0)) < 1e-5);
  CHECK(std::abs(d.integral() - 1.0) < 1e-8);
  // Roots at 0 and 1/2 are grid points: P = J there.
  CHECK(d.values[0] == doctest::Approx(d.flux).epsilon(1e-14));
  CHECK(d.values[256] == doctest::Approx(d.flux).epsilon(1e-14));
  for (double v : d.values) CHECK(v >= 0.0);
  CHECK(stationarity_residual(d, p, NoiseAmplitude(0.1)) <= 1e-6 * d.flux);
}

TEST_CASE("exact versus order-4 series scales as sigma^6") {
  const Prc p = type2();
  const double g1 = sup_gap(density_exact(p, NoiseAmplitude(0.1)),
                            density_perturbative(p, NoiseAmplitude(0.1), 4));
  const double g2 = sup_gap(density_exact(p, NoiseAmplitude(0.05)),
                            density_perturbative(p, NoiseAmplitude(0.05), 4));
  CHECK(g1 / g2 >= 40.0);
  CHECK(g1 / g2 <= 90.0);
}

TEST_CASE("exact density tends to uniform like sigma^2") {
  const Prc p = type2();
  double prev = 0.0;
  for (double s : {0.2, 0.1, 0.05}) {
    const StationaryDensity d = density_exact(p, NoiseAmplitude(s));
    double dev = 0.0;
    for (double v : d.values) dev = std::max(dev, std::abs(v - 1.0));
    if (prev > 0.0) CHECK(prev / dev == doctest::Approx(4.0).epsilon(0.1));
    prev = dev;
  }
}

TEST_CASE("stationarity residual examples") {
  const Prc p = type2();
  StationaryDensity flat;
  flat.theta.resize(512);
  for (int i = 0; i < 512; ++i) flat.theta[i] = i / 512.0;
  flat.values.assign(512, 1.0);
  flat.flux = 1.0;
  CHECK(stationarity_residual(flat, p, NoiseAmplitude(0.2)) ==
        doctest::Approx(0.02 * kTwoPi).epsilon(1e-10));

  const double r1 = stationarity_residual(density_perturbative(p, NoiseAmplitude(0.05), 4), p,
                                          NoiseAmplitude(0.05));
  const double r2 = stationarity_residual(density_perturbative(p, NoiseAmplitude(0.025), 4), p,
                                          NoiseAmplitude(0.025));
  // Truncation is sigma^6 times a prefactor of a few hundred for this PRC.
  CHECK(r1 < 1e3 * std::pow(0.05, 6));
  CHECK(r1 / r2 == doctest::Approx(64.0).epsilon(0.05));
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(density_exact(prcsync::test::type1(), NoiseAmplitude(0.1)), DegenerateRoot);
  const StationaryDensity d = density_exact(type2(), NoiseAmplitude(0.0));
  for (double v : d.values) CHECK(v == 1.0);
  const StationaryDensity c = density_exact(Prc::constant(2.0), NoiseAmplitude(0.3));
  for (double v : c.values) CHECK(v == 1.0);
  StationaryDensity bad;
  bad.theta = {0.0, 0.5};
  bad.values = {1.0};
  CHECK_THROWS_AS(bad.check_grid(), InvalidArgument);
}

TEST_CASE("zero-free PRC uses one periodic arc") {
  const double c[] = {1.0, 0.3};
  const double s[] = {0.2};
  const Prc p = Prc::from_fourier(c, s);
  const NoiseAmplitude sigma(0.2);
  const StationaryDensity d = density_exact(p, sigma);
  CHECK(std::abs(d.integral() - 1.0) < 1e-8);
  CHECK(stationarity_residual(d, p, sigma) < 1e-6 * d.flux);
}

TEST_CASE("bin probabilities integrate the interpolant") {
  const StationaryDensity d = density_perturbative(type2(), NoiseAmplitude(0.1), 2);
  const auto mass = bin_probabilities(d, 4);
  // P = 1 + 0.01 pi sin(4 pi t): bins of width 1/4 carry 1/4 +- 0.01 pi * 2/(4 pi).
  CHECK(mass[0] == doctest::Approx(0.25 + 0.005).epsilon(1e-12));
  CHECK(mass[1] == doctest::Approx(0.25 - 0.005).epsilon(1e-12));
  double total = 0.0;
  for (double m : mass) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("randomised: normalisation, positivity and flux constancy") {
  std::mt19937_64 gen(21);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Prc p = prcsync::test::random_prc(gen);
    const NoiseAmplitude sigma(0.1);
    const StationaryDensity s4 = density_perturbative(p, sigma, 4, 256);
    CHECK(std::abs(s4.integral() - 1.0) < 1e-12);
    ExactDensityOptions o;
    o.n = 256;
    StationaryDensity d;
    try {
      d = density_exact(p, sigma, o);
    } catch (const DegenerateRoot&) {
      continue;  // near-tangent zero: refused by design
    }
    ++checked;
    CHECK(std::abs(d.integral() - 1.0) < 1e-8);
    for (double v : d.values) CHECK(v >= 0.0);
    CHECK(stationarity_residual(d, p, sigma) <= 1e-6 * d.flux);
  }
  CHECK(checked >= 90);
}
