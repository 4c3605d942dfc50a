#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prcsync/density.hpp"
#include "prcsync/errors.hpp"
#include "prcsync/lyapunov.hpp"
#include "prcsync/variational.hpp"
#include "support.hpp"

using namespace prcsync;

namespace {

constexpr double kPi2 = kPi * kPi;

double weight(const ConstraintParams& cp) { return cp.a + 4 * cp.b * kPi2 + 16 * cp.c * kPi2 * kPi2; }

const ConstraintParams kUnique[] = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};

}  // namespace

TEST_CASE("nu10 examples") {
  CHECK(nu10({1, 0, 0}) == doctest::Approx(4 * kPi2));
  CHECK(nu10({1, 1, 1}) == doctest::Approx(0.0246891).epsilon(1e-5));
  CHECK(nu10({1, 1, 0}) == doctest::Approx(0.975297).epsilon(1e-6));
  CHECK_THROWS_AS(nu10({0, 1, 1}), InadmissibleCase);
  CHECK_THROWS_AS(nu10({0, 1, 0}), InadmissibleCase);
}

TEST_CASE("taxonomy of the seven 0/1 patterns") {
  int none = 0, unique = 0, family = 0;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b)
      for (int c = 0; c <= 1; ++c) {
        if (a + b + c == 0) continue;
        switch (classify_constraint_case({double(a), double(b), double(c)}).classification) {
          case CaseClass::no_periodic_solution: ++none; break;
          case CaseClass::unique_optimum: ++unique; break;
          case CaseClass::solution_family: ++family; break;
        }
      }
  CHECK(none == 1);
  CHECK(unique == 4);
  CHECK(family == 2);
  CHECK(classify_constraint_case({0, 1, 0}).classification == CaseClass::no_periodic_solution);
  CHECK(classify_constraint_case({1, 1, 1}).classification == CaseClass::unique_optimum);
  CHECK(classify_constraint_case({0, 1, 1}).classification == CaseClass::solution_family);
  CHECK(classify_constraint_case({0, 0, 1}).classification == CaseClass::solution_family);
  CHECK_THROWS_AS(classify_constraint_case({0, 0, 0}), InvalidArgument);
}

TEST_CASE("general real weights") {
  // a = 16 pi^4 k^2 c puts a second periodic mode at frequency k.
  const double c = 0.01;
  CHECK(classify_constraint_case({16 * kPi2 * kPi2 * 4 * c, 0.3, c}).classification ==
        CaseClass::solution_family);
  CHECK(classify_constraint_case({144 * kPi2 * kPi2 * c, 0.0, c}).classification ==
        CaseClass::solution_family);
  CHECK(classify_constraint_case({16 * kPi2 * kPi2 * c, 0.0, c}).classification ==
        CaseClass::unique_optimum);
  CHECK(classify_constraint_case({2.5, 0.7, 0.0}).classification == CaseClass::unique_optimum);
  CHECK_THROWS_AS(optimal_prc_perturbative({144 * kPi2 * kPi2 * c, 0.0, c}, NoiseAmplitude(0.1)),
                  InadmissibleCase);
}

TEST_CASE("optimal curve examples") {
  const auto s0 = optimal_prc_perturbative({1, 0, 0}, NoiseAmplitude(0.0));
  CHECK(s0.c0 == doctest::Approx(-std::sqrt(2.0)));
  CHECK(prcsync::test::sup_diff(s0.optimal, prcsync::test::type2()) < 1e-14);

  CHECK(optimal_prc_perturbative({1, 1, 1}, NoiseAmplitude(0.0)).c0 ==
        doctest::Approx(-0.035366).epsilon(1e-4));

  // Coefficient of sin(2 pi t) sin(4 pi t) in the sigma = 0.3 optimum.
  const auto s3 = optimal_prc_perturbative({1, 1, 0}, NoiseAmplitude(0.3));
  const double product = -2.0 * s3.optimal.cos_coeff(3);
  CHECK(product == doctest::Approx(0.045 * std::sqrt(2.0) * kPi / std::sqrt(weight({1, 1, 0}))));
  CHECK(product == doctest::Approx(0.031424).epsilon(1e-4));
  for (double t : {0.1, 0.33, 0.7}) {
    const double printed =
        -std::sqrt(2.0) * std::sin(kTwoPi * t) / std::sqrt(weight({1, 1, 0})) +
        0.045 * std::sqrt(2.0) * kPi * std::sin(kTwoPi * t) * std::sin(2 * kTwoPi * t) /
            ((1.0) * std::sqrt(weight({1, 1, 0})));
    CHECK(s3.optimal(t) == doctest::Approx(printed).epsilon(1e-13));
  }
  CHECK(s3.nu11 == 0.0);
  CHECK(s3.c1 == 0.0);
}

TEST_CASE("perturbation residuals") {
  for (const ConstraintParams& cp : kUnique) {
    const auto sol = optimal_prc_perturbative(cp, NoiseAmplitude(0.1));
    const double nu = sol.nu10;
    // J(D0) = 0.
    const Prc j0 = apply_leading_operator(sol.delta0, cp, nu);
    CHECK(prcsync::test::sup_diff(j0, Prc::constant(0.0)) <= 1e-10);

    // J(D1) = -(1/2)(D0'^3 + 3 D0 D0' D0'') = -4 pi^3 C0^3 cos(6 pi t), checked
    // pointwise from raw derivatives rather than the Fourier operator.
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = i / 1000.0;
      const Prc& d1 = sol.delta1;
      const double lhs = cp.a * nu * d1.eval(t, 0) + (1 - cp.b * nu) * d1.eval(t, 2) +
                         cp.c * nu * d1.eval(t, 4);
      const double rhs = -4.0 * kPi * kPi2 * std::pow(sol.c0, 3) * std::cos(3 * kTwoPi * t);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-8);
    const auto forcing = first_order_forcing(sol.delta0, 64);
    for (int i = 0; i < 64; ++i) {
      CHECK(forcing[i] == doctest::Approx(-4.0 * kPi * kPi2 * std::pow(sol.c0, 3) *
                                          std::cos(3 * kTwoPi * i / 64.0))
                              .epsilon(1e-12));
    }

    // int a D0 D1 + b D0' D1' + c D0'' D1'' = 0 and the leading constraint.
    double cross = 0.0;
    const int n = 64;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      cross += cp.a * sol.delta0.eval(t, 0) * sol.delta1.eval(t, 0) +
               cp.b * sol.delta0.eval(t, 1) * sol.delta1.eval(t, 1) +
               cp.c * sol.delta0.eval(t, 2) * sol.delta1.eval(t, 2);
    }
    CHECK(std::abs(cross / n) <= 1e-10);
    CHECK(std::abs(constraint_norm(sol.delta0, cp) - 1.0) <= 1e-10);

    for (std::size_t i = 0; i < sol.nu20.size(); i += 37) {
      const double t = sol.nu20_theta[i];
      CHECK(sol.nu20[i] == doctest::Approx(sol.delta0.eval(t, 0) * sol.delta0.eval(t, 2)));
    }
  }
}

TEST_CASE("both branches give the same exponent") {
  const NoiseAmplitude s(0.1);
  const auto neg = optimal_prc_perturbative({1, 1, 0}, s, Branch::negative);
  const auto pos = optimal_prc_perturbative({1, 1, 0}, s, Branch::positive);
  CHECK(pos.c0 == -neg.c0);
  CHECK(prcsync::test::sup_diff(pos.optimal, -1.0 * neg.optimal) < 1e-15);
  const double l_neg =
      lyapunov_analytic(neg.delta0, s, density_perturbative(neg.delta0, s, 4)).value;
  const double l_pos =
      lyapunov_analytic(pos.delta0, s, density_perturbative(pos.delta0, s, 4)).value;
  CHECK(l_neg == doctest::Approx(l_pos).epsilon(1e-13));
}

TEST_CASE("family members") {
  const Prc k0 = family_prc(0.0, 1.0);
  CHECK(k0.harmonic_amplitude(1) == doctest::Approx(0.035377).epsilon(1e-4));
  CHECK(k0.sin_coeff(1) < 0.0);
  const Prc k1 = family_prc(1.0, 1.0);
  CHECK(std::abs(constraint_norm(k1, {0, 1, 1}) - 1.0) < 1e-10);
  CHECK(k1.cos_coeff(0) == doctest::Approx(-k1.cos_coeff(1)));
  CHECK(k1.sin_coeff(1) == 0.0);
  const Prc km = family_prc(-0.5, 1.0);
  CHECK(std::abs(constraint_norm(km, {0, 1, 1}) - 1.0) < 1e-10);
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 1000; ++i) {
    lo = std::min(lo, km(i / 1000.0));
    hi = std::max(hi, km(i / 1000.0));
  }
  CHECK(-lo > hi);
  CHECK_THROWS_AS(family_prc(1.5, 1.0), InvalidArgument);
}

TEST_CASE("family argmin") {
  for (double b : {0.0, 1.0}) {
    for (double s : {0.05, 0.1}) {
      const double k = family_optimal_K(b, NoiseAmplitude(s));
      CHECK(std::abs(k) <= 1e-8);
      for (int i = 0; i <= 200; ++i) {
        const double kk = -1.0 + 0.01 * i;
        CHECK(lyapunov_family(k, b, NoiseAmplitude(s)).value <=
              lyapunov_family(kk, b, NoiseAmplitude(s)).value);
      }
    }
  }
  CHECK_THROWS_AS(family_optimal_K(1.0, NoiseAmplitude(0.0)), InvalidArgument);
}

TEST_CASE("extrema") {
  for (const ConstraintParams& cp : kUnique) {
    const auto e = extrema_locations(cp, NoiseAmplitude(0.0));
    REQUIRE(e.size() == 2);
    CHECK(e[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(0.75).epsilon(1e-12));
  }
  const auto e111 = extrema_locations({1, 1, 1}, NoiseAmplitude(0.3));
  CHECK(std::abs(e111[0] - 0.25) < 1e-5);

  // (1,1,0): the first-order shift is sigma^2 * (pi c0 / D) / (2 pi c0) * ... ; use the
  // linearisation d theta = -sigma^2 D1'(1/4) / D0''(1/4) as oracle.
  const NoiseAmplitude s(0.3);
  const auto sol = optimal_prc_perturbative({1, 1, 0}, s);
  const double predicted = -s.squared() * sol.delta1.eval(0.25, 1) / sol.delta0.eval(0.25, 2);
  const auto e110 = extrema_locations({1, 1, 0}, s);
  REQUIRE(e110.size() == 2);
  CHECK(std::abs(e110[0] - 0.25) > 1e-3);
  CHECK((e110[0] - 0.25) * predicted > 0.0);
  CHECK(e110[0] - 0.25 == doctest::Approx(predicted).epsilon(0.1));
}
