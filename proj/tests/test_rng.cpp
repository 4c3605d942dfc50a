#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "prcsync/rng.hpp"

using namespace prcsync;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST_CASE("Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(B{0, 0, 0, 0}, K{0, 0}) ==
        B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             K{0xffffffffu, 0xffffffffu}) ==
        B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             K{0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform draws lie in (0, 1] and streams differ") {
  CounterRng a(42, 0), b(42, 1), c(43, 0);
  std::set<double> seen;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    seen.insert(u);
  }
  CHECK(seen.size() == 10000);
  CounterRng a2(42, 0);
  CHECK(a2.uniform() != b.uniform());
  CounterRng a3(42, 0);
  CHECK(a3.uniform() != c.uniform());
}

TEST_CASE("reproducible from (seed, stream)") {
  CounterRng x(7, 3), y(7, 3);
  for (int i = 0; i < 1000; ++i) CHECK(x.normal() == y.normal());
  CHECK(x.blocks_used() == y.blocks_used());
}

TEST_CASE("normal moments") {
  CounterRng r(1, 0);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  // Standard errors: 1/sqrt(n), sqrt(2/n), sqrt(96/n).
  CHECK(std::abs(m1) < 5.0 / std::sqrt(n));
  CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
}
