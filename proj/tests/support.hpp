#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "prcsync/prc.hpp"

namespace prcsync::test {

// Coefficients ~ U(-1, 1)/k^3 up to a random order N <= 8.
inline Prc random_prc(std::mt19937_64& gen, int max_order = 8) {
  std::uniform_int_distribution<int> order(1, max_order);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = order(gen);
  std::vector<double> c(n + 1), s(n);
  c[0] = u(gen);
  for (int k = 1; k <= n; ++k) {
    const double scale = 1.0 / (static_cast<double>(k) * k * k);
    c[k] = u(gen) * scale;
    s[k - 1] = u(gen) * scale;
  }
  return Prc::from_fourier(c, s);
}

inline Prc type2() {
  const double s[] = {-std::sqrt(2.0)};
  return Prc::from_fourier(std::span<const double>{}, s);
}

inline Prc type1() {
  const double r = std::sqrt(2.0 / 3.0);
  const double c[] = {r, -r};
  return Prc::from_fourier(c, {});
}

inline double sup_diff(const Prc& x, const Prc& y, int n = 2000) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    m = std::max(m, std::abs(x(t) - y(t)));
  }
  return m;
}

// Sum over k of (2 pi k)^d (|alpha_k| + |beta_k|): a bound on |D^(d)|.
inline double derivative_scale(const Prc& p, int d) {
  double s = d == 0 ? std::abs(p.cos_coeff(0)) : 0.0;
  for (int k = 1; k <= p.order(); ++k) {
    s += std::pow(kTwoPi * k, d) * (std::abs(p.cos_coeff(k)) + std::abs(p.sin_coeff(k)));
  }
  return s;
}

}  // namespace prcsync::test
