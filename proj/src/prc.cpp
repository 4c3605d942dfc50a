#include "prcsync/prc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prcsync/errors.hpp"

namespace prcsync {

void ConstraintParams::validate() const {
  for (double w : {a, b, c}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidArgument("constraint weights must be finite and nonnegative");
    }
  }
  if (a == 0.0 && b == 0.0 && c == 0.0) {
    throw InvalidArgument("constraint weights (a, b, c) are all zero");
  }
}

NoiseAmplitude::NoiseAmplitude(double sigma) : sigma_(sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidArgument("noise amplitude must be finite and nonnegative, got " +
                          std::to_string(sigma));
  }
}

Prc::Prc() : cos_(2, 0.0), sin_(1, 0.0) {}

Prc::Prc(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {}

Prc Prc::from_fourier(std::span<const double> cos_coeffs,
                      std::span<const double> sin_coeffs) {
  for (double v : cos_coeffs) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite cosine coefficient");
  }
  for (double v : sin_coeffs) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite sine coefficient");
  }
  const std::size_t from_cos = cos_coeffs.empty() ? 0 : cos_coeffs.size() - 1;
  const std::size_t n = std::max<std::size_t>({1, from_cos, sin_coeffs.size()});
  std::vector<double> c(n + 1, 0.0);
  std::vector<double> s(n, 0.0);
  std::copy(cos_coeffs.begin(), cos_coeffs.end(), c.begin());
  std::copy(sin_coeffs.begin(), sin_coeffs.end(), s.begin());
  return Prc(std::move(c), std::move(s));
}

Prc Prc::constant(double value) {
  const double c[] = {value};
  return from_fourier(c, {});
}

Prc Prc::fit_uniform(std::span<const double> samples, int order) {
  const std::size_t n = samples.size();
  if (order < 1) throw InvalidArgument("fit order must be >= 1");
  if (2 * static_cast<std::size_t>(order) >= n) {
    throw InvalidArgument("fit order must be below n/2 for n = " + std::to_string(n));
  }
  // Exact-index trig tables keep every projection free of phase drift.
  std::vector<double> ct(n), st(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle = kTwoPi * static_cast<double>(m) / static_cast<double>(n);
    ct[m] = std::cos(angle);
    st[m] = std::sin(angle);
  }
  std::vector<double> c(order + 1, 0.0), s(order, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  c[0] = std::accumulate(samples.begin(), samples.end(), 0.0) * inv_n;
  for (int k = 1; k <= order; ++k) {
    double ac = 0.0, as = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t m = (static_cast<std::size_t>(k) * j) % n;
      ac += samples[j] * ct[m];
      as += samples[j] * st[m];
    }
    c[k] = 2.0 * ac * inv_n;
    s[k - 1] = 2.0 * as * inv_n;
  }
  return Prc(std::move(c), std::move(s));
}

double Prc::cos_coeff(int k) const noexcept {
  return (k >= 0 && k < static_cast<int>(cos_.size())) ? cos_[k] : 0.0;
}

double Prc::sin_coeff(int k) const noexcept {
  return (k >= 1 && k <= order()) ? sin_[k - 1] : 0.0;
}

void Prc::eval_jet(double theta, std::span<double> out) const {
  if (out.empty()) return;
  std::fill(out.begin(), out.end(), 0.0);
  const double x = theta - std::floor(theta);
  out[0] = cos_[0];
  const double c1 = std::cos(kTwoPi * x);
  const double s1 = std::sin(kTwoPi * x);
  double ck = c1, sk = s1;
  const int n = order();
  for (int k = 1; k <= n; ++k) {
    const double alpha = cos_[k];
    const double beta = sin_[k - 1];
    const double even = alpha * ck + beta * sk;   // value
    const double odd = -alpha * sk + beta * ck;   // first derivative / omega
    const double omega = kTwoPi * k;
    double scale = 1.0;
    for (std::size_t m = 0; m < out.size(); ++m) {
      switch (m % 4) {
        case 0: out[m] += scale * even; break;
        case 1: out[m] += scale * odd; break;
        case 2: out[m] -= scale * even; break;
        default: out[m] -= scale * odd; break;
      }
      scale *= omega;
    }
    const double next_c = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = next_c;
  }
}

double Prc::eval(double theta, int deriv) const {
  if (deriv < 0) throw InvalidArgument("derivative order must be nonnegative");
  if (!std::isfinite(theta)) throw InvalidArgument("non-finite phase");
  std::array<double, 8> small{};
  if (deriv < static_cast<int>(small.size())) {
    eval_jet(theta, std::span<double>(small.data(), deriv + 1));
    return small[deriv];
  }
  return derivative(deriv).eval(theta, 0);
}

std::vector<double> Prc::sample(std::size_t n, int deriv) const {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = eval(static_cast<double>(j) / static_cast<double>(n), deriv);
  }
  return out;
}

Prc Prc::derivative(int deriv) const {
  if (deriv < 0) throw InvalidArgument("derivative order must be nonnegative");
  std::vector<double> c = cos_, s = sin_;
  if (deriv > 0) c[0] = 0.0;
  for (int m = 0; m < deriv; ++m) {
    for (int k = 1; k <= order(); ++k) {
      const double omega = kTwoPi * k;
      const double alpha = c[k];
      c[k] = omega * s[k - 1];
      s[k - 1] = -omega * alpha;
    }
  }
  return Prc(std::move(c), std::move(s));
}

Prc Prc::shifted(double shift) const {
  std::vector<double> c = cos_, s = sin_;
  for (int k = 1; k <= order(); ++k) {
    const double angle = kTwoPi * k * shift;
    const double ca = std::cos(angle), sa = std::sin(angle);
    c[k] = cos_[k] * ca + sin_[k - 1] * sa;
    s[k - 1] = sin_[k - 1] * ca - cos_[k] * sa;
  }
  return Prc(std::move(c), std::move(s));
}

Prc Prc::scaled(double factor) const {
  std::vector<double> c = cos_, s = sin_;
  for (double& v : c) v *= factor;
  for (double& v : s) v *= factor;
  return Prc(std::move(c), std::move(s));
}

Prc Prc::truncated(int new_order) const {
  if (new_order < 1) throw InvalidArgument("truncation order must be >= 1");
  std::vector<double> c(new_order + 1, 0.0), s(new_order, 0.0);
  for (int k = 0; k <= std::min(new_order, order()); ++k) c[k] = cos_[k];
  for (int k = 1; k <= std::min(new_order, order()); ++k) s[k - 1] = sin_[k - 1];
  return Prc(std::move(c), std::move(s));
}

namespace {

Prc combine(const Prc& lhs, const Prc& rhs, double sign) {
  const int n = std::max(lhs.order(), rhs.order());
  std::vector<double> c(n + 1), s(n);
  for (int k = 0; k <= n; ++k) c[k] = lhs.cos_coeff(k) + sign * rhs.cos_coeff(k);
  for (int k = 1; k <= n; ++k) s[k - 1] = lhs.sin_coeff(k) + sign * rhs.sin_coeff(k);
  return Prc::from_fourier(c, s);
}

}  // namespace

Prc operator+(const Prc& lhs, const Prc& rhs) { return combine(lhs, rhs, 1.0); }
Prc operator-(const Prc& lhs, const Prc& rhs) { return combine(lhs, rhs, -1.0); }

double Prc::mean_square(int deriv) const {
  double sum = deriv == 0 ? cos_[0] * cos_[0] : 0.0;
  for (int k = 1; k <= order(); ++k) {
    const double omega_pow = std::pow(kTwoPi * k, 2 * deriv);
    sum += 0.5 * omega_pow * (cos_[k] * cos_[k] + sin_[k - 1] * sin_[k - 1]);
  }
  return sum;
}

double Prc::harmonic_amplitude(int k) const noexcept {
  if (k == 0) return std::abs(cos_[0]);
  if (k < 0 || k > order()) return 0.0;
  return std::hypot(cos_[k], sin_[k - 1]);
}

double constraint_norm(const Prc& prc, const ConstraintParams& cp) {
  return cp.a * prc.mean_square(0) + cp.b * prc.mean_square(1) +
         cp.c * prc.mean_square(2);
}

double periodic_quadrature(std::span<const double> samples) {
  if (samples.empty()) throw InvalidArgument("periodic quadrature of an empty sample list");
  return std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
}

}  // namespace prcsync
