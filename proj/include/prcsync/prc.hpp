#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace prcsync {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Weights (a, b, c) of the quadratic smoothness functional
///   int_0^1 a D^2 + b (D')^2 + c (D'')^2 dtheta.
struct ConstraintParams {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;

  /// Throws InvalidArgument unless all weights are finite, nonnegative and
  /// not all zero.
  void validate() const;
};

/// Noise amplitude sigma of the common white-noise drive. Zero is accepted
/// as the deterministic limit; negative or non-finite values are rejected.
class NoiseAmplitude {
 public:
  constexpr NoiseAmplitude() = default;
  explicit NoiseAmplitude(double sigma);

  constexpr double value() const noexcept { return sigma_; }
  constexpr double squared() const noexcept { return sigma_ * sigma_; }

 private:
  double sigma_ = 0.0;
};

/// A smooth period-1 phase-resetting curve stored as a truncated Fourier
/// series
///
///   D(theta) = alpha_0 + sum_{k=1}^{N} alpha_k cos(2 pi k theta)
///                                      + beta_k  sin(2 pi k theta).
///
/// Derivatives are exact term-by-term. Instances are immutable.
class Prc {
 public:
  /// The zero curve of order 1.
  Prc();

  /// `cos_coeffs[k]` multiplies cos(2 pi k theta) (k = 0..), `sin_coeffs[j]`
  /// multiplies sin(2 pi (j+1) theta). The order is the largest frequency
  /// present, at least 1; shorter lists are zero padded.
  static Prc from_fourier(std::span<const double> cos_coeffs,
                          std::span<const double> sin_coeffs);

  /// Least-squares (= interpolating, for N < n/2) trigonometric fit of samples
  /// taken at theta_j = j/n.
  static Prc fit_uniform(std::span<const double> samples, int order);

  static Prc constant(double value);

  int order() const noexcept { return static_cast<int>(sin_.size()); }

  /// alpha_0..alpha_N.
  std::span<const double> cos_coeffs() const noexcept { return cos_; }
  /// beta_1..beta_N, stored from index 0.
  std::span<const double> sin_coeffs() const noexcept { return sin_; }

  double cos_coeff(int k) const noexcept;
  double sin_coeff(int k) const noexcept;

  /// d^deriv D / dtheta^deriv at theta. Any theta is reduced to [0,1) first.
  double eval(double theta, int deriv = 0) const;
  double operator()(double theta) const { return eval(theta, 0); }

  /// All derivatives 0..out.size()-1 at theta in one pass.
  void eval_jet(double theta, std::span<double> out) const;

  /// Samples of the deriv-th derivative on theta_j = j/n.
  std::vector<double> sample(std::size_t n, int deriv = 0) const;

  Prc derivative(int deriv = 1) const;
  /// theta -> D(theta + shift).
  Prc shifted(double shift) const;
  Prc scaled(double factor) const;
  Prc truncated(int order) const;

  friend Prc operator+(const Prc& lhs, const Prc& rhs);
  friend Prc operator-(const Prc& lhs, const Prc& rhs);
  friend Prc operator*(double factor, const Prc& prc) { return prc.scaled(factor); }

  /// Mean-square of the deriv-th derivative, computed by Parseval.
  double mean_square(int deriv = 0) const;

  /// sqrt(alpha_k^2 + beta_k^2); zero beyond the truncation order.
  double harmonic_amplitude(int k) const noexcept;

 private:
  Prc(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  std::vector<double> cos_;  // size N+1
  std::vector<double> sin_;  // size N
};

/// int_0^1 a D^2 + b (D')^2 + c (D'')^2 dtheta via Parseval.
double constraint_norm(const Prc& prc, const ConstraintParams& cp);

/// Rectangle rule on a periodic uniform grid, i.e. the mean of the samples.
double periodic_quadrature(std::span<const double> samples);

/// Zeros of the deriv-th derivative of prc in [0,1), sorted.
///
/// Sign changes on a uniform grid are bracketed by bisection and polished by
/// Newton. Throws DegenerateRoot when a root is tangent (no sign change, or
/// |slope| negligible) or two roots lie closer than `min_separation`.
/// Throws InvalidArgument for the identically-zero function.
std::vector<double> find_roots(const Prc& prc, int deriv = 0, int grid = 4096,
                               double min_separation = 1e-6);

}  // namespace prcsync
