#include "prcsync/bvp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "prcsync/errors.hpp"
#include "prcsync/variational.hpp"

namespace prcsync {

namespace {

// Collocation matrices B[d](j, col) = d^d/dtheta^d of basis function `col`
// at theta_j = j/n. Columns: 1, cos(2 pi k t) for k = 1..M, sin(2 pi k t).
struct SpectralBasis {
  int modes;
  int points;
  std::array<Eigen::MatrixXd, 5> deriv;

  SpectralBasis(int m, int max_deriv) : modes(m), points(2 * m + 1) {
    const int cols = 2 * m + 1;
    for (int d = 0; d <= max_deriv; ++d) deriv[d] = Eigen::MatrixXd::Zero(points, cols);
    for (int j = 0; j < points; ++j) {
      deriv[0](j, 0) = 1.0;
      for (int k = 1; k <= m; ++k) {
        // Reduce k*j modulo n so the angle is exact for large arguments.
        const double angle = kTwoPi * static_cast<double>((k * j) % points) / points;
        const double c = std::cos(angle), s = std::sin(angle);
        const double w = kTwoPi * k;
        double scale = 1.0;
        for (int d = 0; d <= max_deriv; ++d) {
          // d/dt rotates (cos, sin) -> (-sin, cos).
          const double cos_part[4] = {c, -s, -c, s};
          const double sin_part[4] = {s, c, -s, -c};
          deriv[d](j, k) = scale * cos_part[d % 4];
          deriv[d](j, m + k) = scale * sin_part[d % 4];
          scale *= w;
        }
      }
    }
  }
};

struct System {
  const ConstraintParams& cp;
  double half_s2;
  const SpectralBasis& basis;
  Eigen::VectorXd weight;  // Parseval weight per coefficient

  int unknowns() const { return 2 * basis.modes + 3; }

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd* jac) const {
    const int n = basis.points;
    const int nc = 2 * basis.modes + 1;
    const auto coeffs = x.head(nc);
    const double nu = x(nc), mu = x(nc + 1);
    const bool quartic = cp.c != 0.0;

    const Eigen::VectorXd d0 = basis.deriv[0] * coeffs;
    const Eigen::VectorXd d1 = basis.deriv[1] * coeffs;
    const Eigen::VectorXd d2 = basis.deriv[2] * coeffs;
    const Eigen::VectorXd d4 =
        quartic ? Eigen::VectorXd(basis.deriv[4] * coeffs) : Eigen::VectorXd::Zero(n);

    f.resize(n + 2);
    const Eigen::ArrayXd cubic = d1.array().cube() + 3.0 * d0.array() * d1.array() * d2.array();
    f.head(n) = (cp.c * nu * d4.array() + (1.0 - cp.b * nu) * d2.array() +
                 cp.a * nu * d0.array() + half_s2 * cubic + mu * d1.array())
                    .matrix();
    f(n) = 0.5 * (weight.array() * coeffs.array().square()).sum() - 1.0;
    f(n + 1) = coeffs.head(basis.modes + 1).sum();  // D(0)

    if (jac == nullptr) return;
    Eigen::MatrixXd& J = *jac;
    J.setZero(n + 2, unknowns());
    auto block = J.topLeftCorner(n, nc);
    block = (1.0 - cp.b * nu) * basis.deriv[2] + cp.a * nu * basis.deriv[0] + mu * basis.deriv[1];
    if (quartic) block += cp.c * nu * basis.deriv[4];
    const Eigen::ArrayXd g0 = 3.0 * d1.array() * d2.array();
    const Eigen::ArrayXd g1 = 3.0 * d1.array().square() + 3.0 * d0.array() * d2.array();
    const Eigen::ArrayXd g2 = 3.0 * d0.array() * d1.array();
    block += half_s2 * ((g0.matrix().asDiagonal() * basis.deriv[0]) +
                        (g1.matrix().asDiagonal() * basis.deriv[1]) +
                        (g2.matrix().asDiagonal() * basis.deriv[2]));
    J.col(nc).head(n) = (cp.c * d4.array() - cp.b * d2.array() + cp.a * d0.array()).matrix();
    J.col(nc + 1).head(n) = d1;
    J.row(n).head(nc) = (weight.array() * coeffs.array()).matrix().transpose();
    J.row(n + 1).head(basis.modes + 1).setOnes();
  }
};

int resolve_order(const ConstraintParams& cp, BvpOrder order) {
  if (order == BvpOrder::fourth && cp.c == 0.0) {
    throw InvalidArgument("fourth-order path requested but c = 0; the problem is second order");
  }
  if (order == BvpOrder::second && cp.c != 0.0) {
    throw InvalidArgument("second-order path requested but c != 0");
  }
  return cp.c == 0.0 ? 2 : 4;
}

// Translate so that a zero with negative slope sits at theta = 0.
Prc align_guess(const Prc& guess) {
  try {
    for (double r : find_roots(guess, 0)) {
      if (guess.eval(r, 1) < 0.0) return guess.shifted(r);
    }
  } catch (const Error&) {
    // Degenerate or zero-free guesses are used as they are.
  }
  return guess;
}

Eigen::VectorXd pack(const Prc& prc, int modes) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * modes + 1);
  x(0) = prc.cos_coeff(0);
  for (int k = 1; k <= std::min(modes, prc.order()); ++k) {
    x(k) = prc.cos_coeff(k);
    x(modes + k) = prc.sin_coeff(k);
  }
  return x;
}

Prc unpack(const Eigen::VectorXd& x, int modes) {
  std::vector<double> c(x.data(), x.data() + modes + 1);
  std::vector<double> s(x.data() + modes + 1, x.data() + 2 * modes + 1);
  return Prc::from_fourier(c, s);
}

// d^deriv/dt^deriv of the series at t without reducing t to [0,1).
double raw_series(const Prc& prc, double t, int deriv) {
  double sum = deriv == 0 ? prc.cos_coeff(0) : 0.0;
  for (int k = 1; k <= prc.order(); ++k) {
    const double w = kTwoPi * k;
    const double phase = w * t + 0.5 * kPi * deriv;
    sum += std::pow(w, deriv) * (prc.cos_coeff(k) * std::cos(phase) +
                                 prc.sin_coeff(k) * std::sin(phase));
  }
  return sum;
}

BvpSolution newton_solve(const ConstraintParams& cp, NoiseAmplitude sigma, const Prc& guess,
                         double nu_guess, int modes, const BvpOptions& opts) {
  const int order = resolve_order(cp, opts.order);
  const SpectralBasis basis(modes, order);

  System sys{cp, 0.5 * sigma.squared(), basis, Eigen::VectorXd(2 * modes + 1)};
  sys.weight(0) = 2.0 * cp.a;
  for (int k = 1; k <= modes; ++k) {
    const double w2 = (kTwoPi * k) * (kTwoPi * k);
    const double wk = cp.a + cp.b * w2 + cp.c * w2 * w2;
    sys.weight(k) = wk;
    sys.weight(modes + k) = wk;
  }

  Eigen::VectorXd x(sys.unknowns());
  x.head(2 * modes + 1) = pack(align_guess(guess), modes);
  x(2 * modes + 1) = nu_guess;
  x(2 * modes + 2) = 0.0;

  Eigen::VectorXd f, trial_f;
  Eigen::MatrixXd jac;
  sys.residual(x, f, &jac);
  double norm = f.lpNorm<Eigen::Infinity>();
  int iter = 0;
  // A residual this small is roundoff; Newton can stall just above `tolerance`.
  constexpr double kStallAccept = 1e-10;
  while (norm > opts.tolerance) {
    if (iter >= opts.max_iterations) {
      throw ConvergenceError("Euler-Lagrange Newton iteration did not converge", norm, iter);
    }
    ++iter;
    const Eigen::VectorXd step = jac.partialPivLu().solve(-f);
    if (!step.allFinite()) {
      throw ConvergenceError("singular Jacobian in Euler-Lagrange Newton iteration", norm, iter);
    }
    double damping = 1.0;
    Eigen::VectorXd trial = x + step;
    sys.residual(trial, trial_f, nullptr);
    double trial_norm = trial_f.lpNorm<Eigen::Infinity>();
    while (!(trial_norm < norm) && damping > 1e-6) {
      damping *= 0.5;
      trial = x + damping * step;
      sys.residual(trial, trial_f, nullptr);
      trial_norm = trial_f.lpNorm<Eigen::Infinity>();
    }
    if (!(trial_norm < norm)) {
      if (norm <= kStallAccept) break;
      throw ConvergenceError("Euler-Lagrange Newton step failed to reduce the residual", norm,
                             iter);
    }
    x = trial;
    sys.residual(x, f, &jac);
    norm = f.lpNorm<Eigen::Infinity>();
  }

  BvpSolution sol;
  sol.params = cp;
  sol.sigma = sigma.value();
  sol.delta = unpack(x, modes);
  sol.nu1 = x(2 * modes + 1);
  sol.unfolding = x(2 * modes + 2);
  sol.ode_order = order;
  sol.iterations = iter;
  // Both -D and D(t + 1/2) solve the problem; keep the falling branch.
  if (sol.delta.eval(0.0, 1) > 0.0) sol.delta = -1.0 * sol.delta;
  sol.residuals = el_residual(sol, cp, sigma, 4 * basis.points);
  return sol;
}

BvpSolution solve_from(const ConstraintParams& cp, NoiseAmplitude sigma, const Prc& guess,
                       double nu_guess, const BvpOptions& opts) {
  if (opts.modes < 3) throw InvalidArgument("at least 3 Fourier modes are required");
  int modes = opts.modes;
  BvpSolution sol = newton_solve(cp, sigma, guess, nu_guess, modes, opts);
  int total = sol.iterations;
  while (sol.residuals.ode > opts.residual_tolerance) {
    if (2 * modes > opts.max_modes) {
      throw ConvergenceError("Euler-Lagrange solution is not resolved by " +
                                 std::to_string(modes) +
                                 " modes (off-grid residual too large)",
                             sol.residuals.ode, total);
    }
    modes *= 2;
    sol = newton_solve(cp, sigma, sol.delta, sol.nu1, modes, opts);
    total += sol.iterations;
  }
  sol.iterations = total;
  return sol;
}

void check_case(const ConstraintParams& cp, NoiseAmplitude sigma) {
  const ConstraintCase cc = classify_constraint_case(cp);
  if (cc.classification != CaseClass::unique_optimum) {
    throw InadmissibleCase(std::string("no unique periodic optimum: case is ") +
                           std::string(to_string(cc.classification)));
  }
  if (!(sigma.value() < 0.5)) throw InvalidArgument("sigma must be below 0.5");
}

}  // namespace

BvpSolution solve_euler_lagrange(const ConstraintParams& cp, NoiseAmplitude sigma,
                                 const std::optional<Prc>& init, const BvpOptions& opts) {
  check_case(cp, sigma);
  const Prc guess =
      init ? *init : optimal_prc_perturbative(cp, NoiseAmplitude(0.0)).delta0;
  return solve_from(cp, sigma, guess, nu10(cp), opts);
}

ResidualNorms el_residual(const BvpSolution& sol, const ConstraintParams& cp,
                          NoiseAmplitude sigma, int grid) {
  if (grid < 3) throw InvalidArgument("residual grid needs at least 3 points");
  const Prc& d = sol.delta;
  const double nu = sol.nu1;
  const double half_s2 = 0.5 * sigma.squared();
  ResidualNorms out;
  std::array<double, 5> jet{};
  double norm = 0.0;
  for (int j = 0; j < grid; ++j) {
    // Midpoints, so this grid never coincides with the collocation points.
    d.eval_jet((j + 0.5) / grid, jet);
    const double e = cp.a * nu * jet[0] + (1.0 - cp.b * nu) * jet[2] + cp.c * nu * jet[4] +
                     half_s2 * (jet[1] * jet[1] * jet[1] + 3.0 * jet[0] * jet[1] * jet[2]);
    out.ode = std::max(out.ode, std::abs(e));
    norm += cp.a * jet[0] * jet[0] + cp.b * jet[1] * jet[1] + cp.c * jet[2] * jet[2];
  }
  out.constraint = std::abs(norm / grid - 1.0);
  const int top = cp.c == 0.0 ? 1 : 3;
  for (int k = 0; k <= top; ++k) {
    out.periodicity = std::max(out.periodicity, std::abs(raw_series(d, 0.0, k) - raw_series(d, 1.0, k)));
  }
  return out;
}

std::vector<BvpSolution> continuation_in_sigma(const ConstraintParams& cp,
                                               const std::vector<double>& sigmas,
                                               const BvpOptions& opts) {
  if (sigmas.empty()) throw InvalidArgument("sigma list is empty");
  if (sigmas.front() > 0.05) throw InvalidArgument("continuation must start at sigma <= 0.05");
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > sigmas[i - 1])) throw InvalidArgument("sigma list must be increasing");
  }
  std::vector<BvpSolution> out;
  out.reserve(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const NoiseAmplitude s(sigmas[i]);
    try {
      if (out.empty()) {
        out.push_back(solve_euler_lagrange(cp, s, std::nullopt, opts));
      } else {
        check_case(cp, s);
        out.push_back(solve_from(cp, s, out.back().delta, out.back().nu1, opts));
      }
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("continuation failed at index " + std::to_string(i) +
                                 " (sigma = " + std::to_string(sigmas[i]) + "): " + e.what(),
                             e.residual(), e.iterations());
    }
  }
  return out;
}

}  // namespace prcsync
