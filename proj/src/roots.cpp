#include <algorithm>
#include <cmath>
#include <sstream>

#include "prcsync/errors.hpp"
#include "prcsync/prc.hpp"

namespace prcsync {

namespace {

double bracketed_root(const Prc& f, const Prc& df, double lo, double hi, double f_lo) {
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double slope = df(x);
    if (slope == 0.0) break;
    const double next = x - f(x) / slope;
    if (next < lo - 1e-11 || next > hi + 1e-11) break;
    x = next;
  }
  return x;
}

std::string where(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

std::vector<double> find_roots(const Prc& prc, int deriv, int grid, double min_separation) {
  if (grid < 8) throw InvalidArgument("root grid must have at least 8 points");
  const Prc f = prc.derivative(deriv);
  const Prc df = f.derivative(1);

  std::vector<double> v(grid + 1);
  double scale = 0.0, slope_scale = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double x = static_cast<double>(j) / grid;
    v[j] = f(x);
    scale = std::max(scale, std::abs(v[j]));
    slope_scale = std::max(slope_scale, std::abs(df(x)));
  }
  v[grid] = v[0];
  if (scale == 0.0) throw InvalidArgument("cannot locate roots of the zero function");

  std::vector<double> roots;
  for (int j = 0; j < grid; ++j) {
    const double lo = static_cast<double>(j) / grid;
    const double hi = static_cast<double>(j + 1) / grid;
    if (v[j] == 0.0) {
      roots.push_back(lo);
    } else if (v[j + 1] != 0.0 && ((v[j] < 0.0) != (v[j + 1] < 0.0))) {
      roots.push_back(bracketed_root(f, df, lo, hi, v[j]));
    }
  }

  for (double r : roots) {
    if (std::abs(df(r)) < 1e-8 * slope_scale) {
      throw DegenerateRoot("tangent root near theta = " + where(r));
    }
  }

  // Touching zeros show up as local minima of |f| without a sign change.
  for (int j = 0; j < grid; ++j) {
    const int prev = (j + grid - 1) % grid;
    const int next = j + 1;
    const double here = std::abs(v[j]);
    if (here == 0.0 || here > 1e-3 * scale) continue;
    if (here > std::abs(v[prev]) || here > std::abs(v[next])) continue;
    if ((v[prev] < 0.0) != (v[j] < 0.0) || (v[next] < 0.0) != (v[j] < 0.0)) continue;
    const double lo = static_cast<double>(j - 1) / grid;
    const double hi = static_cast<double>(j + 1) / grid;
    const double d_lo = df(lo), d_hi = df(hi);
    double x = static_cast<double>(j) / grid;
    if (d_lo != 0.0 && (d_lo < 0.0) != (d_hi < 0.0)) {
      x = bracketed_root(df, df.derivative(1), lo, hi, d_lo);
    }
    if (std::abs(f(x)) < 1e-10 * scale) {
      throw DegenerateRoot("tangent zero near theta = " + where(x - std::floor(x)));
    }
  }

  for (double& r : roots) r -= std::floor(r);
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double a = roots[i];
    const double b = (i + 1 < roots.size()) ? roots[i + 1] : roots.front() + 1.0;
    if (roots.size() > 1 && b - a < min_separation) {
      throw DegenerateRoot("roots closer than " + where(min_separation) + " near theta = " +
                           where(a));
    }
  }
  return roots;
}

}  // namespace prcsync
