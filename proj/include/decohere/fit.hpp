// fit.hpp: least-squares power-law fits for convergence sweeps.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace decohere {

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;  // log(y) = intercept + slope·log(x)

  double prefactor() const { return std::exp(intercept); }
  double predict(double x) const { return std::exp(intercept) * std::pow(x, slope); }
};

inline PowerFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::domain_error("fit_power_law: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw std::domain_error("fit_power_law: degenerate abscissae");
  PowerFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace decohere
