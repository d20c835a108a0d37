// gas/potential.hpp: particle–target potentials through their Fourier transform
// Ṽ(p) = (2π)^{-d} ∫ V(x) e^{-ipx} dᵈx  (ħ = 1).
#pragma once

#include <algorithm>
#include <complex>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "decohere/gas/grid.hpp"

namespace decohere::gas {

using cplx = std::complex<double>;

enum class PotentialKind { contact, gaussian, yukawa, tabulated, zero };

struct Potential {
  PotentialKind kind = PotentialKind::zero;
  int dimension = 1;       // 1 or 3; in 3D Ṽ depends on |p| only
  double strength = 0.0;   // contact: g in V = g δᵈ(x); others: V0
  double range = 0.0;      // gaussian: b; yukawa: 1/μ
  std::function<cplx(double)> table;  // tabulated only

  cplx operator()(double p) const {
    const double d = dimension;
    switch (kind) {
      case PotentialKind::zero:
        return 0.0;
      case PotentialKind::contact:
        return strength / std::pow(kTwoPi, d);
      case PotentialKind::gaussian:
        // V0·exp(−x²/2b²)
        return strength * std::pow(range / std::sqrt(kTwoPi), d) * std::exp(-0.5 * p * p * range * range);
      case PotentialKind::yukawa: {
        const double mu = 1.0 / range;
        // 3D: V0·e^{−μr}/r; 1D: V0·e^{−μ|x|}
        return dimension == 3 ? strength / (2.0 * std::numbers::pi * std::numbers::pi * (p * p + mu * mu))
                              : strength * mu / (std::numbers::pi * (p * p + mu * mu));
      }
      case PotentialKind::tabulated:
        return table(p);
    }
    return 0.0;
  }
};

inline void check_dimension(int d) {
  if (d != 1 && d != 3) throw std::invalid_argument("potential: dimension must be 1 or 3");
}

inline Potential zero_potential(int d = 1) {
  check_dimension(d);
  return Potential{PotentialKind::zero, d};
}

inline Potential contact_potential(double g, int d = 1) {
  check_dimension(d);
  return Potential{PotentialKind::contact, d, g};
}

inline Potential gaussian_potential(double v0, double b, int d = 1) {
  check_dimension(d);
  if (!(b > 0)) throw std::invalid_argument("gaussian_potential: width must be positive");
  return Potential{PotentialKind::gaussian, d, v0, b};
}

inline Potential yukawa_potential(double v0, double range, int d = 3) {
  check_dimension(d);
  if (!(range > 0)) throw std::invalid_argument("yukawa_potential: range must be positive");
  return Potential{PotentialKind::yukawa, d, v0, range};
}

/// Piecewise-linear Ṽ from samples (q ascending). Outside the table Ṽ = 0; a
/// table covering only q ≥ 0 is extended by Ṽ(−q) = Ṽ(q)* (real V).
inline Potential tabulated_potential(std::vector<double> q, std::vector<cplx> v, int d = 1) {
  check_dimension(d);
  if (q.size() < 2 || q.size() != v.size()) throw std::invalid_argument("tabulated_potential: need >= 2 samples");
  for (std::size_t i = 1; i < q.size(); ++i)
    if (!(q[i] > q[i - 1])) throw std::invalid_argument("tabulated_potential: q must be strictly increasing");
  const bool half = q.front() >= 0.0;
  auto f = [q = std::move(q), v = std::move(v), half](double p) -> cplx {
    const bool mirror = half && p < 0;
    const double x = mirror ? -p : p;
    if (x < q.front() || x > q.back()) return 0.0;
    const auto it = std::upper_bound(q.begin(), q.end(), x);
    const std::size_t hi = std::min<std::size_t>(std::size_t(it - q.begin()), q.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (x - q[lo]) / (q[hi] - q[lo]);
    const cplx val = (1.0 - t) * v[lo] + t * v[hi];
    return mirror ? std::conj(val) : val;
  };
  Potential pot{PotentialKind::tabulated, d};
  pot.table = std::move(f);
  return pot;
}

/// CSV rows "q,re,im"; a non-numeric first line is taken as a header.
inline Potential load_tabulated_potential(const std::string& path, int d = 1) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tabulated_potential: cannot open " + path);
  std::vector<double> q;
  std::vector<cplx> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double a = 0, re = 0, im = 0;
    if (!(is >> a >> re)) {
      if (lineno == 1) continue;
      throw std::runtime_error("load_tabulated_potential: bad row " + std::to_string(lineno) + " in " + path);
    }
    if (!(is >> im)) im = 0.0;
    q.push_back(a);
    v.emplace_back(re, im);
  }
  return tabulated_potential(std::move(q), std::move(v), d);
}

}  // namespace decohere::gas
