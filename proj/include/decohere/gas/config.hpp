// gas/config.hpp: parameters of a homogeneous gas medium.
#pragma once

#include <optional>
#include <string>

#include "decohere/gas/amplitude.hpp"

namespace decohere::gas {

/// One target state |m⟩ through its momentum distribution: samples of A_m(k₂)
/// on a uniform lattice of spacing dk (a single sample with dk = 1 and A = 1 is
/// a target at rest).
struct TargetMomentumState {
  double weight = 1.0;  // q_m
  std::vector<double> k2;
  std::vector<cplx> amplitude;
  double dk = 1.0;

  double probability(std::size_t i) const { return std::norm(amplitude[i]) * dk; }

  double norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < k2.size(); ++i) s += probability(i);
    return s;
  }

  double mean_momentum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < k2.size(); ++i) s += probability(i) * k2[i];
    return s;
  }
};

inline TargetMomentumState target_at_rest(double weight = 1.0) { return {weight, {0.0}, {1.0}, 1.0}; }

/// Gaussian wave packet |A(k₂)|² ∝ exp(−(k₂−c)²/2σ²) sampled on [c − w·σ, c + w·σ].
inline TargetMomentumState gaussian_target(double center, double sigma, double weight = 1.0, std::size_t points = 201,
                                           double width_in_sigmas = 8.0) {
  if (!(sigma > 0) || points < 3) throw std::invalid_argument("gaussian_target: bad parameters");
  TargetMomentumState t;
  t.weight = weight;
  t.dk = 2.0 * width_in_sigmas * sigma / double(points - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double k = center - width_in_sigmas * sigma + double(i) * t.dk;
    t.k2.push_back(k);
    t.amplitude.emplace_back(std::exp(-0.25 * (k - center) * (k - center) / (sigma * sigma)));
    s += std::norm(t.amplitude.back()) * t.dk;
  }
  for (auto& a : t.amplitude) a /= std::sqrt(s);
  return t;
}

struct GasConfig {
  double m1 = 1.0;  // particle
  double m2 = 1.0;  // target
  double n = 1e-3;  // targets per unit volume (length in 1D)
  double v1 = 1.0;  // particle mean speed along z
  MomentumGrid grid;
  ScatteringAmplitude amplitude;
  std::vector<TargetMomentumState> targets;
  double eta = 0.05;  // width of the broadened energy delta
  bool gas_at_rest = true;

  int dimension() const { return amplitude.dimension(); }
  double m_t() const { return m1 + m2; }
  double m_r() const { return m1 * m2 / (m1 + m2); }
  double mass_ratio() const { return m1 / m2; }
  double energy(double k) const { return 0.5 * k * k / m1; }
  cplx V(double p) const { return amplitude.potential(p); }
};

inline void check_targets(const GasConfig& c, double tol = 1e-6) {
  if (c.targets.empty()) throw std::invalid_argument("GasConfig: no target states");
  double w = 0.0, mean = 0.0, spread = 0.0;
  for (const auto& t : c.targets) {
    if (t.k2.empty() || t.k2.size() != t.amplitude.size() || !(t.dk > 0))
      throw std::invalid_argument("GasConfig: malformed target momentum distribution");
    if (std::abs(t.norm() - 1.0) > tol) throw std::invalid_argument("GasConfig: target distribution not normalized");
    if (t.weight < 0) throw std::invalid_argument("GasConfig: negative target weight");
    w += t.weight;
    mean += t.weight * t.mean_momentum();
    for (std::size_t i = 0; i < t.k2.size(); ++i) spread = std::max(spread, std::abs(t.k2[i]));
  }
  if (std::abs(w - 1.0) > 1e-12) throw std::invalid_argument("GasConfig: target weights do not sum to 1");
  if (c.gas_at_rest && std::abs(mean) > 1e-9 * std::max(spread, 1.0))
    throw std::invalid_argument("GasConfig: gas at rest requires zero mean target momentum");
}

inline void check_config(const GasConfig& c) {
  if (!(c.m1 > 0) || !(c.m2 > 0)) throw std::invalid_argument("GasConfig: masses must be positive");
  if (!(c.n >= 0)) throw std::invalid_argument("GasConfig: density must be non-negative");
  if (!(c.eta > 0)) throw std::invalid_argument("GasConfig: eta must be positive");
  if (!(c.v1 > 0)) throw std::invalid_argument("GasConfig: particle speed must be positive");
}

}  // namespace decohere::gas
