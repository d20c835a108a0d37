// gas/hamiltonian.hpp: diagonal matrix elements ⟨k|H|k⟩ of the medium's
// effective (non-hermitian) Hamiltonian in the two mass limits.
#pragma once

#include "decohere/gas/config.hpp"

namespace decohere::gas {

namespace detail {

inline double phase_space(int d) { return std::pow(kTwoPi, d); }

// Central difference of T_E(K, K; m) in K with step h.
inline cplx dT_dk(const ScatteringAmplitude& a, double k, double m, double h) {
  return (a.forward(k + h, m) - a.forward(k - h, m)) / (2.0 * h);
}

inline void check_order(int order) {
  if (order != 0 && order != 1) throw std::invalid_argument("hamiltonian: order must be 0 or 1");
}

}  // namespace detail

/// m1 ≪ m2: order 0 is (2π)ᵈ n T_E(k,k;m1), independent of the targets;
/// order 1 is (2π)ᵈ n (1 − (m1/m2) k∂_k) T_E(k,k;m_r).
inline cplx hamiltonian_diag_heavy_target(const GasConfig& cfg, double k, int order) {
  check_config(cfg);
  detail::check_order(order);
  cfg.grid.index_of(k);
  if (!(cfg.mass_ratio() < 1.0)) throw std::invalid_argument("hamiltonian_diag_heavy_target: requires m1/m2 < 1");
  const double pre = detail::phase_space(cfg.dimension()) * cfg.n;
  if (order == 0) return pre * cfg.amplitude.forward(k, cfg.m1);
  const double mr = cfg.m_r();
  const cplx d = detail::dT_dk(cfg.amplitude, k, mr, cfg.grid.spacing());
  return pre * (cfg.amplitude.forward(k, mr) - cfg.mass_ratio() * k * d);
}

/// m2 ≪ m1: target-averaged T_E at K = (m2/m1)k − k₂ (order 0 with mass m2,
/// order 1 with m_r plus the (m2/m1)(k₂/k + k₂∂_K) correction).
inline cplx hamiltonian_diag_heavy_particle(const GasConfig& cfg, double k, int order) {
  check_config(cfg);
  detail::check_order(order);
  check_targets(cfg);
  cfg.grid.index_of(k);
  if (!(cfg.m2 / cfg.m1 < 1.0)) throw std::invalid_argument("hamiltonian_diag_heavy_particle: requires m2/m1 < 1");
  if (k == 0.0) throw std::invalid_argument("hamiltonian_diag_heavy_particle: k must be nonzero");
  const double x = cfg.m2 / cfg.m1;
  const double h = cfg.grid.spacing();
  cplx sum = 0.0;
  for (const auto& t : cfg.targets) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < t.k2.size(); ++i) {
      const double k2 = t.k2[i];
      const double K = x * k - k2;
      cplx v;
      if (order == 0) {
        v = cfg.amplitude.forward(K, cfg.m2);
      } else {
        const double mr = cfg.m_r();
        v = (1.0 + x * k2 / k) * cfg.amplitude.forward(K, mr) + x * k2 * detail::dT_dk(cfg.amplitude, K, mr, h);
      }
      s += t.probability(i) * v;
    }
    sum += t.weight * s;
  }
  return detail::phase_space(cfg.dimension()) * cfg.n * sum;
}

}  // namespace decohere::gas
