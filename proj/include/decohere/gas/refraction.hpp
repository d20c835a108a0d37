// gas/refraction.hpp: complex refraction index k′/k of the coherent part.
#pragma once

#include "decohere/gas/hamiltonian.hpp"

namespace decohere::gas {

enum class MassLimit { heavy_target, heavy_particle };

struct RefractionIndex {
  cplx H;           // ⟨k|H|k⟩
  cplx ratio;       // k′/k = sqrt(1 − ⟨k|H|k⟩/(k²/2m1))
  cplx linearized;  // 1 − m1⟨k|H|k⟩/k², the Fermi-type form
  cplx difference;  // ratio − linearized
  bool weak = true; // |H| ≤ 0.1·k²/2m1
  std::string warning;
};

inline cplx medium_energy(const GasConfig& cfg, double k, MassLimit limit, int order) {
  return limit == MassLimit::heavy_target ? hamiltonian_diag_heavy_target(cfg, k, order)
                                          : hamiltonian_diag_heavy_particle(cfg, k, order);
}

inline RefractionIndex refraction_index(const GasConfig& cfg, double k, MassLimit limit, int order) {
  if (k == 0.0) throw std::invalid_argument("refraction_index: k must be nonzero");
  RefractionIndex r;
  r.H = medium_energy(cfg, k, limit, order);
  const double e0 = cfg.energy(k);
  const cplx arg = 1.0 - r.H / e0;
  if (arg.real() < 0) throw std::domain_error("refraction_index: medium energy exceeds the kinetic energy");
  r.ratio = std::sqrt(arg);
  r.linearized = 1.0 - r.H / (2.0 * e0);
  r.difference = r.ratio - r.linearized;
  r.weak = std::abs(r.H) <= 0.1 * e0;
  if (!r.weak) r.warning = "medium energy is not small against k^2/2m1; linearized form unreliable";
  return r;
}

/// Single-centre form k′/k = 1 + 2πn f(k,k)/k², with f the amplitude of the
/// relative motion (reduced mass).
inline cplx fermi_index(const GasConfig& cfg, double k) {
  if (k == 0.0) throw std::invalid_argument("fermi_index: k must be nonzero");
  return 1.0 + kTwoPi * cfg.n * cfg.amplitude.f(k, cfg.m_r()) / (k * k);
}

}  // namespace decohere::gas
