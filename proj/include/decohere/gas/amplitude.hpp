// gas/amplitude.hpp: on-shell T-matrix element T_E and scattering amplitude f.
//
// Normalization: first Born T_E = Ṽ(p) for momentum transfer p = k_in − k_out,
// and f = −(2π)^{d−1}·m·T_E. With this choice an attractive potential gives a
// refraction index with Re k′ > k.
#pragma once

#include "decohere/gas/potential.hpp"

namespace decohere::gas {

enum class AmplitudeModel { first_born, contact_exact };

struct ScatteringAmplitude {
  Potential potential;
  AmplitudeModel model = AmplitudeModel::first_born;

  int dimension() const { return potential.dimension; }

  /// T_E at energy k²/2m for momentum transfer p (|p| ≤ 2|k| on shell).
  cplx T(double k, double p, double m) const {
    if (!(m > 0)) throw std::invalid_argument("ScatteringAmplitude: mass must be positive");
    if (model == AmplitudeModel::first_born) return potential(p);
    if (potential.kind != PotentialKind::contact)
      throw std::invalid_argument("ScatteringAmplitude: exact amplitude needs a contact potential");
    const double g = potential.strength;
    const double ak = std::abs(k);
    if (potential.dimension == 1) {
      if (ak == 0.0) return 0.0;  // limit k → 0 of the expression below
      return (g / kTwoPi) / (1.0 + kI_ * (m * g / ak));
    }
    // s-wave with scattering length a = m g / 2π
    return (g / std::pow(kTwoPi, 3)) / (1.0 + kI_ * (ak * m * g / kTwoPi));
  }

  cplx forward(double k, double m) const { return T(k, 0.0, m); }

  cplx f(double k, double m) const { return -std::pow(kTwoPi, dimension() - 1) * m * forward(k, m); }

  /// Total scattered probability flux: 1D counts transmission loss plus
  /// reflection, 3D integrates |f(θ)|² over the sphere.
  double sigma_tot(double k, double m) const {
    const double ak = std::abs(k);
    if (ak == 0.0) return 0.0;
    if (dimension() == 1) {
      const double c = kTwoPi * m / ak;
      return c * c * (std::norm(T(k, 0.0, m)) + std::norm(T(k, 2.0 * ak, m)));
    }
    const int n = 2000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double th = std::numbers::pi * i / n;
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      const double ff = std::norm(std::pow(kTwoPi, 2) * m * T(k, 2.0 * ak * std::sin(0.5 * th), m));
      s += w * ff * std::sin(th);
    }
    return kTwoPi * s * (std::numbers::pi / n);
  }

  /// Im f(k,k) − (k/4π)σ_tot: zero for an exact amplitude, −(k/4π)σ at first Born.
  double optical_defect(double k, double m) const {
    return f(k, m).imag() - std::abs(k) / (4.0 * std::numbers::pi) * sigma_tot(k, m);
  }

 private:
  static constexpr cplx kI_{0.0, 1.0};
};

}  // namespace decohere::gas
