// lattice.hpp: slab families on a discrete particle register where each
// target couples only to a window of particle sites.
#pragma once

#include <cstdint>

#include "decohere/oracle.hpp"
#include "decohere/random.hpp"

namespace decohere {

struct LatticeSlabParams {
  std::size_t particle_dim = 8;
  std::size_t target_dim = 2;
  std::vector<std::vector<std::size_t>> windows;  // particle sites seen by each target
  std::vector<double> weights{0.6, 0.4};          // ensemble over |0⟩ and the uniform superposition
  bool second_order_kernel = true;                // G = λK + λ²K2 with random K2
  std::uint64_t seed = 1;
  double width = 1.0;
  double speed = 1.0;
  double density = 1.0;
};

/// Hermitian kernel on particle ⊗ target that vanishes outside `window` ⊗ target.
template <class Rng>
Matrix window_kernel(std::size_t dp, std::size_t dt, const std::vector<std::size_t>& window, Rng& rng) {
  const Matrix local = random_hermitian(window.size() * dt, rng);
  Matrix K = Matrix::Zero(as_index(dp * dt), as_index(dp * dt));
  for (std::size_t a = 0; a < window.size(); ++a)
    for (std::size_t b = 0; b < window.size(); ++b) {
      if (window[a] >= dp || window[b] >= dp) throw std::out_of_range("window_kernel: site outside register");
      for (std::size_t al = 0; al < dt; ++al)
        for (std::size_t be = 0; be < dt; ++be)
          K(as_index(window[a] * dt + al), as_index(window[b] * dt + be)) =
              local(as_index(a * dt + al), as_index(b * dt + be));
    }
  return K;
}

/// Target ensemble: weights[0] on |0⟩, weights[1] on (|0⟩+…+|d−1⟩)/√d, further
/// weights on |1⟩, |2⟩, ….
inline TargetEnsemble lattice_ensemble(std::size_t dt, const std::vector<double>& weights, double position = 0.0) {
  if (weights.empty() || weights.size() > dt + 1) throw std::invalid_argument("lattice_ensemble: bad weight count");
  TargetEnsemble ens;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    StateVector v = i == 0   ? basis_state(dt, 0)
                    : i == 1 ? make_state(Vector::Constant(as_index(dt), 1.0 / std::sqrt(double(dt))))
                             : basis_state(dt, i - 1);
    ens.push_back(TargetState{int(i), std::move(v), weights[i], position});
  }
  return ens;
}

/// Kernels are drawn once from the seed; the returned family rebuilds the slab
/// at any coupling and collision mode.
inline SlabFamily lattice_slab_family(const LatticeSlabParams& p) {
  std::mt19937_64 rng(p.seed);
  std::vector<Matrix> K, K2;
  for (const auto& w : p.windows) {
    K.push_back(window_kernel(p.particle_dim, p.target_dim, w, rng));
    K2.push_back(p.second_order_kernel ? window_kernel(p.particle_dim, p.target_dim, w, rng)
                                       : Matrix(Matrix::Zero(K.back().rows(), K.back().cols())));
  }
  return [p, K, K2](double lambda, CollisionMode mode) {
    SlabSpec s;
    s.width = p.width;
    s.speed = p.speed;
    s.density = p.density;
    s.homogeneous = true;
    const Dims dims{p.particle_dim, p.target_dim};
    for (std::size_t j = 0; j < K.size(); ++j) {
      s.collisions.push_back(build_collision(make_operator(K[j], dims), lambda, mode, K2[j]));
      const double x = p.windows[j].empty() ? 0.0 : double(p.windows[j].front());
      s.targets.push_back(lattice_ensemble(p.target_dim, p.weights, x));
    }
    return s;
  };
}

/// Union of two slabs crossed as one (targets of `a` first).
inline SlabSpec merge_slabs(const SlabSpec& a, const SlabSpec& b) {
  SlabSpec s = a;
  s.targets.insert(s.targets.end(), b.targets.begin(), b.targets.end());
  s.collisions.insert(s.collisions.end(), b.collisions.begin(), b.collisions.end());
  if (!a.bases.empty() || !b.bases.empty()) {
    s.bases.resize(a.size());
    for (std::size_t j = 0; j < b.size(); ++j) s.bases.push_back(b.basis(j));
  }
  s.width = a.width + b.width;
  return s;
}

}  // namespace decohere
