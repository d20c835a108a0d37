// slabstep.hpp: one crossing of a thin slab of targets.
//
// The particle's reduced state after the slab is evaluated per target
// (crossed products T^(i)T^(j), i ≠ j, dropped), so the cost is linear in the
// number of targets.
#pragma once

#include "decohere/collision.hpp"

namespace decohere {

struct SlabSpec {
  std::vector<TargetEnsemble> targets;
  std::vector<CollisionOperator> collisions;
  std::vector<TargetBasis> bases;  // per target; empty → computational basis
  double width = 1.0;              // δ
  double speed = 1.0;              // v
  double density = 1.0;            // n
  bool homogeneous = false;

  std::size_t size() const { return targets.size(); }
  double v_over_delta() const { return speed / width; }
  std::size_t particle_dim() const { return collisions.empty() ? 0 : collisions.front().particle_dim(); }

  const TargetBasis& basis(std::size_t j) const {
    static const TargetBasis none;
    return j < bases.size() ? bases[j] : none;
  }
};

inline void check_slab(const SlabSpec& slab) {
  if (slab.targets.size() != slab.collisions.size())
    throw std::invalid_argument("check_slab: one collision per target required");
  if (!slab.bases.empty() && slab.bases.size() != slab.targets.size())
    throw std::invalid_argument("check_slab: one basis per target required");
  if (!(slab.width > 0) || !(slab.speed > 0)) throw std::invalid_argument("check_slab: width and speed must be positive");
  for (std::size_t j = 0; j < slab.size(); ++j) {
    check_ensemble(slab.targets[j]);
    if (slab.collisions[j].particle_dim() != slab.particle_dim())
      throw std::invalid_argument("check_slab: collisions disagree on particle dimension");
    for (const auto& m : slab.targets[j]) check_target(slab.collisions[j], m.vector, "check_slab");
  }
  if (slab.homogeneous && slab.size() > 1) {
    const auto& ref = slab.targets.front();
    for (const auto& ens : slab.targets) {
      if (ens.size() != ref.size()) throw std::invalid_argument("check_slab: homogeneous slab with unequal ensembles");
      for (std::size_t i = 0; i < ens.size(); ++i)
        if (std::abs(ens[i].weight - ref[i].weight) > 1e-12 || ens[i].label != ref[i].label)
          throw std::invalid_argument("check_slab: homogeneous slab with unequal weights");
    }
  }
}

inline Dims slab_dims(const SlabSpec& slab) {
  Dims d;
  for (const auto& c : slab.collisions) d.push_back(c.target_dim());
  return d;
}

inline Dims register_dims(const SlabSpec& slab) {
  Dims d{slab.particle_dim()};
  for (const auto& c : slab.collisions) d.push_back(c.target_dim());
  return d;
}

inline std::vector<SlabOperators> slab_operators(const SlabSpec& slab) {
  check_slab(slab);
  std::vector<SlabOperators> out;
  for (std::size_t j = 0; j < slab.size(); ++j)
    out.push_back(build_slab_operators(slab.collisions[j], slab.targets[j], slab.basis(j)));
  return out;
}

/// D̄_j = Σ_m q_m D_M^{(m)} for one target.
inline Matrix mean_d(const SlabOperators& ops, const TargetEnsemble& ens) {
  Matrix d = Matrix::Zero(ops.d_m.begin()->second.rows(), ops.d_m.begin()->second.cols());
  for (const auto& m : ens) d += m.weight * ops.d_m.at(m.label);
  return d;
}

struct ParticleEnsemble {
  std::vector<std::pair<StateVector, double>> members;

  DensityMatrix density() const {
    if (members.empty()) throw std::invalid_argument("ParticleEnsemble: empty");
    double total = 0.0;
    const auto n = as_index(members.front().first.dim());
    Matrix rho = Matrix::Zero(n, n);
    for (const auto& [phi, p] : members) {
      if (p < 0 || phi.dim() != members.front().first.dim())
        throw std::invalid_argument("ParticleEnsemble: invalid member");
      rho += p * phi.amplitudes * phi.amplitudes.adjoint();
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("ParticleEnsemble: probabilities do not sum to 1");
    return make_density(std::move(rho), members.front().first.dims);
  }
};

// ---------------------------------------------------------------------------

enum class OutMode { truncated, exact };

/// Joint out-state of particle ⊗ slab for a pure slab configuration.
inline StateVector out_state(const StateVector& phi, const std::vector<StateVector>& config, const SlabSpec& slab,
                             OutMode mode = OutMode::truncated) {
  check_slab(slab);
  if (config.size() != slab.size()) throw std::invalid_argument("out_state: one target state per target required");
  if (phi.dim() != slab.particle_dim()) throw std::invalid_argument("out_state: particle dimension mismatch");
  StateVector in = phi;
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (config[j].dim() != slab.collisions[j].target_dim())
      throw std::invalid_argument("out_state: target dimension mismatch");
    in = tensor(in, config[j]);
  }
  in.dims = register_dims(slab);
  Vector out = in.amplitudes;
  for (std::size_t j = 0; j < slab.size(); ++j) {
    const std::vector<std::size_t> on{0, j + 1};
    if (mode == OutMode::exact) {
      apply_local(slab.collisions[j].S.elements, on, in.dims, out);
    } else {
      Vector t = in.amplitudes;
      apply_local(slab.collisions[j].T.elements, on, in.dims, t);
      out += kI * t;
    }
  }
  return make_state(std::move(out), in.dims);
}

struct FootprintSplit {
  StateVector phi_prime;  // particle part along the unchanged configuration
  StateVector footprint;  // (1 − P)·out on the full register
};

/// Orthogonal split of `out` with P = I ⊗ |m⟩⟨m|, |m⟩ = ⊗_j config[j].
inline FootprintSplit footprint_decompose(const StateVector& out, const std::vector<StateVector>& config) {
  if (out.dims.size() != config.size() + 1) throw std::invalid_argument("footprint_decompose: register mismatch");
  Vector m = Vector::Ones(1);
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (config[j].dim() != out.dims[j + 1]) throw std::invalid_argument("footprint_decompose: target dimension mismatch");
    m = kron(m, config[j].amplitudes);
  }
  const Eigen::Index dp = as_index(out.dims[0]), ds = m.size();
  Vector phi(dp);
  for (Eigen::Index a = 0; a < dp; ++a) phi(a) = m.dot(out.amplitudes.segment(a * ds, ds));
  Vector foot = out.amplitudes - kron(phi, m);
  return {make_state(std::move(phi), {out.dims[0]}), make_state(std::move(foot), out.dims)};
}

// ---------------------------------------------------------------------------

/// Particle density matrix after one slab (second order in T per target).
inline DensityMatrix one_step(const DensityMatrix& rho_in, const SlabSpec& slab,
                              const std::vector<SlabOperators>& ops) {
  if (slab.size() == 0) return rho_in;
  if (ops.size() != slab.size()) throw std::invalid_argument("one_step: operator list does not match slab");
  if (rho_in.dim() != slab.particle_dim()) throw std::invalid_argument("one_step: particle dimension mismatch");
  const Matrix& rho = rho_in.elements;

  std::vector<Matrix> dbar;
  Matrix D = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t j = 0; j < slab.size(); ++j) {
    dbar.push_back(mean_d(ops[j], slab.targets[j]));
    D += dbar.back();
  }
  const Matrix Drho = D * rho;
  const Matrix rhoDd = rho * D.adjoint();
  Matrix out = rho + kI * Drho - kI * rhoDd + D * rhoDd;
  for (std::size_t j = 0; j < slab.size(); ++j) {
    out -= dbar[j] * rho * dbar[j].adjoint();
    for (const auto& m : slab.targets[j]) {
      const Matrix& dm = ops[j].d_m.at(m.label);
      out += m.weight * (dm * rho * dm.adjoint());
      for (const auto& [key, a] : ops[j].a_e)
        if (key.second == m.label) out += m.weight * (a * rho * a.adjoint());
    }
  }
  return make_density(std::move(out), rho_in.dims);
}

inline DensityMatrix one_step(const DensityMatrix& rho_in, const SlabSpec& slab) {
  if (slab.size() == 0) return rho_in;
  return one_step(rho_in, slab, slab_operators(slab));
}

/// Footprint part of the one-step map alone: Σ_j Σ_m q_m Σ_l A_E ρ A_E†.
inline Matrix footprint_term(const DensityMatrix& rho_in, const SlabSpec& slab) {
  const auto ops = slab_operators(slab);
  const Matrix& rho = rho_in.elements;
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t j = 0; j < slab.size(); ++j)
    for (const auto& m : slab.targets[j])
      for (const auto& [key, a] : ops[j].a_e)
        if (key.second == m.label) out += m.weight * (a * rho * a.adjoint());
  return out;
}

/// Slab density matrix after one crossing, roles of particle and slab
/// exchanged. The slab operators contract T_total = Σ_j T^(j) with the
/// particle states; l runs over the particle computational basis.
inline DensityMatrix slab_update(const DensityMatrix& rho_slab_in, const ParticleEnsemble& particle,
                                 const SlabSpec& slab) {
  check_slab(slab);
  if (slab.size() == 0) return rho_slab_in;
  const Dims sdims = slab_dims(slab);
  const std::size_t ds = total_dim(sdims), dp = slab.particle_dim();
  if (rho_slab_in.dim() != ds) throw std::invalid_argument("slab_update: slab dimension mismatch");

  // Particle-major T_total on particle ⊗ slab; regroup as slab ⊗ particle so
  // target_block contracts the particle factor.
  const Dims reg = register_dims(slab);
  const std::size_t n = dp * ds;
  Matrix T = Matrix::Zero(as_index(n), as_index(n));
  for (std::size_t j = 0; j < slab.size(); ++j)
    T += embed(LinearOperator{slab.collisions[j].T.elements, reg, {0, j + 1}});
  Matrix Tswap(as_index(n), as_index(n));
  for (std::size_t a = 0; a < dp; ++a)
    for (std::size_t s = 0; s < ds; ++s)
      for (std::size_t b = 0; b < dp; ++b)
        for (std::size_t r = 0; r < ds; ++r)
          Tswap(as_index(s * dp + a), as_index(r * dp + b)) = T(as_index(a * ds + s), as_index(b * ds + r));

  const Matrix& rho = rho_slab_in.elements;
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& [phi, p] : particle.members) {
    if (phi.dim() != dp) throw std::invalid_argument("slab_update: particle dimension mismatch");
    const Vector& v = phi.amplitudes;
    const Matrix d = target_block(Tswap, ds, dp, v, v);
    const Matrix left = Matrix::Identity(rho.rows(), rho.cols()) + kI * d;
    out += p * (left * rho * left.adjoint());
    for (std::size_t l = 0; l < dp; ++l) {
      const Vector e = Vector::Unit(as_index(dp), as_index(l));
      const Matrix a = target_block(Tswap, ds, dp, e, v) - d * e.dot(v);
      out += p * (a * rho * a.adjoint());
    }
  }
  return make_density(std::move(out), sdims);
}

struct ChangeProbabilities {
  double p_change = 0.0;
  double p_no_change = 1.0;
};

/// Probability that some target changes state (A_E quadratic forms) and that
/// none does (D_M forms). The two add to one for a single exact-unitary target
/// and whenever the targets' D_M act on disjoint particle subspaces.
inline ChangeProbabilities change_probabilities(const DensityMatrix& rho_in, const SlabSpec& slab) {
  if (slab.size() == 0) return {};
  const auto ops = slab_operators(slab);
  const Matrix& rho = rho_in.elements;
  if (rho_in.dim() != slab.particle_dim()) throw std::invalid_argument("change_probabilities: dimension mismatch");

  ChangeProbabilities p;
  p.p_change = 0.0;
  Matrix D = Matrix::Zero(rho.rows(), rho.cols());
  Matrix quad = Matrix::Zero(rho.rows(), rho.cols());  // E[D†D] over configurations
  for (std::size_t j = 0; j < slab.size(); ++j) {
    const Matrix dj = mean_d(ops[j], slab.targets[j]);
    quad -= dj.adjoint() * dj;
    D += dj;
    for (const auto& m : slab.targets[j]) {
      const Matrix& dm = ops[j].d_m.at(m.label);
      quad += m.weight * dm.adjoint() * dm;
      for (const auto& [key, a] : ops[j].a_e)
        if (key.second == m.label) p.p_change += m.weight * (a.adjoint() * a * rho).trace().real();
    }
  }
  quad += D.adjoint() * D;
  const Matrix x = kI * (D.adjoint() - D) - quad;
  p.p_no_change = 1.0 - (x * rho).trace().real();
  return p;
}

}  // namespace decohere
