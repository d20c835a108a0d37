// oracle.hpp: exact unitary evolution of particle ⊗ slab with partial trace,
// plus the two-state box fixtures (footprint and mixture mechanisms).
#pragma once

#include <functional>
#include <limits>

#include "decohere/fit.hpp"
#include "decohere/slabstep.hpp"

namespace decohere {

struct OracleLimits {
  std::size_t max_dimension = 4096;
  std::size_t max_configurations = 64;
};

struct SlabConfiguration {
  std::vector<StateVector> states;
  double weight = 1.0;
};

/// All product configurations of the slab's target ensembles, in slab order
/// (last target varies fastest).
inline std::vector<SlabConfiguration> enumerate_configurations(const SlabSpec& slab, std::size_t cap = 64) {
  std::size_t count = 1;
  for (const auto& ens : slab.targets) {
    count *= ens.size();
    if (count > cap) throw std::length_error("enumerate_configurations: configuration cap exceeded");
  }
  std::vector<SlabConfiguration> out;
  std::vector<std::size_t> idx(slab.size(), 0);
  for (std::size_t c = 0; c < count; ++c) {
    SlabConfiguration cfg;
    for (std::size_t j = 0; j < slab.size(); ++j) {
      cfg.states.push_back(slab.targets[j][idx[j]].vector);
      cfg.weight *= slab.targets[j][idx[j]].weight;
    }
    out.push_back(std::move(cfg));
    for (std::size_t j = slab.size(); j-- > 0;) {
      if (++idx[j] < slab.targets[j].size()) break;
      idx[j] = 0;
    }
  }
  return out;
}

namespace detail {

// Sequential exact S^(j) on the full register for every configuration and
// every eigencomponent of ρ; `sink(weight, ψ)` receives each propagated vector.
template <class Sink>
void propagate_exact(const DensityMatrix& rho, const SlabSpec& slab, const OracleLimits& limits, Sink&& sink) {
  check_slab(slab);
  if (rho.dim() != slab.particle_dim()) throw std::invalid_argument("exact_crossing: particle dimension mismatch");
  const Dims reg = register_dims(slab);
  if (total_dim(reg) > limits.max_dimension) throw std::length_error("exact_crossing: dimension cap exceeded");
  const auto configs = enumerate_configurations(slab, limits.max_configurations);

  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho.elements));
  for (const auto& cfg : configs) {
    Vector m = Vector::Ones(1);
    for (const auto& s : cfg.states) m = kron(m, s.amplitudes);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double p = es.eigenvalues()(k);
      if (p == 0.0) continue;
      Vector psi = kron(Vector(es.eigenvectors().col(k)), m);
      for (std::size_t j = 0; j < slab.size(); ++j) {
        const std::vector<std::size_t> on{0, j + 1};
        apply_local(slab.collisions[j].S.elements, on, reg, psi);
      }
      sink(cfg.weight * p, psi);
    }
  }
}

}  // namespace detail

/// Particle reduced state after exact sequential scattering on every target.
inline DensityMatrix exact_crossing(const DensityMatrix& rho, const SlabSpec& slab, const OracleLimits& limits = {}) {
  if (slab.size() == 0) return rho;
  const Dims reg = register_dims(slab);
  const std::vector<std::size_t> keep{0};
  Matrix out = Matrix::Zero(rho.elements.rows(), rho.elements.cols());
  detail::propagate_exact(rho, slab, limits,
                          [&](double w, const Vector& psi) { out += w * reduced_from_pure(psi, reg, keep); });
  return make_density(std::move(out), rho.dims);
}

/// Full particle ⊗ slab state after exact scattering.
inline DensityMatrix exact_full_state(const DensityMatrix& rho, const SlabSpec& slab, const OracleLimits& limits = {}) {
  const Dims reg = register_dims(slab);
  const auto n = as_index(total_dim(reg));
  Matrix out = Matrix::Zero(n, n);
  detail::propagate_exact(rho, slab, limits, [&](double w, const Vector& psi) { out += w * psi * psi.adjoint(); });
  return make_density(std::move(out), reg);
}

struct ExactRun {
  DensityMatrix full_state;
  DensityMatrix reduced;
  DensityMatrix approx;
  double error = 0.0;  // operator norm of reduced − approx
};

inline ExactRun exact_run(const DensityMatrix& rho, const SlabSpec& slab, const OracleLimits& limits = {}) {
  ExactRun run;
  run.full_state = exact_full_state(rho, slab, limits);
  const std::vector<std::size_t> keep{0};
  run.reduced = partial_trace(run.full_state, keep);
  run.reduced.dims = rho.dims;
  run.approx = one_step(rho, slab);
  run.error = operator_norm(run.reduced.elements - run.approx.elements);
  return run;
}

/// Slab reduced state after exact scattering (particle traced out).
inline DensityMatrix exact_slab_state(const DensityMatrix& rho, const SlabSpec& slab, const OracleLimits& limits = {}) {
  const auto full = exact_full_state(rho, slab, limits);
  std::vector<std::size_t> keep;
  for (std::size_t j = 1; j <= slab.size(); ++j) keep.push_back(j);
  return partial_trace(full, keep);
}

// ---------------------------------------------------------------------------
// Convergence sweeps

/// Builds the slab at coupling λ with collisions of the requested mode.
using SlabFamily = std::function<SlabSpec(double lambda, CollisionMode mode)>;

struct SweepResult {
  std::vector<double> lambdas;
  std::vector<double> errors;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;  // every error below the floor
};

inline SweepResult convergence_sweep(const SlabFamily& family, const DensityMatrix& rho0, std::vector<double> lambdas,
                                     CollisionMode approx_mode = CollisionMode::born_truncated,
                                     double floor = 1e-14) {
  if (lambdas.size() < 4) throw std::invalid_argument("convergence_sweep: need at least 4 couplings");
  std::sort(lambdas.begin(), lambdas.end());
  if (!(lambdas.front() > 0) || lambdas.back() < 10.0 * lambdas.front() * (1 - 1e-12))
    throw std::invalid_argument("convergence_sweep: couplings must be positive and span a decade");
  SweepResult r;
  r.lambdas = lambdas;
  std::size_t below = 0;
  for (double l : lambdas) {
    const DensityMatrix approx = one_step(rho0, family(l, approx_mode));
    const DensityMatrix exact = exact_crossing(rho0, family(l, CollisionMode::exact_unitary));
    r.errors.push_back(operator_norm(approx.elements - exact.elements));
    if (r.errors.back() < floor) ++below;
  }
  if (below == lambdas.size()) {
    r.exact = true;
    return r;
  }
  if (below > 0) throw std::domain_error("convergence_sweep: degenerate fit, some errors below the numerical floor");
  const PowerFit f = fit_power_law(r.lambdas, r.errors);
  r.slope = f.slope;
  r.intercept = f.intercept;
  return r;
}

// ---------------------------------------------------------------------------
// Two-state box fixtures. Particle basis {|1⟩, |2⟩}, box basis {|a⟩, |b⟩},
// register particle ⊗ box.

struct ToyResult {
  DensityMatrix particle;     // reduced particle state after the interaction
  DensityMatrix box_before;
  DensityMatrix box_after;
  double footprint_weight = 0.0;  // ‖(1 − P) out‖² for the pure box input
  StateVector out;                // joint state (pure box input only)
};

/// |1⟩|a⟩ → (|1⟩|a⟩ − |2⟩|b⟩)/√2 completed to a rotation in span{|1a⟩, |2b⟩}.
inline Matrix toy_footprint_unitary() {
  const double h = 1.0 / std::sqrt(2.0);
  Matrix U = Matrix::Identity(4, 4);
  U(0, 0) = h;   // ⟨1a|U|1a⟩
  U(3, 0) = -h;  // ⟨2b|U|1a⟩
  U(0, 3) = h;
  U(3, 3) = h;
  return U;
}

/// Box in |a⟩ leaves the particle alone, box in |b⟩ swaps |1⟩ ↔ |2⟩.
inline Matrix toy_mixture_unitary() {
  Matrix X = Matrix::Zero(2, 2);
  X(0, 1) = X(1, 0) = 1.0;
  Matrix Pa = Matrix::Zero(2, 2), Pb = Matrix::Zero(2, 2);
  Pa(0, 0) = 1.0;
  Pb(1, 1) = 1.0;
  return kron(Matrix(Matrix::Identity(2, 2)), Pa) + kron(X, Pb);
}

inline SlabSpec toy_slab(const Matrix& U, TargetEnsemble box) {
  SlabSpec s;
  s.collisions.push_back(collision_from_unitary(U, {2, 2}));
  s.targets.push_back(std::move(box));
  return s;
}

inline ToyResult toy_footprint() {
  const auto slab = toy_slab(toy_footprint_unitary(), pure_ensemble(basis_state(2, 0)));
  const auto rho = pure_density(basis_state(2, 0));
  ToyResult r;
  r.particle = exact_crossing(rho, slab);
  r.box_before = pure_density(basis_state(2, 0));
  r.box_after = exact_slab_state(rho, slab);
  r.out = out_state(basis_state(2, 0), {basis_state(2, 0)}, slab, OutMode::exact);
  r.footprint_weight = footprint_decompose(r.out, {basis_state(2, 0)}).footprint.amplitudes.squaredNorm();
  return r;
}

/// Box prepared in `box` (default the even mixture of |a⟩ and |b⟩), particle in |1⟩.
inline ToyResult toy_mixture(const TargetEnsemble& box = {{0, basis_state(2, 0), 0.5, 0.0},
                                                          {1, basis_state(2, 1), 0.5, 0.0}}) {
  const auto slab = toy_slab(toy_mixture_unitary(), box);
  const auto rho = pure_density(basis_state(2, 0));
  ToyResult r;
  r.particle = exact_crossing(rho, slab);
  Matrix before = Matrix::Zero(2, 2);
  for (const auto& m : box) before += m.weight * m.vector.amplitudes * m.vector.amplitudes.adjoint();
  r.box_before = make_density(std::move(before));
  r.box_after = exact_slab_state(rho, slab);
  if (box.size() == 1) {
    r.out = out_state(basis_state(2, 0), {box.front().vector}, slab, OutMode::exact);
    r.footprint_weight = footprint_decompose(r.out, {box.front().vector}).footprint.amplitudes.squaredNorm();
  }
  return r;
}

}  // namespace decohere
