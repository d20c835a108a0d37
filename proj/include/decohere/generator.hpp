// generator.hpp: continuous-time Lindblad generator of the slab map.
//
// Convention: a jump (A, γ) contributes γ·(2AρA† − A†Aρ − ρA†A).
#pragma once

#include <Eigen/Eigenvalues>

#include "decohere/slabstep.hpp"

namespace decohere {

class BranchCutError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

enum class JumpKind { mixture, footprint, generic };

struct Jump {
  Matrix op;
  double rate = 0.0;
  JumpKind kind = JumpKind::generic;
  std::size_t target = 0;
  int first = 0;   // n (mixture) or basis index l (footprint)
  int second = 0;  // m
};

struct LindbladGenerator {
  Matrix H_eff;
  Matrix H_nonhermitian;  // H_eff − i Σ γ A†A, drives ρ^coh
  std::vector<Jump> jumps_mixture;
  std::vector<Jump> jumps_footprint;
  double v_over_delta = 0.0;
  // filled by refresh()
  Matrix diagonal_kernel;
  std::vector<std::pair<int, std::size_t>> dense_jumps;  // (0 mixture | 1 footprint, index)

  std::size_t dim() const { return static_cast<std::size_t>(H_eff.rows()); }

  template <class F>
  void for_each_jump(F&& f) const {
    for (const auto& j : jumps_mixture) f(j);
    for (const auto& j : jumps_footprint) f(j);
  }

  /// Σ 2γ AρA† over all jumps.
  Matrix jump_term(const Matrix& rho) const {
    Matrix out = diagonal_kernel.size() ? Matrix(diagonal_kernel.cwiseProduct(rho))
                                        : Matrix(Matrix::Zero(rho.rows(), rho.cols()));
    for (const auto& [list, i] : dense_jumps) {
      const Jump& j = (list == 0 ? jumps_mixture : jumps_footprint)[i];
      out += (2.0 * j.rate) * (j.op * rho * j.op.adjoint());
    }
    return out;
  }

  /// −i(Hρ − ρH†) with the non-hermitian H.
  Matrix damped_term(const Matrix& rho) const {
    const Matrix hr = H_nonhermitian * rho;
    return -kI * hr + kI * (rho * H_nonhermitian.adjoint());
  }

  /// dρ/dt = −i[H_eff, ρ] + Σ γ(2AρA† − A†Aρ − ρA†A).
  Matrix apply(const Matrix& rho) const { return damped_term(rho) + jump_term(rho); }

  /// Rough magnitude for step-size checks: ‖H_eff‖ + 2 Σ γ ‖A‖².
  double scale() const {
    double s = operator_norm(H_eff);
    for_each_jump([&](const Jump& j) { s += 2.0 * j.rate * std::pow(operator_norm(j.op), 2); });
    return s;
  }

  /// Recompute H_nonhermitian and the jump caches from H_eff and the jump lists.
  void refresh() {
    H_nonhermitian = H_eff.cast<cplx>();
    diagonal_kernel.resize(0, 0);
    dense_jumps.clear();
    for (int list = 0; list < 2; ++list) {
      const auto& jumps = list == 0 ? jumps_mixture : jumps_footprint;
      for (std::size_t i = 0; i < jumps.size(); ++i) {
        const Jump& j = jumps[i];
        H_nonhermitian -= (kI * j.rate) * (j.op.adjoint() * j.op);
        if (!j.op.isDiagonal(0.0)) {
          dense_jumps.emplace_back(list, i);
          continue;
        }
        // diagonal A: AρA† is the elementwise product with a_i a_j*
        const Vector a = j.op.diagonal();
        if (diagonal_kernel.size() == 0) diagonal_kernel = Matrix::Zero(j.op.rows(), j.op.cols());
        diagonal_kernel += (2.0 * j.rate) * (a * a.adjoint());
      }
    }
  }

  LindbladGenerator without_footprint() const {
    LindbladGenerator g = *this;
    g.jumps_footprint.clear();
    g.refresh();
    return g;
  }

  LindbladGenerator without_mixture() const {
    LindbladGenerator g = *this;
    g.jumps_mixture.clear();
    g.refresh();
    return g;
  }
};

/// Generator with explicit H_eff and jumps (e.g. analytic fixtures).
inline LindbladGenerator make_generator(Matrix H_eff, std::vector<Jump> jumps) {
  detail::check_hermitian(H_eff, "make_generator");
  LindbladGenerator g;
  g.H_eff = hermitian_part(H_eff);
  for (auto& j : jumps) {
    if (j.rate < 0) throw std::invalid_argument("make_generator: negative rate");
    if (j.op.rows() != g.H_eff.rows() || j.op.cols() != g.H_eff.cols())
      throw std::invalid_argument("make_generator: jump size mismatch");
    (j.kind == JumpKind::mixture ? g.jumps_mixture : g.jumps_footprint).push_back(std::move(j));
  }
  g.refresh();
  return g;
}

struct GeneratorOptions {
  // Keep the hermitian part of the second-order mean-field term (i/2)(v/δ)D̄²
  // in H_eff; by default it is dropped as quadratic in the density.
  bool include_quadratic_term = false;
};

inline LindbladGenerator build_generator(const SlabSpec& slab, const std::vector<SlabOperators>& ops,
                                         const GeneratorOptions& opt = {}) {
  check_slab(slab);
  if (ops.size() != slab.size()) throw std::invalid_argument("build_generator: operator list does not match slab");
  if (slab.size() == 0) throw std::invalid_argument("build_generator: empty slab");
  const double w = slab.v_over_delta();
  const auto n = as_index(slab.particle_dim());

  LindbladGenerator g;
  g.v_over_delta = w;
  Matrix D = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < slab.size(); ++j) {
    const auto& ens = slab.targets[j];
    D += mean_d(ops[j], ens);
    for (std::size_t a = 0; a < ens.size(); ++a)
      for (std::size_t b = a + 1; b < ens.size(); ++b) {
        // unordered pair: the two orderings give the same dissipator
        const double rate = 0.5 * w * ens[a].weight * ens[b].weight;
        const Matrix& op = ops[j].a_m.at({ens[a].label, ens[b].label});
        if (rate > 0 && op.cwiseAbs().maxCoeff() > 0.0) g.jumps_mixture.push_back({op, rate, JumpKind::mixture, j, ens[a].label, ens[b].label});
      }
    for (const auto& m : ens)
      for (const auto& [key, op] : ops[j].a_e) {
        if (key.second != m.label || m.weight == 0.0) continue;
        if (op.cwiseAbs().maxCoeff() == 0.0) continue;
        g.jumps_footprint.push_back({op, 0.5 * w * m.weight, JumpKind::footprint, j, key.first, key.second});
      }
  }
  g.H_eff = -0.5 * w * (D + D.adjoint());
  if (opt.include_quadratic_term) g.H_eff += hermitian_part((0.5 * kI * w) * (D * D));
  g.refresh();
  return g;
}

inline LindbladGenerator build_generator(const SlabSpec& slab, const GeneratorOptions& opt = {}) {
  return build_generator(slab, slab_operators(slab), opt);
}

/// Principal logarithm of a unitary via its (normal) Schur form.
inline Matrix unitary_log(const Matrix& S, double unitarity_tol = 1e-10, double branch_tol = 1e-8) {
  const Matrix id = Matrix::Identity(S.rows(), S.cols());
  if (S.rows() != S.cols() || operator_norm(S.adjoint() * S - id) > unitarity_tol)
    throw std::invalid_argument("unitary_log: S is not unitary");
  Eigen::ComplexSchur<Matrix> schur(S);
  const Matrix& U = schur.matrixU();
  const Matrix& Tm = schur.matrixT();
  Vector logs(S.rows());
  for (Eigen::Index k = 0; k < S.rows(); ++k) {
    const cplx e = Tm(k, k);
    if (std::abs(e + 1.0) < branch_tol)
      throw BranchCutError("unitary_log: eigenvalue at -1, principal branch is ambiguous");
    logs(k) = std::log(e);
  }
  return U * logs.asDiagonal() * U.adjoint();
}

/// H = (i v/δ) log S, hermitian for unitary S.
inline LinearOperator effective_hamiltonian_from_S(const LinearOperator& S, double v_over_delta) {
  Matrix H = (kI * v_over_delta) * unitary_log(S.elements);
  const double scale = std::max(H.cwiseAbs().maxCoeff(), 1.0);
  if (0.5 * (H - H.adjoint()).norm() > 1e-10 * scale)
    throw NumericalError("effective_hamiltonian_from_S: logarithm is not anti-hermitian");
  return LinearOperator{hermitian_part(H), S.dims, S.acts_on};
}

inline LinearOperator effective_hamiltonian_from_S(const LinearOperator& S, const SlabSpec& slab) {
  return effective_hamiltonian_from_S(S, slab.v_over_delta());
}

}  // namespace decohere
