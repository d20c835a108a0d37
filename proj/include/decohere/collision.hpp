// collision.hpp: single-target scattering operators and their particle-space blocks.
//
// A collision acts on particle ⊗ target (dims {dp, dt}). The interaction is
// given by a hermitian kernel K and coupling λ, optionally with a second-order
// kernel K2 so that the generator is G = λK + λ²K2.
#pragma once

#include <map>
#include <optional>
#include <utility>

#include "decohere/linalg.hpp"

namespace decohere {

struct TargetState {
  int label = 0;
  StateVector vector;
  double weight = 1.0;    // q_m
  double position = 0.0;  // x_j, arbitrary length units
};

using TargetEnsemble = std::vector<TargetState>;

inline void check_ensemble(const TargetEnsemble& ens, double tol = 1e-12) {
  if (ens.empty()) throw std::invalid_argument("check_ensemble: empty ensemble");
  double total = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (ens[i].weight < 0) throw std::invalid_argument("check_ensemble: negative weight");
    if (std::abs(ens[i].vector.amplitudes.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("check_ensemble: target state not normalized");
    for (std::size_t j = 0; j < i; ++j)
      if (ens[j].label == ens[i].label) throw std::invalid_argument("check_ensemble: repeated label");
    total += ens[i].weight;
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument("check_ensemble: weights do not sum to 1");
}

inline TargetEnsemble pure_ensemble(StateVector v, int label = 0, double position = 0.0) {
  return {TargetState{label, std::move(v), 1.0, position}};
}

enum class CollisionMode { exact_unitary, born_truncated };

struct CollisionOperator {
  LinearOperator S;
  LinearOperator T;
  CollisionMode mode = CollisionMode::exact_unitary;
  double lambda = 0.0;

  std::size_t particle_dim() const { return S.dims.at(0); }
  std::size_t target_dim() const { return S.dims.at(1); }
};

namespace detail {

inline void check_hermitian(const Matrix& k, const char* who, double tol = 1e-12) {
  const double scale = k.size() ? k.cwiseAbs().maxCoeff() : 0.0;
  if (0.5 * (k - k.adjoint()).norm() > tol * std::max(scale, 1e-300))
    throw std::invalid_argument(std::string(who) + ": kernel is not hermitian");
}

}  // namespace detail

/// S = exp(−iG) (exact) or 1 + iT with T = −G + (i/2)λ²K² (Born, second order),
/// G = λK + λ²K2. K2 defaults to zero.
inline CollisionOperator build_collision(const LinearOperator& K, double lambda,
                                         CollisionMode mode = CollisionMode::exact_unitary,
                                         const std::optional<Matrix>& K2 = std::nullopt) {
  if (K.dims.size() != 2) throw std::invalid_argument("build_collision: K must act on particle ⊗ target");
  detail::check_hermitian(K.elements, "build_collision");
  const Eigen::Index n = K.elements.rows();
  Matrix G = lambda * K.elements;
  if (K2) {
    if (K2->rows() != n || K2->cols() != n) throw std::invalid_argument("build_collision: K2 size mismatch");
    detail::check_hermitian(*K2, "build_collision");
    G += lambda * lambda * *K2;
  }
  G = hermitian_part(G);

  const Matrix id = Matrix::Identity(n, n);
  Matrix S, T;
  if (mode == CollisionMode::exact_unitary) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    const Vector phases = (-kI * es.eigenvalues().cast<cplx>()).array().exp().matrix();
    S = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    T = kI * (id - S);
  } else {
    T = -G + (0.5 * kI * lambda * lambda) * (K.elements * K.elements);
    S = id + kI * T;
  }
  CollisionOperator c;
  c.S = make_operator(std::move(S), K.dims);
  c.T = make_operator(std::move(T), K.dims);
  c.mode = mode;
  c.lambda = lambda;
  return c;
}

/// Collision from a given unitary S on particle ⊗ target, T = i(1 − S).
inline CollisionOperator collision_from_unitary(Matrix S, Dims dims, double tol = 1e-12) {
  if (dims.size() != 2) throw std::invalid_argument("collision_from_unitary: dims must be {particle, target}");
  const Matrix id = Matrix::Identity(S.rows(), S.cols());
  if (S.rows() != S.cols() || operator_norm(S.adjoint() * S - id) > tol)
    throw std::invalid_argument("collision_from_unitary: S is not unitary");
  CollisionOperator c;
  c.T = make_operator(kI * (id - S), dims);
  c.S = make_operator(std::move(S), std::move(dims));
  c.mode = CollisionMode::exact_unitary;
  c.lambda = 1.0;
  return c;
}

/// Particle-space block ⟨l|X|m⟩ of an operator on particle ⊗ target.
inline Matrix target_block(const Matrix& X, std::size_t dp, std::size_t dt, const Vector& l, const Vector& m) {
  if (X.rows() != as_index(dp * dt) || l.size() != as_index(dt) || m.size() != as_index(dt))
    throw std::invalid_argument("target_block: dimension mismatch");
  const Eigen::Index P = as_index(dp), D = as_index(dt);
  Matrix out = Matrix::Zero(P, P);
  for (Eigen::Index al = 0; al < D; ++al) {
    const cplx cl = std::conj(l(al));
    if (cl == cplx{}) continue;
    for (Eigen::Index be = 0; be < D; ++be) {
      const cplx w = cl * m(be);
      if (w == cplx{}) continue;
      for (Eigen::Index a = 0; a < P; ++a)
        for (Eigen::Index b = 0; b < P; ++b) out(a, b) += w * X(a * D + al, b * D + be);
    }
  }
  return out;
}

inline void check_target(const CollisionOperator& c, const StateVector& v, const char* who) {
  if (v.dim() != c.target_dim()) throw std::invalid_argument(std::string(who) + ": target dimension mismatch");
}

/// D_M^{(m)} = ⟨m|T|m⟩.
inline LinearOperator extract_d_m(const CollisionOperator& c, const TargetState& m) {
  check_target(c, m.vector, "extract_d_m");
  const Vector& v = m.vector.amplitudes;
  return make_operator(target_block(c.T.elements, c.particle_dim(), c.target_dim(), v, v));
}

namespace detail {

// ⟨l|T|m⟩ − ⟨m|T|m⟩⟨l|m⟩ without the label check; l may be any basis vector.
inline Matrix a_e_block(const CollisionOperator& c, const Vector& l, const Vector& m, const Matrix& d_m) {
  return target_block(c.T.elements, c.particle_dim(), c.target_dim(), l, m) - d_m * l.dot(m);
}

}  // namespace detail

/// A_E^{(l,m)} = ⟨l|T|m⟩ − ⟨m|T|m⟩⟨l|m⟩.
inline LinearOperator extract_a_e(const CollisionOperator& c, const TargetState& l, const TargetState& m) {
  if (l.label == m.label) throw std::invalid_argument("extract_a_e: l and m carry the same label");
  check_target(c, l.vector, "extract_a_e");
  check_target(c, m.vector, "extract_a_e");
  const Matrix d = extract_d_m(c, m).elements;
  return make_operator(detail::a_e_block(c, l.vector.amplitudes, m.vector.amplitudes, d));
}

/// Orthonormal basis of the target space (columns of a unitary, or the
/// computational basis when empty).
using TargetBasis = std::vector<StateVector>;

inline TargetBasis computational_basis(std::size_t dim) {
  TargetBasis b;
  for (std::size_t i = 0; i < dim; ++i) b.push_back(basis_state(dim, i));
  return b;
}

inline void check_basis(const TargetBasis& basis, std::size_t dim, double tol = 1e-10) {
  if (basis.size() != dim) throw std::invalid_argument("check_basis: basis is incomplete");
  Matrix proj = Matrix::Zero(as_index(dim), as_index(dim));
  for (const auto& b : basis) {
    if (b.dim() != dim) throw std::invalid_argument("check_basis: basis vector dimension mismatch");
    proj += b.amplitudes * b.amplitudes.adjoint();
  }
  if ((proj - Matrix::Identity(as_index(dim), as_index(dim))).norm() > tol)
    throw std::invalid_argument("check_basis: basis is not complete and orthonormal");
}

/// Particle-space operators of one target: D_M per ensemble label, A_E per
/// (basis index l, ensemble label m), A_M per ordered label pair (n, m).
struct SlabOperators {
  std::map<int, Matrix> d_m;
  std::map<std::pair<int, int>, Matrix> a_e;
  std::map<std::pair<int, int>, Matrix> a_m;
};

inline SlabOperators build_slab_operators(const CollisionOperator& c, const TargetEnsemble& ens,
                                          const TargetBasis& basis_in = {}) {
  check_ensemble(ens);
  const TargetBasis basis = basis_in.empty() ? computational_basis(c.target_dim()) : basis_in;
  check_basis(basis, c.target_dim());
  SlabOperators ops;
  for (const auto& m : ens) {
    check_target(c, m.vector, "build_slab_operators");
    ops.d_m[m.label] = extract_d_m(c, m).elements;
  }
  for (const auto& m : ens)
    for (std::size_t l = 0; l < basis.size(); ++l)
      ops.a_e[{static_cast<int>(l), m.label}] =
          detail::a_e_block(c, basis[l].amplitudes, m.vector.amplitudes, ops.d_m[m.label]);
  for (const auto& n : ens)
    for (const auto& m : ens) ops.a_m[{n.label, m.label}] = ops.d_m[m.label] - ops.d_m[n.label];
  return ops;
}

/// ‖Σ_l A_E†A_E + iD − iD† + D†D‖ for target state m over a complete basis.
inline double check_unitarity_relation(const CollisionOperator& c, const TargetState& m,
                                       const TargetBasis& basis_in = {}) {
  check_target(c, m.vector, "check_unitarity_relation");
  const TargetBasis basis = basis_in.empty() ? computational_basis(c.target_dim()) : basis_in;
  check_basis(basis, c.target_dim());
  const Vector& mv = m.vector.amplitudes;
  const Matrix d = target_block(c.T.elements, c.particle_dim(), c.target_dim(), mv, mv);
  Matrix r = kI * d - kI * d.adjoint() + d.adjoint() * d;
  for (const auto& l : basis) {
    const Matrix a = detail::a_e_block(c, l.amplitudes, mv, d);
    r += a.adjoint() * a;
  }
  return operator_norm(r);
}

/// Same residual from prebuilt operators (A_E taken over the basis used to build `ops`).
inline double check_unitarity_relation(const SlabOperators& ops, int label) {
  const auto it = ops.d_m.find(label);
  if (it == ops.d_m.end()) throw std::invalid_argument("check_unitarity_relation: unknown label");
  const Matrix& d = it->second;
  Matrix r = kI * d - kI * d.adjoint() + d.adjoint() * d;
  for (const auto& [key, a] : ops.a_e)
    if (key.second == label) r += a.adjoint() * a;
  return operator_norm(r);
}

inline double unitarity_defect(const CollisionOperator& c) {
  const Matrix& S = c.S.elements;
  return operator_norm(S.adjoint() * S - Matrix::Identity(S.rows(), S.cols()));
}

}  // namespace decohere
