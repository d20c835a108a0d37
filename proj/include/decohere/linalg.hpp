// linalg.hpp: dense complex linear algebra for particle ⊗ target registers.
//
// Subsystem convention used throughout the library: index 0 is the particle,
// indices 1..N are the targets in slab order. Composite indices are row-major
// (subsystem 0 most significant), matching the Kronecker product a ⊗ b.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace decohere {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

inline constexpr cplx kI{0.0, 1.0};

// Raised when a computation leaves its numerically valid regime (trace blowup,
// branch cut of a logarithm, unresolved delta function, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

inline Eigen::Index as_index(std::size_t n) { return static_cast<Eigen::Index>(n); }

// ---------------------------------------------------------------------------
// Domain types

struct StateVector {
  Vector amplitudes;
  Dims dims;
  bool normalized = false;

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
};

struct DensityMatrix {
  Matrix elements;
  Dims dims;
  bool normalized = false;

  std::size_t dim() const { return static_cast<std::size_t>(elements.rows()); }
};

/// Operator on the subsystems `acts_on` of a register with subsystem
/// dimensions `dims`. `elements` has size Π dims[acts_on].
struct LinearOperator {
  Matrix elements;
  Dims dims;
  std::vector<std::size_t> acts_on;

  std::size_t dim() const { return static_cast<std::size_t>(elements.rows()); }
};

namespace detail {

inline void check_dims(std::size_t n, Dims& dims, const char* who) {
  if (dims.empty()) dims = {n};
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; }))
    throw std::invalid_argument(std::string(who) + ": zero subsystem dimension");
  if (total_dim(dims) != n)
    throw std::invalid_argument(std::string(who) + ": product of dims does not match size");
}

inline std::vector<std::size_t> all_subsystems(std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace detail

inline StateVector make_state(Vector amplitudes, Dims dims = {}) {
  detail::check_dims(static_cast<std::size_t>(amplitudes.size()), dims, "make_state");
  const double norm = amplitudes.norm();
  if (!std::isfinite(norm)) throw std::invalid_argument("make_state: non-finite amplitudes");
  return StateVector{std::move(amplitudes), std::move(dims), std::abs(norm - 1.0) <= 1e-12};
}

inline StateVector normalized(StateVector s) {
  const double norm = s.amplitudes.norm();
  if (norm == 0.0) throw std::invalid_argument("normalized: zero vector");
  s.amplitudes /= norm;
  s.normalized = true;
  return s;
}

inline StateVector basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("basis_state: index out of range");
  Vector v = Vector::Zero(as_index(dim));
  v(as_index(index)) = 1.0;
  return make_state(std::move(v));
}

inline DensityMatrix make_density(Matrix elements, Dims dims = {}) {
  if (elements.rows() != elements.cols()) throw std::invalid_argument("make_density: matrix not square");
  detail::check_dims(static_cast<std::size_t>(elements.rows()), dims, "make_density");
  const bool unit = std::abs(elements.trace() - cplx{1.0, 0.0}) <= 1e-12;
  return DensityMatrix{std::move(elements), std::move(dims), unit};
}

inline DensityMatrix pure_density(const StateVector& s) {
  return make_density(s.amplitudes * s.amplitudes.adjoint(), s.dims);
}

inline DensityMatrix maximally_mixed(std::size_t dim) {
  return make_density(Matrix::Identity(as_index(dim), as_index(dim)) / static_cast<double>(dim));
}

inline LinearOperator make_operator(Matrix elements, Dims dims = {}) {
  if (elements.rows() != elements.cols()) throw std::invalid_argument("make_operator: matrix not square");
  detail::check_dims(static_cast<std::size_t>(elements.rows()), dims, "make_operator");
  auto acts_on = detail::all_subsystems(dims.size());
  return LinearOperator{std::move(elements), std::move(dims), std::move(acts_on)};
}

inline LinearOperator identity_operator(std::size_t dim) {
  return make_operator(Matrix::Identity(as_index(dim), as_index(dim)));
}

// ---------------------------------------------------------------------------
// Tensor products

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Dims concat_dims(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  return StateVector{kron(a.amplitudes, b.amplitudes), concat_dims(a.dims, b.dims),
                     a.normalized && b.normalized};
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix{kron(a.elements, b.elements), concat_dims(a.dims, b.dims),
                       a.normalized && b.normalized};
}

inline LinearOperator tensor(const LinearOperator& a, const LinearOperator& b) {
  std::vector<std::size_t> acts_on = a.acts_on;
  for (std::size_t k : b.acts_on) acts_on.push_back(k + a.dims.size());
  return LinearOperator{kron(a.elements, b.elements), concat_dims(a.dims, b.dims), std::move(acts_on)};
}

// ---------------------------------------------------------------------------
// Subsystem index bookkeeping

/// Splits composite indices of a register into (selected, rest) parts.
/// global = local_offset[l] + rest_offset[r].
class SubsystemSplit {
 public:
  SubsystemSplit(const Dims& dims, std::span<const std::size_t> selected) {
    const std::size_t n = dims.size();
    std::vector<bool> chosen(n, false);
    for (std::size_t k : selected) {
      if (k >= n) throw std::out_of_range("SubsystemSplit: subsystem index out of range");
      if (chosen[k]) throw std::invalid_argument("SubsystemSplit: repeated subsystem index");
      chosen[k] = true;
    }
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * dims[k];

    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < n; ++k)
      if (!chosen[k]) rest.push_back(k);

    local_ = offsets(dims, stride, selected);
    rest_ = offsets(dims, stride, rest);
  }

  std::size_t local_dim() const { return local_.size(); }
  std::size_t rest_dim() const { return rest_.size(); }
  std::size_t global(std::size_t local, std::size_t rest) const { return local_[local] + rest_[rest]; }

 private:
  static std::vector<std::size_t> offsets(const Dims& dims, const std::vector<std::size_t>& stride,
                                          std::span<const std::size_t> subset) {
    std::size_t count = 1;
    for (std::size_t k : subset) count *= dims[k];
    std::vector<std::size_t> out(count, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rem = idx, off = 0;
      for (std::size_t pos = subset.size(); pos-- > 0;) {
        const std::size_t k = subset[pos];
        off += (rem % dims[k]) * stride[k];
        rem /= dims[k];
      }
      out[idx] = off;
    }
    return out;
  }

  std::vector<std::size_t> local_;
  std::vector<std::size_t> rest_;
};

/// ψ ← (op on `acts_on`) ψ, identity elsewhere.
inline void apply_local(const Matrix& op, std::span<const std::size_t> acts_on, const Dims& dims,
                        Vector& psi) {
  const SubsystemSplit split(dims, acts_on);
  if (as_index(split.local_dim()) != op.rows())
    throw std::invalid_argument("apply_local: operator size does not match subsystems");
  Vector local(op.rows());
  for (std::size_t r = 0; r < split.rest_dim(); ++r) {
    for (std::size_t l = 0; l < split.local_dim(); ++l) local(as_index(l)) = psi(as_index(split.global(l, r)));
    const Vector out = op * local;
    for (std::size_t l = 0; l < split.local_dim(); ++l) psi(as_index(split.global(l, r))) = out(as_index(l));
  }
}

/// Full-register matrix of an operator acting on a subset of subsystems.
inline Matrix embed(const LinearOperator& op) {
  const SubsystemSplit split(op.dims, op.acts_on);
  if (as_index(split.local_dim()) != op.elements.rows())
    throw std::invalid_argument("embed: operator size does not match acts_on subsystems");
  const std::size_t n = total_dim(op.dims);
  Matrix out = Matrix::Zero(as_index(n), as_index(n));
  for (std::size_t r = 0; r < split.rest_dim(); ++r)
    for (std::size_t a = 0; a < split.local_dim(); ++a)
      for (std::size_t b = 0; b < split.local_dim(); ++b)
        out(as_index(split.global(a, r)), as_index(split.global(b, r))) = op.elements(as_index(a), as_index(b));
  return out;
}

inline StateVector apply(const LinearOperator& op, StateVector psi) {
  if (op.dims != psi.dims) throw std::invalid_argument("apply: register dims mismatch");
  apply_local(op.elements, op.acts_on, op.dims, psi.amplitudes);
  psi.normalized = std::abs(psi.amplitudes.norm() - 1.0) <= 1e-12;
  return psi;
}

// ---------------------------------------------------------------------------
// Partial trace

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw std::invalid_argument("partial_trace: repeated subsystem index");
  if (kept.back() >= rho.dims.size()) throw std::out_of_range("partial_trace: invalid subsystem index");

  const SubsystemSplit split(rho.dims, kept);
  const Eigen::Index n = as_index(split.local_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t r = 0; r < split.rest_dim(); ++r)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        out(a, b) += rho.elements(as_index(split.global(static_cast<std::size_t>(a), r)),
                                  as_index(split.global(static_cast<std::size_t>(b), r)));
  Dims dims;
  for (std::size_t k : kept) dims.push_back(rho.dims[k]);
  return DensityMatrix{std::move(out), std::move(dims), rho.normalized};
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reduced density matrix Σ_r ψ(a,r) ψ*(b,r) of a pure register state, without
/// forming the full projector.
inline Matrix reduced_from_pure(const Vector& psi, const Dims& dims, std::span<const std::size_t> keep) {
  const SubsystemSplit split(dims, keep);
  const Eigen::Index n = as_index(split.local_dim());
  Matrix block(n, as_index(split.rest_dim()));
  for (std::size_t r = 0; r < split.rest_dim(); ++r)
    for (Eigen::Index a = 0; a < n; ++a)
      block(a, as_index(r)) = psi(as_index(split.global(static_cast<std::size_t>(a), r)));
  return block * block.adjoint();
}

// ---------------------------------------------------------------------------
// Norms and diagnostics

/// Largest singular value, as sqrt of the top eigenvalue of M†M (relative
/// accuracy ~machine epsilon for the largest value).
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix g = m.rows() >= m.cols() ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double min_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

struct Tolerances {
  double hermiticity = 1e-12;  // relative to the largest element
  double positivity = 1e-9;    // smallest eigenvalue allowed: -positivity
  double trace = 1e-12;
};

struct Diagnostics {
  double hermiticity_defect = 0.0;  // ‖ρ − ρ†‖_F / 2
  double min_eigenvalue = 0.0;
  double trace_deviation = 0.0;     // |Tr ρ − 1| (or |Im Tr ρ| when not flagged normalized)
  bool hermitian = true;
  bool positive = true;
  bool trace_ok = true;

  bool ok() const { return hermitian && positive && trace_ok; }
};

inline Diagnostics validate(const DensityMatrix& rho, const Tolerances& tol = {}) {
  Diagnostics d;
  const Matrix& m = rho.elements;
  d.hermiticity_defect = 0.5 * (m - m.adjoint()).norm();
  const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  d.hermitian = d.hermiticity_defect <= tol.hermiticity * std::max(scale, 1e-300);
  d.min_eigenvalue = min_eigenvalue(m);
  d.positive = d.min_eigenvalue >= -tol.positivity;
  const cplx tr = m.trace();
  d.trace_deviation = rho.normalized ? std::abs(tr - cplx{1.0, 0.0}) : std::abs(tr.imag());
  d.trace_ok = d.trace_deviation <= tol.trace;
  return d;
}

}  // namespace decohere
