// random.hpp: seeded random fixtures (hermitian kernels, unitaries, states).
#pragma once

#include <random>

#include "decohere/linalg.hpp"

namespace decohere {

template <class Rng>
Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(as_index(rows), as_index(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx{re, im};
    }
  return m;
}

/// Hermitian matrix with unit operator norm, scaled by `scale`.
template <class Rng>
Matrix random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0) {
  Matrix g = random_ginibre(dim, dim, rng);
  Matrix h = hermitian_part(g);
  const double norm = operator_norm(h);
  return norm > 0 ? Matrix(h * (scale / norm)) : h;
}

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
template <class Rng>
Matrix random_unitary(std::size_t dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_ginibre(dim, dim, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const cplx d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

template <class Rng>
StateVector random_state(std::size_t dim, Rng& rng) {
  Vector v = random_ginibre(dim, 1, rng).col(0);
  return normalized(make_state(std::move(v)));
}

/// Density matrix of given rank (0 = full rank), unit trace.
template <class Rng>
DensityMatrix random_density(std::size_t dim, Rng& rng, std::size_t rank = 0) {
  if (rank == 0 || rank > dim) rank = dim;
  const Matrix g = random_ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return make_density(hermitian_part(rho));
}

}  // namespace decohere
