// Shared helpers for the test suite: independent brute-force oracles.
#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "decohere/linalg.hpp"

namespace testing_support {

using decohere::cplx;
using decohere::Matrix;
using decohere::Vector;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// (A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l] by explicit loops.
inline Matrix brute_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < b.rows(); ++k)
      for (int j = 0; j < a.cols(); ++j)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Tr_B of a bipartite (dA × dB) matrix, double-index summation.
inline Matrix brute_trace_b(const Matrix& rho, int dA, int dB) {
  Matrix out = Matrix::Zero(dA, dA);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      for (int k = 0; k < dB; ++k) out(i, j) += rho(i * dB + k, j * dB + k);
  return out;
}

inline Matrix brute_trace_a(const Matrix& rho, int dA, int dB) {
  Matrix out = Matrix::Zero(dB, dB);
  for (int k = 0; k < dB; ++k)
    for (int l = 0; l < dB; ++l)
      for (int i = 0; i < dA; ++i) out(k, l) += rho(i * dB + k, i * dB + l);
  return out;
}

// ⟨l|X|m⟩ over the second factor, written as an explicit contraction.
inline Matrix brute_block(const Matrix& X, int dp, int dt, const Vector& l, const Vector& m) {
  Matrix out = Matrix::Zero(dp, dp);
  for (int a = 0; a < dp; ++a)
    for (int b = 0; b < dp; ++b) {
      cplx s = 0;
      for (int al = 0; al < dt; ++al)
        for (int be = 0; be < dt; ++be) s += std::conj(l(al)) * X(a * dt + al, b * dt + be) * m(be);
      out(a, b) = s;
    }
  return out;
}

// Padé matrix exponential, independent of the library's eigen-based path.
inline Matrix expm(const Matrix& A) { return A.exp(); }

}  // namespace testing_support
