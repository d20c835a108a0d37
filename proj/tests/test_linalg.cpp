#include <gtest/gtest.h>

#include "decohere/linalg.hpp"
#include "decohere/random.hpp"
#include "support.hpp"

using namespace decohere;
using testing_support::brute_kron;
using testing_support::brute_trace_a;
using testing_support::brute_trace_b;
using testing_support::max_abs;

TEST(Tensor, IdentityTimesIdentity) {
  const auto a = identity_operator(2);
  const auto out = tensor(a, a);
  EXPECT_EQ(out.dims, (Dims{2, 2}));
  EXPECT_EQ(out.acts_on, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(max_abs(out.elements - Matrix::Identity(4, 4)), 0.0);
}

TEST(Tensor, BasisBookkeeping) {
  const auto v = tensor(basis_state(2, 0), basis_state(2, 1));
  ASSERT_EQ(v.dim(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(v.amplitudes(i), cplx(i == 1 ? 1.0 : 0.0));
  EXPECT_TRUE(v.normalized);
}

TEST(Tensor, MixedProductAgainstIndexSummation) {
  auto rng = testing_support::rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix A = random_ginibre(2, 2, rng);
    const Matrix B = random_ginibre(3, 3, rng);
    const Vector x = random_ginibre(2, 1, rng).col(0);
    const Vector y = random_ginibre(3, 1, rng).col(0);
    const auto AB = tensor(make_operator(A), make_operator(B));
    EXPECT_LT(max_abs(AB.elements - brute_kron(A, B)), 1e-14);
    const Vector lhs = AB.elements * tensor(make_state(x), make_state(y)).amplitudes;
    const Vector rhs = brute_kron(A * x, B * y);
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
  }
}

TEST(Tensor, Associative) {
  auto rng = testing_support::rng(12);
  const Matrix A = random_ginibre(2, 2, rng), B = random_ginibre(3, 3, rng), C = random_ginibre(2, 2, rng);
  const auto a = make_operator(A), b = make_operator(B), c = make_operator(C);
  const auto left = tensor(tensor(a, b), c);
  const auto right = tensor(a, tensor(b, c));
  EXPECT_EQ(left.dims, right.dims);
  EXPECT_LT(max_abs(left.elements - right.elements), 1e-14);
}

TEST(Construction, RejectsInconsistentDims) {
  EXPECT_THROW(make_state(Vector::Ones(4), Dims{3}), std::invalid_argument);
  EXPECT_THROW(make_density(Matrix::Identity(4, 4), Dims{2, 3}), std::invalid_argument);
  EXPECT_THROW(make_density(Matrix::Identity(4, 3)), std::invalid_argument);
  EXPECT_THROW(make_state(Vector::Constant(2, cplx(NAN, 0))), std::invalid_argument);
  EXPECT_FALSE(make_state(Vector::Ones(2)).normalized);
}

TEST(PartialTrace, ToyFootprintGivesHalfIdentity) {
  // (|1⟩|a⟩ − |2⟩|b⟩)/√2 with particle {|1⟩,|2⟩} and box {|a⟩,|b⟩}.
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(3) = -1.0 / std::sqrt(2.0);
  const auto rho = pure_density(make_state(psi, {2, 2}));
  const auto red = partial_trace(rho, {0});
  EXPECT_LT(max_abs(red.elements - 0.5 * Matrix::Identity(2, 2)), 1e-15);
  EXPECT_EQ(red.dims, (Dims{2}));
}

TEST(PartialTrace, ProductState) {
  auto rng = testing_support::rng(13);
  const auto ra = random_density(3, rng);
  const auto rb = random_density(2, rng);
  const auto rho = tensor(ra, rb);
  EXPECT_LT(max_abs(partial_trace(rho, {0}).elements - ra.elements), 1e-14);
  EXPECT_LT(max_abs(partial_trace(rho, {1}).elements - rb.elements), 1e-14);
}

TEST(PartialTrace, MatchesDoubleIndexSummation) {
  auto rng = testing_support::rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    auto rho = random_density(6, rng);
    rho.dims = {2, 3};
    EXPECT_LT(max_abs(partial_trace(rho, {0}).elements - brute_trace_b(rho.elements, 2, 3)), 1e-14);
    EXPECT_LT(max_abs(partial_trace(rho, {1}).elements - brute_trace_a(rho.elements, 2, 3)), 1e-14);
  }
}

TEST(PartialTrace, ThreePartiteMiddle) {
  // Tr over subsystems 0 and 2 of a 2×3×2 register, explicit triple loop.
  auto rng = testing_support::rng(15);
  auto rho = random_density(12, rng);
  rho.dims = {2, 3, 2};
  Matrix expect = Matrix::Zero(3, 3);
  for (int b1 = 0; b1 < 3; ++b1)
    for (int b2 = 0; b2 < 3; ++b2)
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) expect(b1, b2) += rho.elements(a * 6 + b1 * 2 + c, a * 6 + b2 * 2 + c);
  EXPECT_LT(max_abs(partial_trace(rho, {1}).elements - expect), 1e-14);
  // keep order does not matter, output follows ascending subsystem order
  const auto k02 = partial_trace(rho, {2, 0});
  EXPECT_EQ(k02.dims, (Dims{2, 2}));
  EXPECT_NEAR(k02.elements.trace().real(), 1.0, 1e-12);
}

TEST(PartialTrace, KeepAllIsIdentity) {
  auto rng = testing_support::rng(16);
  auto rho = random_density(8, rng);
  rho.dims = {2, 2, 2};
  EXPECT_EQ(max_abs(partial_trace(rho, {0, 1, 2}).elements - rho.elements), 0.0);
}

TEST(PartialTrace, Errors) {
  auto rho = maximally_mixed(4);
  rho.dims = {2, 2};
  EXPECT_THROW(partial_trace(rho, {2}), std::out_of_range);
  EXPECT_THROW(partial_trace(rho, {0, 0}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, std::span<const std::size_t>{}), std::invalid_argument);
}

TEST(PartialTrace, PropertyTracePreservedUnderEntanglingUnitary) {
  auto rng = testing_support::rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
    const auto rho = tensor(random_density(da, rng), random_density(db, rng));
    const Matrix U = random_unitary(da * db, rng);
    const auto out = make_density(U * rho.elements * U.adjoint(), rho.dims);
    const auto red = partial_trace(out, {0});
    EXPECT_NEAR(red.elements.trace().real(), 1.0, 1e-12);
    EXPECT_LT(std::abs(red.elements.trace().imag()), 1e-12);
    EXPECT_TRUE(validate(red).hermitian);
  }
}

TEST(PartialTrace, ReducedFromPureAgreesWithProjector) {
  auto rng = testing_support::rng(18);
  auto psi = random_state(12, rng);
  psi.dims = {3, 2, 2};
  const auto rho = pure_density(psi);
  const std::vector<std::size_t> keep{0, 2};
  EXPECT_LT(max_abs(reduced_from_pure(psi.amplitudes, psi.dims, keep) - partial_trace(rho, keep).elements), 1e-14);
}

TEST(ApplyLocal, MatchesEmbeddedKronecker) {
  auto rng = testing_support::rng(19);
  const Dims dims{2, 3, 2};
  const Matrix op = random_ginibre(6, 6, rng);
  const std::vector<std::size_t> on{1, 2};
  Vector psi = random_state(12, rng).amplitudes;
  const Vector expect = brute_kron(Matrix::Identity(2, 2), op) * psi;
  apply_local(op, on, dims, psi);
  EXPECT_LT((psi - expect).norm(), 1e-13);

  LinearOperator lo{op, dims, on};
  EXPECT_LT(max_abs(embed(lo) - brute_kron(Matrix::Identity(2, 2), op)), 1e-15);
}

TEST(ApplyLocal, NonContiguousSubsystems) {
  // Operator on subsystem 0 ⊗ subsystem 2 of a 2×3×2 register.
  auto rng = testing_support::rng(20);
  const Matrix A = random_ginibre(2, 2, rng), C = random_ginibre(2, 2, rng);
  const LinearOperator lo{brute_kron(A, C), {2, 3, 2}, {0, 2}};
  const Matrix full = brute_kron(brute_kron(A, Matrix::Identity(3, 3)), C);
  EXPECT_LT(max_abs(embed(lo) - full), 1e-14);
}

TEST(Validate, MaximallyMixedIsClean) {
  const auto d = validate(maximally_mixed(2));
  EXPECT_EQ(d.hermiticity_defect, 0.0);
  EXPECT_NEAR(d.min_eigenvalue, 0.5, 1e-15);
  EXPECT_EQ(d.trace_deviation, 0.0);
  EXPECT_TRUE(d.ok());
}

TEST(Validate, HermiticityDefectMatchesDirectNorm) {
  auto rng = testing_support::rng(21);
  const Matrix m = random_ginibre(4, 4, rng);
  const auto rho = make_density(m);
  const Matrix before = rho.elements;
  const auto d = validate(rho);
  double sum = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sum += std::norm(m(i, j) - std::conj(m(j, i)));
  EXPECT_NEAR(d.hermiticity_defect, 0.5 * std::sqrt(sum), 1e-13);
  EXPECT_FALSE(d.hermitian);
  EXPECT_EQ(max_abs(rho.elements - before), 0.0);
}

TEST(Validate, FlagsNegativeEigenvalueAndTrace) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  auto rho = make_density(m);
  rho.normalized = true;
  auto d = validate(rho);
  EXPECT_NEAR(d.min_eigenvalue, -0.1, 1e-14);
  EXPECT_FALSE(d.positive);
  EXPECT_TRUE(d.trace_ok);

  Tolerances loose;
  loose.positivity = 0.2;
  EXPECT_TRUE(validate(rho, loose).positive);

  m(1, 1) = 0.1;
  rho = make_density(m);
  rho.normalized = true;
  d = validate(rho);
  EXPECT_NEAR(d.trace_deviation, 0.2, 1e-14);
  EXPECT_FALSE(d.trace_ok);
}

TEST(Random, FixturesHaveAdvertisedProperties) {
  auto rng = testing_support::rng(22);
  const Matrix U = random_unitary(5, rng);
  EXPECT_LT(max_abs(U.adjoint() * U - Matrix::Identity(5, 5)), 1e-13);
  const Matrix H = random_hermitian(5, rng, 2.0);
  EXPECT_LT(max_abs(H - H.adjoint()), 1e-15);
  EXPECT_NEAR(operator_norm(H), 2.0, 1e-12);
  const auto rho = random_density(5, rng, 2);
  EXPECT_TRUE(validate(rho).ok());
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.elements);
  EXPECT_LT(std::abs(es.eigenvalues()(2)), 1e-13);
}
