#include <gtest/gtest.h>

#include "decohere/lattice.hpp"
#include "decohere/oracle.hpp"
#include "support.hpp"

using namespace decohere;
using testing_support::max_abs;

namespace {

LatticeSlabParams windows_params(std::vector<std::vector<std::size_t>> windows, std::uint64_t seed) {
  LatticeSlabParams p;
  p.windows = std::move(windows);
  p.seed = seed;
  return p;
}

Matrix pauli_z() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

}  // namespace

TEST(ExactCrossing, IdentityScatteringLeavesStateUnchanged) {
  auto rng = testing_support::rng(1);
  SlabSpec s;
  for (int j = 0; j < 2; ++j) {
    s.collisions.push_back(collision_from_unitary(Matrix::Identity(6, 6), {3, 2}));
    s.targets.push_back({{0, random_state(2, rng), 0.5, 0.0}, {1, random_state(2, rng), 0.5, 0.0}});
  }
  const auto rho = random_density(3, rng);
  EXPECT_LT(max_abs(exact_crossing(rho, s).elements - rho.elements), 1e-14);
}

TEST(ExactCrossing, PreservesTraceAndPositivity) {
  auto rng = testing_support::rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    SlabSpec s;
    for (int j = 0; j < 3; ++j) {
      s.collisions.push_back(build_collision(make_operator(random_hermitian(8, rng), {4, 2}), 1.5));
      s.targets.push_back({{0, random_state(2, rng), 0.25, 0.0}, {1, random_state(2, rng), 0.75, 0.0}});
    }
    const auto out = exact_crossing(random_density(4, rng, 2), s);
    EXPECT_NEAR(out.elements.trace().real(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(out.elements), -1e-12);
    EXPECT_LT(validate(out).hermiticity_defect, 1e-13);
  }
}

TEST(ExactCrossing, FullStateAgreesWithReducedPath) {
  auto rng = testing_support::rng(3);
  auto family = lattice_slab_family(windows_params({{0, 1, 2}, {3, 4, 5}}, 4));
  const auto s = family(0.7, CollisionMode::exact_unitary);
  const auto rho = random_density(8, rng);
  const auto run = exact_run(rho, s);
  EXPECT_NEAR(run.full_state.elements.trace().real(), 1.0, 1e-12);
  EXPECT_LT(max_abs(run.reduced.elements - exact_crossing(rho, s).elements), 1e-14);
  EXPECT_GE(run.error, 0.0);
}

TEST(ExactCrossing, Caps) {
  auto rng = testing_support::rng(5);
  SlabSpec big;
  for (int j = 0; j < 4; ++j) {
    big.collisions.push_back(collision_from_unitary(Matrix::Identity(32, 32), {8, 4}));
    big.targets.push_back(pure_ensemble(basis_state(4, 0)));
  }
  const auto rho = random_density(8, rng);
  EXPECT_NO_THROW(exact_crossing(rho, big));  // 8·4⁴ = 2048
  big.collisions.push_back(big.collisions.back());
  big.targets.push_back(big.targets.back());
  EXPECT_THROW(exact_crossing(rho, big), std::length_error);

  SlabSpec many;
  for (int j = 0; j < 7; ++j) {
    many.collisions.push_back(collision_from_unitary(Matrix::Identity(4, 4), {2, 2}));
    many.targets.push_back({{0, basis_state(2, 0), 0.5, 0.0}, {1, basis_state(2, 1), 0.5, 0.0}});
  }
  EXPECT_THROW(exact_crossing(random_density(2, rng), many), std::length_error);  // 2⁷ = 128 configurations
}

TEST(ToyModels, FootprintFixture) {
  const auto r = toy_footprint();
  EXPECT_LT(max_abs(r.particle.elements - 0.5 * Matrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs(r.box_after.elements - 0.5 * Matrix::Identity(2, 2)), 1e-15);
  EXPECT_NEAR(r.footprint_weight, 0.5, 1e-15);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LT(std::abs(r.out.amplitudes(0) - h), 1e-15);
  EXPECT_LT(std::abs(r.out.amplitudes(3) + h), 1e-15);
}

TEST(ToyModels, MixtureFixture) {
  const auto r = toy_mixture();
  EXPECT_LT(max_abs(r.particle.elements - 0.5 * Matrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs(r.box_after.elements - r.box_before.elements), 1e-15);
  EXPECT_LT(max_abs(r.box_after.elements - 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(ToyModels, MixtureWithPureBoxKeepsParticlePure) {
  const auto a = toy_mixture(pure_ensemble(basis_state(2, 0)));
  EXPECT_LT(max_abs(a.particle.elements - pure_density(basis_state(2, 0)).elements), 1e-15);
  EXPECT_EQ(a.footprint_weight, 0.0);
  const auto b = toy_mixture(pure_ensemble(basis_state(2, 1)));
  EXPECT_LT(max_abs(b.particle.elements - pure_density(basis_state(2, 1)).elements), 1e-15);
}

TEST(ConvergenceSweep, CommutingPureSlabIsExact) {
  const Matrix K = kron(Matrix(Matrix::Identity(3, 3)), pauli_z());
  auto family = [&](double l, CollisionMode mode) {
    SlabSpec s;
    s.collisions = {build_collision(make_operator(K, {3, 2}), l, mode)};
    s.targets = {pure_ensemble(basis_state(2, 1))};
    return s;
  };
  auto rng = testing_support::rng(6);
  const auto r = convergence_sweep(family, random_density(3, rng), {0.01, 0.03, 0.1, 0.3}, CollisionMode::exact_unitary);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(std::isnan(r.slope));
}

TEST(ConvergenceSweep, GenericTwoLevelTargetsAreCubic) {
  auto rng = testing_support::rng(7);
  const auto rho = random_density(8, rng);
  for (std::uint64_t seed : {8u, 9u}) {
    const auto r = convergence_sweep(lattice_slab_family(windows_params({{0, 1}, {4, 5}}, seed)), rho,
                                     {0.01, 0.02, 0.04, 0.1});
    EXPECT_NEAR(r.slope, 3.0, 0.1);
  }
}

TEST(ConvergenceSweep, ErrorGrowsAtMostLinearlyWithTargetCount) {
  auto rng = testing_support::rng(10);
  const auto rho = random_density(8, rng);
  const double l = 0.05;
  const std::vector<std::vector<std::size_t>> windows{{0, 1}, {3, 4}, {6, 7}};
  double single_max = 0.0;
  for (const auto& w : windows) {
    auto f = lattice_slab_family(windows_params({w}, 11));
    single_max = std::max(single_max, operator_norm(one_step(rho, f(l, CollisionMode::born_truncated)).elements -
                                                    exact_crossing(rho, f(l, CollisionMode::exact_unitary)).elements));
  }
  auto f3 = lattice_slab_family(windows_params(windows, 11));
  const double err3 = operator_norm(one_step(rho, f3(l, CollisionMode::born_truncated)).elements -
                                    exact_crossing(rho, f3(l, CollisionMode::exact_unitary)).elements);
  EXPECT_GT(err3, 0.0);
  EXPECT_LE(err3, 3.0 * single_max);
}

TEST(ConvergenceSweep, OverlappingTargetsAreSecondOrder) {
  // Targets sharing particle sites: the dropped crossed products dominate.
  auto rng = testing_support::rng(12);
  const auto rho = random_density(4, rng);
  const auto r = convergence_sweep(lattice_slab_family([] {
                                     LatticeSlabParams p;
                                     p.particle_dim = 4;
                                     p.windows = {{0, 1, 2, 3}, {0, 1, 2, 3}};
                                     p.seed = 13;
                                     return p;
                                   }()),
                                   rho, {0.01, 0.02, 0.04, 0.1});
  EXPECT_NEAR(r.slope, 2.0, 0.15);
}

TEST(ConvergenceSweep, InputValidation) {
  auto f = lattice_slab_family(windows_params({{0, 1}}, 14));
  auto rng = testing_support::rng(15);
  const auto rho = random_density(8, rng);
  EXPECT_THROW(convergence_sweep(f, rho, {0.01, 0.02, 0.04}), std::invalid_argument);
  EXPECT_THROW(convergence_sweep(f, rho, {0.01, 0.02, 0.04, 0.05}), std::invalid_argument);
  // partially below the floor: crossed terms of two commuting overlapping targets, error ~ λ²
  const Matrix K = kron(Matrix(Matrix::Identity(2, 2)), pauli_z());
  auto g = [&](double l, CollisionMode mode) {
    SlabSpec s;
    s.collisions = {build_collision(make_operator(K, {2, 2}), l, mode), build_collision(make_operator(K, {2, 2}), l, mode)};
    s.targets = {pure_ensemble(basis_state(2, 0)), pure_ensemble(basis_state(2, 0))};
    return s;
  };
  EXPECT_THROW(convergence_sweep(g, random_density(2, rng), {1e-9, 1e-3, 1e-2, 1e-1}, CollisionMode::exact_unitary),
               std::domain_error);
}

TEST(Oracle, PurityDeficitAndFootprintWeight) {
  // Pure particle, pure slab: the reduced state is φ'φ'† + Σ_l a_l a_l† with
  // the footprint branches a_l; purity follows from the split exactly, and the
  // deficit is bounded by twice the footprint weight.
  auto rng = testing_support::rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_state(3, rng);
    const auto m = random_state(2, rng);
    SlabSpec s;
    s.collisions = {build_collision(make_operator(random_hermitian(6, rng), {3, 2}), 0.05 + 0.1 * trial)};
    s.targets = {pure_ensemble(m)};
    const auto out = out_state(phi, {m}, s, OutMode::exact);
    const auto split = footprint_decompose(out, {m});
    const double w = split.footprint.amplitudes.squaredNorm();
    const auto rho = exact_crossing(pure_density(phi), s);
    const double deficit = 1.0 - purity(rho.elements);

    // branch along the orthogonal complement of m
    const Vector mperp = Vector(Eigen::Vector2cd(-std::conj(m.amplitudes(1)), std::conj(m.amplitudes(0))));
    Vector a(3);
    for (int i = 0; i < 3; ++i) a(i) = mperp.dot(out.amplitudes.segment(2 * i, 2));
    const Vector& p = split.phi_prime.amplitudes;
    const double expect = 1.0 - (std::pow(p.squaredNorm(), 2) + 2 * std::norm(p.dot(a)) + std::pow(a.squaredNorm(), 2));
    EXPECT_NEAR(a.squaredNorm(), w, 1e-13);
    EXPECT_NEAR(deficit, expect, 1e-13);
    EXPECT_LE(deficit, 2 * w + 1e-13);
  }
}
