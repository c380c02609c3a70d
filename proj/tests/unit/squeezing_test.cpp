#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "fixtures.hpp"
#include "spinsq/error.hpp"
#include "spinsq/squeezing.hpp"

using namespace spinsq;
using fixtures::kPi;

namespace {

Eigen::Matrix3d random_symmetric_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::Matrix3d m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m(a, b) = u(rng);
  return 0.5 * (m + m.transpose());
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
}

std::vector<Direction> common(int n, const Direction& d) { return std::vector<Direction>(static_cast<std::size_t>(n), d); }

Eigen::MatrixXcd density_of(const PureState& s) { return s.amplitudes() * s.amplitudes().adjoint(); }

const double kXi1Schmidt = std::sqrt(1 - std::sin(kPi / 4));      // 0.541196...
const double kXi2Schmidt = 1 / std::sqrt(1 + std::sin(kPi / 4));  // 0.765367...

}  // namespace

TEST(QuadraticFormMin, DiagonalAndClosedForm) {
  const Direction z(Eigen::Vector3d::UnitZ());
  EXPECT_NEAR(quadratic_form_min(Eigen::Vector3d(0.3, -0.2, -5).asDiagonal().toDenseMatrix(), z).value, -0.2, 1e-15);
  EXPECT_NEAR(quadratic_form_min(Eigen::Vector3d(-0.7, 0.4, 9).asDiagonal().toDenseMatrix(), z).value, -0.7, 1e-15);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = m(1, 1) = 0.25;
  m(0, 1) = m(1, 0) = -0.6;
  EXPECT_NEAR(quadratic_form_min(m, z).value, 0.25 - 0.6, 1e-15);
}

TEST(QuadraticFormMin, AngleConventions) {
  const Direction z(Eigen::Vector3d::UnitZ());
  const auto along_y = quadratic_form_min(Eigen::Vector3d(1, 0, 0).asDiagonal().toDenseMatrix(), z);
  EXPECT_NEAR(along_y.angle, kPi / 2, 1e-15);
  EXPECT_LT((along_y.direction.vector() - Eigen::Vector3d::UnitY()).norm(), 1e-15);
  EXPECT_EQ(quadratic_form_min(Eigen::Matrix3d::Identity(), z).angle, 0.0);
  const auto along_x = quadratic_form_min(Eigen::Vector3d(0, 1, 0).asDiagonal().toDenseMatrix(), z);
  EXPECT_NEAR(along_x.angle, 0.0, 1e-15);
}

TEST(QuadraticFormMin, MatchesDenseGrid) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Matrix3d m = random_symmetric_matrix(rng);
    const Direction n0(random_unit(rng));
    const auto q = quadratic_form_min(m, n0);
    const Frame f = complete_frame(n0);
    double best = 1e300;
    for (int k = 0; k < 10000; ++k) {
      const double phi = kPi * k / 10000;
      const Eigen::Vector3d d = std::cos(phi) * f.n_perp().vector() + std::sin(phi) * f.n_perp_prime().vector();
      best = std::min(best, d.dot(m * d));
    }
    EXPECT_NEAR(q.value, best, 1e-6);
    EXPECT_NEAR(q.direction.vector().dot(m * q.direction.vector()), q.value, 1e-12);
    EXPECT_NEAR(q.direction.vector().dot(n0.vector()), 0.0, 1e-12);
    EXPECT_GE(q.angle, 0.0);
    EXPECT_LT(q.angle, kPi);
  }
}

TEST(XiStandard, SchmidtState) {
  const auto r = xi_standard(fixtures::schmidt_state(kPi / 8));
  ASSERT_TRUE(r.xi1 && r.xi2);
  EXPECT_NEAR(*r.xi1, kXi1Schmidt, 1e-12);
  EXPECT_NEAR(*r.xi2, kXi2Schmidt, 1e-12);
  EXPECT_NEAR(*r.xi1, 0.541196, 1e-6);
  EXPECT_NEAR(*r.xi2, 0.765367, 1e-6);
}

TEST(XiStandard, TiltedProductIsSpuriouslySqueezed) {
  const auto r = xi_standard(fixtures::tilted_product_state());
  EXPECT_NEAR(*r.xi1, 0.5, 1e-12);
  EXPECT_NEAR(*r.min_variance, 1.0 / 8, 1e-12);
  EXPECT_NEAR(r.mean_J0, 0.5, 1e-12);
}

TEST(XiStandard, AlignedProductIsNotSqueezed) {
  const std::vector<Spinor> f(2, Spinor(std::sqrt(3.0) / 2, 0.5));
  const auto r = xi_standard(product_state(f));
  EXPECT_NEAR(*r.xi1, 1.0, 1e-12);
  EXPECT_NEAR(*r.xi2, 1.0, 1e-12);
}

TEST(XiStandard, CoherentStatesSitAtTheLimit) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> th(0, kPi), ph(0, 2 * kPi);
  for (int n = 1; n <= 8; ++n) {
    const auto css = coherent_spin_state(n, th(rng), ph(rng));
    const auto r = xi_standard(css);
    EXPECT_NEAR(*r.xi1, 1.0, 1e-10);
    EXPECT_NEAR(*r.xi2, 1.0, 1e-10);
    const auto full = xi_standard(embed_symmetric(css));
    EXPECT_NEAR(*full.xi1, 1.0, 1e-10);
  }
}

TEST(XiStandard, ZeroMeanSpinIsUndefined) {
  for (const auto& psi : {fixtures::bell_state(), fixtures::flipped_schmidt_state(kPi / 8)}) {
    const auto r = xi_standard(psi);
    EXPECT_FALSE(r.xi1.has_value());
    EXPECT_FALSE(r.xi2.has_value());
    EXPECT_EQ(r.undefined_reason, UndefinedReason::MeanSpinZero);
  }
}

TEST(XiStandard, MatchesDenseVarianceGrid) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 4; ++n) {
    const auto psi = random_pure_state(n, rng);
    const auto r = xi_standard(psi);
    const double grid = oracle::grid_min_collective_variance(density_of(psi), n, mean_spin(psi), 20000);
    EXPECT_NEAR(*r.min_variance, grid, 1e-6);
    EXPECT_NEAR(*r.xi1, 2 * std::sqrt(grid) / std::sqrt(n), 1e-5);
  }
}

TEST(XiStandard, RelationsAndOrdering) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const AnyState state = trial % 2 ? AnyState(random_pure_state(n, rng))
                                     : AnyState(random_symmetric_state(n + 3, rng));
    const auto r = xi_standard(state);
    if (!r.xi1) continue;
    const int nq = num_qubits(state);
    EXPECT_NEAR(*r.xi2, nq * *r.xi1 / (2 * r.mean_J0), 1e-10);
    EXPECT_GE(*r.xi2, *r.xi1 - 1e-12);
    EXPECT_GE(*r.min_variance, 0.0);
  }
}

TEST(XiStandard, TwistingProducesSqueezing) {
  const auto r = xi_standard(one_axis_twisted_state(10, 0.2));
  ASSERT_TRUE(r.xi1);
  EXPECT_LT(*r.xi1, 1.0);
  EXPECT_LT(*xi_standard(one_axis_twisted_state(200, 0.02)).xi1, 0.5);
}

TEST(XiTildeSymmetric, SchmidtState) {
  const auto r = xi_tilde_symmetric(fixtures::schmidt_state(kPi / 8));
  EXPECT_NEAR(*r.xi1_tilde, kXi1Schmidt, 1e-12);
  EXPECT_NEAR(*r.xi2_tilde, kXi1Schmidt / std::cos(kPi / 4), 1e-12);
  EXPECT_NEAR(*r.xi2_tilde, kXi2Schmidt, 1e-12);
}

TEST(XiTildeSymmetric, CoherentStates) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0, kPi), ph(0, 2 * kPi);
  for (int n : {2, 3, 8, 50, 2000}) {
    const auto r = xi_tilde_symmetric(coherent_spin_state(n, th(rng), ph(rng)));
    EXPECT_NEAR(*r.xi1_tilde, 1.0, 1e-10) << n;
    EXPECT_NEAR(*r.xi2_tilde, 1.0, 1e-10) << n;
    EXPECT_NEAR(*r.min_variance, n / 4.0, 1e-8 * n);
  }
}

TEST(XiTildeSymmetric, TwistedPairWithoutMeanSpin) {
  const auto state = one_axis_twisted_state(2, kPi / 2);
  const auto r = xi_tilde_symmetric(state);
  ASSERT_TRUE(r.xi1_tilde);
  EXPECT_LT(*r.xi1_tilde, 1.0);
  EXPECT_FALSE(r.xi2_tilde.has_value());
  EXPECT_EQ(r.undefined_reason, UndefinedReason::QubitBlochZero);
}

TEST(XiTildeSymmetric, AgreesAcrossRepresentations) {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 7; ++n) {
    const auto sym = random_symmetric_state(n, rng);
    const auto a = xi_tilde_symmetric(sym);
    const auto b = xi_tilde_symmetric(embed_symmetric(sym));
    EXPECT_NEAR(*a.xi1_tilde, *b.xi1_tilde, 1e-10);
    EXPECT_NEAR(*a.xi2_tilde, *b.xi2_tilde, 1e-10);
    EXPECT_NEAR(*a.xi2_tilde, n * *a.xi1_tilde / (2 * a.mean_J0), 1e-10);
  }
}

TEST(XiTildeSymmetric, RejectsNonSymmetricInput) {
  EXPECT_THROW(xi_tilde_symmetric(fixtures::tilted_product_state()), ValidationError);
  EXPECT_THROW(xi_tilde_symmetric(fixtures::flipped_schmidt_state(0.3)), ValidationError);
}

TEST(XiTildeGeneral, FlippedSchmidtMatchesPartner) {
  const auto flipped = xi_tilde_general(fixtures::flipped_schmidt_state(kPi / 8));
  const auto partner = xi_tilde_symmetric(fixtures::schmidt_state(kPi / 8));
  EXPECT_NEAR(*flipped.xi1_tilde, 0.541196, 1e-6);
  EXPECT_NEAR(*flipped.xi1_tilde, *partner.xi1_tilde, 1e-12);
  EXPECT_NEAR(*flipped.xi2_tilde, *partner.xi2_tilde, 1e-12);
}

TEST(XiTildeGeneral, BellStateIsUndefined) {
  const auto r = xi_tilde_general(fixtures::bell_state());
  EXPECT_FALSE(r.xi1_tilde.has_value());
  EXPECT_FALSE(r.xi2_tilde.has_value());
  EXPECT_EQ(r.undefined_reason, UndefinedReason::QubitBlochZero);
  EXPECT_EQ(r.zero_bloch_qubit, 0);

  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(8);
  amp[0] = amp[3] = 1 / std::sqrt(2.0);  // |0> (x) Bell
  const auto partial = xi_tilde_general(PureState(3, amp));
  EXPECT_EQ(partial.zero_bloch_qubit, 1);
}

TEST(XiTildeGeneral, MatchesSymmetricWhereCommonDirectionIsOptimal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0, kPi), ph(0, 2 * kPi), ang(0.05, kPi / 4 - 0.05);
  for (int n = 2; n <= 8; ++n) {
    const auto css = coherent_spin_state(n, th(rng), ph(rng));
    EXPECT_NEAR(*xi_tilde_general(css).xi1_tilde, *xi_tilde_symmetric(css).xi1_tilde, 1e-9);
    EXPECT_NEAR(*xi_tilde_general(embed_symmetric(css)).xi2_tilde, 1.0, 1e-9);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto pair = random_symmetric_state(2, rng);
    const auto g = xi_tilde_general(pair), s = xi_tilde_symmetric(pair);
    if (!s.xi2_tilde) continue;
    EXPECT_NEAR(*g.xi1_tilde, *s.xi1_tilde, 1e-9);
    EXPECT_NEAR(*g.xi2_tilde, *s.xi2_tilde, 1e-9);
  }
  const auto twisted = one_axis_twisted_state(10, 0.2);
  EXPECT_LE(*xi_tilde_general(twisted).xi1_tilde, *xi_tilde_symmetric(twisted).xi1_tilde + 1e-9);
}

TEST(XiTildeGeneral, NeverAboveTheCommonDirectionValue) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    const auto sym = trial % 2 ? AnyState(random_symmetric_state(n, rng))
                               : AnyState(random_symmetric_mixed_state(std::min(n, 5), 2, rng));
    const auto s = xi_tilde_symmetric(sym);
    const auto g = xi_tilde_general(sym);
    if (!s.xi2_tilde) continue;
    EXPECT_LE(*g.xi1_tilde, *s.xi1_tilde + 1e-9);
    const auto co = common_orientation(Marginals::of(sym));
    EXPECT_LE(co.optimized_min, co.aligned_only_min + 1e-9);
  }
}

TEST(XiTildeGeneral, RelationBetweenParameters) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const auto r = xi_tilde_general(random_pure_state(n, rng));
    ASSERT_TRUE(r.xi1_tilde);
    EXPECT_NEAR(*r.xi2_tilde, n * *r.xi1_tilde / (2 * r.mean_J0), 1e-10);
    EXPECT_GE(*r.min_variance, 0.0);
  }
}

TEST(XiTildeGeneral, TwoQubitPureStatesFollowConcurrence) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = random_pure_state(2, rng);
    const Eigen::VectorXcd& a = psi.amplitudes();
    const double c = 2 * std::abs(a[1] * a[2] - a[0] * a[3]);
    const auto r = xi_tilde_general(psi);
    EXPECT_NEAR(*r.xi1_tilde, std::sqrt(1 - c), 1e-9);
    EXPECT_NEAR(*r.xi2_tilde, 1 / std::sqrt(1 + c), 1e-9);
  }
}

TEST(XiTildeGeneral, LocalUnitaryInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 3;
    const auto psi = random_pure_state(n, rng);
    const auto base = xi_tilde_general(psi);
    const auto rho = random_separable_state(n, 3, 500 + static_cast<std::uint64_t>(trial));
    const auto rho_base = xi_tilde_general(rho);
    for (int k = 0; k < 5; ++k) {
      const auto u = random_local_unitary(n, rng);
      const auto moved = xi_tilde_general(apply_local_unitaries(psi, u));
      EXPECT_NEAR(*moved.xi1_tilde, *base.xi1_tilde, 1e-9);
      EXPECT_NEAR(*moved.xi2_tilde, *base.xi2_tilde, 1e-9);
      const auto rho_moved = xi_tilde_general(apply_local_unitaries(rho, u));
      EXPECT_NEAR(*rho_moved.xi2_tilde, *rho_base.xi2_tilde, 1e-9);
    }
  }
}

TEST(XiTildeGeneral, StandardParameterIsNotInvariant) {
  const LocalUnitary flip({Eigen::Matrix2cd::Identity(), pauli(0)});
  const auto before = xi_standard(fixtures::flipped_schmidt_state(kPi / 8));
  const auto after = xi_standard(apply_local_unitaries(fixtures::flipped_schmidt_state(kPi / 8), flip));
  EXPECT_FALSE(before.xi1.has_value());
  ASSERT_TRUE(after.xi1.has_value());
  EXPECT_NEAR(*after.xi1, std::sqrt(1 - std::abs(std::sin(kPi / 4))), 1e-12);
}

TEST(XiTildeGeneral, SeparableStatesRespectBound) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const auto r = xi_tilde_general(random_separable_state(n, 1 + static_cast<int>(seed % 8), seed));
    if (r.xi2_tilde) EXPECT_GE(*r.xi2_tilde, 1 - 1e-9) << "seed " << seed;
  }
  const auto single = xi_tilde_general(random_separable_state(2, 1, 77));
  EXPECT_GE(*single.xi2_tilde, 1 - 1e-9);
}

TEST(BruteForce, ClosedFormCases) {
  const Direction z(Eigen::Vector3d::UnitZ());
  const double t = kPi / 8, c = std::sin(2 * t);
  EXPECT_NEAR(brute_force_min_variance(fixtures::schmidt_state(t), common(2, z), 128), (1 - c) / 2, 1e-9);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> th(0.1, kPi - 0.1), ph(0, 2 * kPi);
  for (int n = 1; n <= 5; ++n) {
    const auto css = coherent_spin_state(n, th(rng), ph(rng));
    EXPECT_NEAR(brute_force_min_variance(css, common(n, mean_spin_direction(css)), 64), n / 4.0, 1e-9);
  }
  const auto tilted = fixtures::tilted_product_state();
  EXPECT_NEAR(brute_force_min_variance(tilted, common(2, z), 64), 1.0 / 8, 1e-9);
}

TEST(BruteForce, MatchesTwoQubitDenseGrid) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_pure_state(2, rng);
    const std::vector<Eigen::Vector3d> n0 = {random_unit(rng), random_unit(rng)};
    const std::vector<Direction> dirs = {Direction(n0[0]), Direction(n0[1])};
    const double grid = oracle::grid_min_local_variance_two_qubits(density_of(psi), n0, 720);
    const double bf = brute_force_min_variance(psi, dirs, 128);
    EXPECT_LE(bf, grid + 1e-12);
    EXPECT_NEAR(bf, grid, 1e-4);
  }
}

TEST(BruteForce, AgreesWithGeneralPath) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 3;
    const AnyState state = trial % 3 == 0 ? AnyState(random_symmetric_state(n, rng))
                           : trial % 3 == 1 ? AnyState(random_pure_state(n, rng))
                                            : AnyState(random_separable_state(n, 3, static_cast<std::uint64_t>(trial)));
    const auto m = Marginals::of(state);
    const auto g = xi_tilde_general(m);
    const double bf = brute_force_min_variance(state, bloch_directions(m), 128);
    EXPECT_NEAR(bf, *g.min_variance, 1e-6) << "trial " << trial;
  }
}

TEST(BruteForce, SymmetricEmbeddingMatchesFullVector) {
  std::mt19937_64 rng(15);
  const auto sym = random_symmetric_state(3, rng);
  const auto dirs = bloch_directions(Marginals::of(sym));
  EXPECT_NEAR(brute_force_min_variance(sym, dirs, 64), brute_force_min_variance(embed_symmetric(sym), dirs, 64), 1e-12);
}

TEST(BruteForce, InputChecks) {
  const Direction z(Eigen::Vector3d::UnitZ());
  EXPECT_THROW(brute_force_min_variance(fixtures::bell_state(), common(2, z), 32), ValidationError);
  EXPECT_THROW(brute_force_min_variance(fixtures::bell_state(), common(3, z), 64), ValidationError);
}

TEST(UndefinedReason, Names) {
  EXPECT_EQ(to_string(UndefinedReason::MeanSpinZero), "MeanSpinZero");
  EXPECT_EQ(to_string(UndefinedReason::QubitBlochZero), "QubitBlochZero");
}
