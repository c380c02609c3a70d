#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "spinsq/entanglement.hpp"
#include "spinsq/error.hpp"

using namespace spinsq;
using fixtures::kPi;

namespace {

// Singular values of the 2x2 amplitude matrix, descending.
Eigen::Vector2d amplitude_singular_values(const PureState& psi) {
  Eigen::Matrix2cd m;
  m << psi.amplitudes()[0], psi.amplitudes()[1], psi.amplitudes()[2], psi.amplitudes()[3];
  return Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues();
}

// Levi-Civita contraction written out in components for one symmetric pair.
double invariant_by_cofactors(const Eigen::Vector3d& s, const Eigen::Matrix3d& t) {
  // eps_ijk eps_lmn t_jm t_kn = 2 cof(T)_il
  Eigen::Matrix3d cof;
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) {
      const int j = (i + 1) % 3, k = (i + 2) % 3, m = (l + 1) % 3, n = (l + 2) % 3;
      cof(i, l) = t(j, m) * t(k, n) - t(j, n) * t(k, m);
    }
  return 2 * s.dot(cof * s);
}

}  // namespace

TEST(Schmidt, Examples) {
  const auto bell = schmidt(fixtures::bell_state());
  EXPECT_NEAR(bell.lambda1, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(bell.lambda2, 1 / std::sqrt(2.0), 1e-12);
  const auto product = schmidt(fixtures::two_qubit(1, 0, 0, 0));
  EXPECT_NEAR(product.lambda1, 1.0, 1e-15);
  EXPECT_NEAR(product.lambda2, 0.0, 1e-15);
  const auto p = schmidt(fixtures::two_qubit(0.6, 0, 0, 0.8));
  // (1 + sqrt(1 - 4 * 0.2304)) / 2 = 0.64: the coefficients themselves are 0.8 and 0.6.
  EXPECT_NEAR(p.lambda1 * p.lambda1, 0.64, 1e-12);
  EXPECT_NEAR(p.lambda1, 0.8, 1e-12);
  EXPECT_NEAR(p.lambda2, 0.6, 1e-12);
  EXPECT_THROW(schmidt(fixtures::ghz_state(3)), ValidationError);
}

TEST(Schmidt, MatchesSingularValues) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto psi = random_pure_state(2, rng);
    const auto p = schmidt(psi);
    const auto sv = amplitude_singular_values(psi);
    EXPECT_NEAR(p.lambda1, sv[0], 1e-7);
    EXPECT_NEAR(p.lambda2, sv[1], 1e-7);
    EXPECT_GE(p.lambda1, p.lambda2);
    EXPECT_NEAR(p.lambda1 * p.lambda1 + p.lambda2 * p.lambda2, 1.0, 1e-12);
  }
}

TEST(Concurrence, Examples) {
  EXPECT_NEAR(concurrence_pure(fixtures::bell_state()), 1.0, 1e-15);
  EXPECT_NEAR(concurrence_pure(fixtures::two_qubit(0.6, 0, 0, 0.8)), 0.96, 1e-15);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Spinor> f = {random_spinor(rng), random_spinor(rng)};
    EXPECT_NEAR(concurrence_pure(product_state(f)), 0.0, 1e-12);
  }
}

TEST(Concurrence, EqualsTwiceSchmidtProduct) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = random_pure_state(2, rng);
    const auto p = schmidt(psi);
    EXPECT_NEAR(concurrence_pure(psi), 2 * p.lambda1 * p.lambda2, 1e-12);
  }
}

TEST(ConcurrenceXi, Examples) {
  const auto zero = xi_from_concurrence(0.0);
  EXPECT_EQ(zero.xi1_tilde, 1.0);
  EXPECT_EQ(zero.xi2_tilde, 1.0);
  const auto mid = xi_from_concurrence(std::sin(kPi / 4));
  const auto sym = xi_tilde_symmetric(fixtures::schmidt_state(kPi / 8));
  EXPECT_NEAR(mid.xi1_tilde, *sym.xi1_tilde, 1e-12);
  EXPECT_NEAR(mid.xi2_tilde, *sym.xi2_tilde, 1e-12);
  const auto full = xi_from_concurrence(1.0);
  EXPECT_NEAR(full.xi1_tilde, 0.0, 1e-15);
  EXPECT_NEAR(full.xi2_tilde, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(xi_from_concurrence(1.1), ValidationError);
  EXPECT_THROW(xi_from_concurrence(-0.1), ValidationError);
  EXPECT_THROW(xi_from_concurrence(std::nan("")), ValidationError);
}

TEST(InvariantI, Examples) {
  const auto parts = invariant_parts(Marginals::of(fixtures::schmidt_state(kPi / 8)));
  EXPECT_NEAR(parts.direct, -0.5, 1e-12);
  EXPECT_NEAR(parts.s0 * parts.s0, 0.5, 1e-12);
  EXPECT_NEAR(parts.t_plus, std::sin(kPi / 4), 1e-12);
  EXPECT_NEAR(parts.t_minus, -std::sin(kPi / 4), 1e-12);
  EXPECT_NEAR(invariant_I(fixtures::two_qubit(1, 0, 0, 0)), 0.0, 1e-15);
  const auto twisted = invariant_parts(Marginals::of(one_axis_twisted_state(10, 0.2)));
  EXPECT_NEAR(twisted.direct, twisted.aligned, 1e-9);
  EXPECT_LT(twisted.direct, 0.0);
}

TEST(InvariantI, RoutesAgreeAndMatchCofactorForm) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const AnyState state = trial % 2 ? AnyState(random_symmetric_state(n, rng))
                                     : AnyState(random_symmetric_mixed_state(n, 1 + trial % 3, rng));
    const auto m = Marginals::of(state);
    const auto parts = invariant_parts(m);
    EXPECT_NEAR(parts.direct, parts.aligned, 1e-9);
    const Eigen::Matrix3d t = 0.5 * (m.correlation(0, 1) + m.correlation(0, 1).transpose());
    EXPECT_NEAR(parts.direct, invariant_by_cofactors(m.bloch(0), t), 1e-12);
    EXPECT_GE(parts.t_plus, -1e-10);
    EXPECT_NEAR(t.trace(), 1.0, 1e-10);
  }
}

TEST(InvariantI, LocalUnitaryInvariantUnderCommonRotation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sym = random_symmetric_state(3, rng);
    const Eigen::Matrix2cd u = random_unitary(rng);
    const auto moved = apply_local_unitaries(embed_symmetric(sym), LocalUnitary({u, u, u}));
    EXPECT_NEAR(invariant_I(moved), invariant_I(sym), 1e-10);
  }
}

TEST(InvariantI, RejectsNonSymmetricInput) {
  EXPECT_THROW(invariant_I(fixtures::tilted_product_state()), ValidationError);
  EXPECT_THROW(invariant_I(coherent_spin_state(1, 0.3, 0.0)), ValidationError);
}

TEST(IdentityImp1, Examples) {
  const auto schmidt_check = verify_identity_imp1(fixtures::schmidt_state(kPi / 8));
  ASSERT_TRUE(schmidt_check);
  EXPECT_NEAR(schmidt_check->lhs, -0.5, 1e-12);
  EXPECT_NEAR(schmidt_check->rhs, -0.5, 1e-12);
  const auto css_check = verify_identity_imp1(coherent_spin_state(6, 1.1, 0.4));
  ASSERT_TRUE(css_check);
  EXPECT_NEAR(css_check->lhs, 0.0, 1e-12);
  EXPECT_NEAR(css_check->rhs, 0.0, 1e-12);
  EXPECT_FALSE(verify_identity_imp1(one_axis_twisted_state(2, kPi / 2)).has_value());
}

TEST(IdentityImp1, HoldsOnRandomSymmetricStates) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const AnyState state = trial % 3 ? AnyState(random_symmetric_state(n, rng))
                                     : AnyState(random_symmetric_mixed_state(n, 2, rng));
    const auto check = verify_identity_imp1(state);
    if (!check) continue;
    EXPECT_LT(check->residual, 1e-9);
  }
}

TEST(IdentityImp1, SignOfInvariantTracksSqueezing) {
  std::mt19937_64 rng(7);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 5;
    const auto sym = random_symmetric_state(n, rng);
    const auto r = xi_tilde_symmetric(sym);
    if (std::abs(*r.xi1_tilde - 1) <= 1e-6) continue;
    ++compared;
    EXPECT_EQ(invariant_I(sym) < 0, *r.xi1_tilde < 1) << "trial " << trial;
  }
  EXPECT_GT(compared, 250);
}

TEST(Witness, SchmidtStateIsPairwiseEntangled) {
  const auto w = witness(fixtures::schmidt_state(kPi / 8));
  EXPECT_EQ(w.verdict, Verdict::PairwiseEntangled);
  EXPECT_TRUE(w.squeezing_witness);
  EXPECT_TRUE(w.pairwise_witness);
  EXPECT_NEAR(*w.xi2_tilde, 0.765367, 1e-6);
  EXPECT_NEAR(*w.invariant_I, -0.5, 1e-12);
}

TEST(Witness, CoherentStateIsInconclusive) {
  const auto w = witness(coherent_spin_state(5, 0.8, 2.0));
  EXPECT_EQ(w.verdict, Verdict::Inconclusive);
  EXPECT_NEAR(*w.xi2_tilde, 1.0, 1e-9);
  EXPECT_NEAR(*w.invariant_I, 0.0, 1e-12);
  EXPECT_FALSE(w.squeezing_witness || w.pairwise_witness);
}

TEST(Witness, NonSymmetricEntangledState) {
  const auto w = witness(fixtures::flipped_schmidt_state(kPi / 8));
  EXPECT_EQ(w.verdict, Verdict::Entangled);
  EXPECT_FALSE(w.invariant_I.has_value());
  EXPECT_NE(w.details.find("not exchange symmetric"), std::string::npos);
}

TEST(Witness, UndefinedParametersDowngrade) {
  const auto w = witness(fixtures::bell_state());
  EXPECT_EQ(w.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(w.xi2_tilde.has_value());
  EXPECT_NE(w.details.find("QubitBlochZero"), std::string::npos);
}

TEST(Witness, SeparableStatesAreNeverFlagged) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const auto w = witness(random_separable_state(n, 1 + static_cast<int>(seed % 8), seed));
    EXPECT_NE(w.verdict, Verdict::Entangled) << "seed " << seed;
    EXPECT_FALSE(w.squeezing_witness);
  }
}

TEST(Witness, VerdictNames) {
  EXPECT_EQ(to_string(Verdict::Entangled), "Entangled");
  EXPECT_EQ(to_string(Verdict::PairwiseEntangled), "PairwiseEntangled");
  EXPECT_EQ(to_string(Verdict::Inconclusive), "Inconclusive");
}
