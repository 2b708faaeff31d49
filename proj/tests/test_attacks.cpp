#include <gtest/gtest.h>

#include <complex>

#include <Eigen/Dense>

#include "alphaeta/attacks.hpp"

using namespace alphaeta;

namespace {

// Helstrom error of the two bit mixtures from the exact Gram matrix of the
// 2M coherent states: the nonzero spectrum of sum_i c_i |psi_i><psi_i| is the
// spectrum of G^{1/2} C G^{1/2}.
double gram_helstrom(double S, unsigned M) {
  const int n = static_cast<int>(2 * M);
  std::vector<double> phase(n), c(n);
  for (unsigned x = 0; x < 2; ++x)
    for (std::uint32_t z = 0; z < M; ++z) {
      int i = static_cast<int>(x * M + z);
      phase[i] = mapper(x, z, M);
      c[i] = (x == 0 ? 1.0 : -1.0) / M;
    }
  Eigen::MatrixXcd G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      G(a, b) = std::exp(-S + S * std::polar(1.0, phase[b] - phase[a]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXcd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) C(i, i) = c[i];
  Eigen::MatrixXcd T = root * C * root;
  T = 0.5 * (T + T.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> et(T, Eigen::EigenvaluesOnly);
  return 0.5 - 0.25 * et.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST(Fock, CoherentStateNormAndOverlap) {
  double lost = 0.0;
  auto a = coherent_state(9.0, 0.3, default_fock_cutoff(9.0), &lost);
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  EXPECT_LT(lost, 1e-12);
  auto b = coherent_state(9.0, 1.1, default_fock_cutoff(9.0));
  EXPECT_NEAR(std::norm(a.dot(b)), coherent_overlap_sq(9.0, 0.3, 1.1), 1e-10);
}

TEST(IndividualAttack, SingleBasisIsTheTwoStateHelstromBound) {
  for (double S : {0.25, 1.0, 4.0}) {
    auto r = individual_attack_error(S, 1, default_fock_cutoff(S));
    EXPECT_NEAR(r.p_error, helstrom_two_state_error(S), 1e-10) << "S=" << S;
  }
}

TEST(IndividualAttack, MatchesGramMatrixComputation) {
  for (unsigned M : {2u, 4u, 8u, 16u}) {
    auto r = individual_attack_error(4.0, M, default_fock_cutoff(4.0));
    EXPECT_NEAR(r.p_error, gram_helstrom(4.0, M), 1e-8) << "M=" << M;
  }
}

TEST(IndividualAttack, NonDecreasingInMAndRotationInvariant) {
  double prev = 0.0;
  for (unsigned M : {2u, 4u, 8u, 16u, 32u}) {
    auto r = individual_attack_error(4.0, M, default_fock_cutoff(4.0));
    EXPECT_GE(r.p_error, prev - 1e-12);
    EXPECT_NEAR(r.p_error, r.p_error_refined, 1e-4);
    prev = r.p_error;
  }
  std::size_t cutoff = default_fock_cutoff(4.0);
  EXPECT_NEAR(helstrom_mixture_error(4.0, 8, cutoff, 0.0), helstrom_mixture_error(4.0, 8, cutoff, 0.77), 1e-10);
}

TEST(IndividualAttack, RejectsSmallCutoff) {
  EXPECT_THROW(individual_attack_error(4.0, 4, 10), InputError);
}

TEST(HalfCircle, HeterodyneMonteCarloMatchesExactModel) {
  for (double S : {1.0, 100.0}) {
    auto r = eve_halfcircle_error(S, 400000, 11, EveNoiseModel::heterodyne);
    EXPECT_NEAR(r.estimate, r.model_exact, 4 * binomial_sigma(r.model_exact, 400000.0)) << "S=" << S;
  }
  // Small-noise limit: E|delta| / pi with delta ~ N(0, 1/(4S)).
  double S = 1e4;
  double gaussian = std::sqrt(2.0 / kPi) / (2.0 * std::sqrt(S)) / kPi;
  EXPECT_NEAR(halfcircle_error_heterodyne_exact(S), gaussian, 1e-3 * gaussian);
}

TEST(HalfCircle, WedgeApproximationReproducesTwoOverPiRootS) {
  const double S = 100.0;
  auto r = eve_halfcircle_error(S, 400000, 12, EveNoiseModel::wedge_approximation);
  EXPECT_NEAR(r.estimate, 2.0 / (kPi * std::sqrt(S)), 4 * binomial_sigma(r.reference, 400000.0));
}

TEST(HalfCircle, ThreadCountDoesNotChangeTheEstimate) {
  auto a = eve_halfcircle_error(50.0, 100000, 5, EveNoiseModel::heterodyne, 1);
  auto b = eve_halfcircle_error(50.0, 100000, 5, EveNoiseModel::heterodyne, 3);
  EXPECT_EQ(a.errors, b.errors);
}

TEST(HalfCircle, RejectsTooFewTrials) {
  EXPECT_THROW(eve_halfcircle_error(4e4, 1000, 1), InputError);
}

TEST(HalfCircle, BitOfWedges) {
  EXPECT_EQ(half_circle_bit(3u, 4), 0u);
  EXPECT_EQ(half_circle_bit(4u, 4), 1u);
  EXPECT_EQ(half_circle_bit(kPi + 1e-9), 1u);
  EXPECT_EQ(half_circle_bit(kPi - 1e-9), 0u);
}

TEST(Candidates, WindowZeroIsExact) {
  const unsigned M = 16;
  for (std::uint32_t z = 0; z < M; ++z)
    for (unsigned x = 0; x < 2; ++x) {
      auto c = candidate_keystreams(x, mapper_steps(x, z, M), M, 0);
      ASSERT_EQ(c.values.size(), 1u);
      EXPECT_EQ(c.values[0], z);
    }
}

TEST(Candidates, ContainTrueKeyWithinWindow) {
  const unsigned M = 16;
  for (std::uint32_t z = 0; z < M; ++z)
    for (long d = -2; d <= 2; ++d) {
      auto j = static_cast<std::uint32_t>((mapper_steps(1, z, M) + 2 * M + d) % (2 * M));
      auto c = candidate_keystreams(1, j, M, 2, 20.0);
      EXPECT_TRUE(c.contains(z));
      EXPECT_GE(c.values.size(), 2u);
      EXPECT_LE(c.values.size(), 3u);
      double total = 0.0;
      for (double w : c.weights) total += w;
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Candidates, CircularSteps) {
  EXPECT_EQ(circular_steps(0, 7, 4), 1);
  EXPECT_EQ(circular_steps(7, 0, 4), -1);
  EXPECT_EQ(circular_steps(4, 0, 4), -4);
}

TEST(Kpa, NoiselessInstanceRecoversUniqueSeed) {
  LfsrConfig c;
  c.length = 16;
  c.taps = maximal_taps(16);
  c.seed = LfsrConfig::seed_from_hex("b5e3", 16);
  const unsigned M = 16;
  auto z = lfsr_symbols(c, 8, 4);
  KpaInstance inst;
  Rng rng = make_rng(1, "test.kpa");
  for (std::size_t i = 0; i < z.size(); ++i) {
    auto x = static_cast<std::uint8_t>(random_bit(rng));
    inst.known_bits.push_back(x);
    inst.wedges.push_back(mapper_steps(x, z[i], M));
  }
  auto rep = kpa_lfsr_search(inst, c, M, 0);
  ASSERT_EQ(rep.recovered_seeds.size(), 1u);
  EXPECT_EQ(rep.recovered_seeds[0], c.seed);
  EXPECT_EQ(rep.work, 1u);
  EXPECT_EQ(rep.pivot_symbols, (std::vector<std::size_t>{1, 2, 3, 4}));

  auto wide = kpa_lfsr_search(inst, c, M, 1);
  EXPECT_TRUE(wide.contains(c.seed));
  EXPECT_LE(wide.work, 81u);
}

TEST(Kpa, RejectsUnderdeterminedInstances) {
  LfsrConfig c;
  c.length = 16;
  c.taps = maximal_taps(16);
  KpaInstance inst{{0, 1}, {0, 1}};
  EXPECT_THROW(kpa_lfsr_search(inst, c, 16, 1), InputError);
}

TEST(Kpa, SelfTestRecallsPlantedSeeds) {
  KpaHarnessConfig cfg;
  cfg.key_length = 12;
  cfg.trials = 20;
  auto s = kpa_self_test(cfg, 3);
  EXPECT_EQ(s.recalled, s.in_window);
  EXPECT_GE(s.recalled, 19u);
  EXPECT_LE(s.max_work, 27u);
  EXPECT_FALSE(s.window_too_small);
}

TEST(Kpa, ZeroWindowAtLowEnergyIsFlagged) {
  KpaHarnessConfig cfg;
  cfg.key_length = 8;
  cfg.S = 2.0;
  cfg.window = 0;
  cfg.trials = 20;
  auto s = kpa_self_test(cfg, 4);
  EXPECT_TRUE(s.window_too_small);
}

TEST(EmpiricalGammaLambda, NoRandomizationAtHighEnergy) {
  auto r = empirical_gamma_lambda(1e4, 4, 8 * 20000, 1e-3, 1);
  EXPECT_EQ(r.gamma_emp, 0);
  EXPECT_EQ(r.lambda_emp, 0);
  EXPECT_TRUE(r.relation_holds);
}

TEST(EmpiricalGammaLambda, RejectsTooFewTrials) {
  EXPECT_THROW(empirical_gamma_lambda(100, 64, 1000, 1e-3, 1), InputError);
}

TEST(WedgeDecode, OwnWedgeDecodesCorrectly) {
  for (unsigned M : {2u, 4u, 8u, 32u})
    for (std::uint32_t z = 0; z < M; ++z)
      for (unsigned x = 0; x < 2; ++x) EXPECT_EQ(wedge_decode(mapper_steps(x, z, M), z, M), x);
}

TEST(WedgeDecode, WitnessAtFourBases) {
  auto r = nishioka_certificates(4);
  ASSERT_TRUE(r.witness.has_value());
  // first in (z, j, j') order: wedge 0 is the bit-0 point of basis 0, wedge 3
  // sits one step from the bit-1 point at 4, both on the upper half circle
  EXPECT_EQ(r.witness->j, 0u);
  EXPECT_EQ(r.witness->j_other, 3u);
  EXPECT_EQ(r.witness->z, 0u);
  EXPECT_EQ(r.witness->F, 0u);
  EXPECT_EQ(r.witness->F_other, 1u);
  EXPECT_EQ(half_circle_bit(r.witness->j, 4), half_circle_bit(r.witness->j_other, 4));
  EXPECT_TRUE(r.g_depends_on_j.has_value());
  EXPECT_TRUE(r.g_depends_on_z.has_value());
}

TEST(WedgeDecode, ExactFailureMatchesMonteCarlo) {
  auto r = nishioka_reduction_demo(4, 0.5, 400000, 9);
  EXPECT_NEAR(r.mc_failure_rate, r.exact_failure, 4 * binomial_sigma(r.exact_failure, 400000.0));
  EXPECT_NEAR(wedge_decode_failure_exact(1.0, 256), q_function(2.0), 0.01 * q_function(2.0));
}
