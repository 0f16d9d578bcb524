#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "wl1/errors.hpp"
#include "wl1/theory.hpp"

using namespace wl1::theory;

namespace {

TheoryParams params(std::vector<double> w, std::vector<double> rho, std::vector<double> alpha, double a = 3.0) {
  TheoryParams p;
  p.a = a;
  p.weights = std::move(w);
  p.rhos = std::move(rho);
  p.alphas = std::move(alpha);
  return p;
}

// K_N rewritten as r_1 - sum_j w_j (r_j - r_{j+1}) with r_{N+1} = 1,
// weights already nonincreasing.
double k_n_telescoped(const TheoryParams& p) {
  const std::size_t n = p.size();
  std::vector<double> r(n + 1, 1.0);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc += p.rhos[j] - 2.0 * p.alphas[j] * p.rhos[j];
    r[j] = std::sqrt(1.0 + acc);
  }
  double k = r[0];
  for (std::size_t j = 0; j < n; ++j) k -= p.weights[j] * (r[j] - r[j + 1]);
  return k;
}

TheoryParams random_params(std::mt19937_64& rng, std::size_t n, double alpha_fixed = -1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TheoryParams p;
  p.a = 3.0;
  for (std::size_t i = 0; i < n; ++i) {
    p.weights.push_back(u(rng));
    p.rhos.push_back(u(rng) / static_cast<double>(n));
    p.alphas.push_back(alpha_fixed >= 0.0 ? alpha_fixed : u(rng));
  }
  return p;
}

}  // namespace

TEST(BConstant, Examples) {
  EXPECT_DOUBLE_EQ(b_constant(1.0, 0.7, 0.3), 1.0);
  EXPECT_NEAR(b_constant(0.0, 1.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(b_constant(0.5, 1.0, 0.5), 1.0, 1e-15);
}

TEST(BConstant, NegativeRadicandThrows) {
  // 1 + rho - 2 alpha rho < 0 needs rho > 1 with alpha = 1
  EXPECT_THROW(b_constant(0.5, 2.0, 1.0), wl1::DomainError);
}

TEST(KN, QuotedExample) {
  const auto p = params({1.0, 0.0}, {0.5, 0.5}, {0.1, 0.9});
  EXPECT_NEAR(k_n(p), std::sqrt(0.6), 1e-12);
}

TEST(KN, AllOnesIsOne) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 5; ++n) {
    auto p = random_params(rng, n);
    p.weights.assign(n, 1.0);
    EXPECT_NEAR(k_n(p), 1.0, 1e-12);
  }
}

TEST(KN, EqualWeightsReduceToSingleEstimate) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double w = u(rng), alpha = u(rng), r1 = 0.5 * u(rng), r2 = 0.5 * u(rng);
    const auto p = params({w, w}, {r1, r2}, {alpha, alpha});
    EXPECT_NEAR(k_n(p), b_constant(w, r1 + r2, alpha), 1e-12);
  }
}

TEST(KN, MatchesTelescopedForm) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_params(rng, 1 + t % 4).sorted();
    EXPECT_NEAR(k_n(p), k_n_telescoped(p), 1e-12);
  }
}

TEST(KN, UnorderedWeightsAreSorted) {
  const auto ordered = params({0.9, 0.4, 0.1}, {0.2, 0.3, 0.4}, {0.8, 0.3, 0.6});
  const auto shuffled = params({0.1, 0.9, 0.4}, {0.4, 0.2, 0.3}, {0.6, 0.8, 0.3});
  EXPECT_NEAR(k_n(ordered), k_n(shuffled), 1e-15);
}

TEST(KN, MergingEqualWeightSetsLeavesValueUnchanged) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double w1 = 0.5 + 0.5 * u(rng), w2 = 0.5 * u(rng), alpha = u(rng);
    const double r1 = 0.4 * u(rng), r2 = 0.4 * u(rng), r3 = 0.4 * u(rng);
    const auto three = params({w1, w2, w2}, {r1, r2, r3}, {u(rng), alpha, alpha});
    const auto two = params({w1, w2}, {r1, r2 + r3}, {three.alphas[0], alpha});
    EXPECT_NEAR(k_n(three), k_n(two), 1e-12);
  }
}

TEST(KN, Nonnegative) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    EXPECT_GE(k_n(random_params(rng, 1 + t % 6)), 0.0);
  }
}

TEST(Gamma, SingleEstimateIsB) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_params(rng, 1);
    EXPECT_NEAR(gamma_constant(p), b_constant(p.weights[0], p.rhos[0], p.alphas[0]), 1e-12);
  }
}

TEST(Gamma, Examples) {
  EXPECT_NEAR(gamma_constant(params({1, 1, 1}, {0.2, 0.3, 0.1}, {0.2, 0.9, 0.5})), 1.0, 1e-12);
  // 1 - 1 + 0.5 sqrt(0.5) + 0.5 sqrt(0.5)
  EXPECT_NEAR(gamma_constant(params({0.5, 0.5}, {0.5, 0.5}, {1, 1})), std::sqrt(0.5), 1e-12);
}

TEST(Gamma, CanBeNegative) {
  // needs estimates claiming more true indices than s
  const auto p = params({0, 0, 0}, {0.9, 0.9, 0.9}, {1, 1, 1});
  EXPECT_LT(gamma_constant(p), 0.0);
  EXPECT_TRUE(std::isfinite(delta_threshold(gamma_constant(p), 3.0)));
}

TEST(DeltaThreshold, Examples) {
  EXPECT_DOUBLE_EQ(delta_threshold(1.0, 3.0), 0.5);
  EXPECT_DOUBLE_EQ(delta_threshold(0.0, 3.0), 1.0);
  EXPECT_NEAR(delta_threshold(std::sqrt(3.0), 3.0), 0.0, 1e-15);
}

TEST(DeltaThreshold, StrictlyDecreasingInConstant) {
  double prev = delta_threshold(0.0, 3.0);
  for (int i = 1; i <= 300; ++i) {
    const double d = delta_threshold(0.01 * i, 3.0);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(RipCondition, Examples) {
  EXPECT_TRUE(rip_condition_holds(0.0, 0.0, 1.0, 3.0));
  EXPECT_FALSE(rip_condition_holds(0.9, 0.95, 1.0, 3.0));
  // delta_3s + 3 delta_4s just below 2
  EXPECT_TRUE(rip_condition_holds(0.5, 0.5 - 1e-9, 1.0, 3.0));
  EXPECT_FALSE(rip_condition_holds(0.5, 0.5 + 1e-9, 1.0, 3.0));
}

TEST(RipCondition, ZeroConstantIsDegenerate) {
  const auto c = rip_condition(0.99, 0.5, 0.0, 3.0);
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.degenerate);
  EXPECT_FALSE(rip_condition(0.0, 1.0, 0.0, 3.0).holds);
}

TEST(BoundConstants, ZeroDeltas) {
  const double r = 1.0 / std::sqrt(3.0);
  const auto c = bound_constants(1.0, 3.0, 0.0, 0.0);
  // two evaluation paths: closed form and the definition with den = sqrt(1) - K sqrt(1)/sqrt(a)
  EXPECT_NEAR(c.c0, 2.0 * (1.0 + r) / (1.0 - r), 1e-12);
  EXPECT_NEAR(c.c1, (2.0 / std::sqrt(3.0)) * 2.0 / (1.0 - r), 1e-12);
  const double den = std::sqrt(1.0 - 0.0) - 1.0 * std::sqrt(1.0 + 0.0) / std::sqrt(3.0);
  EXPECT_NEAR(c.c0, 2.0 * (1.0 + 1.0 / std::sqrt(3.0)) / den, 1e-12);
}

TEST(BoundConstants, SingleEstimateMatchesB) {
  const double b = b_constant(0.5, 0.8, 0.7);
  const auto single = bound_constants(params({0.5}, {0.8}, {0.7}), 0.1, 0.2);
  const auto direct = bound_constants(b, 3.0, 0.1, 0.2);
  EXPECT_NEAR(single.c0, direct.c0, 1e-12);
  EXPECT_NEAR(single.c1, direct.c1, 1e-12);
}

TEST(BoundConstants, NonpositiveDenominatorThrows) {
  EXPECT_THROW(bound_constants(std::sqrt(3.0), 3.0, 0.0, 0.0), wl1::ConditionViolated);
}

TEST(ErrorBound, ExactlySparseNoiselessIsZero) {
  const auto p = params({0.3}, {0.5}, {0.8});
  const auto c = bound_constants(p, 0.1, 0.1);
  TailNorms t;
  t.per_estimate = {0.0};
  EXPECT_DOUBLE_EQ(error_bound(p, c, 0.0, 4, t), 0.0);
}

TEST(ErrorBound, UnweightedReducesToClassical) {
  const auto p = params({1.0}, {0.5}, {0.5});
  const auto c = bound_constants(p, 0.1, 0.2);
  TailNorms t;
  t.best_s_term_residual = 0.7;
  t.outside_estimates = 0.4;
  t.per_estimate = {0.3};
  EXPECT_NEAR(error_bound(p, c, 0.05, 4, t), c.c0 * 0.05 + c.c1 * 0.7 / 2.0, 1e-12);
}

TEST(ErrorBound, HandEvaluated) {
  const auto p = params({0.6, 0.2}, {0.5, 0.25}, {0.75, 0.5});
  const auto c = bound_constants(p, 0.05, 0.1);
  TailNorms t;
  t.best_s_term_residual = 1.0;
  t.outside_estimates = 0.5;
  t.per_estimate = {0.2, 0.3};
  // omega = 0.8: 0.8 + 0.2*0.5 - (0.2*0.2 + 0.6*0.3) = 0.68
  EXPECT_NEAR(error_bound(p, c, 0.1, 9, t), 0.1 * c.c0 + c.c1 * 0.68 / 3.0, 1e-12);
}

TEST(OptimizeWeights, QuotedExample) {
  const std::vector<double> rho{0.5, 0.5}, alpha{0.1, 0.9};
  const auto best = optimize_weights(rho, alpha);
  EXPECT_EQ(best.weights, (std::vector<double>{1.0, 0.0}));
  EXPECT_NEAR(best.kn, std::sqrt(0.6), 1e-12);
}

TEST(OptimizeWeights, PerfectPriorPicksZero) {
  const std::vector<double> rho{1.0}, alpha{1.0};
  const auto best = optimize_weights(rho, alpha);
  EXPECT_EQ(best.weights, std::vector<double>{0.0});
  EXPECT_NEAR(best.kn, 0.0, 1e-15);
}

TEST(OptimizeWeights, MatchesGridSearch) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> cases = {{{0.3, 0.3}, {0.5, 0.5}}};
  for (int t = 0; t < 20; ++t) cases.push_back({{0.5 * u(rng), 0.5 * u(rng)}, {u(rng), u(rng)}});
  for (const auto& [rho, alpha] : cases) {
    const auto best = optimize_weights(rho, alpha);
    double grid = 1e300;
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        grid = std::min(grid, k_n(params({0.01 * i, 0.01 * j}, rho, alpha)));
      }
    }
    EXPECT_NEAR(best.kn, grid, 1e-12);
  }
}

TEST(OptimizeWeights, ThreeSetsMatchCoarseGrid) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const std::vector<double> rho{0.4 * u(rng), 0.4 * u(rng), 0.4 * u(rng)}, alpha{u(rng), u(rng), u(rng)};
    const auto best = optimize_weights(rho, alpha);
    double grid = 1e300;
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j)
        for (int k = 0; k <= 20; ++k) grid = std::min(grid, k_n(params({0.05 * i, 0.05 * j, 0.05 * k}, rho, alpha)));
    EXPECT_LE(best.kn, grid + 1e-12);
  }
}

TEST(OptimizeWeights, TooManySetsThrows) {
  const std::vector<double> v(kMaxOptimizeSets + 1, 0.01);
  EXPECT_THROW(optimize_weights(v, v), wl1::UnsupportedSize);
}

TEST(Proposition, Examples) {
  EXPECT_TRUE(proposition_ordering(params({0.9, 0.5, 0.1}, {0.2, 0.3, 0.1}, {1, 1, 1})));
  EXPECT_FALSE(proposition_ordering(params({0.9, 0.1}, {0.3, 0.3}, {0, 0})));
  EXPECT_TRUE(proposition_ordering(params({0.4, 0.4}, {0.3, 0.3}, {0.2, 0.2})));
  EXPECT_THROW(proposition_ordering(params({0.9, 0.1}, {0.3, 0.3}, {0.2, 0.7})), wl1::ContractViolation);
}

TEST(Proposition, HoldsExactlyFromOneHalf) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int ai = 0; ai <= 10; ++ai) {
    const double alpha = 0.1 * ai;
    for (int t = 0; t < 200; ++t) {
      auto p = random_params(rng, 2 + t % 3, alpha);
      EXPECT_EQ(proposition_ordering(p), alpha >= 0.5) << "alpha " << alpha;
    }
  }
}

TEST(TheoryParams, Validate) {
  EXPECT_NO_THROW(params({0.5}, {1.0}, {0.5}).validate());
  EXPECT_THROW(params({0.5, 0.2}, {1.0}, {0.5}).validate(), wl1::ContractViolation);
  EXPECT_THROW(params({1.5}, {1.0}, {0.5}).validate(), wl1::ContractViolation);
  EXPECT_THROW(params({0.5}, {1.0}, {0.5}, 1.0).validate(), wl1::ContractViolation);
  EXPECT_THROW(params({0.5}, {4.0}, {0.0}).validate(), wl1::ContractViolation);
}
