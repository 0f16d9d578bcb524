#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wl1::theory {

/// Prior-quality description of N disjoint support estimates.
///
/// `rhos[i]` is |T_i| / s and `alphas[i]` the fraction of T_i inside the
/// true support. Weights may be supplied in any order; every constant below
/// evaluates on the nonincreasing ordering, moving rho/alpha in lockstep.
struct TheoryParams {
  double a = 3.0;
  std::vector<double> weights;
  std::vector<double> rhos;
  std::vector<double> alphas;

  std::size_t size() const { return weights.size(); }

  /// Throws ContractViolation on length mismatch, out-of-range entries,
  /// a <= 1, or sum rho_i (1 - alpha_i) > a.
  void validate() const;

  /// Copy with weights sorted nonincreasing (stable; rho/alpha follow).
  TheoryParams sorted() const;
};

struct BoundConstants {
  double c0 = 0.0;
  double c1 = 0.0;
  double delta_as = 0.0;
  double delta_a1s = 0.0;
  double kn = 0.0;
};

/// Single-estimate constant w + (1 - w) sqrt(1 + rho - 2 alpha rho).
double b_constant(double w, double rho, double alpha);

/// Multi-weight constant K_N:
///   w_N + (1 - w_1) r_1 + sum_{j>=2} (w_{j-1} - w_j) r_j,
/// where r_j = sqrt(1 + sum_{i>=j} (rho_i - 2 alpha_i rho_i)).
double k_n(const TheoryParams& p);

/// Competing constant sum w_i - (N - 1) + sum (1 - w_i) sqrt(1 + rho_i - 2 alpha_i rho_i).
/// Can be negative.
double gamma_constant(const TheoryParams& p);

/// (a - c^2) / (a + c^2). Passing b, K_N or gamma yields the matching
/// sufficient threshold on delta_{(a+1)s}.
double delta_threshold(double constant, double a);

struct RipCondition {
  bool holds = false;
  /// K_N == 0: the condition degenerates to delta_{(a+1)s} < 1.
  bool degenerate = false;
};

/// delta_as + (a / K^2) delta_a1s < a / K^2 - 1, evaluated in the
/// equivalent form K^2 (1 + delta_as) + a delta_a1s < a so that K = 0 is
/// well defined.
RipCondition rip_condition(double delta_as, double delta_a1s, double kn, double a);

inline bool rip_condition_holds(double delta_as, double delta_a1s, double kn, double a) {
  return rip_condition(delta_as, delta_a1s, kn, a).holds;
}

/// C0' and C1' for the given RIP constants. Throws ConditionViolated when
/// the shared denominator is not positive.
BoundConstants bound_constants(double kn, double a, double delta_as, double delta_a1s);
BoundConstants bound_constants(const TheoryParams& p, double delta_as, double delta_a1s);

/// l1 tail quantities of the true signal entering the error bound.
struct TailNorms {
  double best_s_term_residual = 0.0;   // ||x - x_s||_1
  double outside_estimates = 0.0;      // ||x restricted to (union T_i)^c and T0^c||_1
  std::vector<double> per_estimate;    // ||x restricted to T_i and T0^c||_1, aligned with p.weights
};

/// C0' eps + C1' s^{-1/2} (||x - x_s||_1 sum w + (1 - sum w) t_out
///                          - sum_i sum_{j != i} w_j t_i).
double error_bound(const TheoryParams& p, const BoundConstants& consts, double eps,
                   std::size_t s, const TailNorms& tails);

struct WeightChoice {
  std::vector<double> weights;  // aligned with the input set order
  double kn = 0.0;
};

/// Minimizes K_N over [0,1]^N by enumerating the 2^N binary corners.
/// Ties go to the lexicographically largest weight vector.
WeightChoice optimize_weights(std::span<const double> rhos, std::span<const double> alphas);

inline constexpr std::size_t kMaxOptimizeSets = 20;

/// delta^b(w_1) <= delta^{K_N} <= delta^b(w_N), with b evaluated at the
/// pooled rho = sum rho_i. Requires all alphas equal.
bool proposition_ordering(const TheoryParams& p);

}  // namespace wl1::theory
