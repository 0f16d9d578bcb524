#pragma once

#include <cstddef>
#include <vector>

#include "wl1/models.hpp"
#include "wl1/theory.hpp"
#include "wl1/types.hpp"

namespace wl1 {

/// ||x - xhat|| / ||x||. Throws ContractViolation for x = 0.
double relative_error(const Vector& x, const Vector& xhat);

/// 10 log10(N 255^2 / ||x - xhat||^2) with N = pixel_count; +inf when equal.
double psnr(const Vector& x, const Vector& xhat, std::size_t pixel_count);

/// Ingredients of the cone constraint on the error h = xhat - x.
/// Sets are held with weights sorted nonincreasing.
struct ConeConstraintContext {
  Vector h;
  IndexSet t0;                   // support of the best s-term approximation
  std::vector<IndexSet> sets;
  std::vector<double> weights;
  double omega = 0.0;            // sum of weights
  /// omega ||x_{T0^c}||_1 + (1 - omega) ||x_{T^c cap T0^c}||_1
  ///   - sum_i (omega - w_i) ||x_{T_i cap T0^c}||_1
  double d = 0.0;
};

/// T0 = indices of the s largest |x_i|. Throws ContractViolation on
/// malformed or overlapping sets.
ConeConstraintContext make_cone_context(const Vector& x, const Vector& xhat,
                                        const WeightedPrior& prior, std::size_t s);

/// S_j = (T0 cup U_j) minus (U_j cap T0), U_j = union_{i>=j} T_i; the set
/// difference binds last.
IndexSet cone_tail_set(const ConeConstraintContext& ctx, std::size_t j);

/// RHS - LHS of
///   ||h_{T0^c}||_1 <= w_N ||h_{T0}||_1 + (1 - w_1) ||h_{S_1}||_1
///                     + sum_{j>=2} (w_{j-1} - w_j) ||h_{S_j}||_1 + 2 D.
double cone_residual(const ConeConstraintContext& ctx);

/// Tail norms of x entering the error bound, aligned with prior.sets.
theory::TailNorms tail_norms(const Vector& x, const WeightedPrior& prior, std::size_t s);

struct BoundCheckInstance {
  Vector x;
  Vector xhat;
  WeightedPrior prior;
  std::size_t s = 0;
  double epsilon = 0.0;
  double a = 3.0;
  /// Absolute allowance on ||xhat - x|| for solver inexactness.
  double slack = 0.0;
};

struct BoundCheck {
  bool skipped = false;  // RIP condition or prior hypothesis not met
  bool holds = false;
  double bound = 0.0;
  double actual = 0.0;
  double kn = 0.0;
};

/// Error bound of the multi-weight theorem against the realized error.
/// rho/alpha are measured against the top-s support of x.
BoundCheck theorem_bound_check(const BoundCheckInstance& inst, double delta_as, double delta_a1s);

}  // namespace wl1
