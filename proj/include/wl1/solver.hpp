#pragma once

#include <memory>
#include <vector>

#include "wl1/operators.hpp"
#include "wl1/types.hpp"

namespace wl1 {

/// minimize sum_k w_k |x_k| subject to ||A x - y||_2 <= epsilon.
struct RecoveryProblem {
  std::shared_ptr<const MeasurementOperator> op;
  Vector y;
  double epsilon = 0.0;
  Vector weights;

  /// Throws ContractViolation on size mismatch, negative epsilon, or
  /// weights outside [0, 1].
  void validate() const;
};

struct SolverConfig {
  double step_tol = 1e-8;   // relative primal-dual iterate change
  double feas_tol = 1e-6;   // scaled by max(1, ||y||)
  int max_iterations = 50'000;
  /// Bound on ||A||; computed with operator_norm_bound when <= 0.
  double norm_bound = 0.0;
  /// Record the fixed-point residual every `trace_every` iterations.
  bool record_trace = false;
  int trace_every = 1;
};

enum class SolverStatus { converged, max_iterations, stalled };

struct SolverReport {
  Vector solution;
  int iterations = 0;
  /// max(0, ||A x - y|| - epsilon) of the returned solution.
  double primal_feasibility_gap = 0.0;
  double objective = 0.0;
  bool converged = false;
  SolverStatus status = SolverStatus::max_iterations;
  /// Fixed-point residual ||z_{k+1} - z_k||_M of the primal-dual iteration;
  /// nonincreasing for constant steps.
  std::vector<double> trace;
};

/// Per-entry soft threshold sign(v_i) max(|v_i| - t_i, 0).
Vector weighted_shrink(const Vector& v, const Vector& thresholds);

/// Euclidean projection of u onto the ball {z : ||z - center|| <= radius}.
Vector project_ball(const Vector& u, const Vector& center, double radius);

double weighted_l1(const Vector& x, const Vector& weights);

/// Objective tolerance used by optimality checks on a solved problem.
double objective_tolerance(const RecoveryProblem& problem, const SolverConfig& config);

/// Primal-dual (Chambolle-Pock) solve. Deterministic; single-threaded.
SolverReport solve(const RecoveryProblem& problem, const SolverConfig& config = {});

}  // namespace wl1
