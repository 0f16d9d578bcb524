#include "wl1/solver.hpp"

#include <algorithm>
#include <cmath>

#include "wl1/errors.hpp"

namespace wl1 {

namespace {

constexpr int kRefreshEvery = 64;   // recompute A x exactly to stop drift
constexpr double kStepProduct = 0.99;  // tau sigma L^2

double feasibility_gap(const Vector& ax, const Vector& y, double eps) {
  return std::max(0.0, (ax - y).norm() - eps);
}

// Moves x to the nearest point whose residual lies on the ball; keeps x when
// A has no usable pseudo-inverse or nothing improves. ax is recomputed.
void restore_feasibility(const MeasurementOperator& op, const Vector& y, double eps, Vector& x, Vector& ax) {
  op.apply(x, ax);
  if ((ax - y).norm() <= eps) return;
  const Vector target = project_ball(ax, y, eps);
  if (auto d = op.min_norm_preimage(ax - target)) {
    Vector restored = x - *d;
    Vector ar = op.apply(restored);
    if (feasibility_gap(ar, y, eps) < feasibility_gap(ax, y, eps)) {
      x.swap(restored);
      ax.swap(ar);
    }
  }
}

}  // namespace

void RecoveryProblem::validate() const {
  if (!op) throw ContractViolation("RecoveryProblem: missing operator");
  if (static_cast<std::size_t>(y.size()) != op->rows()) {
    throw ContractViolation("RecoveryProblem: y length must equal operator rows");
  }
  if (static_cast<std::size_t>(weights.size()) != op->cols()) {
    throw ContractViolation("RecoveryProblem: weights length must equal operator columns");
  }
  if (!(epsilon >= 0.0)) throw ContractViolation("RecoveryProblem: negative epsilon");
  if ((weights.array() < 0.0).any() || (weights.array() > 1.0).any()) {
    throw ContractViolation("RecoveryProblem: weights must lie in [0,1]");
  }
}

Vector weighted_shrink(const Vector& v, const Vector& thresholds) {
  return v.array().sign() * (v.array().abs() - thresholds.array()).max(0.0);
}

Vector project_ball(const Vector& u, const Vector& center, double radius) {
  const Vector d = u - center;
  const double dist = d.norm();
  if (dist <= radius) return u;
  return center + (radius / dist) * d;
}

double weighted_l1(const Vector& x, const Vector& weights) {
  return (weights.array() * x.array().abs()).sum();
}

double objective_tolerance(const RecoveryProblem& problem, const SolverConfig& config) {
  // Scale of a weighted-l1 objective attained by vectors of norm ~ ||y||.
  const double scale = std::max(1.0, problem.y.norm() * std::sqrt(static_cast<double>(problem.op->cols())));
  return 10.0 * config.step_tol * scale;
}

SolverReport solve(const RecoveryProblem& problem, const SolverConfig& config) {
  problem.validate();
  const MeasurementOperator& op = *problem.op;
  const Vector& y = problem.y;
  const Vector& w = problem.weights;
  const double eps = problem.epsilon;
  const auto n = static_cast<Eigen::Index>(op.cols());

  SolverReport report;
  const double ynorm = y.norm();
  if (ynorm <= eps) {
    // Zero is feasible and has zero objective.
    report.solution = Vector::Zero(n);
    report.converged = true;
    report.status = SolverStatus::converged;
    return report;
  }

  const double lipschitz = config.norm_bound > 0.0 ? config.norm_bound : operator_norm_bound(op);
  if (!(lipschitz > 0.0)) throw ContractViolation("solve: operator norm must be positive");

  // Balance primal (~||y||/L) against dual (~sqrt(m)/L) magnitudes; this
  // also makes the iteration equivariant under (y, eps) -> (c y, c eps).
  const double ratio = ynorm / std::sqrt(static_cast<double>(op.rows()));
  const double tau = std::sqrt(kStepProduct) * ratio / lipschitz;
  const double sigma = std::sqrt(kStepProduct) / (ratio * lipschitz);
  const Vector thresholds = tau * w;

  Vector x = op.apply_adjoint(y);
  Vector ax = op.apply(x);
  Vector p = Vector::Zero(static_cast<Eigen::Index>(op.rows()));
  Vector atp = Vector::Zero(n);
  Vector x_next(n), x_bar(n), ax_bar, ax_next, v, p_next;

  const double feas_limit = config.feas_tol * std::max(1.0, ynorm);
  const int stall_mark = std::max(1, config.max_iterations * 9 / 10);
  double gap_at_mark = -1.0;
  double gap = feasibility_gap(ax, y, eps);

  int k = 0;
  bool done = false;
  while (k < config.max_iterations && !done) {
    ++k;
    x_next = weighted_shrink(x - tau * atp, thresholds);
    x_bar = 2.0 * x_next - x;
    op.apply(x_bar, ax_bar);
    ax_next = 0.5 * (ax_bar + ax);
    if (k % kRefreshEvery == 0) op.apply(x_next, ax_next);

    v = p + sigma * ax_bar;
    p_next = v - sigma * project_ball(v / sigma, y, eps);

    const double dx = (x_next - x).norm();
    const double dp = (p_next - p).norm();
    if (config.record_trace && (k - 1) % std::max(1, config.trace_every) == 0) {
      const double cross = (ax_next - ax).dot(p_next - p);
      report.trace.push_back(std::sqrt(std::max(0.0, dx * dx / tau + dp * dp / sigma - 2.0 * cross)));
    }

    x.swap(x_next);
    ax.swap(ax_next);
    p.swap(p_next);
    op.apply_adjoint(p, atp);

    gap = feasibility_gap(ax, y, eps);
    if (k == stall_mark) gap_at_mark = gap;
    const double rel_x = dx / std::max(x.norm(), 1e-300);
    const double rel_p = dp / std::max(p.norm(), 1e-300);
    if (rel_x < config.step_tol && rel_p < config.step_tol) {
      done = gap <= feas_limit;
      if (!done) {
        Vector xr = x, axr;
        restore_feasibility(op, y, eps, xr, axr);
        done = feasibility_gap(axr, y, eps) <= feas_limit;
      }
    }
  }

  report.iterations = k;
  report.converged = done;
  if (done) {
    report.status = SolverStatus::converged;
  } else if (gap_at_mark >= 0.0 && gap > feas_limit && gap >= gap_at_mark) {
    report.status = SolverStatus::stalled;
  } else {
    report.status = SolverStatus::max_iterations;
  }

  restore_feasibility(op, y, eps, x, ax);

  report.primal_feasibility_gap = feasibility_gap(ax, y, eps);
  report.objective = weighted_l1(x, w);
  report.solution = std::move(x);
  return report;
}

}  // namespace wl1
