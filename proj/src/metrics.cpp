#include "wl1/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "wl1/errors.hpp"
#include "wl1/index_set.hpp"

namespace wl1 {

double relative_error(const Vector& x, const Vector& xhat) {
  if (x.size() != xhat.size()) throw ContractViolation("relative_error: size mismatch");
  const double nx = x.norm();
  if (nx == 0.0) throw ContractViolation("relative_error: zero reference signal");
  return (x - xhat).norm() / nx;
}

double psnr(const Vector& x, const Vector& xhat, std::size_t pixel_count) {
  if (x.size() != xhat.size()) throw ContractViolation("psnr: size mismatch");
  const double err = (x - xhat).squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(pixel_count) * 255.0 * 255.0 / err);
}

namespace {

IndexSet union_from(const std::vector<IndexSet>& sets, std::size_t j) {
  IndexSet u;
  for (std::size_t i = j; i < sets.size(); ++i) u = set_union(u, sets[i]);
  return u;
}

// stable nonincreasing order of weights
std::vector<std::size_t> weight_order(const std::vector<double>& w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return order;
}

}  // namespace

ConeConstraintContext make_cone_context(const Vector& x, const Vector& xhat,
                                        const WeightedPrior& prior, std::size_t s) {
  if (x.size() != xhat.size() || static_cast<std::size_t>(x.size()) != prior.n) {
    throw ContractViolation("make_cone_context: size mismatch");
  }
  if (prior.sets.empty()) throw ContractViolation("make_cone_context: need at least one set");
  prior.validate();

  ConeConstraintContext ctx;
  ctx.h = xhat - x;
  ctx.t0 = top_k_magnitude(x, s);
  for (std::size_t i : weight_order(prior.weights)) {
    ctx.sets.push_back(prior.sets[i]);
    ctx.weights.push_back(prior.weights[i]);
  }
  ctx.omega = std::accumulate(ctx.weights.begin(), ctx.weights.end(), 0.0);

  const IndexSet t0c = set_complement(ctx.t0, prior.n);
  const IndexSet outside = set_difference(t0c, union_from(ctx.sets, 0));
  ctx.d = ctx.omega * l1_norm_on(x, t0c) + (1.0 - ctx.omega) * l1_norm_on(x, outside);
  for (std::size_t i = 0; i < ctx.sets.size(); ++i) {
    ctx.d -= (ctx.omega - ctx.weights[i]) * l1_norm_on(x, set_intersection(ctx.sets[i], t0c));
  }
  return ctx;
}

IndexSet cone_tail_set(const ConeConstraintContext& ctx, std::size_t j) {
  if (j >= ctx.sets.size()) throw ContractViolation("cone_tail_set: index out of range");
  const IndexSet u = union_from(ctx.sets, j);
  return set_difference(set_union(ctx.t0, u), set_intersection(u, ctx.t0));
}

double cone_residual(const ConeConstraintContext& ctx) {
  const std::size_t n = static_cast<std::size_t>(ctx.h.size());
  const std::size_t N = ctx.sets.size();
  if (N == 0 || ctx.weights.size() != N) throw ContractViolation("cone_residual: malformed sets");
  if (!pairwise_disjoint(ctx.sets)) throw ContractViolation("cone_residual: sets overlap");
  for (std::size_t i = 1; i < N; ++i) {
    if (ctx.weights[i] > ctx.weights[i - 1]) throw ContractViolation("cone_residual: weights must be nonincreasing");
  }

  double rhs = ctx.weights[N - 1] * l1_norm_on(ctx.h, ctx.t0) +
               (1.0 - ctx.weights[0]) * l1_norm_on(ctx.h, cone_tail_set(ctx, 0)) + 2.0 * ctx.d;
  for (std::size_t j = 1; j < N; ++j) {
    rhs += (ctx.weights[j - 1] - ctx.weights[j]) * l1_norm_on(ctx.h, cone_tail_set(ctx, j));
  }
  const double lhs = l1_norm_on(ctx.h, set_complement(ctx.t0, n));
  return rhs - lhs;
}

theory::TailNorms tail_norms(const Vector& x, const WeightedPrior& prior, std::size_t s) {
  const IndexSet t0c = set_complement(top_k_magnitude(x, s), prior.n);
  theory::TailNorms t;
  t.best_s_term_residual = l1_norm_on(x, t0c);
  t.outside_estimates = l1_norm_on(x, set_difference(t0c, union_from(prior.sets, 0)));
  for (const auto& set : prior.sets) t.per_estimate.push_back(l1_norm_on(x, set_intersection(set, t0c)));
  return t;
}

BoundCheck theorem_bound_check(const BoundCheckInstance& inst, double delta_as, double delta_a1s) {
  BoundCheck out;
  out.actual = (inst.xhat - inst.x).norm();
  if (inst.s == 0) throw ContractViolation("theorem_bound_check: s must be positive");

  WeightedPrior prior = inst.prior;
  prior.attach_truth(top_k_magnitude(inst.x, inst.s));
  theory::TheoryParams p = prior.theory_params(inst.a);
  try {
    p.validate();
  } catch (const ContractViolation&) {
    out.skipped = true;
    return out;
  }
  out.kn = theory::k_n(p);
  if (!(delta_as >= 0.0 && delta_a1s < 1.0) ||
      !theory::rip_condition_holds(delta_as, delta_a1s, out.kn, inst.a)) {
    out.skipped = true;
    return out;
  }
  theory::BoundConstants c;
  try {
    c = theory::bound_constants(out.kn, inst.a, delta_as, delta_a1s);
  } catch (const ConditionViolated&) {
    out.skipped = true;
    return out;
  }
  out.bound = theory::error_bound(p, c, inst.epsilon, inst.s, tail_norms(inst.x, prior, inst.s));
  out.holds = out.actual <= out.bound + inst.slack;
  return out;
}

}  // namespace wl1
