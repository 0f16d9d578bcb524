#include <algorithm>
#include <cmath>

#include "wl1/errors.hpp"
#include "wl1/experiments.hpp"
#include "wl1/index_set.hpp"
#include "wl1/metrics.hpp"
#include "wl1/models.hpp"
#include "wl1/operators.hpp"
#include "wl1/random.hpp"
#include "wl1/rip.hpp"

namespace wl1 {

namespace {

constexpr std::uint64_t kTinyStream = 5;

struct TinyInstance {
  std::shared_ptr<const MeasurementOperator> op;
  BoundCheckInstance check;
  Vector y;
};

Matrix random_orthogonal(std::size_t n, Rng& rng) {
  Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < g.cols(); ++j) g.col(j) = standard_normal(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
}

std::size_t uniform(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random disjoint estimates mixing true and false indices, mostly accurate.
WeightedPrior random_prior(std::size_t n, const IndexSet& t0, Rng& rng) {
  const std::size_t N = uniform(1, 2, rng);
  IndexSet free_in = t0, free_out = set_complement(t0, n);
  WeightedPrior prior;
  prior.n = n;
  static const double kWeights[] = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t n_in = uniform(0, free_in.size(), rng);
    const std::size_t n_out = uniform(0, std::min<std::size_t>(2, free_out.size()), rng);
    IndexSet a = sample_from(free_in, n_in, rng), b = sample_from(free_out, n_out, rng);
    free_in = set_difference(free_in, a);
    free_out = set_difference(free_out, b);
    prior.sets.push_back(set_union(a, b));
    prior.weights.push_back(kWeights[uniform(0, 5, rng)]);
  }
  return prior;
}

TinyInstance make_instance(const ExperimentSpec& spec, std::size_t i) {
  Rng rng = make_rng(spec.seed, {kTinyStream, i});
  TinyInstance inst;
  auto& c = inst.check;
  c.s = 1 + i % 2;
  c.a = c.s == 1 ? (uniform(0, 1, rng) ? 3.0 : 2.0) : (uniform(0, 1, rng) ? 2.0 : 1.5);
  const std::size_t n = uniform(12, 18, rng);
  // families: orthonormal, orthonormal plus a Gaussian perturbation, Gaussian
  const std::size_t family = i % 3;
  const std::size_t m = family == 2 ? uniform(n - 3, n, rng) : n;
  if (family == 2) {
    inst.op = std::make_shared<const MeasurementOperator>(gaussian_operator(m, n, rng()));
  } else {
    Matrix a = random_orthogonal(n, rng);
    if (family == 1) {
      const double eta = std::uniform_real_distribution<double>(0.02, 0.3)(rng);
      a += eta * gaussian_operator(n, n, rng()).to_dense();
    }
    inst.op = std::make_shared<const MeasurementOperator>(MeasurementOperator::dense(std::move(a)));
  }

  SparseSignal sig = gen_sparse_signal(n, c.s, rng);
  c.x = sig.values;
  if (uniform(0, 1, rng)) {
    // compressible: small dense tail off the support
    Vector tail = 0.01 * standard_normal(n, rng);
    for (std::size_t k : sig.support) tail(static_cast<Eigen::Index>(k)) = 0.0;
    c.x += tail;
  }
  Vector z = Vector::Zero(static_cast<Eigen::Index>(m));
  if (uniform(0, 1, rng)) z = spec.sigma * standard_normal(m, rng);
  inst.y = inst.op->apply(c.x) + z;
  c.epsilon = z.norm();
  c.prior = random_prior(n, top_k_magnitude(c.x, c.s), rng);
  c.slack = 1e-5 * std::max(1.0, c.x.norm());
  return inst;
}

}  // namespace

CsvTable tiny_theorem_table(const ExperimentSpec& spec) {
  return CsvTable(spec, {"instance", "n", "m", "s", "a", "sets", "k", "delta_as", "delta_a1s", "epsilon",
                         "converged", "qualifying", "bound", "actual", "holds"});
}

TinyTheoremReport run_tiny_theorem(const ExperimentSpec& spec, CsvTable* table) {
  if (spec.instances == 0) throw ContractViolation("run_tiny_theorem: need instances");
  TinyTheoremReport report;
  report.instances = spec.instances;
  const SolverConfig cfg = spec.solver_config();

  for (std::size_t i = 0; i < spec.instances; ++i) {
    TinyInstance inst = make_instance(spec, i);
    auto& c = inst.check;
    const auto as = static_cast<std::size_t>(std::lround(c.a * static_cast<double>(c.s)));
    const std::size_t a1s = as + c.s;
    const double d_as = exhaustive_rip(*inst.op, as).delta;
    const double d_a1s = exhaustive_rip(*inst.op, a1s).delta;

    RecoveryProblem prob;
    prob.op = inst.op;
    prob.y = inst.y;
    prob.epsilon = c.epsilon;
    prob.weights = c.prior.expand();
    const SolverReport rep = solve(prob, cfg);
    c.xhat = rep.solution;

    const BoundCheck bc = theorem_bound_check(c, d_as, d_a1s);
    const bool qualifying = !bc.skipped && rep.converged;
    if (bc.skipped) ++report.excluded;
    if (!bc.skipped && !rep.converged) ++report.nonconverged;
    if (qualifying) {
      ++report.qualifying;
      if (!bc.holds) ++report.violations;
      if (bc.bound > 0.0) report.worst_ratio = std::max(report.worst_ratio, bc.actual / bc.bound);
    }
    if (table) {
      table->add_row(std::vector<double>{static_cast<double>(i), static_cast<double>(inst.op->cols()),
                                         static_cast<double>(inst.op->rows()), static_cast<double>(c.s),
                                         c.a, static_cast<double>(c.prior.size()), bc.kn, d_as, d_a1s,
                                         c.epsilon, rep.converged ? 1.0 : 0.0, qualifying ? 1.0 : 0.0, bc.bound, bc.actual,
                                         qualifying ? (bc.holds ? 1.0 : 0.0) : NAN});
    }
  }
  return report;
}

}  // namespace wl1
