#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>

#include "wl1/errors.hpp"
#include "wl1/experiments.hpp"
#include "wl1/metrics.hpp"
#include "wl1/models.hpp"
#include "wl1/operators.hpp"
#include "wl1/random.hpp"

namespace wl1 {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// stream tags
enum : std::uint64_t { kSignalStream = 1, kOperatorStream = 2, kNoiseStream = 3, kPriorStream = 4 };

struct TrialSetup {
  SparseSignal signal;
  std::vector<Vector> weights;  // one per strategy
};

using TrialBuilder = std::function<TrialSetup(std::size_t trial)>;

double noise_radius(const ExperimentSpec& spec, const Vector& z) {
  const double m = static_cast<double>(z.size());
  if (spec.epsilon_policy == "oracle") return z.norm();
  if (spec.epsilon_policy == "fixed") return spec.epsilon;
  if (spec.epsilon_policy == "percentile") return spec.sigma * std::sqrt(m + 2.0 * std::sqrt(2.0 * m));
  throw InputError("unknown epsilon_policy '" + spec.epsilon_policy + "'");
}

double recovery_error(const Vector& x, const Vector& xhat) {
  // a zero signal has no relative error; report the absolute one
  return x.norm() == 0.0 ? xhat.norm() : relative_error(x, xhat);
}

SweepResult run_sweep(const ExperimentSpec& spec, std::vector<std::string> names, const TrialBuilder& build) {
  if (spec.trials == 0 || spec.m_grid.empty()) throw ContractViolation("sweep: need trials and an m grid");
  for (std::size_t m : spec.m_grid) {
    if (m == 0 || m > spec.n) throw ContractViolation("sweep: grid values must lie in (0, n]");
  }
  const std::size_t P = spec.m_grid.size(), K = names.size(), T = spec.trials;

  // signals and weights depend on the trial only, so every m sees the same draws
  std::vector<TrialSetup> setups(T);
  for (std::size_t t = 0; t < T; ++t) {
    setups[t] = build(t);
    if (setups[t].weights.size() != K) throw ContractViolation("sweep: builder returned wrong strategy count");
  }

  SweepResult res;
  res.strategy_names = names;
  res.errors.assign(P, std::vector<std::vector<double>>(K, std::vector<double>(T, kNan)));
  std::vector<std::vector<std::size_t>> failed(P, std::vector<std::size_t>(K, 0));

  const SolverConfig base = spec.solver_config();
  std::exception_ptr error;
  std::mutex error_lock;
  const long tasks = static_cast<long>(P * T);

#pragma omp parallel for schedule(dynamic)
  for (long task = 0; task < tasks; ++task) {
    const std::size_t p = static_cast<std::size_t>(task) / T, t = static_cast<std::size_t>(task) % T;
    try {
      const std::size_t m = spec.m_grid[p];
      auto op = std::make_shared<const MeasurementOperator>(
          gaussian_operator(m, spec.n, derive_seed(spec.seed, {kOperatorStream, m, t})));
      Rng noise_rng = make_rng(spec.seed, {kNoiseStream, m, t});
      const Vector z = spec.sigma * standard_normal(m, noise_rng);
      const TrialSetup& setup = setups[t];

      RecoveryProblem prob;
      prob.op = op;
      prob.y = op->apply(setup.signal.values) + z;
      prob.epsilon = noise_radius(spec, z);
      SolverConfig cfg = base;
      cfg.norm_bound = operator_norm_bound(*op);
      for (std::size_t k = 0; k < K; ++k) {
        prob.weights = setup.weights[k];
        const SolverReport rep = solve(prob, cfg);
        if (rep.converged) {
          res.errors[p][k][t] = recovery_error(setup.signal.values, rep.solution);
        } else {
#pragma omp atomic
          ++failed[p][k];
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(error_lock);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t p = 0; p < P; ++p) {
    SweepPoint pt;
    pt.m = spec.m_grid[p];
    for (std::size_t k = 0; k < K; ++k) {
      StrategyStats st;
      st.name = names[k];
      st.nonconverged = failed[p][k];
      double sum = 0.0;
      for (double e : res.errors[p][k]) {
        if (!std::isnan(e)) {
          sum += e;
          ++st.used;
        }
      }
      st.mean = st.used ? sum / static_cast<double>(st.used) : kNan;
      double ss = 0.0;
      for (double e : res.errors[p][k]) {
        if (!std::isnan(e)) ss += (e - st.mean) * (e - st.mean);
      }
      st.std_error = st.used > 1 ? std::sqrt(ss / static_cast<double>(st.used - 1) / static_cast<double>(st.used)) : kNan;
      res.nonconverged += st.nonconverged;
      pt.strategies.push_back(st);
    }
    res.points.push_back(std::move(pt));
  }
  res.solves = P * K * T;
  res.ok = static_cast<double>(res.nonconverged) <= 0.01 * static_cast<double>(res.solves);
  return res;
}

std::string weight_name(const std::string& prefix, double v) { return prefix + format_number(v); }

}  // namespace

const StrategyStats& SweepPoint::at(const std::string& name) const {
  for (const auto& s : strategies) {
    if (s.name == name) return s;
  }
  throw ContractViolation("no strategy '" + name + "'");
}

const SweepPoint& SweepResult::at_m(std::size_t m) const {
  for (const auto& p : points) {
    if (p.m == m) return p;
  }
  throw ContractViolation("no sweep point at m=" + std::to_string(m));
}

std::pair<double, double> SweepResult::paired_difference(std::size_t point, const std::string& a,
                                                         const std::string& b) const {
  auto index = [&](const std::string& name) {
    for (std::size_t k = 0; k < strategy_names.size(); ++k) {
      if (strategy_names[k] == name) return k;
    }
    throw ContractViolation("no strategy '" + name + "'");
  };
  const auto& ea = errors.at(point)[index(a)];
  const auto& eb = errors.at(point)[index(b)];
  std::vector<double> d;
  for (std::size_t t = 0; t < ea.size(); ++t) {
    if (!std::isnan(ea[t]) && !std::isnan(eb[t])) d.push_back(ea[t] - eb[t]);
  }
  if (d.size() < 2) return {kNan, kNan};
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double k = static_cast<double>(d.size());
  return {mean, std::sqrt(ss / (k - 1.0) / k)};
}

SweepResult run_synth(const ExperimentSpec& spec) {
  const bool vary_rho = spec.id == "fig2a";
  if (!vary_rho && spec.id != "fig2b") throw ContractViolation("run_synth: id must be fig2a or fig2b");
  if (spec.pair_weights.size() != 2) throw ContractViolation("run_synth: need two pair weights");

  // estimate configurations: 0 is the single estimate, then one per sweep value
  std::vector<std::vector<double>> rhos = {{spec.rho}}, alphas = {{spec.alpha}};
  std::vector<std::string> names = {"l1"};
  std::vector<int> estimate = {-1};
  std::vector<std::vector<double>> weights = {{}};
  for (double w : spec.single_weights) {
    names.push_back(weight_name("w", w));
    estimate.push_back(0);
    weights.push_back({w});
  }
  for (double v : spec.sweep) {
    if (vary_rho) {
      rhos.push_back({v, spec.rho - v});
      alphas.push_back({spec.alpha, spec.alpha});
      names.push_back(weight_name("rho1_", v));
    } else {
      rhos.push_back({spec.rho / 2, spec.rho / 2});
      alphas.push_back({v, 2.0 * spec.alpha - v});
      names.push_back(weight_name("alpha1_", v));
    }
    for (double r : rhos.back()) {
      if (r < 0.0) throw ContractViolation("run_synth: sweep value exceeds rho");
    }
    for (double a : alphas.back()) {
      if (a < 0.0 || a > 1.0) throw ContractViolation("run_synth: implied alpha_2 outside [0,1]");
    }
    estimate.push_back(static_cast<int>(rhos.size()) - 1);
    weights.push_back(spec.pair_weights);
  }

  auto build = [&](std::size_t t) {
    TrialSetup setup;
    Rng rng = make_rng(spec.seed, {kSignalStream, t});
    setup.signal = gen_sparse_signal(spec.n, spec.s, rng);
    std::vector<WeightedPrior> priors;
    for (std::size_t e = 0; e < rhos.size(); ++e) {
      Rng prng = make_rng(spec.seed, {kPriorStream, t, e});
      priors.push_back(gen_support_estimates(setup.signal, rhos[e], alphas[e], prng));
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (estimate[k] < 0) {
        setup.weights.push_back(Vector::Ones(static_cast<Eigen::Index>(spec.n)));
      } else {
        setup.weights.push_back(priors[static_cast<std::size_t>(estimate[k])].with_weights(weights[k]).expand());
      }
    }
    return setup;
  };
  return run_sweep(spec, names, build);
}

SweepResult run_prior(const ExperimentSpec& spec) {
  const bool tree = spec.id == "tree";
  if (!tree && spec.id != "power") throw ContractViolation("run_prior: id must be power or tree");

  const Vector probs = tree ? tree_prior(spec.n, spec.tree_s, spec.prior_trials, derive_seed(spec.seed, {kPriorStream}))
                            : power_law_prior(spec.n);
  std::vector<std::string> names = {"l1", "nonuniform"};
  std::vector<Vector> fixed = {Vector::Ones(static_cast<Eigen::Index>(spec.n)),
                               WeightedPrior::from_probabilities(probs).expand()};
  for (double w : spec.single_weights) {
    names.push_back(weight_name("w", w));
    fixed.push_back(WeightedPrior::single_from_probabilities(probs, w).expand());
  }

  auto build = [&](std::size_t t) {
    TrialSetup setup;
    Rng rng = make_rng(spec.seed, {kSignalStream, t});
    IndexSet support = tree ? tree_support(spec.n, spec.tree_s, rng) : draw_support(probs, rng);
    setup.signal = signal_on_support(spec.n, std::move(support), rng);
    setup.weights = fixed;
    return setup;
  };
  return run_sweep(spec, names, build);
}

CsvTable sweep_table(const ExperimentSpec& spec, const SweepResult& result) {
  std::vector<std::string> cols = {"m"};
  for (const auto& name : result.strategy_names) {
    cols.push_back("mean_" + name);
    cols.push_back("se_" + name);
  }
  cols.push_back("nonconverged");
  CsvTable table(spec, cols);
  for (const auto& pt : result.points) {
    std::vector<double> row = {static_cast<double>(pt.m)};
    std::size_t bad = 0;
    for (const auto& st : pt.strategies) {
      row.push_back(st.mean);
      row.push_back(st.std_error);
      bad += st.nonconverged;
    }
    row.push_back(static_cast<double>(bad));
    table.add_row(row);
  }
  return table;
}

}  // namespace wl1
