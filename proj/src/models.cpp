#include "wl1/models.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "wl1/errors.hpp"
#include "wl1/index_set.hpp"

namespace wl1 {

SparseSignal signal_on_support(std::size_t n, IndexSet support, Rng& rng) {
  SparseSignal sig;
  sig.values = Vector::Zero(static_cast<Eigen::Index>(n));
  const Vector v = standard_normal(support.size(), rng);
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= n) throw ContractViolation("signal_on_support: index out of range");
    sig.values(static_cast<Eigen::Index>(support[k])) = v(static_cast<Eigen::Index>(k));
  }
  sig.support = std::move(support);
  return sig;
}

SparseSignal gen_sparse_signal(std::size_t n, std::size_t s, Rng& rng) {
  if (s > n) throw ContractViolation("gen_sparse_signal: s > n");
  IndexSet support = sample_without_replacement(n, s, rng);
  return signal_on_support(n, std::move(support), rng);
}

SparseSignal gen_sparse_signal(std::size_t n, std::size_t s, std::uint64_t seed) {
  Rng rng(seed);
  return gen_sparse_signal(n, s, rng);
}

void WeightedPrior::validate() const {
  if (weights.size() != sets.size()) throw ContractViolation("WeightedPrior: one weight per set");
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw ContractViolation("WeightedPrior: weight outside [0,1]");
  }
  for (const auto& s : sets) {
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw ContractViolation("WeightedPrior: sets must be sorted and duplicate-free");
    }
    if (!s.empty() && s.back() >= n) throw ContractViolation("WeightedPrior: index out of range");
  }
  if (!pairwise_disjoint(sets)) throw ContractViolation("WeightedPrior: sets overlap");
}

Vector WeightedPrior::expand() const {
  validate();
  Vector w = Vector::Ones(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t k : sets[i]) w(static_cast<Eigen::Index>(k)) = weights[i];
  }
  return w;
}

void WeightedPrior::attach_truth(const IndexSet& support) {
  if (support.empty()) throw ContractViolation("attach_truth: empty support");
  const double s = static_cast<double>(support.size());
  rhos.clear();
  alphas.clear();
  for (const auto& t : sets) {
    rhos.push_back(static_cast<double>(t.size()) / s);
    alphas.push_back(t.empty() ? 0.0
                               : static_cast<double>(set_intersection(t, support).size()) /
                                     static_cast<double>(t.size()));
  }
}

theory::TheoryParams WeightedPrior::theory_params(double a) const {
  if (rhos.size() != sets.size()) throw ContractViolation("theory_params: attach_truth first");
  theory::TheoryParams p;
  p.a = a;
  p.weights = weights;
  p.rhos = rhos;
  p.alphas = alphas;
  return p;
}

WeightedPrior WeightedPrior::with_weights(std::vector<double> w) const {
  WeightedPrior out = *this;
  out.weights = std::move(w);
  out.validate();
  return out;
}

WeightedPrior WeightedPrior::merged(double w) const {
  WeightedPrior out;
  out.n = n;
  IndexSet all;
  for (const auto& s : sets) all = set_union(all, s);
  out.sets = {std::move(all)};
  out.weights = {w};
  out.validate();
  return out;
}

WeightedPrior WeightedPrior::from_probabilities(const Vector& probs) {
  std::map<double, IndexSet> groups;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) groups[probs(i)].push_back(static_cast<std::size_t>(i));
  }
  WeightedPrior out;
  out.n = static_cast<std::size_t>(probs.size());
  for (auto& [p, set] : groups) {  // ascending P, so weights come out nonincreasing
    out.sets.push_back(std::move(set));
    out.weights.push_back(prob_to_weight(p));
  }
  out.validate();
  return out;
}

WeightedPrior WeightedPrior::single_from_probabilities(const Vector& probs, double w) {
  WeightedPrior out;
  out.n = static_cast<std::size_t>(probs.size());
  IndexSet set;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) set.push_back(static_cast<std::size_t>(i));
  }
  out.sets = {std::move(set)};
  out.weights = {w};
  out.validate();
  return out;
}

std::size_t round_half_up(double v) {
  if (!(v >= 0.0)) throw ContractViolation("round_half_up: negative value");
  // 1e-9 nudge: products like 0.3 * 16 land a hair under the half
  return static_cast<std::size_t>(std::floor(v + 0.5 + 1e-9));
}

WeightedPrior gen_support_estimates(const SparseSignal& signal, std::span<const double> rhos,
                                    std::span<const double> alphas, Rng& rng) {
  if (rhos.size() != alphas.size()) throw ContractViolation("gen_support_estimates: length mismatch");
  const std::size_t n = static_cast<std::size_t>(signal.values.size());
  const double s = static_cast<double>(signal.support.size());

  IndexSet free_in = signal.support;
  IndexSet free_out = set_complement(signal.support, n);

  WeightedPrior prior;
  prior.n = n;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] >= 0.0) || !(alphas[i] >= 0.0 && alphas[i] <= 1.0)) {
      throw ContractViolation("gen_support_estimates: rho must be >= 0 and alpha in [0,1]");
    }
    const std::size_t n_in = round_half_up(alphas[i] * rhos[i] * s);
    const std::size_t n_out = round_half_up((1.0 - alphas[i]) * rhos[i] * s);
    if (n_in > free_in.size() || n_out > free_out.size()) {
      throw ContractViolation("gen_support_estimates: infeasible (rho, alpha) for this signal");
    }
    IndexSet a = sample_from(free_in, n_in, rng);
    IndexSet b = sample_from(free_out, n_out, rng);
    free_in = set_difference(free_in, a);
    free_out = set_difference(free_out, b);
    prior.sets.push_back(set_union(a, b));
    prior.weights.push_back(1.0);
  }
  if (!signal.support.empty()) prior.attach_truth(signal.support);
  return prior;
}

WeightedPrior gen_support_estimates(const SparseSignal& signal, std::span<const double> rhos,
                                    std::span<const double> alphas, std::uint64_t seed) {
  Rng rng(seed);
  return gen_support_estimates(signal, rhos, alphas, rng);
}

double prob_to_weight(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("prob_to_weight: P outside [0,1]");
  if (p == 1.0) return 0.0;
  const double e5 = std::exp(-5.0);
  return (std::exp(-5.0 * p) - e5) / (1.0 - e5);
}

Vector prob_to_weight(const Vector& probs) {
  Vector w(probs.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i) w(i) = prob_to_weight(probs(i));
  return w;
}

void truncate_prior(Vector& probs) {
  for (auto& p : probs) {
    if (p < kPriorCutoff) p = 0.0;
  }
}

Vector power_law_prior(std::size_t n) {
  if (n == 0) throw ContractViolation("power_law_prior: n must be positive");
  Vector p(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(i + 1);
  truncate_prior(p);
  return p;
}

IndexSet draw_support(const Vector& probs, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IndexSet out;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double r = u(rng);
    if (r < probs(i)) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

std::size_t tree_parent(std::size_t i) {
  if (i == 0) throw ContractViolation("tree_parent: root has no parent");
  return i == 1 ? 0 : i / 2;
}

IndexSet tree_support(std::size_t n, std::size_t s, Rng& rng) {
  if (s > n) throw ContractViolation("tree_support: s > n");
  IndexSet out;
  if (s == 0) return out;
  out.reserve(s);
  out.push_back(0);
  std::vector<std::size_t> frontier;
  if (n > 1) frontier.push_back(1);
  while (out.size() < s) {
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    const std::size_t k = pick(rng);
    const std::size_t node = frontier[k];
    frontier[k] = frontier.back();
    frontier.pop_back();
    out.push_back(node);
    for (std::size_t c : {2 * node, 2 * node + 1}) {
      if (c < n) frontier.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void count_tree(std::size_t n, std::size_t s, std::size_t t, std::uint64_t seed,
                std::vector<std::uint64_t>& counts) {
  Rng rng = make_rng(seed, {t});
  for (std::size_t k : tree_support(n, s, rng)) ++counts[k];
}

Vector to_frequencies(const std::vector<std::uint64_t>& counts, std::size_t trials) {
  Vector p(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = static_cast<double>(counts[i]) / static_cast<double>(trials);
  }
  return p;
}

}  // namespace

Vector tree_frequencies_serial(std::size_t n, std::size_t s, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ContractViolation("tree_frequencies: trials must be positive");
  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t t = 0; t < trials; ++t) count_tree(n, s, t, seed, counts);
  return to_frequencies(counts, trials);
}

Vector tree_frequencies(std::size_t n, std::size_t s, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ContractViolation("tree_frequencies: trials must be positive");
  if (s > n) throw ContractViolation("tree_support: s > n");
  std::vector<std::uint64_t> counts(n, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(static)
    for (std::size_t t = 0; t < trials; ++t) count_tree(n, s, t, seed, local);
#pragma omp critical
    for (std::size_t i = 0; i < n; ++i) counts[i] += local[i];
  }
  return to_frequencies(counts, trials);
}

Vector tree_prior(std::size_t n, std::size_t s, std::size_t trials, std::uint64_t seed) {
  Vector p = tree_frequencies(n, s, trials, seed);
  truncate_prior(p);
  return p;
}

void write_prior(std::ostream& os, const Vector& probs) {
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    os << i << ' ' << std::setprecision(17) << probs(i) << '\n';
  }
}

Vector read_prior(std::istream& is) {
  std::vector<double> vals;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::size_t idx = 0;
    double p = 0.0;
    if (!(ls >> idx >> p)) throw InputError("read_prior: malformed line " + std::to_string(lineno));
    if (idx != vals.size()) throw InputError("read_prior: indices must be 0,1,2,... in order");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("read_prior: probability outside [0,1]");
    vals.push_back(p);
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace wl1
