#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wl1/random.hpp"
#include "wl1/theory.hpp"
#include "wl1/types.hpp"

namespace wl1 {

struct SparseSignal {
  Vector values;
  IndexSet support;  // T0
};

/// Support of size s uniform without replacement, i.i.d. N(0,1) values on it.
SparseSignal gen_sparse_signal(std::size_t n, std::size_t s, Rng& rng);
SparseSignal gen_sparse_signal(std::size_t n, std::size_t s, std::uint64_t seed);

/// Signal with the given support and N(0,1) values on it.
SparseSignal signal_on_support(std::size_t n, IndexSet support, Rng& rng);

/// Disjoint support estimates T_1..T_N with one weight each. Indices outside
/// every set get weight 1.
struct WeightedPrior {
  std::size_t n = 0;
  std::vector<IndexSet> sets;
  std::vector<double> weights;
  /// Realized |T_i| / s and |T_i cap T0| / |T_i|; empty without ground truth.
  std::vector<double> rhos;
  std::vector<double> alphas;

  std::size_t size() const { return sets.size(); }

  /// Throws ContractViolation on overlapping sets, out-of-range indices,
  /// or weights outside [0, 1].
  void validate() const;

  /// Per-index weight vector.
  Vector expand() const;

  /// Fills rhos/alphas from the true support.
  void attach_truth(const IndexSet& support);

  theory::TheoryParams theory_params(double a = 3.0) const;

  /// Same sets with new weights.
  WeightedPrior with_weights(std::vector<double> w) const;

  /// Merge of all sets carrying a single weight.
  WeightedPrior merged(double w) const;

  /// Groups indices with equal nonzero probability into one set weighted by
  /// prob_to_weight; zero-probability indices stay off the estimate.
  static WeightedPrior from_probabilities(const Vector& probs);

  /// Every index with P_i > 0 in one set with weight w.
  static WeightedPrior single_from_probabilities(const Vector& probs, double w);
};

/// floor(v + 1/2) for v >= 0.
std::size_t round_half_up(double v);

/// T_i gets round(alpha_i rho_i s) indices from unclaimed T0 and
/// round((1 - alpha_i) rho_i s) from unclaimed T0^c. Weights start at 1.
/// Throws ContractViolation when the requested counts cannot be met.
WeightedPrior gen_support_estimates(const SparseSignal& signal, std::span<const double> rhos,
                                    std::span<const double> alphas, Rng& rng);
WeightedPrior gen_support_estimates(const SparseSignal& signal, std::span<const double> rhos,
                                    std::span<const double> alphas, std::uint64_t seed);

/// (e^{-5P} - e^{-5}) / (1 - e^{-5}).
double prob_to_weight(double p);
Vector prob_to_weight(const Vector& probs);

inline constexpr double kPriorCutoff = 0.025;

/// Zeroes entries strictly below kPriorCutoff.
void truncate_prior(Vector& probs);

/// P_i = 1/i (1-based, stored at i-1), truncated.
Vector power_law_prior(std::size_t n);

/// Independent Bernoulli(P_i) draw per index.
IndexSet draw_support(const Vector& probs, Rng& rng);

/// Binary tree in breadth-first order: node 0 is the extra root with the
/// single child 1; node i >= 1 has children 2i and 2i+1 (when < n).
std::size_t tree_parent(std::size_t i);

/// Selects node 0, then s-1 times a uniformly chosen unselected node whose
/// parent is selected.
IndexSet tree_support(std::size_t n, std::size_t s, Rng& rng);

/// Selection frequencies of tree_support over `trials` runs, before
/// truncation. Trials run in parallel with per-trial seeds.
Vector tree_frequencies(std::size_t n, std::size_t s, std::size_t trials, std::uint64_t seed);
Vector tree_frequencies_serial(std::size_t n, std::size_t s, std::size_t trials, std::uint64_t seed);

/// Truncated tree_frequencies.
Vector tree_prior(std::size_t n, std::size_t s, std::size_t trials, std::uint64_t seed);

/// Two whitespace-separated columns "index probability", one line per index.
void write_prior(std::ostream& os, const Vector& probs);
Vector read_prior(std::istream& is);

}  // namespace wl1
