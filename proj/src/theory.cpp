#include "wl1/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wl1/errors.hpp"

namespace wl1::theory {

namespace {

constexpr double kRadicandSlack = 1e-12;
constexpr double kCompareTol = 1e-12;

double checked_sqrt(double radicand, const char* what) {
  if (radicand < -kRadicandSlack) {
    throw DomainError(std::string(what) + ": negative radicand " + std::to_string(radicand));
  }
  return std::sqrt(std::max(radicand, 0.0));
}

void check_ranges(const TheoryParams& p) {
  const auto n = p.weights.size();
  if (n == 0) throw ContractViolation("TheoryParams: need at least one support estimate");
  if (p.rhos.size() != n || p.alphas.size() != n) {
    throw ContractViolation("TheoryParams: weights, rhos and alphas must have equal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p.weights[i] >= 0.0 && p.weights[i] <= 1.0)) {
      throw ContractViolation("TheoryParams: weight outside [0,1]");
    }
    if (!(p.rhos[i] >= 0.0)) throw ContractViolation("TheoryParams: negative rho");
    if (!(p.alphas[i] >= 0.0 && p.alphas[i] <= 1.0)) {
      throw ContractViolation("TheoryParams: alpha outside [0,1]");
    }
  }
}

}  // namespace

void TheoryParams::validate() const {
  check_ranges(*this);
  if (!(a > 1.0)) throw ContractViolation("TheoryParams: a must exceed 1");
  double mass = 0.0;
  for (std::size_t i = 0; i < size(); ++i) mass += rhos[i] * (1.0 - alphas[i]);
  if (mass > a + kCompareTol) {
    throw ContractViolation("TheoryParams: sum rho_i (1 - alpha_i) exceeds a");
  }
}

TheoryParams TheoryParams::sorted() const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return weights[i] > weights[j]; });
  TheoryParams out;
  out.a = a;
  for (auto i : order) {
    out.weights.push_back(weights[i]);
    out.rhos.push_back(rhos[i]);
    out.alphas.push_back(alphas[i]);
  }
  return out;
}

double b_constant(double w, double rho, double alpha) {
  return w + (1.0 - w) * checked_sqrt(1.0 + rho - 2.0 * alpha * rho, "b_constant");
}

double k_n(const TheoryParams& params) {
  check_ranges(params);
  const TheoryParams p = params.sorted();
  const std::size_t n = p.size();

  // suffix[j] = sum_{i >= j} (rho_i - 2 alpha_i rho_i)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    suffix[j] = suffix[j + 1] + (p.rhos[j] - 2.0 * p.alphas[j] * p.rhos[j]);
  }

  double k = p.weights[n - 1] + (1.0 - p.weights[0]) * checked_sqrt(1.0 + suffix[0], "k_n");
  for (std::size_t j = 1; j < n; ++j) {
    k += (p.weights[j - 1] - p.weights[j]) * checked_sqrt(1.0 + suffix[j], "k_n");
  }
  return k;
}

double gamma_constant(const TheoryParams& p) {
  check_ranges(p);
  const auto n = static_cast<double>(p.size());
  double g = -(n - 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = checked_sqrt(1.0 + p.rhos[i] - 2.0 * p.alphas[i] * p.rhos[i], "gamma");
    g += p.weights[i] + (1.0 - p.weights[i]) * r;
  }
  return g;
}

double delta_threshold(double constant, double a) {
  if (!(a > 1.0)) throw ContractViolation("delta_threshold: a must exceed 1");
  // Squared first: gamma may be negative.
  const double c2 = constant * constant;
  return (a - c2) / (a + c2);
}

RipCondition rip_condition(double delta_as, double delta_a1s, double kn, double a) {
  if (!(a > 1.0)) throw ContractViolation("rip_condition: a must exceed 1");
  if (!(kn >= 0.0)) throw ContractViolation("rip_condition: negative K_N");
  if (!(delta_as >= 0.0 && delta_a1s >= 0.0)) {
    throw ContractViolation("rip_condition: negative RIP constant");
  }
  RipCondition out;
  out.degenerate = kn == 0.0;
  out.holds = kn * kn * (1.0 + delta_as) + a * delta_a1s < a;
  return out;
}

BoundConstants bound_constants(double kn, double a, double delta_as, double delta_a1s) {
  if (!(a > 1.0)) throw ContractViolation("bound_constants: a must exceed 1");
  if (!(delta_as >= 0.0 && delta_as < 1.0 && delta_a1s >= 0.0 && delta_a1s < 1.0)) {
    throw ContractViolation("bound_constants: RIP constants must lie in [0,1)");
  }
  const double sa = std::sqrt(a);
  const double lower = std::sqrt(1.0 - delta_a1s);
  const double upper = std::sqrt(1.0 + delta_as);
  const double den = lower - (kn / sa) * upper;
  if (!(den > 0.0)) {
    throw ConditionViolated("bound_constants: RIP condition fails (non-positive denominator)");
  }
  BoundConstants c;
  c.kn = kn;
  c.delta_as = delta_as;
  c.delta_a1s = delta_a1s;
  c.c0 = 2.0 * (1.0 + kn / sa) / den;
  c.c1 = 2.0 / sa * (lower + upper) / den;
  return c;
}

BoundConstants bound_constants(const TheoryParams& p, double delta_as, double delta_a1s) {
  p.validate();
  return bound_constants(k_n(p), p.a, delta_as, delta_a1s);
}

double error_bound(const TheoryParams& p, const BoundConstants& consts, double eps,
                   std::size_t s, const TailNorms& tails) {
  check_ranges(p);
  if (s == 0) throw ContractViolation("error_bound: s must be positive");
  if (eps < 0.0) throw ContractViolation("error_bound: negative epsilon");
  if (tails.per_estimate.size() != p.size()) {
    throw ContractViolation("error_bound: one tail norm per support estimate required");
  }
  const double omega = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
  double tail = tails.best_s_term_residual * omega + (1.0 - omega) * tails.outside_estimates;
  for (std::size_t i = 0; i < p.size(); ++i) {
    tail -= (omega - p.weights[i]) * tails.per_estimate[i];
  }
  return consts.c0 * eps + consts.c1 * tail / std::sqrt(static_cast<double>(s));
}

WeightChoice optimize_weights(std::span<const double> rhos, std::span<const double> alphas) {
  const std::size_t n = rhos.size();
  if (n == 0 || alphas.size() != n) {
    throw ContractViolation("optimize_weights: rhos and alphas must be non-empty and aligned");
  }
  if (n > kMaxOptimizeSets) {
    throw UnsupportedSize("optimize_weights: corner enumeration limited to " +
                          std::to_string(kMaxOptimizeSets) + " sets");
  }
  TheoryParams p;
  p.rhos.assign(rhos.begin(), rhos.end());
  p.alphas.assign(alphas.begin(), alphas.end());
  p.weights.assign(n, 1.0);

  WeightChoice best;
  bool have = false;
  const std::uint64_t corners = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < corners; ++mask) {
    // Bit (n-1-i) drives weight i so masks count up in lexicographic order.
    for (std::size_t i = 0; i < n; ++i) p.weights[i] = ((mask >> (n - 1 - i)) & 1u) ? 1.0 : 0.0;
    const double k = k_n(p);
    // Masks increase lexicographically, so a tie always prefers the newcomer.
    const bool better = !have || k < best.kn - kCompareTol;
    const bool tie = have && std::abs(k - best.kn) <= kCompareTol;
    if (better || tie) {
      best.weights = p.weights;
      best.kn = k;
      have = true;
    }
  }
  return best;
}

bool proposition_ordering(const TheoryParams& params) {
  check_ranges(params);
  const double alpha = params.alphas.front();
  for (double a : params.alphas) {
    if (a != alpha) throw ContractViolation("proposition_ordering: alphas must be equal");
  }
  const TheoryParams p = params.sorted();
  const double rho = std::accumulate(p.rhos.begin(), p.rhos.end(), 0.0);
  const double d_first = delta_threshold(b_constant(p.weights.front(), rho, alpha), p.a);
  const double d_last = delta_threshold(b_constant(p.weights.back(), rho, alpha), p.a);
  const double d_kn = delta_threshold(k_n(p), p.a);
  return d_first <= d_kn + kCompareTol && d_kn <= d_last + kCompareTol;
}

}  // namespace wl1::theory
