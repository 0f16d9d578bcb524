#include "wl1/rip.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include <omp.h>

#include "wl1/errors.hpp"

namespace wl1 {

namespace {

constexpr std::uint64_t kChunk = 2048;

// Lexicographic combination with the given rank.
std::vector<std::size_t> unrank(std::uint64_t rank, std::size_t n, std::size_t s) {
  std::vector<std::size_t> combo(s);
  std::size_t next = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t c = next;; ++c) {
      const std::uint64_t count = binomial(n - c - 1, s - i - 1);
      if (rank < count) {
        combo[i] = c;
        next = c + 1;
        break;
      }
      rank -= count;
    }
  }
  return combo;
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t s = combo.size();
  for (std::size_t i = s; i-- > 0;) {
    if (combo[i] < n - s + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < s; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double subset_deviation(const Matrix& gram, const std::vector<std::size_t>& combo, Matrix& sub) {
  const auto s = static_cast<Eigen::Index>(combo.size());
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      sub(i, j) = gram(static_cast<Eigen::Index>(combo[i]), static_cast<Eigen::Index>(combo[j]));
    }
  }
  if (s == 1) return std::abs(sub(0, 0) - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sub, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();  // ascending
  return std::max(1.0 - ev[0], ev[s - 1] - 1.0);
}

struct Prepared {
  Matrix gram;
  std::uint64_t subsets = 0;
};

Prepared prepare(const MeasurementOperator& op, std::size_t s) {
  const std::size_t n = op.cols();
  if (s == 0 || s > n) throw ContractViolation("exhaustive_rip: need 1 <= s <= n");
  Prepared p;
  p.subsets = binomial(n, s);
  if (p.subsets > kMaxRipSubsets) {
    throw UnsupportedSize("exhaustive_rip: C(" + std::to_string(n) + ", " + std::to_string(s) +
                          ") subsets exceed the exhaustive budget");
  }
  const Matrix a = op.to_dense();
  p.gram = a.transpose() * a;
  return p;
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t s) {
  if (s > n) return 0;
  s = std::min(s, n - s);
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= s; ++i) {
    acc = acc * (n - s + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

RipEstimate exhaustive_rip_serial(const MeasurementOperator& op, std::size_t s) {
  const Prepared p = prepare(op, s);
  const std::size_t n = op.cols();
  std::vector<std::size_t> combo(s);
  for (std::size_t i = 0; i < s; ++i) combo[i] = i;
  Matrix sub(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  double delta = 0.0;
  do {
    delta = std::max(delta, subset_deviation(p.gram, combo, sub));
  } while (next_combination(combo, n));
  return {s, delta};
}

RipEstimate exhaustive_rip(const MeasurementOperator& op, std::size_t s) {
  const Prepared p = prepare(op, s);
  const std::size_t n = op.cols();
  const auto chunks = static_cast<std::int64_t>((p.subsets + kChunk - 1) / kChunk);
  double delta = 0.0;

#pragma omp parallel reduction(max : delta)
  {
    Matrix sub(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
#pragma omp for schedule(dynamic)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
      const std::uint64_t end = std::min(p.subsets, begin + kChunk);
      auto combo = unrank(begin, n, s);
      for (std::uint64_t r = begin; r < end; ++r) {
        delta = std::max(delta, subset_deviation(p.gram, combo, sub));
        next_combination(combo, n);
      }
    }
  }
  return {s, delta};
}

}  // namespace wl1
