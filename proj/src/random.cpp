#include "wl1/random.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "wl1/errors.hpp"

namespace wl1 {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (tags.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Vector standard_normal(std::size_t n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = dist(rng);
  return v;
}

IndexSet sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw ContractViolation("sample_without_replacement: k > n");
  IndexSet pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  return sample_from(pool, k, rng);
}

IndexSet sample_from(const IndexSet& pool, std::size_t k, Rng& rng) {
  if (k > pool.size()) throw ContractViolation("sample_from: k exceeds pool size");
  // Partial Fisher-Yates keeps the draw order independent of the library's
  // std::sample strategy.
  IndexSet work = pool;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, work.size() - 1);
    std::swap(work[i], work[pick(rng)]);
  }
  work.resize(k);
  std::sort(work.begin(), work.end());
  return work;
}

}  // namespace wl1
