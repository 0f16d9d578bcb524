#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "wl1/types.hpp"

namespace wl1 {

using Rng = std::mt19937_64;

/// Deterministic sub-seed for a (master seed, tag...) tuple. Concurrent
/// trials draw from disjoint streams derived this way.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(master, tags));
}

/// i.i.d. standard normal vector.
Vector standard_normal(std::size_t n, Rng& rng);

/// k distinct indices drawn uniformly from [0, n), returned sorted.
IndexSet sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

/// k distinct entries drawn uniformly from `pool`, returned sorted.
IndexSet sample_from(const IndexSet& pool, std::size_t k, Rng& rng);

}  // namespace wl1
