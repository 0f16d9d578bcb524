#pragma once

#include <span>

#include "wl1/types.hpp"

namespace wl1 {

IndexSet make_index_set(std::vector<std::size_t> indices);

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
IndexSet set_complement(const IndexSet& a, std::size_t n);

bool pairwise_disjoint(std::span<const IndexSet> sets);

/// Sum of |v_i| over i in `set`.
double l1_norm_on(const Vector& v, const IndexSet& set);

/// Indices of the k largest |v_i|; ties resolved toward the smaller index.
IndexSet top_k_magnitude(const Vector& v, std::size_t k);

}  // namespace wl1
