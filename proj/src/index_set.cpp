#include "wl1/index_set.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

namespace wl1 {

IndexSet make_index_set(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_complement(const IndexSet& a, std::size_t n) {
  IndexSet all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return set_difference(all, a);
}

bool pairwise_disjoint(std::span<const IndexSet> sets) {
  IndexSet seen;
  std::size_t total = 0;
  for (const auto& s : sets) {
    seen = set_union(seen, s);
    total += s.size();
  }
  return seen.size() == total;
}

double l1_norm_on(const Vector& v, const IndexSet& set) {
  double acc = 0.0;
  for (auto i : set) acc += std::abs(v[static_cast<Eigen::Index>(i)]);
  return acc;
}

IndexSet top_k_magnitude(const Vector& v, std::size_t k) {
  const auto n = static_cast<std::size_t>(v.size());
  k = std::min(k, n);
  IndexSet order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto larger = [&](std::size_t i, std::size_t j) {
    const double ai = std::abs(v[static_cast<Eigen::Index>(i)]);
    const double aj = std::abs(v[static_cast<Eigen::Index>(j)]);
    return ai > aj || (ai == aj && i < j);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                   larger);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace wl1
