#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace wl1 {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sorted, duplicate-free list of 0-based coordinates.
using IndexSet = std::vector<std::size_t>;

}  // namespace wl1
