#pragma once

#include <cstddef>
#include <cstdint>

#include "wl1/operators.hpp"

namespace wl1 {

struct RipEstimate {
  std::size_t s = 0;
  /// max over size-s column subsets of max(1 - sigma_min^2, sigma_max^2 - 1).
  /// Values >= 1 mean the operator has no order-s RIP.
  double delta = 0.0;

  bool has_rip() const { return delta < 1.0; }
};

inline constexpr std::uint64_t kMaxRipSubsets = 1'000'000;

/// Number of size-s subsets of n items, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t s);

/// Exact delta_s by enumerating every size-s column subset (OpenMP over
/// subsets). Throws UnsupportedSize past kMaxRipSubsets subsets.
RipEstimate exhaustive_rip(const MeasurementOperator& op, std::size_t s);

/// Single-threaded reference for exhaustive_rip.
RipEstimate exhaustive_rip_serial(const MeasurementOperator& op, std::size_t s);

}  // namespace wl1
