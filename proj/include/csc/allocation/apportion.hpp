// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "csc/core/decimal.hpp"
#include "csc/core/error.hpp"

namespace csc {

/// Largest-remainder apportionment: splits `total` units in proportion to the
/// non-negative integer `weights` so that the parts sum to `total` exactly.
/// Each part is floor(total * w / W) or one more; leftover units go to the
/// largest remainders, earlier positions winning ties.
inline std::vector<std::int64_t> apportion(std::int64_t total, std::span<const int128> weights) {
  if (total < 0) throw ValidationError("cannot apportion a negative total");
  int128 weight_sum = 0;
  for (int128 w : weights) {
    if (w < 0) throw ValidationError("negative apportionment weight");
    weight_sum += w;
  }
  if (weight_sum == 0) throw ValidationError("apportionment weights sum to zero");

  std::vector<std::int64_t> parts(weights.size());
  std::vector<int128> remainders(weights.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const int128 scaled = int128{total} * weights[i];
    parts[i] = static_cast<std::int64_t>(scaled / weight_sum);
    remainders[i] = scaled % weight_sum;
    assigned += parts[i];
  }

  std::int64_t leftover = total - assigned;  // in [0, n)
  if (leftover > 0) {
    std::vector<std::size_t> idx(weights.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; leftover > 0; ++k, --leftover) parts[idx[k]] += 1;
  }
  return parts;
}

}  // namespace csc
