// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "csc/allocation/apportion.hpp"
#include "csc/core/model.hpp"

namespace csc {

/// Static keys proportional to each participant's consumption over `window`.
/// Coefficients are quantized to `decimals` places by largest remainder, so
/// they sum to exactly one unit of the last place.
inline KorVector derive_static_kors(const std::map<ParticipantId, SlotSeries>& history, const TimeWindow& window,
                                    int decimals = 9) {
  if (window.empty()) throw ValidationError("KoR derivation window is empty");
  if (history.empty()) throw ValidationError("no consumption history given");
  if (decimals < 1 || decimals > 12) throw ValidationError("KoR precision must be 1..12 decimals");

  std::vector<int128> totals;
  for (const auto& [id, s] : history) {
    int128 sum = 0;
    bool any = false;
    for (const auto& slot : s.slots()) {
      if (!window.contains(slot.slot_start)) continue;
      sum += slot.energy.value();
      any = true;
    }
    if (!any) throw ValidationError("participant " + id + " has no data in the KoR window");
    totals.push_back(sum);
  }
  int128 grand = 0;
  for (auto t : totals) grand += t;
  if (grand == 0) throw ValidationError("no consumption in window");

  std::int64_t unit = 1;
  for (int i = 0; i < decimals; ++i) unit *= 10;
  const auto parts = apportion(unit, totals);
  std::map<ParticipantId, double> entries;
  std::size_t i = 0;
  for (const auto& [id, s] : history) entries[id] = static_cast<double>(parts[i++]) / static_cast<double>(unit);
  return KorVector::make(std::move(entries));
}

}  // namespace csc
