// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <type_traits>
#include <variant>
#include <vector>

#include "csc/allocation/policies.hpp"

namespace csc {

inline SlotAllocation allocate_slot(const AllocationPolicy& policy, Timestamp slot, EnergyWh production,
                                    const EnergyMap& consumption) {
  return std::visit(
      [&](const auto& p) -> SlotAllocation {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, StaticPolicy>)
          return allocate_static(slot, production, consumption, p.kors);
        else if constexpr (std::is_same_v<P, DefaultDynamicPolicy>)
          return allocate_default_dynamic(slot, production, consumption);
        else
          return allocate_custom_dynamic(slot, production, consumption, p.order);
      },
      policy);
}

/// Runs the per-slot policy over aligned series. Every consumption series must
/// carry exactly the production series' slots; the first mismatch is an error.
inline std::vector<SlotAllocation> allocate_series(const AllocationPolicy& policy, const SlotSeries& production,
                                                   const std::map<ParticipantId, SlotSeries>& consumptions) {
  const auto& prod = production.slots();
  for (const auto& [id, s] : consumptions) {
    const auto& slots = s.slots();
    const std::size_t n = std::min(prod.size(), slots.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (slots[i].slot_start != prod[i].slot_start) {
        const Timestamp first = std::min(slots[i].slot_start, prod[i].slot_start);
        throw ValidationError("slot mismatch for participant " + id + " at " + first.iso());
      }
    }
    if (prod.size() > slots.size())
      throw ValidationError("slot mismatch for participant " + id + " at " + prod[n].slot_start.iso());
    if (slots.size() > prod.size())
      throw ValidationError("slot mismatch for participant " + id + " at " + slots[n].slot_start.iso());
  }

  std::vector<SlotAllocation> out;
  out.reserve(prod.size());
  for (std::size_t i = 0; i < prod.size(); ++i) {
    EnergyMap consumption;
    for (const auto& [id, s] : consumptions) consumption.emplace(id, s.slots()[i].energy);
    out.push_back(allocate_slot(policy, prod[i].slot_start, prod[i].energy, consumption));
  }
  return out;
}

}  // namespace csc
