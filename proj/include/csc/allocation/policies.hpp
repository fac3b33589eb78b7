// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "csc/allocation/apportion.hpp"
#include "csc/core/model.hpp"

namespace csc {

namespace detail {

inline constexpr double kKorWeightScale = 1e12;

inline void require_same_keys(const EnergyMap& consumption, const KorVector& kors) {
  if (kors.size() != consumption.size())
    throw ValidationError("KoR vector does not cover exactly the consuming participants");
  for (const auto& [id, e] : consumption)
    if (!kors.entries().count(id)) throw ValidationError("no KoR for participant " + id);
}

}  // namespace detail

/// Fixed keys: each participant gets its rounded KoR share of production,
/// truncated at its own consumption. Truncated excess goes to the grid and is
/// not offered to anyone else.
inline SlotAllocation allocate_static(Timestamp slot, EnergyWh production, const EnergyMap& consumption,
                                      const KorVector& kors) {
  detail::require_same_keys(consumption, kors);
  std::vector<int128> weights;
  weights.reserve(consumption.size());
  for (const auto& [id, e] : consumption)
    weights.push_back(static_cast<int128>(std::llround(kors.at(id) * detail::kKorWeightScale)));

  const auto shares = apportion(production.value(), weights);
  EnergyMap self;
  std::int64_t used = 0;
  std::size_t i = 0;
  for (const auto& [id, c] : consumption) {
    const std::int64_t take = std::min(shares[i++], c.value());
    self.emplace(id, EnergyWh(take));
    used += take;
  }
  return SlotAllocation(slot, production, consumption, std::move(self), EnergyWh(production.value() - used));
}

/// Proportional-to-consumption sharing, recomputed every slot. When the
/// community consumes less than is produced everyone is fully served.
inline SlotAllocation allocate_default_dynamic(Timestamp slot, EnergyWh production, const EnergyMap& consumption) {
  std::int64_t demand = 0;
  for (const auto& [id, c] : consumption) demand += c.value();

  EnergyMap self;
  if (demand == 0) {
    for (const auto& [id, c] : consumption) self.emplace(id, EnergyWh(0));
    return SlotAllocation(slot, production, consumption, std::move(self), production);
  }
  if (demand <= production.value()) {
    self = consumption;
    return SlotAllocation(slot, production, consumption, std::move(self), EnergyWh(production.value() - demand));
  }

  std::vector<int128> weights;
  weights.reserve(consumption.size());
  for (const auto& [id, c] : consumption) weights.push_back(c.value());
  const auto shares = apportion(production.value(), weights);
  std::size_t i = 0;
  for (const auto& [id, c] : consumption) self.emplace(id, EnergyWh(shares[i++]));
  return SlotAllocation(slot, production, consumption, std::move(self), EnergyWh(0));
}

/// Priority waterfall: serve participants in `order`, each up to its consumption.
inline SlotAllocation allocate_custom_dynamic(Timestamp slot, EnergyWh production, const EnergyMap& consumption,
                                              const std::vector<ParticipantId>& order) {
  const std::set<ParticipantId> listed(order.begin(), order.end());
  if (listed.size() != order.size() || order.size() != consumption.size())
    throw ValidationError("priority order is not a permutation of the consuming participants");

  EnergyMap self;
  std::int64_t remaining = production.value();
  for (const auto& id : order) {
    auto it = consumption.find(id);
    if (it == consumption.end()) throw ValidationError("priority order names unknown participant " + id);
    const std::int64_t take = std::min(remaining, it->second.value());
    self.emplace(id, EnergyWh(take));
    remaining -= take;
  }
  return SlotAllocation(slot, production, consumption, std::move(self), EnergyWh(remaining));
}

/// Orders participants by the value of one self-consumed kWh, highest first;
/// ties fall back to id order.
inline std::vector<ParticipantId> derive_priority_order(const std::vector<Participant>& participants,
                                                        const TariffBook& book) {
  if (participants.empty()) throw ValidationError("no participants to order");
  std::vector<ParticipantId> ids;
  ids.reserve(participants.size());
  for (const auto& p : participants) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end(), [&](const ParticipantId& a, const ParticipantId& b) {
    const int128 va = book.effective_value_scaled(a);
    const int128 vb = book.effective_value_scaled(b);
    if (va != vb) return va > vb;
    return a < b;
  });
  return ids;
}

/// Participants ordered by their configured priority rank.
inline std::vector<ParticipantId> rank_order(std::vector<Participant> participants) {
  std::stable_sort(participants.begin(), participants.end(),
                   [](const Participant& a, const Participant& b) { return a.priority_rank < b.priority_rank; });
  std::vector<ParticipantId> ids;
  for (const auto& p : participants) ids.push_back(p.id);
  return ids;
}

}  // namespace csc
