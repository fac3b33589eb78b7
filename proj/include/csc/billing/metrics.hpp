// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csc/core/model.hpp"

namespace csc {

/// Self-consumption rate over a window. `scr` is empty when nothing was produced.
struct ScrReport {
  std::optional<double> scr;
  EnergyWh self_consumed_total;
  EnergyWh production_total;
  TimeWindow window;
};

/// Savings in EUR, kept at six fractional digits.
struct SavingsReport {
  std::map<ParticipantId, Decimal> per_participant;
  Decimal feed_in;
  Decimal total;
  TimeWindow window;
};

namespace detail {

inline void require_in_window(std::span<const SlotAllocation> allocations, const TimeWindow& window) {
  for (const auto& a : allocations)
    if (!window.contains(a.slot_start()))
      throw ValidationError("allocation at " + a.slot_start().iso() + " lies outside the reporting window");
}

}  // namespace detail

/// Smallest window covering every allocation's slot.
inline TimeWindow covering_window(std::span<const SlotAllocation> allocations) {
  if (allocations.empty()) return {};
  Timestamp lo = allocations.front().slot_start();
  Timestamp hi = lo;
  for (const auto& a : allocations) {
    lo = std::min(lo, a.slot_start());
    hi = std::max(hi, a.slot_start());
  }
  return TimeWindow{lo, hi.plus_seconds(kSlotSeconds)};
}

inline ScrReport compute_scr(std::span<const SlotAllocation> allocations, const TimeWindow& window) {
  detail::require_in_window(allocations, window);
  ScrReport r;
  r.window = window;
  for (const auto& a : allocations) {
    r.self_consumed_total += a.self_consumed_total();
    r.production_total += a.production();
  }
  if (r.production_total.value() > 0)
    r.scr = static_cast<double>(r.self_consumed_total.value()) / static_cast<double>(r.production_total.value());
  return r;
}

/// Savings for self-consumed energy at each participant's effective rate plus
/// the surplus valued at the feed-in rate. Each figure is rounded once from
/// its exact value.
inline SavingsReport compute_savings(std::span<const SlotAllocation> allocations, const TariffBook& book,
                                     const TimeWindow& window) {
  detail::require_in_window(allocations, window);
  std::map<ParticipantId, std::int64_t> self_wh;
  std::int64_t surplus_wh = 0;
  for (const auto& a : allocations) {
    for (const auto& [id, e] : a.self_consumed()) {
      if (!book.contains(id)) throw ValidationError("allocation names unknown participant " + id);
      self_wh[id] += e.value();
    }
    surplus_wh += a.surplus_to_grid().value();
  }

  SavingsReport r;
  r.window = window;
  // Wh * micro-EUR/kWh * (10^8 + uplift micro-percent) / (1000 Wh/kWh * 10^8)
  const int128 denom = int128{1000} * 100 * Decimal::kScale;
  for (const auto& [id, wh] : self_wh) {
    const auto value = div_round_half_even(int128{wh} * book.effective_value_scaled(id), denom);
    r.per_participant[id] = Decimal::from_micros(static_cast<std::int64_t>(value));
    r.total += r.per_participant[id];
  }
  r.feed_in = Decimal::from_micros(
      static_cast<std::int64_t>(div_round_half_even(int128{surplus_wh} * book.feed_in().micros(), 1000)));
  r.total += r.feed_in;
  return r;
}

inline SavingsReport compute_savings(std::span<const SlotAllocation> allocations, const Community& community,
                                     const TimeWindow& window) {
  return compute_savings(allocations, TariffBook::from(community), window);
}

/// (a - b) / b * 100, empty when b is zero.
inline std::optional<double> relative_difference_pct(double a, double b) {
  if (b == 0.0) return std::nullopt;
  return (a - b) / b * 100.0;
}

inline std::optional<double> relative_difference_pct(Decimal a, Decimal b) {
  if (b.micros() == 0) return std::nullopt;
  return static_cast<double>(a.micros() - b.micros()) / static_cast<double>(b.micros()) * 100.0;
}

struct PolicyRow {
  std::string policy;
  ScrReport scr;
  SavingsReport savings;
};

struct PairwiseDifference {
  std::string policy;
  std::string baseline;
  std::optional<double> scr_pct;
  std::optional<double> savings_pct;
};

struct ComparisonTable {
  std::vector<PolicyRow> rows;
  std::vector<PairwiseDifference> differences;  // every ordered pair, policy vs baseline
};

inline ComparisonTable compare_policies(const std::map<std::string, std::pair<ScrReport, SavingsReport>>& reports) {
  ComparisonTable t;
  std::optional<TimeWindow> window;
  for (const auto& [name, rep] : reports) {
    const auto& [scr, savings] = rep;
    if (!(scr.window == savings.window))
      throw ValidationError("policy " + name + ": SCR and savings windows differ");
    if (window && !(*window == scr.window))
      throw ValidationError("policy " + name + " covers a different window than the other policies");
    window = scr.window;
    t.rows.push_back({name, scr, savings});
  }
  for (const auto& a : t.rows) {
    for (const auto& b : t.rows) {
      if (a.policy == b.policy) continue;
      PairwiseDifference d{a.policy, b.policy, std::nullopt, std::nullopt};
      if (a.scr.scr && b.scr.scr) d.scr_pct = relative_difference_pct(*a.scr.scr, *b.scr.scr);
      d.savings_pct = relative_difference_pct(a.savings.total, b.savings.total);
      t.differences.push_back(std::move(d));
    }
  }
  return t;
}

}  // namespace csc
