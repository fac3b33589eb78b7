// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csc/core/decimal.hpp"
#include "csc/core/energy.hpp"
#include "csc/core/error.hpp"
#include "csc/core/time.hpp"

namespace csc {

using ParticipantId = std::string;

/// A consuming building. Rates are EUR/kWh, uplifts are percentages.
struct Participant {
  ParticipantId id;
  std::string meter_id;  // consumption meter; defaults to id when empty
  Decimal tariff_eur_per_kwh;
  Decimal grid_uplift_pct;
  Decimal tax_uplift_pct;
  int priority_rank = 1;  // 1 = first served

  const std::string& consumption_meter() const { return meter_id.empty() ? id : meter_id; }
};

struct Community {
  std::vector<Participant> participants;
  std::string production_meter;
  Decimal feed_in_eur_per_kwh;

  const Participant* find(const ParticipantId& id) const {
    for (const auto& p : participants)
      if (p.id == id) return &p;
    return nullptr;
  }
};

inline constexpr double kKorTolerance = 1e-9;

/// Repartition keys: one coefficient in [0, 1] per participant, summing to 1
/// within kKorTolerance.
class KorVector {
 public:
  KorVector() = default;

  static KorVector make(std::map<ParticipantId, double> entries) {
    if (entries.empty()) throw ValidationError("KoR vector is empty");
    double sum = 0.0;
    for (const auto& [id, k] : entries) {
      if (!std::isfinite(k) || k < 0.0 || k > 1.0)
        throw ValidationError("KoR for " + id + " outside [0, 1]: " + std::to_string(k));
      sum += k;
    }
    if (std::abs(sum - 1.0) > kKorTolerance)
      throw ValidationError("KoR sum != 1 (got " + std::to_string(sum) + ")");
    KorVector v;
    v.entries_ = std::move(entries);
    return v;
  }

  /// Equal split, the investment-based "static33" case for three owners.
  static KorVector equal(const std::vector<ParticipantId>& ids) {
    std::map<ParticipantId, double> m;
    for (const auto& id : ids) m[id] = 1.0 / static_cast<double>(ids.size());
    if (m.size() != ids.size()) throw ValidationError("duplicate participant id in KoR vector");
    return make(std::move(m));
  }

  const std::map<ParticipantId, double>& entries() const { return entries_; }
  double at(const ParticipantId& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw ValidationError("no KoR for participant " + id);
    return it->second;
  }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const KorVector&, const KorVector&) = default;

 private:
  std::map<ParticipantId, double> entries_;
};

struct StaticPolicy {
  KorVector kors;
};
struct DefaultDynamicPolicy {};
struct CustomDynamicPolicy {
  std::vector<ParticipantId> order;  // first served first
};

using AllocationPolicy = std::variant<StaticPolicy, DefaultDynamicPolicy, CustomDynamicPolicy>;

using EnergyMap = std::map<ParticipantId, EnergyWh>;

/// Result of sharing one slot's production. The constructor enforces
/// conservation (sum of shares + surplus == production) and the per-participant
/// consumption cap.
class SlotAllocation {
 public:
  SlotAllocation(Timestamp slot_start, EnergyWh production, EnergyMap consumption, EnergyMap self_consumed,
                 EnergyWh surplus_to_grid)
      : slot_start_(slot_start),
        production_(production),
        consumption_(std::move(consumption)),
        self_consumed_(std::move(self_consumed)),
        surplus_(surplus_to_grid) {
    std::int64_t shared = 0;
    for (const auto& [id, e] : self_consumed_) {
      auto c = consumption_.find(id);
      if (c == consumption_.end())
        throw ValidationError("allocation at " + slot_start_.iso() + " names unknown participant " + id);
      if (e > c->second)
        throw ValidationError("allocation at " + slot_start_.iso() + " exceeds consumption of " + id);
      shared += e.value();
    }
    if (self_consumed_.size() != consumption_.size())
      throw ValidationError("allocation at " + slot_start_.iso() + " does not cover every participant");
    if (shared + surplus_.value() != production_.value())
      throw ValidationError("allocation at " + slot_start_.iso() + " breaks conservation");
  }

  const Timestamp& slot_start() const { return slot_start_; }
  EnergyWh production() const { return production_; }
  EnergyWh surplus_to_grid() const { return surplus_; }
  const EnergyMap& consumption() const { return consumption_; }
  const EnergyMap& self_consumed() const { return self_consumed_; }

  EnergyWh self_consumed_total() const {
    EnergyWh sum;
    for (const auto& [id, e] : self_consumed_) sum += e;
    return sum;
  }

  friend bool operator==(const SlotAllocation&, const SlotAllocation&) = default;

 private:
  Timestamp slot_start_;
  EnergyWh production_;
  EnergyMap consumption_;
  EnergyMap self_consumed_;
  EnergyWh surplus_;
};

struct ParticipantTariff {
  Decimal tariff_eur_per_kwh;
  Decimal grid_uplift_pct;
  Decimal tax_uplift_pct;
};

/// Rates used to value self-consumed and fed-in energy.
class TariffBook {
 public:
  TariffBook() = default;
  TariffBook(std::map<ParticipantId, ParticipantTariff> rates, Decimal feed_in_eur_per_kwh)
      : rates_(std::move(rates)), feed_in_(feed_in_eur_per_kwh) {
    if (feed_in_ < Decimal{}) throw ValidationError("negative feed-in rate");
    for (const auto& [id, r] : rates_)
      if (r.tariff_eur_per_kwh < Decimal{} || r.grid_uplift_pct < Decimal{} || r.tax_uplift_pct < Decimal{})
        throw ValidationError("negative rate for participant " + id);
  }

  static TariffBook from(const Community& community) {
    std::map<ParticipantId, ParticipantTariff> rates;
    for (const auto& p : community.participants)
      rates[p.id] = ParticipantTariff{p.tariff_eur_per_kwh, p.grid_uplift_pct, p.tax_uplift_pct};
    return TariffBook(std::move(rates), community.feed_in_eur_per_kwh);
  }

  const ParticipantTariff& at(const ParticipantId& id) const {
    auto it = rates_.find(id);
    if (it == rates_.end()) throw ValidationError("unknown participant " + id);
    return it->second;
  }
  bool contains(const ParticipantId& id) const { return rates_.count(id) != 0; }
  Decimal feed_in() const { return feed_in_; }
  const std::map<ParticipantId, ParticipantTariff>& rates() const { return rates_; }

  /// Effective value of one self-consumed kWh scaled by 10^14 (micro-euros
  /// times the 10^8 uplift denominator). Exact; use for ordering.
  int128 effective_value_scaled(const ParticipantId& id) const {
    const auto& r = at(id);
    return int128{r.tariff_eur_per_kwh.micros()} *
           (int128{100} * Decimal::kScale + r.grid_uplift_pct.micros() + r.tax_uplift_pct.micros());
  }

  /// tariff * (1 + (grid + tax) / 100), rounded half-even to micro-euros.
  Decimal effective_value(const ParticipantId& id) const {
    return Decimal::from_micros(
        static_cast<std::int64_t>(div_round_half_even(effective_value_scaled(id), int128{100} * Decimal::kScale)));
  }

 private:
  std::map<ParticipantId, ParticipantTariff> rates_;
  Decimal feed_in_;
};

}  // namespace csc
