// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "csc/core/error.hpp"
#include "csc/core/time.hpp"

namespace csc {

/// Non-negative energy in whole watt-hours.
class EnergyWh {
 public:
  constexpr EnergyWh() = default;
  constexpr explicit EnergyWh(std::int64_t wh) : wh_(wh) {
    if (wh < 0) throw ValidationError("negative energy: " + std::to_string(wh) + " Wh");
  }

  constexpr std::int64_t value() const { return wh_; }

  friend constexpr EnergyWh operator+(EnergyWh a, EnergyWh b) { return EnergyWh(a.wh_ + b.wh_); }
  /// Throws if the result would be negative.
  friend constexpr EnergyWh operator-(EnergyWh a, EnergyWh b) { return EnergyWh(a.wh_ - b.wh_); }
  constexpr EnergyWh& operator+=(EnergyWh o) {
    wh_ += o.wh_;
    return *this;
  }
  friend constexpr auto operator<=>(const EnergyWh&, const EnergyWh&) = default;

 private:
  std::int64_t wh_ = 0;
};

enum class SeriesKind { consumption, production };

inline const char* to_string(SeriesKind k) { return k == SeriesKind::production ? "production" : "consumption"; }

struct SlotEnergy {
  Timestamp slot_start;
  EnergyWh energy;

  friend bool operator==(const SlotEnergy&, const SlotEnergy&) = default;
};

/// One meter's energy on the 30-minute grid. Construction enforces alignment
/// and strictly increasing slot starts.
class SlotSeries {
 public:
  SlotSeries() = default;
  SlotSeries(std::string meter_id, SeriesKind kind, std::vector<SlotEnergy> slots)
      : meter_id_(std::move(meter_id)), kind_(kind), slots_(std::move(slots)) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (!slots_[i].slot_start.slot_aligned())
        throw ValidationError("series " + meter_id_ + ": slot " + slots_[i].slot_start.iso() +
                              " is not aligned to a 30-minute boundary");
      if (i > 0 && !(slots_[i - 1].slot_start < slots_[i].slot_start))
        throw ValidationError("series " + meter_id_ + ": slot " + slots_[i].slot_start.iso() +
                              " is not strictly after its predecessor");
    }
  }

  const std::string& meter_id() const { return meter_id_; }
  SeriesKind kind() const { return kind_; }
  const std::vector<SlotEnergy>& slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }

  EnergyWh total() const {
    EnergyWh sum;
    for (const auto& s : slots_) sum += s.energy;
    return sum;
  }

  friend bool operator==(const SlotSeries&, const SlotSeries&) = default;

 private:
  std::string meter_id_;
  SeriesKind kind_ = SeriesKind::consumption;
  std::vector<SlotEnergy> slots_;
};

}  // namespace csc
