// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "csc/core/energy.hpp"
#include "csc/ingestion/csv.hpp"

namespace csc {

namespace detail {

inline constexpr std::int64_t kSampleSeconds = 10 * 60;

inline Timestamp slot_of(const RawMeterRecord& r) { return r.timestamp.floor_to_slot(); }

/// Every slot between the first and last must be present.
inline void require_contiguous(const std::string& meter, const std::map<Timestamp, std::int64_t>& slots) {
  if (slots.empty()) return;
  Timestamp expected = slots.begin()->first;
  for (const auto& [start, wh] : slots) {
    if (start != expected) throw ValidationError("meter " + meter + ": gap at " + expected.iso());
    expected = start.plus_seconds(kSlotSeconds);
  }
}

inline SlotSeries to_series(const std::string& meter, SeriesKind kind, const std::map<Timestamp, std::int64_t>& slots) {
  std::vector<SlotEnergy> out;
  out.reserve(slots.size());
  for (const auto& [start, wh] : slots) out.push_back({start, EnergyWh(wh)});
  return SlotSeries(meter, kind, std::move(out));
}

}  // namespace detail

/// Converts one meter's native readings to 30-minute Wh slots.
///
///   energy_wh         interval energies, timestamped at interval start; either 30-minute
///                     records or three 10-minute records per slot, summed per slot.
///   power_kw_10min    exactly three 10-minute average powers per slot, timestamped at
///                     :00/:10/:20 (or :30/:40/:50); slot Wh = mean kW * 0.5 h * 1000.
///   energy_kwh_index  cumulative index read at slot boundaries; slot Wh = delta * 1000.
///
/// Any slot inside the covered span without its expected samples is a gap error.
inline SlotSeries normalize_to_slots(std::span<const RawMeterRecord> records, SeriesKind kind) {
  if (records.empty()) throw ValidationError("no records to normalize");
  const auto& first = records.front();
  for (const auto& r : records) {
    if (r.meter_id != first.meter_id)
      throw ValidationError("records mix meters " + first.meter_id + " and " + r.meter_id);
    if (r.meter_class != first.meter_class) throw ValidationError("meter " + first.meter_id + ": mixed meter classes");
    if (r.quantity != first.quantity)
      throw ValidationError("meter " + first.meter_id + ": mixed quantity kinds (" + to_string(first.quantity) + ", " +
                            to_string(r.quantity) + ")");
  }
  const std::string& meter = first.meter_id;

  std::map<Timestamp, std::int64_t> slots;
  switch (first.quantity) {
    case QuantityKind::energy_wh: {
      // 30-minute data if every record sits on a slot boundary, else 10-minute data.
      const bool ten_minute = std::any_of(records.begin(), records.end(),
                                          [](const RawMeterRecord& r) { return !r.timestamp.slot_aligned(); });
      const std::int64_t step = ten_minute ? detail::kSampleSeconds : kSlotSeconds;
      std::set<Timestamp> seen;
      std::map<Timestamp, int> count;
      for (const auto& r : records) {
        if (r.timestamp.local_seconds() % step != 0)
          throw ValidationError("meter " + meter + ": energy record at " + r.timestamp.iso() +
                                " is not on a " + (ten_minute ? "10" : "30") + "-minute boundary");
        if (!seen.insert(r.timestamp).second)
          throw ValidationError("meter " + meter + ": duplicate energy record at " + r.timestamp.iso());
        slots[detail::slot_of(r)] += r.value.micros() / Decimal::kScale;
        ++count[detail::slot_of(r)];
      }
      if (ten_minute)
        for (const auto& [start, n] : count)
          if (n < 3)
            throw ValidationError("meter " + meter + ": gap at " + start.iso() + " (" + std::to_string(n) +
                                  " of 3 energy records)");
      detail::require_contiguous(meter, slots);
      break;
    }
    case QuantityKind::power_kw_10min: {
      std::map<Timestamp, std::vector<const RawMeterRecord*>> samples;
      for (const auto& r : records) {
        if (r.timestamp.local_seconds() % detail::kSampleSeconds != 0)
          throw ValidationError("meter " + meter + ": power sample at " + r.timestamp.iso() +
                                " is not on a 10-minute boundary");
        samples[detail::slot_of(r)].push_back(&r);
      }
      for (const auto& [start, group] : samples) {
        std::vector<std::int64_t> offsets;
        int128 micro_kw = 0;
        for (const auto* r : group) {
          offsets.push_back(r->timestamp.utc_seconds() - start.utc_seconds());
          micro_kw += r->value.micros();
        }
        std::sort(offsets.begin(), offsets.end());
        if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
          throw ValidationError("meter " + meter + ": duplicate power sample in slot " + start.iso());
        if (offsets.size() < 3)
          throw ValidationError("meter " + meter + ": gap at " + start.iso() + " (" + std::to_string(offsets.size()) +
                                " of 3 power samples)");
        // mean(kW) * 0.5 h * 1000 Wh/kWh == sum(micro-kW) / 6000
        slots[start] = static_cast<std::int64_t>(div_round_half_even(micro_kw, 6000));
      }
      detail::require_contiguous(meter, slots);
      break;
    }
    case QuantityKind::energy_kwh_index: {
      std::map<Timestamp, std::int64_t> index_wh;
      for (const auto& r : records) {
        if (!r.timestamp.slot_aligned())
          throw ValidationError("meter " + meter + ": index reading at " + r.timestamp.iso() +
                                " is not on a slot boundary");
        if (!index_wh.emplace(r.timestamp, r.value.micros() / 1000).second)
          throw ValidationError("meter " + meter + ": duplicate index reading at " + r.timestamp.iso());
      }
      if (index_wh.size() < 2)
        throw ValidationError("meter " + meter + ": an energy index needs at least two readings");
      for (auto it = index_wh.begin(), next = std::next(it); next != index_wh.end(); ++it, ++next) {
        if (next->first != it->first.plus_seconds(kSlotSeconds))
          throw ValidationError("meter " + meter + ": gap at " + it->first.plus_seconds(kSlotSeconds).iso());
        if (next->second < it->second)
          throw ValidationError("meter " + meter + ": energy index decreases at " + next->first.iso());
        slots[it->first] = next->second - it->second;
      }
      break;
    }
  }
  return detail::to_series(meter, kind, slots);
}

/// Groups records by meter and normalizes each; meters listed in
/// `production_meters` become production series.
inline std::vector<SlotSeries> normalize_all(std::span<const RawMeterRecord> records,
                                             const std::vector<std::string>& production_meters) {
  std::map<std::string, std::vector<RawMeterRecord>> by_meter;
  for (const auto& r : records) by_meter[r.meter_id].push_back(r);
  std::vector<SlotSeries> out;
  for (const auto& [meter, recs] : by_meter) {
    const bool is_prod = std::find(production_meters.begin(), production_meters.end(), meter) != production_meters.end();
    out.push_back(normalize_to_slots(recs, is_prod ? SeriesKind::production : SeriesKind::consumption));
  }
  return out;
}

}  // namespace csc
