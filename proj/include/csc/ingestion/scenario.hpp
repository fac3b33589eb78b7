// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "csc/core/decimal.hpp"
#include "csc/core/energy.hpp"
#include "csc/ingestion/keyvalue.hpp"

namespace csc {

/// Scenario transformations applied after ingestion.
struct ScenarioConfig {
  Decimal pv_gain = Decimal::from_int(1);
  Decimal datacentre_load_kw = Decimal::from_int(100);
  bool include_datacentre = false;
};

/// Reads pv_gain, datacentre_load_kw and include_datacentre; other keys are ignored.
inline ScenarioConfig parse_scenario_config(const KeyValueFile& kv) {
  ScenarioConfig c;
  if (auto v = kv.get("pv_gain")) c.pv_gain = Decimal::parse(*v);
  if (auto v = kv.get("datacentre_load_kw")) c.datacentre_load_kw = Decimal::parse(*v);
  if (auto v = kv.get("include_datacentre")) c.include_datacentre = parse_bool(*v, "include_datacentre");
  if (c.pv_gain <= Decimal{}) throw ValidationError("pv_gain must be > 0");
  if (c.datacentre_load_kw < Decimal{}) throw ValidationError("datacentre_load_kw must be >= 0");
  return c;
}

/// Scales production to emulate a larger plant; each slot rounds half-even to Wh.
inline SlotSeries apply_pv_gain(const SlotSeries& series, Decimal gain) {
  if (series.kind() != SeriesKind::production)
    throw ValidationError("PV gain applies to production series only (meter " + series.meter_id() + ")");
  if (gain <= Decimal{}) throw ValidationError("PV gain must be > 0");
  std::vector<SlotEnergy> out;
  out.reserve(series.size());
  for (const auto& s : series.slots())
    out.push_back({s.slot_start, EnergyWh(static_cast<std::int64_t>(
                                     div_round_half_even(int128{s.energy.value()} * gain.micros(), Decimal::kScale)))});
  return SlotSeries(series.meter_id(), series.kind(), std::move(out));
}

/// Adds a flat load of `power_kw` to every 30-minute slot (power_kw * 500 Wh).
inline SlotSeries add_constant_load(const SlotSeries& series, Decimal power_kw) {
  if (series.kind() != SeriesKind::consumption)
    throw ValidationError("constant load applies to consumption series only (meter " + series.meter_id() + ")");
  if (power_kw < Decimal{}) throw ValidationError("constant load must be >= 0 kW");
  const auto extra = static_cast<std::int64_t>(div_round_half_even(power_kw.micros(), 2000));
  std::vector<SlotEnergy> out;
  out.reserve(series.size());
  for (const auto& s : series.slots()) out.push_back({s.slot_start, s.energy + EnergyWh(extra)});
  return SlotSeries(series.meter_id(), series.kind(), std::move(out));
}

}  // namespace csc
