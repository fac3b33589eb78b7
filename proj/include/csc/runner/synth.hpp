// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "csc/core/model.hpp"
#include "csc/ingestion/csv.hpp"
#include "csc/runner/config.hpp"

namespace csc {

enum class RadiationProfile { low_radiation, high_radiation };

inline RadiationProfile parse_profile(std::string_view s) {
  if (s == "low_radiation") return RadiationProfile::low_radiation;
  if (s == "high_radiation") return RadiationProfile::high_radiation;
  throw ValidationError("unknown profile '" + std::string(s) + "' (expected low_radiation or high_radiation)");
}

/// Three-building community with the tariff structure of the demo site:
/// the producing building avoids grid fee and tax, its sister building avoids
/// the tax only, the office block pays both.
inline Community demo_community() {
  Community c;
  c.production_meter = "pv_estia1";
  c.feed_in_eur_per_kwh = Decimal::parse("0.06");
  c.participants = {
      {"ESTIA1", "estia1_cons", Decimal::parse("0.13"), Decimal::parse("28"), Decimal::parse("38"), 1},
      {"ESTIA2", "estia2_cons", Decimal::parse("0.13"), Decimal{}, Decimal::parse("38"), 2},
      {"ESTIA4", "estia4_cons", Decimal::parse("0.11"), Decimal{}, Decimal{}, 3},
  };
  return c;
}

namespace detail {

// Uniform [0, 1) from the raw engine output; std distributions are not
// specified bit-for-bit across standard libraries.
class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double between(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

inline bool office_hours(double hour) { return hour >= 8.0 && hour < 18.5; }

// Clear-sky shape for a May day on the Atlantic coast (local summer time).
inline double solar_shape(double hour) {
  constexpr double sunrise = 6.75;
  constexpr double sunset = 21.25;
  if (hour <= sunrise || hour >= sunset) return 0.0;
  return std::pow(std::sin(std::numbers::pi * (hour - sunrise) / (sunset - sunrise)), 1.3);
}

}  // namespace detail

/// Deterministic one-day data set: meters.csv (a Linky PV meter before the
/// emulation gain, an SME energy index, SME 10-minute powers, Linky 10-minute
/// energies), community.json, and a run.cfg wiring them together.
///
/// high_radiation: emulated production exceeds the community's midday demand.
/// low_radiation: production peaks below the combined demand at that slot.
inline OutputTree synthesize_demo_data(RadiationProfile profile, std::uint64_t seed) {
  detail::UnitRng rng(seed);
  const bool high = profile == RadiationProfile::high_radiation;
  const auto date = high ? std::chrono::year_month_day{std::chrono::year{2022}, std::chrono::May, std::chrono::day{9}}
                         : std::chrono::year_month_day{std::chrono::year{2022}, std::chrono::May, std::chrono::day{4}};
  constexpr std::int32_t offset = 120;  // CEST
  const Timestamp midnight = Timestamp::from_local(date, 0, 0, 0, offset);
  const Community community = demo_community();

  // Peak of the existing 5.6 kWp array; the run config scales it by 25.48.
  constexpr double peak_kw = 4.65;
  const double sky = high ? 1.0 : 0.35;

  std::string pv, idx, power, linky;
  std::int64_t index_kwh = 152340;
  idx += "estia1_cons,sme_smi," + midnight.iso() + ",energy_kwh_index," + std::to_string(index_kwh) + "\n";

  for (int k = 0; k < kDaySlots; ++k) {
    const Timestamp slot = midnight.plus_seconds(k * kSlotSeconds);
    const double hour = k * 0.5 + 0.25;
    const bool open = detail::office_hours(k * 0.5);

    const double cloud = high ? rng.between(0.96, 1.0) : rng.between(0.35, 1.0);
    const double pv_kw = peak_kw * sky * cloud * detail::solar_shape(hour);
    pv += "pv_estia1,linky," + slot.iso() + ",energy_wh," + std::to_string(std::llround(pv_kw * 500.0)) + "\n";

    // SME energy index, 1 kWh resolution.
    const double e1_kw = open ? rng.between(22.0, 28.0) : rng.between(7.0, 9.0);
    index_kwh += std::llround(e1_kw * 0.5);
    idx += "estia1_cons,sme_smi," + slot.plus_seconds(kSlotSeconds).iso() + ",energy_kwh_index," +
           std::to_string(index_kwh) + "\n";

    for (int s = 0; s < 3; ++s) {
      const Timestamp sample = slot.plus_seconds(s * 600);
      // SME 10-minute average power, 1 kW resolution.
      const double e2_kw = open ? rng.between(16.0, 22.0) : rng.between(5.0, 7.0);
      power += "estia2_cons,sme_smi," + sample.iso() + ",power_kw_10min," + std::to_string(std::llround(e2_kw)) + "\n";
      // Linky 10-minute energy, 1 Wh resolution.
      const double e4_kw = open ? rng.between(6.0, 10.0) : rng.between(1.5, 2.5);
      linky += "estia4_cons,linky," + sample.iso() + ",energy_wh," + std::to_string(std::llround(e4_kw * 1000.0 / 6.0)) +
               "\n";
    }
  }

  OutputTree files;
  files["meters.csv"] = std::string(kMeterCsvHeader) + "\n" + pv + idx + power + linky;
  files["community.json"] = community_to_json(community);
  files["run.cfg"] =
      "# Demo run: " + std::string(high ? "high" : "low") + " radiation day, seed " + std::to_string(seed) +
      "\n"
      "meters = meters.csv\n"
      "community = community.json\n"
      "pv_gain = 25.48\n"
      "datacentre_load_kw = 100\n"
      "include_datacentre = false\n"
      "datacentre_participant = ESTIA4\n"
      "policies = static, static33, default-dynamic, custom-dynamic\n"
      "custom_order = economic\n"
      "out = out\n";
  return files;
}

// Replaces (or adds) `key = value` in a synthesized run.cfg.
inline void set_config_key(OutputTree& files, const std::string& key, const std::string& value) {
  std::string& cfg = files.at("run.cfg");
  const auto at = cfg.find("\n" + key + " = ");
  if (at == std::string::npos) {
    cfg += key + " = " + value + "\n";
    return;
  }
  const auto end = cfg.find('\n', at + 1);
  cfg.replace(at + 1, end - at - 1, key + " = " + value);
}

}  // namespace csc
