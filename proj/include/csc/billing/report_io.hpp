// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "csc/billing/metrics.hpp"

namespace csc {

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string fixed_or(const std::optional<double>& v, int digits, const char* missing) {
  return v ? fixed(*v, digits) : std::string(missing);
}

inline nlohmann::ordered_json money_json(Decimal d) {
  return nlohmann::ordered_json{{"eur", d.to_cents_string()}, {"exact_eur", d.to_string()}};
}

inline nlohmann::ordered_json window_json(const TimeWindow& w) {
  return nlohmann::ordered_json{{"begin", w.begin.iso()}, {"end", w.end.iso()}};
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ScrReport& r) {
  nlohmann::ordered_json j;
  j["window"] = detail::window_json(r.window);
  if (r.scr)
    j["scr"] = *r.scr;
  else
    j["scr"] = "undefined";
  j["self_consumed_wh"] = r.self_consumed_total.value();
  j["production_wh"] = r.production_total.value();
  return j;
}

inline nlohmann::ordered_json to_json(const SavingsReport& r) {
  nlohmann::ordered_json j;
  j["window"] = detail::window_json(r.window);
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [id, v] : r.per_participant) per[id] = detail::money_json(v);
  j["per_participant"] = std::move(per);
  j["feed_in"] = detail::money_json(r.feed_in);
  j["total"] = detail::money_json(r.total);
  return j;
}

inline nlohmann::ordered_json to_json(const ComparisonTable& t) {
  nlohmann::ordered_json j;
  j["policies"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows)
    j["policies"].push_back({{"policy", row.policy}, {"scr", to_json(row.scr)}, {"savings", to_json(row.savings)}});
  j["differences"] = nlohmann::ordered_json::array();
  for (const auto& d : t.differences) {
    nlohmann::ordered_json e{{"policy", d.policy}, {"baseline", d.baseline}};
    e["scr_pct"] = d.scr_pct ? nlohmann::ordered_json(*d.scr_pct) : nlohmann::ordered_json(nullptr);
    e["savings_pct"] = d.savings_pct ? nlohmann::ordered_json(*d.savings_pct) : nlohmann::ordered_json(nullptr);
    j["differences"].push_back(std::move(e));
  }
  return j;
}

/// One row per policy: policy, scr, savings_total_eur, savings_<id>_eur..., feed_in_eur.
inline std::string comparison_csv(const ComparisonTable& t) {
  std::vector<ParticipantId> ids;
  if (!t.rows.empty())
    for (const auto& [id, v] : t.rows.front().savings.per_participant) ids.push_back(id);

  std::string out = "policy,scr,savings_total_eur";
  for (const auto& id : ids) out += ",savings_" + id + "_eur";
  out += ",feed_in_eur\n";
  for (const auto& row : t.rows) {
    out += row.policy + "," + detail::fixed_or(row.scr.scr, 6, "undefined") + "," + row.savings.total.to_cents_string();
    for (const auto& id : ids) {
      auto it = row.savings.per_participant.find(id);
      out += "," + (it == row.savings.per_participant.end() ? Decimal{} : it->second).to_cents_string();
    }
    out += "," + row.savings.feed_in.to_cents_string() + "\n";
  }
  return out;
}

/// policy, baseline, scr_diff_pct, savings_diff_pct for every ordered pair.
inline std::string differences_csv(const ComparisonTable& t) {
  std::string out = "policy,baseline,scr_diff_pct,savings_diff_pct\n";
  for (const auto& d : t.differences)
    out += d.policy + "," + d.baseline + "," + detail::fixed_or(d.scr_pct, 4, "undefined") + "," +
           detail::fixed_or(d.savings_pct, 4, "undefined") + "\n";
  return out;
}

/// Per-slot stacked series: production, consumption and self-consumption per
/// participant, then the surplus sent to the grid.
inline std::string allocations_csv(std::span<const SlotAllocation> allocations) {
  std::vector<ParticipantId> ids;
  if (!allocations.empty())
    for (const auto& [id, e] : allocations.front().consumption()) ids.push_back(id);

  std::string out = "slot_start,slot_index,production_wh";
  for (const auto& id : ids) out += ",consumption_" + id + "_wh";
  for (const auto& id : ids) out += ",self_consumed_" + id + "_wh";
  out += ",surplus_wh\n";
  for (const auto& a : allocations) {
    out += a.slot_start().iso() + "," + std::to_string(a.slot_start().slot_index()) + "," +
           std::to_string(a.production().value());
    for (const auto& id : ids) out += "," + std::to_string(a.consumption().at(id).value());
    for (const auto& id : ids) out += "," + std::to_string(a.self_consumed().at(id).value());
    out += "," + std::to_string(a.surplus_to_grid().value()) + "\n";
  }
  return out;
}

}  // namespace csc
