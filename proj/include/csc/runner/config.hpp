// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csc/core/model.hpp"
#include "csc/ingestion/keyvalue.hpp"
#include "csc/ingestion/scenario.hpp"

namespace csc {

/// Emitted file name -> content. Ordered, so emission order is deterministic.
using OutputTree = std::map<std::string, std::string>;

enum class PolicyName { static_kors, static33, default_dynamic, custom_dynamic };

inline const char* to_string(PolicyName p) {
  switch (p) {
    case PolicyName::static_kors:
      return "static";
    case PolicyName::static33:
      return "static33";
    case PolicyName::default_dynamic:
      return "default-dynamic";
    case PolicyName::custom_dynamic:
      return "custom-dynamic";
  }
  return "?";
}

inline PolicyName parse_policy_name(std::string_view s) {
  for (auto p : {PolicyName::static_kors, PolicyName::static33, PolicyName::default_dynamic, PolicyName::custom_dynamic})
    if (s == to_string(p)) return p;
  throw ValidationError("unknown policy '" + std::string(s) +
                        "' (expected static, static33, default-dynamic or custom-dynamic)");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

namespace detail {

inline Decimal json_decimal(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing " + key);
  const auto& v = j.at(key);
  if (v.is_string()) return Decimal::parse(v.get<std::string>());
  if (v.is_number()) return Decimal::parse(v.dump());
  throw ValidationError(where + ": " + key + " must be a decimal string or number");
}

}  // namespace detail

/// Community file (JSON):
///   { "production_meter": "pv01", "feed_in_eur_per_kwh": "0.06",
///     "participants": [ { "id": "ESTIA1", "meter_id": "estia1", "tariff_eur_per_kwh": "0.13",
///                         "grid_uplift_pct": "28", "tax_uplift_pct": "38", "priority_rank": 1 }, ... ] }
inline Community parse_community_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("community file is not valid JSON: ") + e.what());
  }
  try {
    Community c;
    c.production_meter = j.at("production_meter").get<std::string>();
    c.feed_in_eur_per_kwh = detail::json_decimal(j, "feed_in_eur_per_kwh", "community");
    for (const auto& p : j.at("participants")) {
      Participant part;
      part.id = p.at("id").get<std::string>();
      const std::string where = "participant " + part.id;
      part.meter_id = p.value("meter_id", std::string{});
      part.tariff_eur_per_kwh = detail::json_decimal(p, "tariff_eur_per_kwh", where);
      part.grid_uplift_pct = p.contains("grid_uplift_pct") ? detail::json_decimal(p, "grid_uplift_pct", where) : Decimal{};
      part.tax_uplift_pct = p.contains("tax_uplift_pct") ? detail::json_decimal(p, "tax_uplift_pct", where) : Decimal{};
      part.priority_rank = p.value("priority_rank", 0);
      c.participants.push_back(std::move(part));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("community file: ") + e.what());
  }
}

inline std::string community_to_json(const Community& c) {
  nlohmann::ordered_json j;
  j["production_meter"] = c.production_meter;
  j["feed_in_eur_per_kwh"] = c.feed_in_eur_per_kwh.to_string(4);
  j["participants"] = nlohmann::ordered_json::array();
  for (const auto& p : c.participants)
    j["participants"].push_back({{"id", p.id},
                                 {"meter_id", p.consumption_meter()},
                                 {"tariff_eur_per_kwh", p.tariff_eur_per_kwh.to_string(4)},
                                 {"grid_uplift_pct", p.grid_uplift_pct.to_string(2)},
                                 {"tax_uplift_pct", p.tax_uplift_pct.to_string(2)},
                                 {"priority_rank", p.priority_rank}});
  return j.dump(2) + "\n";
}

/// How the customised dynamic waterfall orders participants.
struct CustomOrder {
  enum class Source { economic, rank, explicit_list } source = Source::economic;
  std::vector<ParticipantId> ids;  // explicit_list only
};

struct RunConfig {
  std::vector<std::filesystem::path> meter_files;
  std::filesystem::path community_file;
  ScenarioConfig scenario;
  std::optional<ParticipantId> datacentre_participant;
  std::vector<PolicyName> policies;
  std::optional<std::map<ParticipantId, double>> static_kors;
  std::optional<std::filesystem::path> kor_history;
  std::optional<std::pair<std::chrono::year_month_day, std::chrono::year_month_day>> kor_window;
  CustomOrder custom_order;
  std::filesystem::path out_dir = "out";
};

inline std::chrono::year_month_day parse_date(std::string_view s) {
  int y = 0;
  unsigned m = 0, d = 0;
  int consumed = 0;
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%4d-%2u-%2u%n", &y, &m, &d, &consumed) != 3 || consumed != 10)
    throw ValidationError("invalid date '" + str + "' (expected YYYY-MM-DD)");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw ValidationError("invalid date '" + str + "'");
  return ymd;
}

/// Run configuration ("key = value"). Relative paths resolve against `base_dir`.
///
///   meters = a.csv, b.csv            community = community.json
///   pv_gain = 25.48                  datacentre_load_kw = 100
///   include_datacentre = false       datacentre_participant = ESTIA4
///   policies = static, static33, default-dynamic, custom-dynamic
///   static_kors = ESTIA1:0.4245, ESTIA2:0.5039, ESTIA4:0.0716     (optional)
///   kor_history = history.csv        kor_window = 2020-10-17, 2021-10-16   (optional)
///   custom_order = economic | rank | ESTIA1, ESTIA2, ESTIA4
///   out = out
inline RunConfig parse_run_config(const KeyValueFile& kv, const std::filesystem::path& base_dir = {}) {
  static const std::set<std::string> known = {
      "meters",      "community",  "pv_gain",      "datacentre_load_kw", "include_datacentre", "datacentre_participant",
      "policies",    "static_kors", "kor_history", "kor_window",         "custom_order",       "out"};
  for (const auto& [k, v] : kv.values())
    if (!known.count(k)) throw ValidationError("unknown config key " + k);

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  RunConfig c;
  for (const auto& m : kv.list("meters")) c.meter_files.push_back(resolve(m));
  if (c.meter_files.empty()) throw ValidationError("config is missing required key meters");
  c.community_file = resolve(kv.require("community"));
  c.scenario = parse_scenario_config(kv);
  if (auto v = kv.get("datacentre_participant")) c.datacentre_participant = *v;
  if (c.scenario.include_datacentre && !c.datacentre_participant)
    throw ValidationError("include_datacentre requires datacentre_participant");

  for (const auto& p : kv.list("policies")) {
    const auto name = parse_policy_name(p);
    if (std::find(c.policies.begin(), c.policies.end(), name) == c.policies.end()) c.policies.push_back(name);
  }

  if (kv.get("static_kors")) {
    std::map<ParticipantId, double> kors;
    for (const auto& item : kv.list("static_kors")) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ValidationError("static_kors entry '" + item + "' lacks ':'");
      const auto id = item.substr(0, colon);
      const auto coefficient = Decimal::parse(item.substr(colon + 1));
      if (!kors.emplace(id, coefficient.to_double()).second)
        throw ValidationError("static_kors lists " + id + " twice");
    }
    c.static_kors = std::move(kors);
  }
  if (auto v = kv.get("kor_history")) c.kor_history = resolve(*v);
  if (kv.get("kor_window")) {
    const auto parts = kv.list("kor_window");
    if (parts.size() != 2) throw ValidationError("kor_window expects 'first-date, last-date'");
    c.kor_window = std::make_pair(parse_date(parts[0]), parse_date(parts[1]));
  }

  if (auto v = kv.get("custom_order")) {
    if (*v == "economic") {
      c.custom_order.source = CustomOrder::Source::economic;
    } else if (*v == "rank") {
      c.custom_order.source = CustomOrder::Source::rank;
    } else {
      c.custom_order.source = CustomOrder::Source::explicit_list;
      c.custom_order.ids = kv.list("custom_order");
    }
  }
  c.out_dir = resolve(kv.get("out").value_or("out"));
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(KeyValueFile::parse(read_file(path)), path.parent_path());
}

}  // namespace csc
