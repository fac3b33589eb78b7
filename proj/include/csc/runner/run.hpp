// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "csc/allocation/series.hpp"
#include "csc/audit/ledger.hpp"
#include "csc/billing/metrics.hpp"
#include "csc/billing/report_io.hpp"
#include "csc/core/validate.hpp"
#include "csc/ingestion/kors.hpp"
#include "csc/ingestion/normalize.hpp"
#include "csc/runner/config.hpp"

namespace csc {

struct PreparedData {
  Community community;
  SlotSeries production;
  std::map<ParticipantId, SlotSeries> consumptions;  // post-scenario
  TimeWindow window;
};

inline constexpr const char* kLedgerFile = "audit_ledger.log";

namespace detail {

inline std::vector<RawMeterRecord> load_records(const std::vector<std::filesystem::path>& files) {
  std::vector<RawMeterRecord> records;
  std::string problems;
  for (const auto& f : files) {
    const auto result = ingest_csv_text(read_file(f));
    for (const auto& e : result.errors)
      problems += f.string() + ":" + std::to_string(e.line) + ": " + e.message + "\n";
    records.insert(records.end(), result.records.begin(), result.records.end());
  }
  if (!problems.empty()) throw ValidationError("meter data has invalid rows:\n" + problems);
  return records;
}

inline std::map<ParticipantId, SlotSeries> participant_series(const Community& community,
                                                              const std::vector<SlotSeries>& series) {
  std::map<std::string, const SlotSeries*> by_meter;
  for (const auto& s : series) by_meter[s.meter_id()] = &s;
  std::map<ParticipantId, SlotSeries> out;
  for (const auto& p : community.participants)
    if (auto it = by_meter.find(p.consumption_meter()); it != by_meter.end()) out.emplace(p.id, *it->second);
  return out;
}

}  // namespace detail

/// Loads meter data and the community, applies the scenario, and validates
/// everything the policies will need. Throws ValidationError listing all findings.
inline PreparedData prepare_data(const RunConfig& config) {
  if (config.policies.empty()) throw ValidationError("no policy selected");
  PreparedData d;
  d.community = parse_community_json(read_file(config.community_file));

  auto records = detail::load_records(config.meter_files);
  auto series = normalize_all(records, {d.community.production_meter});

  for (auto& s : series) {
    if (s.meter_id() == d.community.production_meter) s = apply_pv_gain(s, config.scenario.pv_gain);
  }
  if (config.scenario.include_datacentre) {
    const auto* host = d.community.find(*config.datacentre_participant);
    if (host == nullptr)
      throw ValidationError("datacentre_participant " + *config.datacentre_participant + " is not a participant");
    for (auto& s : series)
      if (s.meter_id() == host->consumption_meter()) s = add_constant_load(s, config.scenario.datacentre_load_kw);
  }

  ValidationInputs inputs;
  inputs.static_kors = config.static_kors;
  if (config.custom_order.source == CustomOrder::Source::explicit_list) inputs.custom_order = config.custom_order.ids;
  const auto report = validate_community(d.community, series, inputs);
  if (!report.ok()) throw ValidationError("validation failed:\n" + report.to_string());

  for (auto& s : series)
    if (s.meter_id() == d.community.production_meter) d.production = s;
  d.consumptions = detail::participant_series(d.community, series);
  if (d.production.empty()) throw ValidationError("production series has no slots");
  d.window = TimeWindow{d.production.slots().front().slot_start,
                        d.production.slots().back().slot_start.plus_seconds(kSlotSeconds)};
  return d;
}

/// Static keys from config, else derived from a history file, else derived from
/// the run's own consumption. `kor_window` restricts either derivation.
inline KorVector resolve_static_kors(const RunConfig& config, const PreparedData& d) {
  if (config.static_kors) return KorVector::make(*config.static_kors);
  std::optional<TimeWindow> window;
  if (config.kor_window)
    window = TimeWindow::days(config.kor_window->first, config.kor_window->second, d.window.begin.offset_minutes());
  if (config.kor_history) {
    const auto records = detail::load_records({*config.kor_history});
    const auto history = detail::participant_series(d.community, normalize_all(records, {}));
    for (const auto& p : d.community.participants)
      if (!history.count(p.id)) throw ValidationError("KoR history has no series for participant " + p.id);
    if (!window) {
      Timestamp lo = history.begin()->second.empty() ? d.window.begin : history.begin()->second.slots().front().slot_start;
      Timestamp hi = lo;
      for (const auto& [id, s] : history)
        for (const auto& slot : s.slots()) {
          lo = std::min(lo, slot.slot_start);
          hi = std::max(hi, slot.slot_start);
        }
      window = TimeWindow{lo, hi.plus_seconds(kSlotSeconds)};
    }
    return derive_static_kors(history, *window);
  }
  return derive_static_kors(d.consumptions, window.value_or(d.window));
}

inline std::vector<ParticipantId> resolve_custom_order(const RunConfig& config, const Community& community) {
  switch (config.custom_order.source) {
    case CustomOrder::Source::economic:
      return derive_priority_order(community.participants, TariffBook::from(community));
    case CustomOrder::Source::rank:
      return rank_order(community.participants);
    case CustomOrder::Source::explicit_list:
      return config.custom_order.ids;
  }
  return {};
}

inline AllocationPolicy build_policy(PolicyName name, const RunConfig& config, const PreparedData& d) {
  std::vector<ParticipantId> ids;
  for (const auto& p : d.community.participants) ids.push_back(p.id);
  switch (name) {
    case PolicyName::static_kors:
      return StaticPolicy{resolve_static_kors(config, d)};
    case PolicyName::static33:
      return StaticPolicy{KorVector::equal(ids)};
    case PolicyName::default_dynamic:
      return DefaultDynamicPolicy{};
    case PolicyName::custom_dynamic:
      return CustomDynamicPolicy{resolve_custom_order(config, d.community)};
  }
  throw ValidationError("unhandled policy");
}

/// Computes every output file without touching the filesystem beyond reading inputs.
inline OutputTree run_in_memory(const RunConfig& config) {
  const PreparedData d = prepare_data(config);
  const TariffBook book = TariffBook::from(d.community);

  std::vector<PolicyName> policies = config.policies;
  std::sort(policies.begin(), policies.end(),
            [](PolicyName a, PolicyName b) { return std::string(to_string(a)) < std::string(to_string(b)); });

  OutputTree files;
  std::map<std::string, std::pair<ScrReport, SavingsReport>> reports;
  std::map<std::string, std::vector<SlotAllocation>> allocations;
  nlohmann::ordered_json policy_params = nlohmann::ordered_json::object();

  for (auto name : policies) {
    const std::string label = to_string(name);
    const auto policy = build_policy(name, config, d);
    if (const auto* s = std::get_if<StaticPolicy>(&policy)) {
      nlohmann::ordered_json k = nlohmann::ordered_json::object();
      for (const auto& [id, v] : s->kors.entries()) k[id] = v;
      policy_params[label] = {{"kors", k}};
    } else if (const auto* c = std::get_if<CustomDynamicPolicy>(&policy)) {
      policy_params[label] = {{"order", c->order}};
    } else {
      policy_params[label] = nlohmann::ordered_json::object();
    }

    auto allocs = allocate_series(policy, d.production, d.consumptions);
    auto scr = compute_scr(allocs, d.window);
    auto savings = compute_savings(allocs, book, d.window);

    files["scr_" + label + ".json"] = nlohmann::ordered_json{{"policy", label}, {"report", to_json(scr)}}.dump(2) + "\n";
    files["savings_" + label + ".json"] =
        nlohmann::ordered_json{{"policy", label}, {"report", to_json(savings)}}.dump(2) + "\n";
    files["allocations_" + label + ".csv"] = allocations_csv(allocs);
    reports.emplace(label, std::make_pair(std::move(scr), std::move(savings)));
    allocations.emplace(label, std::move(allocs));
  }
  files["policies.json"] = policy_params.dump(2) + "\n";

  // Ledger order: per slot, metered energy (production, then participants by id),
  // then each policy's allocation by policy name.
  AuditLedger ledger;
  for (std::size_t i = 0; i < d.production.size(); ++i) {
    const auto& slot = d.production.slots()[i];
    ledger.append(energy_payload(SeriesKind::production, slot.energy), d.community.production_meter, slot.slot_start);
    for (const auto& [id, s] : d.consumptions)
      ledger.append(energy_payload(SeriesKind::consumption, s.slots()[i].energy), s.meter_id(), slot.slot_start);
    for (const auto& [label, allocs] : allocations)
      ledger.append(allocation_payload(label, allocs[i]), std::string(kKorCountingPoint), slot.slot_start);
  }
  files[kLedgerFile] = ledger.serialize();

  const auto table = compare_policies(reports);
  files["comparison.csv"] = comparison_csv(table);
  files["comparison_differences.csv"] = differences_csv(table);
  files["comparison.json"] = to_json(table).dump(2) + "\n";
  return files;
}

/// Writes the tree all-or-nothing: files go to a staging directory that is
/// renamed into place only after every write succeeded. `out_dir` must be
/// absent or empty.
inline void write_output_tree(const OutputTree& files, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(out_dir, ec)) {
    if (!fs::is_directory(out_dir, ec) || !fs::is_empty(out_dir, ec))
      throw IoError("output directory " + out_dir.string() + " exists and is not empty");
  }
  const fs::path target = out_dir.has_filename() ? out_dir : out_dir.parent_path();
  const fs::path staging = target.parent_path() / ("." + target.filename().string() + ".staging");
  fs::remove_all(staging, ec);
  try {
    if (!target.parent_path().empty()) fs::create_directories(target.parent_path());
    fs::create_directories(staging);
    for (const auto& [name, content] : files) {
      std::ofstream out(staging / name, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw IoError("cannot write " + (staging / name).string());
    }
    if (fs::exists(target)) fs::remove(target);
    fs::rename(staging, target);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw IoError(e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

inline OutputTree run(const RunConfig& config) {
  auto files = run_in_memory(config);
  write_output_tree(files, config.out_dir);
  return files;
}

}  // namespace csc
