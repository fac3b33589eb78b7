// SPDX-License-Identifier: Apache-2.0
//
// csc: collective self-consumption sharing engine.
//
//   csc ingest <meter.csv>... [--production-meter ID]... [--out DIR]
//   csc derive-kors --config run.cfg [--from YYYY-MM-DD --to YYYY-MM-DD] [--out DIR]
//   csc run --config run.cfg [--policy NAME]... [--out DIR]
//   csc synth-data --profile low_radiation|high_radiation --seed N --out DIR
//   csc audit-verify <audit_ledger.log>
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csc/csc.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kIo = 2;

std::string series_csv(const csc::SlotSeries& s) {
  std::string out = "slot_start,slot_index,wh\n";
  for (const auto& slot : s.slots())
    out += slot.slot_start.iso() + "," + std::to_string(slot.slot_start.slot_index()) + "," +
           std::to_string(slot.energy.value()) + "\n";
  return out;
}

int cmd_ingest(const std::vector<std::string>& files, const std::vector<std::string>& production_meters,
               const std::string& out_dir) {
  std::vector<csc::RawMeterRecord> records;
  bool bad = false;
  for (const auto& f : files) {
    const auto result = csc::ingest_csv(f);
    for (const auto& e : result.errors) {
      std::cerr << f << ":" << e.line << ": " << e.message << "\n";
      bad = true;
    }
    records.insert(records.end(), result.records.begin(), result.records.end());
  }

  std::map<std::string, std::vector<csc::RawMeterRecord>> by_meter;
  for (const auto& r : records) by_meter[r.meter_id].push_back(r);
  csc::OutputTree tree;
  for (const auto& [meter, recs] : by_meter) {
    const bool prod = std::find(production_meters.begin(), production_meters.end(), meter) != production_meters.end();
    try {
      const auto series =
          csc::normalize_to_slots(recs, prod ? csc::SeriesKind::production : csc::SeriesKind::consumption);
      std::cout << meter << ": " << series.size() << " slots, " << series.total().value() << " Wh ("
                << csc::to_string(series.kind()) << ")\n";
      tree[meter + ".csv"] = series_csv(series);
    } catch (const csc::ValidationError& e) {
      std::cerr << e.what() << "\n";
      bad = true;
    }
  }
  if (bad) return kValidation;
  if (!out_dir.empty()) csc::write_output_tree(tree, out_dir);
  return kOk;
}

int cmd_derive_kors(const std::string& config_path, const std::string& from, const std::string& to,
                    const std::string& out_dir) {
  auto config = csc::load_run_config(config_path);
  if (from.empty() != to.empty()) throw csc::ValidationError("--from and --to must be given together");
  if (!from.empty()) config.kor_window = std::make_pair(csc::parse_date(from), csc::parse_date(to));
  config.static_kors.reset();
  if (config.policies.empty()) config.policies = {csc::PolicyName::static_kors};
  const auto data = csc::prepare_data(config);
  const auto kors = csc::resolve_static_kors(config, data);

  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [id, k] : kors.entries()) j[id] = k;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_dir.empty()) csc::write_output_tree({{"kors.json", text}}, out_dir);
  return kOk;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& policies, const std::string& out_dir) {
  auto config = csc::load_run_config(config_path);
  if (!policies.empty()) {
    config.policies.clear();
    for (const auto& p : policies) config.policies.push_back(csc::parse_policy_name(p));
  }
  if (!out_dir.empty()) config.out_dir = out_dir;
  const auto files = csc::run(config);
  std::cout << csc::read_file(config.out_dir / "comparison.csv");
  std::cout << "wrote " << files.size() << " files to " << config.out_dir.string() << "\n";
  return kOk;
}

int cmd_synth(const std::string& profile, std::uint64_t seed, const std::string& out_dir) {
  const auto files = csc::synthesize_demo_data(csc::parse_profile(profile), seed);
  csc::write_output_tree(files, out_dir);
  std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
  return kOk;
}

int cmd_audit_verify(const std::string& path) {
  const auto text = csc::read_file(path);
  const auto parsed = csc::parse_ledger(text);
  const auto result = csc::verify_serialized(text);
  if (result.intact) {
    std::cout << "intact (" << parsed.records.size() << " records)\n";
    return kOk;
  }
  std::cout << "broken at record " << *result.first_break << ": " << result.reason << "\n";
  return kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective self-consumption sharing engine"};
  app.require_subcommand(1);

  std::vector<std::string> ingest_files, production_meters, policies;
  std::string config_path, out_dir, from, to, profile = "low_radiation", ledger_path;
  std::uint64_t seed = 1;

  auto* ingest = app.add_subcommand("ingest", "Normalize meter CSV files to 30-minute Wh series");
  ingest->add_option("files", ingest_files, "Meter CSV files")->required();
  ingest->add_option("--production-meter", production_meters, "Meter ids to treat as production");
  ingest->add_option("--out", out_dir, "Directory for normalized series");

  auto* derive = app.add_subcommand("derive-kors", "Derive static KoRs from consumption history");
  derive->add_option("--config", config_path, "Run configuration")->required();
  derive->add_option("--from", from, "First day of the window (YYYY-MM-DD)");
  derive->add_option("--to", to, "Last day of the window (YYYY-MM-DD)");
  derive->add_option("--out", out_dir, "Directory for kors.json");

  auto* run = app.add_subcommand("run", "Allocate, bill and audit every selected policy");
  run->add_option("--config", config_path, "Run configuration")->required();
  run->add_option("--policy", policies, "Policy to run (repeatable); overrides the config");
  run->add_option("--out", out_dir, "Output directory; overrides the config");

  auto* synth = app.add_subcommand("synth-data", "Write a deterministic demo day");
  synth->add_option("--profile", profile, "low_radiation or high_radiation");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out", out_dir, "Output directory")->required();

  auto* verify = app.add_subcommand("audit-verify", "Check a ledger's hash chain");
  verify->add_option("ledger", ledger_path, "Ledger file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_files, production_meters, out_dir);
    if (*derive) return cmd_derive_kors(config_path, from, to, out_dir);
    if (*run) return cmd_run(config_path, policies, out_dir);
    if (*synth) return cmd_synth(profile, seed, out_dir);
    if (*verify) return cmd_audit_verify(ledger_path);
  } catch (const csc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const csc::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kValidation;
}
