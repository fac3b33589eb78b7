// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "csc/runner/run.hpp"
#include "csc/runner/synth.hpp"

namespace csc {
namespace {

namespace fs = std::filesystem;

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("csc_runner_" + std::string(info->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path synth(RadiationProfile profile, std::uint64_t seed, const std::map<std::string, std::string>& settings = {}) {
    auto files = synthesize_demo_data(profile, seed);
    for (const auto& [k, v] : settings) set_config_key(files, k, v);
    write_output_tree(files, dir_ / "in");
    return dir_ / "in" / "run.cfg";
  }

  static std::string slurp(const fs::path& p) { return read_file(p); }

  fs::path dir_;
};

RunConfig config_from(const std::string& text, const fs::path& base) {
  return parse_run_config(KeyValueFile::parse(text), base);
}

TEST(RunConfigParse, Defaults) {
  const auto c = config_from("meters = a.csv, b.csv\ncommunity = c.json\npolicies = static\n", "/base");
  ASSERT_EQ(c.meter_files.size(), 2u);
  EXPECT_EQ(c.meter_files[1], fs::path("/base/b.csv"));
  EXPECT_EQ(c.scenario.pv_gain, Decimal::from_int(1));
  EXPECT_FALSE(c.scenario.include_datacentre);
  EXPECT_EQ(c.out_dir, fs::path("/base/out"));
  EXPECT_EQ(c.custom_order.source, CustomOrder::Source::economic);
}

TEST(RunConfigParse, Options) {
  const auto c = config_from(
      "meters = /abs/m.csv\ncommunity = c.json\npolicies = custom-dynamic, static, static\n"
      "static_kors = A:0.5, B:0.5\nkor_window = 2020-10-17, 2021-10-16\ncustom_order = B, A\n"
      "include_datacentre = true\ndatacentre_participant = B\n",
      "/base");
  EXPECT_EQ(c.meter_files[0], fs::path("/abs/m.csv"));
  ASSERT_EQ(c.policies.size(), 2u);
  EXPECT_EQ(c.static_kors->at("A"), 0.5);
  EXPECT_EQ(c.custom_order.source, CustomOrder::Source::explicit_list);
  EXPECT_EQ(c.custom_order.ids, (std::vector<std::string>{"B", "A"}));
  EXPECT_TRUE(c.scenario.include_datacentre);
}

TEST(RunConfigParse, Errors) {
  const std::string base = "meters = m.csv\ncommunity = c.json\n";
  EXPECT_THROW(config_from(base + "colour = red\n", "/"), ValidationError);
  EXPECT_THROW(config_from("community = c.json\n", "/"), ValidationError);
  EXPECT_THROW(config_from(base + "policies = greedy\n", "/"), ValidationError);
  EXPECT_THROW(config_from(base + "include_datacentre = true\n", "/"), ValidationError);
  EXPECT_THROW(config_from(base + "static_kors = A0.5\n", "/"), ValidationError);
  EXPECT_THROW(config_from(base + "kor_window = 2021-02-30, 2021-03-01\n", "/"), ValidationError);
  EXPECT_THROW(config_from(base + "pv_gain = 0\n", "/"), ValidationError);
}

TEST(CommunityJson, RoundTrip) {
  const auto c = demo_community();
  const auto back = parse_community_json(community_to_json(c));
  ASSERT_EQ(back.participants.size(), 3u);
  EXPECT_EQ(back.production_meter, "pv_estia1");
  EXPECT_EQ(back.participants[0].grid_uplift_pct, Decimal::parse("28"));
  EXPECT_EQ(back.participants[2].meter_id, "estia4_cons");
  EXPECT_EQ(back.feed_in_eur_per_kwh, Decimal::parse("0.06"));
  EXPECT_THROW(parse_community_json("{"), ValidationError);
}

TEST(Synth, SetConfigKey) {
  auto files = synthesize_demo_data(RadiationProfile::low_radiation, 1);
  set_config_key(files, "include_datacentre", "true");
  set_config_key(files, "kor_window", "2022-05-04, 2022-05-04");
  const auto kv = KeyValueFile::parse(files.at("run.cfg"));
  EXPECT_EQ(kv.get("include_datacentre"), "true");
  EXPECT_EQ(kv.get("kor_window"), "2022-05-04, 2022-05-04");
}

TEST(Synth, DeterministicPerSeed) {
  EXPECT_EQ(synthesize_demo_data(RadiationProfile::high_radiation, 7),
            synthesize_demo_data(RadiationProfile::high_radiation, 7));
  EXPECT_NE(synthesize_demo_data(RadiationProfile::high_radiation, 7).at("meters.csv"),
            synthesize_demo_data(RadiationProfile::high_radiation, 8).at("meters.csv"));
  EXPECT_THROW(parse_profile("cloudy"), ValidationError);
}

TEST_F(RunnerTest, ZeroPoliciesRejected) {
  const auto cfg = synth(RadiationProfile::low_radiation, 1);
  auto c = load_run_config(cfg);
  c.policies.clear();
  EXPECT_THROW(run_in_memory(c), ValidationError);
}

TEST_F(RunnerTest, FullRunWritesEveryReport) {
  const auto cfg = synth(RadiationProfile::high_radiation, 11);
  auto c = load_run_config(cfg);
  c.out_dir = dir_ / "out";
  const auto files = run(c);
  for (const char* p : {"static", "static33", "default-dynamic", "custom-dynamic"}) {
    for (const std::string prefix : {"scr_", "savings_"}) EXPECT_TRUE(files.count(prefix + p + ".json")) << p;
    EXPECT_TRUE(files.count(std::string("allocations_") + p + ".csv")) << p;
  }
  for (const auto& [name, content] : files) EXPECT_EQ(slurp(c.out_dir / name), content) << name;
  EXPECT_TRUE(verify_serialized(files.at(kLedgerFile)).intact);
  // 48 slots x (1 production + 3 consumption + 4 allocations)
  EXPECT_EQ(std::count(files.at(kLedgerFile).begin(), files.at(kLedgerFile).end(), '\n'), 48 * 8);

  const auto table = nlohmann::json::parse(files.at("comparison.json"));
  EXPECT_EQ(table["policies"].size(), 4u);
  EXPECT_EQ(table["differences"].size(), 12u);

  // A second run into the same, now populated, directory is refused.
  EXPECT_THROW(run(c), IoError);
}

TEST_F(RunnerTest, DeterministicOutput) {
  const auto cfg = synth(RadiationProfile::low_radiation, 5);
  const auto c = load_run_config(cfg);
  EXPECT_EQ(run_in_memory(c), run_in_memory(c));
}

TEST_F(RunnerTest, DatacentreSaturatesDynamicPolicies) {
  const auto cfg = synth(RadiationProfile::high_radiation, 3, {{"include_datacentre", "true"}});
  auto c = load_run_config(cfg);
  c.policies = {PolicyName::static_kors, PolicyName::default_dynamic, PolicyName::custom_dynamic};
  const auto files = run_in_memory(c);
  for (const char* p : {"static", "default-dynamic", "custom-dynamic"}) {
    const auto j = nlohmann::json::parse(files.at(std::string("scr_") + p + ".json"));
    EXPECT_EQ(j["report"]["self_consumed_wh"], j["report"]["production_wh"]) << p;
  }
}

TEST_F(RunnerTest, ScrOrderingOnDemoDays) {
  for (auto profile : {RadiationProfile::low_radiation, RadiationProfile::high_radiation})
    for (const char* dc : {"false", "true"}) {
      fs::remove_all(dir_);
      const auto files = run_in_memory(load_run_config(synth(profile, 17, {{"include_datacentre", dc}})));
      auto scr = [&](const char* p) {
        return nlohmann::json::parse(files.at(std::string("scr_") + p + ".json"))["report"]["self_consumed_wh"]
            .get<std::int64_t>();
      };
      EXPECT_LE(scr("static33"), scr("static")) << dc;
      EXPECT_LE(scr("static"), scr("default-dynamic")) << dc;
      EXPECT_EQ(scr("default-dynamic"), scr("custom-dynamic")) << dc;
    }
}

TEST_F(RunnerTest, ExplicitKorsAndOrder) {
  const auto cfg = synth(RadiationProfile::low_radiation, 2,
                         {{"static_kors", "ESTIA1:0.4245, ESTIA2:0.5039, ESTIA4:0.0716"},
                          {"custom_order", "ESTIA4, ESTIA2, ESTIA1"}});
  const auto files = run_in_memory(load_run_config(cfg));
  const auto params = nlohmann::json::parse(files.at("policies.json"));
  EXPECT_DOUBLE_EQ(params["static"]["kors"]["ESTIA2"].get<double>(), 0.5039);
  EXPECT_EQ(params["custom-dynamic"]["order"][0], "ESTIA4");
}

TEST_F(RunnerTest, InvalidInputWritesNothing) {
  const auto cfg = synth(RadiationProfile::low_radiation, 2, {{"static_kors", "ESTIA1:0.5, ESTIA2:0.6, ESTIA4:0.1"}});
  auto c = load_run_config(cfg);
  c.out_dir = dir_ / "out";
  EXPECT_THROW(run(c), ValidationError);
  EXPECT_FALSE(fs::exists(c.out_dir));
}

TEST_F(RunnerTest, MissingSlotIsReported) {
  auto files = synthesize_demo_data(RadiationProfile::low_radiation, 9);
  auto& meters = files["meters.csv"];
  const auto at = meters.find("estia4_cons,linky,2022-05-04T12:00:00+02:00");
  ASSERT_NE(at, std::string::npos);
  meters.erase(at, meters.find('\n', at) - at + 1);
  write_output_tree(files, dir_ / "in");
  try {
    run_in_memory(load_run_config(dir_ / "in" / "run.cfg"));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("12:00"), std::string::npos) << e.what();
  }
}

TEST_F(RunnerTest, StagingFailureLeavesNoDirectory) {
  OutputTree bad{{"ok.txt", "x"}, {"sub/missing/file.txt", "y"}};
  EXPECT_THROW(write_output_tree(bad, dir_ / "out"), IoError);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  EXPECT_FALSE(fs::exists(dir_ / ".out.staging"));
}

}  // namespace
}  // namespace csc
