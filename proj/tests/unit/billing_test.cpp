// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "csc/allocation/policies.hpp"
#include "csc/billing/metrics.hpp"
#include "csc/billing/report_io.hpp"
#include "support/oracles.hpp"

namespace csc {
namespace {

const Timestamp kStart = Timestamp::parse("2022-05-04T00:00:00+02:00");
const TimeWindow kDay{kStart, kStart.plus_seconds(86400)};

Community estia() {
  Community c;
  c.production_meter = "pv";
  c.feed_in_eur_per_kwh = Decimal::parse("0.06");
  c.participants = {{"ESTIA1", "", Decimal::parse("0.13"), Decimal::parse("28"), Decimal::parse("38"), 1},
                    {"ESTIA2", "", Decimal::parse("0.13"), Decimal{}, Decimal::parse("38"), 2},
                    {"ESTIA4", "", Decimal::parse("0.11"), Decimal{}, Decimal{}, 3}};
  return c;
}

SlotAllocation slot(int k, std::int64_t prod, std::int64_t e1, std::int64_t e2, std::int64_t e4, std::int64_t surplus) {
  const EnergyMap demand{{"ESTIA1", EnergyWh(e1)}, {"ESTIA2", EnergyWh(e2)}, {"ESTIA4", EnergyWh(e4)}};
  return SlotAllocation(kStart.plus_seconds(k * kSlotSeconds), EnergyWh(prod), demand, demand, EnergyWh(surplus));
}

TEST(ComputeScr, FullSelfConsumption) {
  const std::vector<SlotAllocation> a{slot(20, 10'000, 5000, 3000, 2000, 0)};
  const auto r = compute_scr(a, kDay);
  ASSERT_TRUE(r.scr.has_value());
  EXPECT_EQ(*r.scr, 1.0);
}

TEST(ComputeScr, UndefinedWithoutProduction) {
  const std::vector<SlotAllocation> a{slot(0, 0, 0, 0, 0, 0), slot(1, 0, 0, 0, 0, 0)};
  EXPECT_FALSE(compute_scr(a, kDay).scr.has_value());
  EXPECT_FALSE(compute_scr(std::vector<SlotAllocation>{}, kDay).scr.has_value());
}

TEST(ComputeScr, TwoSlots) {
  // (500 + 1000) / (1000 + 1000)
  const std::vector<SlotAllocation> a{slot(20, 1000, 500, 0, 0, 500), slot(21, 1000, 400, 300, 300, 0)};
  EXPECT_DOUBLE_EQ(*compute_scr(a, kDay).scr, 0.75);
}

TEST(ComputeScr, RejectsOutOfWindow) {
  const std::vector<SlotAllocation> a{slot(48, 1000, 500, 0, 0, 500)};
  EXPECT_THROW(compute_scr(a, kDay), ValidationError);
}

TEST(ComputeSavings, PerKwhValues) {
  const std::vector<SlotAllocation> a{slot(20, 4000, 1000, 1000, 1000, 1000)};
  const auto r = compute_savings(a, estia(), kDay);
  EXPECT_EQ(r.per_participant.at("ESTIA1"), Decimal::parse("0.2158"));  // 0.13 * 1.66
  EXPECT_EQ(r.per_participant.at("ESTIA2"), Decimal::parse("0.1794"));  // 0.13 * 1.38
  EXPECT_EQ(r.per_participant.at("ESTIA4"), Decimal::parse("0.11"));
  EXPECT_EQ(r.feed_in, Decimal::parse("0.06"));
  EXPECT_EQ(r.total, Decimal::parse("0.5652"));
}

TEST(ComputeSavings, UnknownParticipant) {
  const EnergyMap demand{{"ESTIA9", EnergyWh(10)}};
  const std::vector<SlotAllocation> a{SlotAllocation(kStart, EnergyWh(10), demand, demand, EnergyWh(0))};
  EXPECT_THROW(compute_savings(a, estia(), kDay), ValidationError);
}

TEST(ComputeSavings, TotalIsSumOfParts) {
  test::Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<SlotAllocation> fixed;
    for (int k = 0; k < 48; ++k) {
      const auto e1 = rng.uniform(0, 90'000), e2 = rng.uniform(0, 90'000), e4 = rng.uniform(0, 90'000);
      const auto spare = rng.uniform(0, 1000);
      fixed.push_back(slot(k, e1 + e2 + e4 + spare, e1, e2, e4, spare));
    }
    auto c = estia();
    c.participants[0].tariff_eur_per_kwh = Decimal::from_micros(rng.uniform(1, 500'000));
    c.participants[1].grid_uplift_pct = Decimal::from_micros(rng.uniform(0, 90'000'000));
    c.feed_in_eur_per_kwh = Decimal::from_micros(rng.uniform(0, 200'000));
    const auto r = compute_savings(fixed, c, kDay);
    Decimal parts = r.feed_in;
    for (const auto& [id, v] : r.per_participant) parts += v;
    ASSERT_EQ(parts, r.total);
  }
}

TEST(ComputeSavings, TariffScaling) {
  test::Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SlotAllocation> a;
    for (int k = 0; k < 48; ++k) {
      const auto e1 = rng.uniform(0, 20'000), e2 = rng.uniform(0, 20'000), e4 = rng.uniform(0, 20'000);
      const auto spare = rng.uniform(0, 5000);
      a.push_back(slot(k, e1 + e2 + e4 + spare, e1, e2, e4, spare));
    }
    const std::int64_t lambda = rng.uniform(2, 9);
    auto scaled = estia();
    for (auto& p : scaled.participants) p.tariff_eur_per_kwh = p.tariff_eur_per_kwh * lambda;
    scaled.feed_in_eur_per_kwh = scaled.feed_in_eur_per_kwh * lambda;

    const auto base = compute_savings(a, estia(), kDay);
    const auto big = compute_savings(a, scaled, kDay);
    // Each figure is rounded once from its exact value, so scaling commutes
    // up to the rounding unit of each term.
    for (const auto& [id, v] : base.per_participant)
      ASSERT_LE(std::abs((big.per_participant.at(id) - v * lambda).micros()), lambda);
    ASSERT_LE(std::abs((big.feed_in - base.feed_in * lambda).micros()), lambda);
    ASSERT_LE(std::abs((big.total - base.total * lambda).micros()), 4 * lambda);
    EXPECT_EQ(compute_scr(a, kDay).scr, compute_scr(a, kDay).scr);
  }
}

TEST(ComputeScr, MonotoneInSelfConsumption) {
  test::Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SlotAllocation> a;
    for (int k = 0; k < 8; ++k) {
      const auto prod = rng.uniform(1, 10'000);
      const auto e1 = rng.uniform(0, prod - 1);
      a.push_back(slot(k, prod, e1, 0, 0, prod - e1));
    }
    const auto before = *compute_scr(a, kDay).scr;
    const std::size_t k = static_cast<std::size_t>(rng.uniform(0, 7));
    const auto& s = a[k];
    const auto more = s.self_consumed().at("ESTIA1").value() + 1;
    a[k] = slot(static_cast<int>(k), s.production().value(), more, 0, 0, s.production().value() - more);
    ASSERT_GT(*compute_scr(a, kDay).scr, before);
  }
}

ScrReport scr_of(std::int64_t sc, std::int64_t prod) {
  return ScrReport{static_cast<double>(sc) / static_cast<double>(prod), EnergyWh(sc), EnergyWh(prod), kDay};
}

SavingsReport savings_of(const char* total) {
  SavingsReport s;
  s.total = Decimal::parse(total);
  s.window = kDay;
  return s;
}

TEST(ComparePolicies, IdenticalReportsGiveZero) {
  const auto t = compare_policies({{"a", {scr_of(884, 1000), savings_of("10")}}, {"b", {scr_of(884, 1000), savings_of("10")}}});
  ASSERT_EQ(t.differences.size(), 2u);
  for (const auto& d : t.differences) {
    EXPECT_EQ(*d.scr_pct, 0.0);
    EXPECT_EQ(*d.savings_pct, 0.0);
  }
}

TEST(ComparePolicies, RelativeToBaseline) {
  const auto t = compare_policies(
      {{"custom-dynamic", {scr_of(884, 1000), savings_of("104.84")}}, {"static", {scr_of(851, 1000), savings_of("100")}}});
  const auto& d = t.differences.front();
  ASSERT_EQ(d.policy, "custom-dynamic");
  ASSERT_EQ(d.baseline, "static");
  EXPECT_NEAR(*d.savings_pct, 4.84, 1e-9);
  EXPECT_NEAR(*d.scr_pct, 3.88, 0.005);  // 0.033 / 0.851
}

TEST(ComparePolicies, MismatchedWindows) {
  auto other = scr_of(1, 2);
  other.window = TimeWindow{kStart, kStart.plus_seconds(1800)};
  auto other_savings = savings_of("1");
  other_savings.window = other.window;
  EXPECT_THROW(compare_policies({{"a", {scr_of(1, 2), savings_of("1")}}, {"b", {other, other_savings}}}),
               ValidationError);
  EXPECT_THROW(compare_policies({{"a", {scr_of(1, 2), other_savings}}}), ValidationError);
}

TEST(ComparePolicies, ZeroBaselineIsUndefined) {
  ScrReport undefined{std::nullopt, EnergyWh(0), EnergyWh(0), kDay};
  const auto t = compare_policies({{"a", {scr_of(1, 2), savings_of("1")}}, {"b", {undefined, savings_of("0")}}});
  for (const auto& d : t.differences) {
    EXPECT_FALSE(d.scr_pct.has_value());
    if (d.baseline == "b") EXPECT_FALSE(d.savings_pct.has_value());
  }
}

TEST(CustomDominance, EconomicOrderNeverLosesToDefault) {
  const auto c = estia();
  const TariffBook book = TariffBook::from(c);
  const auto order = derive_priority_order(c.participants, book);
  test::Rng rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SlotAllocation> cd, dd;
    for (int k = 0; k < 48; ++k) {
      const EnergyMap demand{{"ESTIA1", EnergyWh(rng.uniform(0, 30'000))},
                             {"ESTIA2", EnergyWh(rng.uniform(0, 30'000))},
                             {"ESTIA4", EnergyWh(rng.uniform(0, 30'000))}};
      const EnergyWh prod(rng.uniform(0, 90'000));
      const auto t = kStart.plus_seconds(k * kSlotSeconds);
      cd.push_back(allocate_custom_dynamic(t, prod, demand, order));
      dd.push_back(allocate_default_dynamic(t, prod, demand));
    }
    ASSERT_GE(compute_savings(cd, book, kDay).total, compute_savings(dd, book, kDay).total);
    ASSERT_EQ(compute_scr(cd, kDay).scr, compute_scr(dd, kDay).scr);
  }
}

TEST(ReportIo, CsvAndJsonShapes) {
  const std::vector<SlotAllocation> a{slot(20, 4000, 1000, 1000, 1000, 1000)};
  const auto scr = compute_scr(a, kDay);
  const auto savings = compute_savings(a, estia(), kDay);
  const auto t = compare_policies({{"static", {scr, savings}}});
  const auto csv = comparison_csv(t);
  EXPECT_EQ(csv,
            "policy,scr,savings_total_eur,savings_ESTIA1_eur,savings_ESTIA2_eur,savings_ESTIA4_eur,feed_in_eur\n"
            "static,0.750000,0.57,0.22,0.18,0.11,0.06\n");
  const auto alloc = allocations_csv(a);
  EXPECT_EQ(alloc.substr(0, alloc.find('\n')),
            "slot_start,slot_index,production_wh,consumption_ESTIA1_wh,consumption_ESTIA2_wh,consumption_ESTIA4_wh,"
            "self_consumed_ESTIA1_wh,self_consumed_ESTIA2_wh,self_consumed_ESTIA4_wh,surplus_wh");
  EXPECT_NE(alloc.find("2022-05-04T10:00:00+02:00,21,4000,1000,1000,1000,1000,1000,1000,1000"), std::string::npos);
  const auto j = to_json(savings);
  EXPECT_EQ(j["total"]["exact_eur"], "0.565200");
  EXPECT_EQ(j["total"]["eur"], "0.57");
  EXPECT_EQ(to_json(ScrReport{std::nullopt, EnergyWh(0), EnergyWh(0), kDay})["scr"], "undefined");
}

}  // namespace
}  // namespace csc
