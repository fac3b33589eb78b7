// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csc/core/model.hpp"

namespace csc {

enum class FindingCode {
  no_participants,
  duplicate_participant,
  duplicate_rank,
  bad_rank,
  bad_tariff,
  bad_uplift,
  bad_feed_in,
  production_meter_clash,
  duplicate_meter,
  missing_series,
  wrong_series_kind,
  gap,
  extra_slot,
  kor_coverage,
  kor_range,
  kor_sum,
  order_not_permutation,
};

struct Finding {
  FindingCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool has(FindingCode code) const {
    for (const auto& f : findings)
      if (f.code == code) return true;
    return false;
  }
  std::string to_string() const {
    std::string out;
    for (const auto& f : findings) out += f.message + "\n";
    return out;
  }
};

/// Optional policy inputs checked alongside the community.
struct ValidationInputs {
  std::optional<std::map<ParticipantId, double>> static_kors;
  std::optional<std::vector<ParticipantId>> custom_order;
};

/// Collects every violated community, series, and policy invariant. Never throws
/// on bad data; an empty report means the inputs are safe to allocate.
inline ValidationReport validate_community(const Community& community, const std::vector<SlotSeries>& series,
                                           const ValidationInputs& inputs = {}) {
  ValidationReport report;
  auto add = [&](FindingCode code, std::string msg) { report.findings.push_back({code, std::move(msg)}); };

  if (community.participants.empty()) add(FindingCode::no_participants, "community has no participants");

  std::set<ParticipantId> ids;
  std::set<int> ranks;
  std::set<std::string> meters;
  for (const auto& p : community.participants) {
    if (!ids.insert(p.id).second) add(FindingCode::duplicate_participant, "duplicate participant id " + p.id);
    if (p.priority_rank < 1)
      add(FindingCode::bad_rank, "participant " + p.id + ": priority rank must be a positive integer");
    else if (!ranks.insert(p.priority_rank).second)
      add(FindingCode::duplicate_rank, "participant " + p.id + ": priority rank " +
                                           std::to_string(p.priority_rank) + " is not unique");
    if (p.tariff_eur_per_kwh <= Decimal{}) add(FindingCode::bad_tariff, "participant " + p.id + ": tariff must be > 0");
    if (p.grid_uplift_pct < Decimal{} || p.tax_uplift_pct < Decimal{})
      add(FindingCode::bad_uplift, "participant " + p.id + ": uplift percentages must be >= 0");
    const auto& meter = p.consumption_meter();
    if (meter == community.production_meter)
      add(FindingCode::production_meter_clash,
          "participant " + p.id + " uses the production meter " + meter + " as its consumption meter");
    if (!meters.insert(meter).second) add(FindingCode::duplicate_meter, "meter " + meter + " is shared by participants");
  }
  if (community.feed_in_eur_per_kwh < Decimal{}) add(FindingCode::bad_feed_in, "feed-in rate must be >= 0");

  std::map<std::string, const SlotSeries*> by_meter;
  for (const auto& s : series) by_meter[s.meter_id()] = &s;

  const SlotSeries* production = nullptr;
  if (auto it = by_meter.find(community.production_meter); it == by_meter.end()) {
    add(FindingCode::missing_series, "no series for production meter " + community.production_meter);
  } else {
    production = it->second;
    if (production->kind() != SeriesKind::production)
      add(FindingCode::wrong_series_kind, "meter " + community.production_meter + " is not a production series");
  }

  for (const auto& p : community.participants) {
    const auto& meter = p.consumption_meter();
    auto it = by_meter.find(meter);
    if (it == by_meter.end()) {
      add(FindingCode::missing_series, "participant " + p.id + ": no series for meter " + meter);
      continue;
    }
    const SlotSeries& s = *it->second;
    if (s.kind() != SeriesKind::consumption)
      add(FindingCode::wrong_series_kind, "participant " + p.id + ": meter " + meter + " is not a consumption series");
    if (production == nullptr || &s == production) continue;
    std::set<Timestamp> have;
    for (const auto& slot : s.slots()) have.insert(slot.slot_start);
    std::set<Timestamp> want;
    for (const auto& slot : production->slots()) {
      want.insert(slot.slot_start);
      if (!have.count(slot.slot_start))
        add(FindingCode::gap, "participant " + p.id + ": gap at " + slot.slot_start.iso());
    }
    for (const auto& slot : s.slots())
      if (!want.count(slot.slot_start))
        add(FindingCode::extra_slot,
            "participant " + p.id + ": slot " + slot.slot_start.iso() + " has no production counterpart");
  }

  if (inputs.static_kors) {
    const auto& kors = *inputs.static_kors;
    double sum = 0.0;
    for (const auto& [id, k] : kors) {
      if (!ids.count(id)) add(FindingCode::kor_coverage, "KoR given for unknown participant " + id);
      if (!std::isfinite(k) || k < 0.0 || k > 1.0)
        add(FindingCode::kor_range, "KoR for " + id + " outside [0, 1]");
      sum += k;
    }
    for (const auto& id : ids)
      if (!kors.count(id)) add(FindingCode::kor_coverage, "participant " + id + " has no KoR");
    if (std::abs(sum - 1.0) > kKorTolerance) add(FindingCode::kor_sum, "KoR sum != 1 (got " + std::to_string(sum) + ")");
  }

  if (inputs.custom_order) {
    const auto& order = *inputs.custom_order;
    std::set<ParticipantId> seen(order.begin(), order.end());
    if (seen.size() != order.size() || seen != ids)
      add(FindingCode::order_not_permutation, "priority order is not a permutation of the participants");
  }

  return report;
}

}  // namespace csc
