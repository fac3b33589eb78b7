// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csc/audit/digest.hpp"
#include "csc/core/model.hpp"

namespace csc {

/// Counting-point key under which per-slot allocation results are logged.
inline constexpr std::string_view kKorCountingPoint = "KOR";

/// Ordered name=value fields. Canonical form: "name=value;name=value", no whitespace.
class AuditPayload {
 public:
  AuditPayload& add(std::string name, std::string value) {
    check_token(name);
    check_token(value);
    fields_.emplace_back(std::move(name), std::move(value));
    return *this;
  }
  AuditPayload& add(std::string name, std::int64_t value) { return add(std::move(name), std::to_string(value)); }

  std::string canonical() const {
    std::string out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (i) out += ';';
      out += fields_[i].first + '=' + fields_[i].second;
    }
    return out;
  }

 private:
  static void check_token(const std::string& s) {
    for (char c : s)
      if (c == '|' || c == ';' || c == '=' || c == '\n' || c == '\r' || c == ' ' || c == '\t')
        throw ValidationError("audit field contains a reserved character: '" + s + "'");
  }

  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Metered energy for one counting point and slot.
inline AuditPayload energy_payload(SeriesKind kind, EnergyWh energy) {
  return AuditPayload().add("kind", to_string(kind)).add("wh", energy.value());
}

/// A policy's allocation for one slot. The effective KoR of participant i is
/// self_consumed_i / production, recoverable exactly from the integers.
inline AuditPayload allocation_payload(std::string_view policy, const SlotAllocation& a) {
  AuditPayload p;
  p.add("policy", std::string(policy)).add("production", a.production().value());
  for (const auto& [id, e] : a.self_consumed()) p.add("sc:" + id, e.value());
  p.add("surplus", a.surplus_to_grid().value());
  return p;
}

struct AuditRecord {
  std::string counting_point_key;
  std::string timestamp;  // canonical ISO-8601 text, hashed as stored
  std::string payload;    // canonical payload text
  Digest prev_hash;
  Digest hash;

  /// Text covered by the hash: key|timestamp|payload|prev_hash.
  std::string hashed_content() const {
    return counting_point_key + '|' + timestamp + '|' + payload + '|' + prev_hash.hex();
  }
  Digest compute_hash() const { return sha256(hashed_content()); }

  /// One ledger line (without the trailing newline).
  std::string serialize() const { return hashed_content() + '|' + hash.hex(); }

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct ChainVerification {
  bool intact = true;
  std::optional<std::size_t> first_break;  // 0-based record index
  std::string reason;
};

/// Recomputes every hash and link; reports the first record that does not check out.
inline ChainVerification verify_chain(std::span<const AuditRecord> records) {
  Digest prev = Digest::zero();
  std::map<std::string, Timestamp> last_seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto broken = [&](std::string why) { return ChainVerification{false, i, std::move(why)}; };
    if (!(r.prev_hash == prev)) return broken("previous-hash link does not match");
    if (!(r.compute_hash() == r.hash)) return broken("record hash does not match its content");
    Timestamp ts;
    try {
      ts = Timestamp::parse(r.timestamp);
    } catch (const ValidationError&) {
      return broken("unparseable timestamp");
    }
    if (ts.iso() != r.timestamp) return broken("timestamp is not in canonical form");
    if (auto it = last_seen.find(r.counting_point_key); it != last_seen.end() && ts < it->second)
      return broken("timestamp regresses for counting point " + r.counting_point_key);
    last_seen[r.counting_point_key] = ts;
    prev = r.hash;
  }
  return {};
}

/// Append-only hash chain. Single writer; copies are independent snapshots.
class AuditLedger {
 public:
  const AuditRecord& append(const AuditPayload& payload, std::string counting_point_key, const Timestamp& timestamp) {
    if (counting_point_key.empty()) throw ValidationError("empty counting-point key");
    AuditPayload().add("key", counting_point_key);  // rejects reserved characters
    if (auto it = last_seen_.find(counting_point_key); it != last_seen_.end() && timestamp < it->second)
      throw ValidationError("timestamp " + timestamp.iso() + " regresses for counting point " + counting_point_key);
    AuditRecord r;
    r.counting_point_key = std::move(counting_point_key);
    r.timestamp = timestamp.iso();
    r.payload = payload.canonical();
    r.prev_hash = records_.empty() ? Digest::zero() : records_.back().hash;
    r.hash = r.compute_hash();
    last_seen_[r.counting_point_key] = timestamp;
    records_.push_back(std::move(r));
    return records_.back();
  }

  const std::vector<AuditRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  Digest head() const { return records_.empty() ? Digest::zero() : records_.back().hash; }

  ChainVerification verify() const { return verify_chain(records_); }

  /// Newline-delimited canonical records.
  std::string serialize() const {
    std::string out;
    for (const auto& r : records_) out += r.serialize() + '\n';
    return out;
  }

 private:
  std::vector<AuditRecord> records_;
  std::map<std::string, Timestamp> last_seen_;
};

struct ParsedLedger {
  std::vector<AuditRecord> records;
  std::optional<std::size_t> malformed_line;  // 0-based index of the first unreadable line
};

/// Reads ledger text back into records without trusting it; stops at the
/// first malformed line.
inline ParsedLedger parse_ledger(std::string_view text) {
  ParsedLedger out;
  std::size_t index = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) {  // unterminated final line
      out.malformed_line = index;
      return out;
    }
    const std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl + 1);

    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
      const auto bar = line.find('|', start);
      f.push_back(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    auto prev = f.size() == 5 ? Digest::from_hex(f[3]) : std::nullopt;
    auto hash = f.size() == 5 ? Digest::from_hex(f[4]) : std::nullopt;
    if (!prev || !hash || f[0].empty()) {
      out.malformed_line = index;
      return out;
    }
    out.records.push_back(AuditRecord{std::string(f[0]), std::string(f[1]), std::string(f[2]), *prev, *hash});
    ++index;
  }
  return out;
}

/// Parses and verifies serialized ledger text; a malformed line counts as a break.
inline ChainVerification verify_serialized(std::string_view text) {
  const auto parsed = parse_ledger(text);
  auto v = verify_chain(parsed.records);
  if (!v.intact) return v;
  if (parsed.malformed_line) return ChainVerification{false, parsed.malformed_line, "malformed ledger line"};
  return v;
}

}  // namespace csc
