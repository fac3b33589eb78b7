// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "csc/core/decimal.hpp"
#include "csc/core/error.hpp"
#include "csc/core/time.hpp"

namespace csc {

enum class MeterClass { linky, sme_smi };

// Linky: energy_wh. SME/SMI: energy_kwh_index (cumulative) or power_kw_10min.
enum class QuantityKind { energy_wh, energy_kwh_index, power_kw_10min };

inline const char* to_string(MeterClass c) { return c == MeterClass::linky ? "linky" : "sme_smi"; }

inline const char* to_string(QuantityKind q) {
  switch (q) {
    case QuantityKind::energy_wh:
      return "energy_wh";
    case QuantityKind::energy_kwh_index:
      return "energy_kwh_index";
    case QuantityKind::power_kw_10min:
      return "power_kw_10min";
  }
  return "?";
}

struct RawMeterRecord {
  std::string meter_id;
  MeterClass meter_class = MeterClass::linky;
  Timestamp timestamp;
  QuantityKind quantity = QuantityKind::energy_wh;
  Decimal value;  // Wh, kWh index, or kW depending on `quantity`
  std::size_t line = 0;
};

struct RowError {
  std::size_t line;
  std::string message;
};

struct IngestResult {
  std::vector<RawMeterRecord> records;
  std::vector<RowError> errors;
};

inline constexpr std::string_view kMeterCsvHeader = "meter_id,meter_class,timestamp,quantity_kind,value";

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline RawMeterRecord parse_row(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() != 5) throw ValidationError("expected 5 fields, got " + std::to_string(f.size()));

  RawMeterRecord r;
  r.meter_id = std::string(f[0]);
  if (r.meter_id.empty()) throw ValidationError("empty meter_id");

  if (f[1] == "linky")
    r.meter_class = MeterClass::linky;
  else if (f[1] == "sme_smi")
    r.meter_class = MeterClass::sme_smi;
  else
    throw ValidationError("unknown meter_class '" + std::string(f[1]) + "'");

  r.timestamp = Timestamp::parse(f[2]);

  if (f[3] == "energy_wh")
    r.quantity = QuantityKind::energy_wh;
  else if (f[3] == "energy_kwh_index")
    r.quantity = QuantityKind::energy_kwh_index;
  else if (f[3] == "power_kw_10min")
    r.quantity = QuantityKind::power_kw_10min;
  else
    throw ValidationError("unknown quantity_kind '" + std::string(f[3]) + "'");

  const bool linky_ok = r.meter_class == MeterClass::linky && r.quantity == QuantityKind::energy_wh;
  const bool sme_ok = r.meter_class == MeterClass::sme_smi && r.quantity != QuantityKind::energy_wh;
  if (!linky_ok && !sme_ok)
    throw ValidationError(std::string("quantity_kind ") + to_string(r.quantity) + " is not reported by " +
                          to_string(r.meter_class) + " meters");

  r.value = Decimal::parse(f[4]);
  if (r.value < Decimal{})
    throw ValidationError(r.quantity == QuantityKind::power_kw_10min ? "negative power" : "negative energy");
  if (r.quantity == QuantityKind::energy_wh && r.value.micros() % Decimal::kScale != 0)
    throw ValidationError("energy_wh must be a whole number of Wh");
  if (r.quantity == QuantityKind::energy_kwh_index && r.value.micros() % 1000 != 0)
    throw ValidationError("energy_kwh_index finer than 1 Wh");
  return r;
}

}  // namespace detail

/// Parses a meter CSV. A wrong header is fatal; bad rows are skipped and
/// reported with their 1-based line numbers.
inline IngestResult ingest_csv(std::istream& in) {
  IngestResult result;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("meter CSV is empty (missing header)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  {
    const auto cols = detail::split(line, ',');
    std::string joined;
    for (std::size_t i = 0; i < cols.size(); ++i) joined += (i ? "," : "") + std::string(cols[i]);
    if (joined != kMeterCsvHeader)
      throw ValidationError("malformed meter CSV header: expected '" + std::string(kMeterCsvHeader) + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      auto rec = detail::parse_row(line);
      rec.line = lineno;
      result.records.push_back(std::move(rec));
    } catch (const ValidationError& e) {
      result.errors.push_back({lineno, e.what()});
    }
  }
  return result;
}

inline IngestResult ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open meter CSV " + path);
  return ingest_csv(in);
}

inline IngestResult ingest_csv_text(const std::string& text) {
  std::istringstream in(text);
  return ingest_csv(in);
}

}  // namespace csc
