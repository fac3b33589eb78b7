// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "csc/core/error.hpp"

namespace csc {

inline constexpr std::int64_t kSlotSeconds = 30 * 60;
inline constexpr int kDaySlots = 48;

/// An instant with the local UTC offset it was recorded in. Ordering and
/// equality compare the instant only; the offset decides local-day alignment.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr Timestamp(std::int64_t utc_seconds, std::int32_t offset_minutes)
      : utc_seconds_(utc_seconds), offset_minutes_(offset_minutes) {}

  /// Builds a timestamp from local calendar fields.
  static Timestamp from_local(std::chrono::year_month_day date, int hour, int minute, int second,
                              std::int32_t offset_minutes) {
    if (!date.ok()) throw ValidationError("invalid calendar date");
    const std::int64_t days = std::chrono::sys_days(date).time_since_epoch().count();
    const std::int64_t local = days * 86400 + hour * 3600 + minute * 60 + second;
    return Timestamp(local - std::int64_t{offset_minutes} * 60, offset_minutes);
  }

  /// ISO-8601 "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+HH:MM"/"-HH:MM".
  static Timestamp parse(std::string_view text) {
    const std::string s(text);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &se, &consumed) != 6 ||
        consumed != 19)
      throw ValidationError("invalid timestamp '" + s + "'");
    std::string_view rest = text.substr(19);
    std::int32_t offset = 0;
    if (rest == "Z") {
      offset = 0;
    } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
      auto digit = [&](std::size_t i) {
        if (rest[i] < '0' || rest[i] > '9') throw ValidationError("invalid UTC offset in '" + s + "'");
        return rest[i] - '0';
      };
      const int oh = digit(1) * 10 + digit(2);
      const int om = digit(4) * 10 + digit(5);
      if (oh > 14 || om > 59) throw ValidationError("invalid UTC offset in '" + s + "'");
      offset = (oh * 60 + om) * (rest[0] == '-' ? -1 : 1);
    } else {
      throw ValidationError("timestamp '" + s + "' lacks an explicit UTC offset");
    }
    if (h > 23 || mi > 59 || se > 59) throw ValidationError("invalid time of day in '" + s + "'");
    const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                           std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw ValidationError("invalid calendar date in '" + s + "'");
    return from_local(date, h, mi, se, offset);
  }

  constexpr std::int64_t utc_seconds() const { return utc_seconds_; }
  constexpr std::int32_t offset_minutes() const { return offset_minutes_; }
  constexpr std::int64_t local_seconds() const { return utc_seconds_ + std::int64_t{offset_minutes_} * 60; }

  std::chrono::year_month_day local_date() const {
    return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{floor_div(local_seconds(), 86400)}}};
  }
  constexpr std::int64_t seconds_into_local_day() const { return floor_mod(local_seconds(), 86400); }

  /// True when the local wall-clock time is an exact multiple of 30 minutes.
  constexpr bool slot_aligned() const { return floor_mod(local_seconds(), kSlotSeconds) == 0; }

  /// 1-based slot index within the local day (1..48).
  constexpr int slot_index() const { return static_cast<int>(seconds_into_local_day() / kSlotSeconds) + 1; }

  constexpr Timestamp floor_to_slot() const {
    return Timestamp(utc_seconds_ - floor_mod(local_seconds(), kSlotSeconds), offset_minutes_);
  }
  constexpr Timestamp plus_seconds(std::int64_t s) const { return Timestamp(utc_seconds_ + s, offset_minutes_); }

  /// Canonical text form, always with a numeric offset.
  std::string iso() const {
    const auto date = local_date();
    const std::int64_t sod = seconds_into_local_day();
    const int off = offset_minutes_ < 0 ? -offset_minutes_ : offset_minutes_;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d%c%02d:%02d", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60),
                  offset_minutes_ < 0 ? '-' : '+', off / 60, off % 60);
    return buf;
  }

  friend constexpr bool operator==(const Timestamp& a, const Timestamp& b) { return a.utc_seconds_ == b.utc_seconds_; }
  friend constexpr std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b) {
    return a.utc_seconds_ <=> b.utc_seconds_;
  }

 private:
  static constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    return a / b - ((a % b != 0) && ((a < 0) != (b < 0)) ? 1 : 0);
  }
  static constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

  std::int64_t utc_seconds_ = 0;
  std::int32_t offset_minutes_ = 0;
};

/// Half-open interval [begin, end).
struct TimeWindow {
  Timestamp begin;
  Timestamp end;

  constexpr bool contains(const Timestamp& t) const { return begin <= t && t < end; }
  constexpr bool empty() const { return !(begin < end); }
  friend constexpr bool operator==(const TimeWindow&, const TimeWindow&) = default;

  /// Whole local days [first, last] at the given offset.
  static TimeWindow days(std::chrono::year_month_day first, std::chrono::year_month_day last,
                         std::int32_t offset_minutes) {
    const auto begin = Timestamp::from_local(first, 0, 0, 0, offset_minutes);
    const auto end = Timestamp::from_local(last, 0, 0, 0, offset_minutes).plus_seconds(86400);
    return TimeWindow{begin, end};
  }
};

}  // namespace csc
