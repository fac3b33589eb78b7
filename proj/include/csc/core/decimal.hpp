// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "csc/core/error.hpp"

namespace csc {

using int128 = __int128;

/// Integer division rounded half to even. `den` must be positive.
constexpr int128 div_round_half_even(int128 num, int128 den) {
  int128 q = num / den;
  int128 r = num % den;
  if (r < 0) {  // floor semantics
    q -= 1;
    r += den;
  }
  const int128 twice = 2 * r;
  if (twice > den || (twice == den && (q % 2 != 0))) q += 1;
  return q;
}

/// Fixed-point decimal with six fractional digits, stored as an integer count
/// of millionths. Addition and subtraction are exact; anything that can
/// produce more digits goes through div_round_half_even explicitly.
class Decimal {
 public:
  static constexpr int kDigits = 6;
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal from_micros(std::int64_t micros) {
    Decimal d;
    d.micros_ = micros;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t units) { return from_micros(units * kScale); }

  /// Parses "[-]digits[.digits]" with at most six fractional digits.
  static Decimal parse(std::string_view text) {
    const std::string original(text);
    if (text.empty()) throw ValidationError("empty decimal");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
      if (c == '.') {
        if (seen_dot) throw ValidationError("invalid decimal '" + original + "'");
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9') throw ValidationError("invalid decimal '" + original + "'");
      seen_digit = true;
      if (seen_dot) {
        if (++frac_digits > kDigits)
          throw ValidationError("decimal '" + original + "' has more than 6 fractional digits");
        frac = frac * 10 + (c - '0');
      } else {
        if (whole > (INT64_MAX / kScale) / 10) throw ValidationError("decimal '" + original + "' out of range");
        whole = whole * 10 + (c - '0');
      }
    }
    if (!seen_digit) throw ValidationError("invalid decimal '" + original + "'");
    for (int i = frac_digits; i < kDigits; ++i) frac *= 10;
    const std::int64_t micros = whole * kScale + frac;
    return from_micros(negative ? -micros : micros);
  }

  constexpr std::int64_t micros() const { return micros_; }
  double to_double() const { return static_cast<double>(micros_) / static_cast<double>(kScale); }

  /// Rounds half-even to `digits` fractional digits (0..6).
  constexpr Decimal rounded(int digits) const {
    std::int64_t step = 1;
    for (int i = digits; i < kDigits; ++i) step *= 10;
    return from_micros(static_cast<std::int64_t>(div_round_half_even(micros_, step) * step));
  }

  /// Fixed notation with `digits` fractional digits, rounding half-even.
  std::string to_string(int digits = kDigits) const {
    const Decimal r = rounded(digits);
    std::int64_t v = r.micros_;
    std::string sign;
    if (v < 0) {
      sign = "-";
      v = -v;
    }
    std::string out = sign + std::to_string(v / kScale);
    if (digits > 0) {
      std::string frac = std::to_string(v % kScale);
      frac.insert(0, kDigits - frac.size(), '0');
      out += '.';
      out += frac.substr(0, static_cast<std::size_t>(digits));
    }
    return out;
  }

  /// Cents string, the only rounding applied for presentation.
  std::string to_cents_string() const { return to_string(2); }

  constexpr Decimal operator-() const { return from_micros(-micros_); }
  constexpr Decimal& operator+=(Decimal o) {
    micros_ += o.micros_;
    return *this;
  }
  constexpr Decimal& operator-=(Decimal o) {
    micros_ -= o.micros_;
    return *this;
  }
  friend constexpr Decimal operator+(Decimal a, Decimal b) { return a += b; }
  friend constexpr Decimal operator-(Decimal a, Decimal b) { return a -= b; }
  friend constexpr Decimal operator*(Decimal a, std::int64_t k) { return from_micros(a.micros_ * k); }

  friend constexpr auto operator<=>(const Decimal&, const Decimal&) = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace csc
