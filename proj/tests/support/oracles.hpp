// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations. Nothing here calls into the allocation
// or apportionment code it is used to check.
#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace csc::test {

/// Exact non-negative fraction, kept reduced.
struct Fraction {
  __int128 num = 0;
  __int128 den = 1;

  static Fraction of(__int128 n, __int128 d) {
    __int128 a = n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    const __int128 g = a == 0 ? 1 : a;
    return {n / g, d / g};
  }
  __int128 floor() const { return num / den; }
  Fraction frac() const { return of(num % den, den); }
  friend bool operator<(const Fraction& a, const Fraction& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num == b.num && a.den == b.den; }
};

/// Proportional share of `production` by consumption, evaluated as exact
/// rationals, then rounded to integers that sum to `production`: floors
/// first, then one unit at a time to the largest remaining fraction (lowest
/// index on ties). Zero demand yields no allocation; demand below production
/// yields each consumption unchanged.
inline std::vector<std::int64_t> proportional_oracle(std::int64_t production, const std::vector<std::int64_t>& consumption) {
  const std::int64_t demand = std::accumulate(consumption.begin(), consumption.end(), std::int64_t{0});
  if (demand == 0) return std::vector<std::int64_t>(consumption.size(), 0);
  if (demand <= production) return consumption;

  std::vector<Fraction> exact;
  std::vector<std::int64_t> out;
  std::int64_t given = 0;
  for (auto c : consumption) {
    exact.push_back(Fraction::of(__int128{c} * production, demand));
    out.push_back(static_cast<std::int64_t>(exact.back().floor()));
    given += out.back();
  }
  std::vector<bool> bumped(consumption.size(), false);
  for (; given < production; ++given) {
    std::size_t best = consumption.size();
    for (std::size_t i = 0; i < consumption.size(); ++i) {
      if (bumped[i]) continue;
      if (best == consumption.size() || exact[best].frac() < exact[i].frac()) best = i;
    }
    bumped[best] = true;
    out[best] += 1;
  }
  return out;
}

/// Brute force over every integer allocation x with 0 <= x_i <= cap_i and
/// sum(x) <= production, maximizing sum(value_i * x_i). Three participants.
inline std::vector<std::int64_t> brute_force_best(std::int64_t production, const std::vector<std::int64_t>& cap,
                                                  const std::vector<std::int64_t>& value) {
  std::vector<std::int64_t> best(3, 0);
  std::int64_t best_score = -1;
  for (std::int64_t a = 0; a <= cap[0] && a <= production; ++a)
    for (std::int64_t b = 0; b <= cap[1] && a + b <= production; ++b)
      for (std::int64_t c = 0; c <= cap[2] && a + b + c <= production; ++c) {
        const std::int64_t score = value[0] * a + value[1] * b + value[2] * c;
        if (score > best_score) {
          best_score = score;
          best = {a, b, c};
        }
      }
  return best;
}

/// Deterministic generator for randomized suites.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace csc::test
