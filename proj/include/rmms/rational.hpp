// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RMMS_RATIONAL_HPP
#define RMMS_RATIONAL_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "rmms/errors.hpp"

namespace rmms {

/// Exact ratio of two 64-bit integers, kept in lowest terms with a positive
/// denominator. Only what ratio bookkeeping needs: construction, comparison
/// and printing.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw ValidationError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Fixed-point rendering with `places` digits, rounded half away from zero.
  /// For display only.
  std::string decimal(int places = 6) const {
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const bool negative = num_ < 0;
    const __int128 mag = negative ? -static_cast<__int128>(num_) : num_;
    __int128 scaled = (mag * scale * 2 + den_) / (2 * static_cast<__int128>(den_));
    const auto whole = static_cast<std::int64_t>(scaled / scale);
    auto frac = static_cast<std::int64_t>(scaled % scale);
    std::string digits = std::to_string(frac);
    digits.insert(0, static_cast<std::size_t>(places) - digits.size(), '0');
    std::string out = (negative && scaled != 0 ? "-" : "") + std::to_string(whole);
    if (places > 0) out += "." + digits;
    return out;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace rmms

#endif  // RMMS_RATIONAL_HPP
