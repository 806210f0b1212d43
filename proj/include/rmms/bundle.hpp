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

#ifndef RMMS_BUNDLE_HPP
#define RMMS_BUNDLE_HPP

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rmms/errors.hpp"

namespace rmms {

/// Widest ground set a bundle can address.
inline constexpr int kMaxBundleItems = 32;

/// Largest ground set the exponential solvers (and Table valuations) accept.
inline constexpr int kMaxSolverItems = 20;

/// A set of item indices, stored as a bit mask (item j <-> bit j).
class Bundle {
 public:
  using Mask = std::uint32_t;

  constexpr Bundle() = default;
  constexpr explicit Bundle(Mask bits) : bits_(bits) {}

  static Bundle of(std::initializer_list<int> items) {
    return from_items(std::span<const int>(items.begin(), items.size()));
  }

  static Bundle from_items(std::span<const int> items) {
    Mask bits = 0;
    for (int e : items) {
      if (e < 0 || e >= kMaxBundleItems) {
        throw MalformedBundle("item index " + std::to_string(e) +
                              " is outside the addressable range");
      }
      bits |= Mask{1} << e;
    }
    return Bundle(bits);
  }

  static constexpr Bundle single(int item) { return Bundle(Mask{1} << item); }

  /// The full ground set [0, m).
  static constexpr Bundle all(int m) {
    return m >= kMaxBundleItems ? Bundle(~Mask{0})
                                : Bundle((Mask{1} << m) - 1);
  }

  constexpr Mask mask() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int item) const { return (bits_ >> item) & 1U; }

  constexpr Bundle with(int item) const {
    return Bundle(bits_ | (Mask{1} << item));
  }
  constexpr Bundle without(int item) const {
    return Bundle(bits_ & ~(Mask{1} << item));
  }

  /// Lowest item index; undefined for the empty bundle.
  constexpr int lowest() const { return std::countr_zero(bits_); }

  constexpr bool subset_of(Bundle other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool disjoint(Bundle other) const {
    return (bits_ & other.bits_) == 0;
  }

  /// True iff every member lies in [0, m).
  constexpr bool within(int m) const { return subset_of(all(m)); }

  std::vector<int> items() const {
    std::vector<int> out;
    out.reserve(size());
    for (Mask rest = bits_; rest != 0; rest &= rest - 1) {
      out.push_back(std::countr_zero(rest));
    }
    return out;
  }

  friend constexpr Bundle operator|(Bundle a, Bundle b) {
    return Bundle(a.bits_ | b.bits_);
  }
  friend constexpr Bundle operator&(Bundle a, Bundle b) {
    return Bundle(a.bits_ & b.bits_);
  }
  /// Set difference.
  friend constexpr Bundle operator-(Bundle a, Bundle b) {
    return Bundle(a.bits_ & ~b.bits_);
  }
  Bundle& operator|=(Bundle b) {
    bits_ |= b.bits_;
    return *this;
  }

  friend constexpr bool operator==(Bundle, Bundle) = default;
  friend constexpr auto operator<=>(Bundle, Bundle) = default;

 private:
  Mask bits_ = 0;
};

/// Visits every subset of `set` in increasing mask order, including the empty
/// set and `set` itself.
template <typename Visitor>
void for_each_subset(Bundle set, Visitor&& visit) {
  const Bundle::Mask full = set.mask();
  Bundle::Mask sub = 0;
  while (true) {
    visit(Bundle(sub));
    if (sub == full) break;
    sub = ((sub | ~full) + 1) & full;
  }
}

inline std::string to_string(Bundle b) {
  std::string out = "{";
  bool first = true;
  for (int e : b.items()) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

}  // namespace rmms

#endif  // RMMS_BUNDLE_HPP
