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

#ifndef RMMS_VALUATION_HPP
#define RMMS_VALUATION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmms/bundle.hpp"
#include "rmms/errors.hpp"

namespace rmms {

using Value = std::int64_t;

/// Upper bound K on every bundle value. With at most 32 items no additive
/// sum of in-range item values can overflow 64 bits.
inline constexpr Value kMaxValue = Value{1} << 31;

enum class ValuationKind { additive, capped_additive, table };

inline const char* to_string(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::additive:
      return "additive";
    case ValuationKind::capped_additive:
      return "capped_additive";
    case ValuationKind::table:
      return "table";
  }
  return "?";
}

/// Per-run query counters. Algorithms receive one explicitly; nothing in the
/// library evaluates a valuation except through value_query / compare_query.
struct QueryLedger {
  std::uint64_t value_queries = 0;
  std::uint64_t comparison_queries = 0;

  void reset() { *this = QueryLedger{}; }

  friend QueryLedger operator-(const QueryLedger& after,
                               const QueryLedger& before) {
    return {after.value_queries - before.value_queries,
            after.comparison_queries - before.comparison_queries};
  }
  friend bool operator==(const QueryLedger&, const QueryLedger&) = default;
};

class Valuation;
Value value_query(const Valuation& v, Bundle s, QueryLedger& ledger);
bool compare_query(const Valuation& v, Bundle s, Bundle t,
                   QueryLedger& ledger);

/// A normalized monotone integer set function over items [0, m).
///
/// Additive and CappedAdditive valuations are monotone by construction.
/// Table valuations store v(S) at index S.mask(); `table()` checks
/// normalization and monotonicity exhaustively, `table_unchecked()` defers
/// that to validate_instance so malformed input can be reported rather than
/// rejected outright.
class Valuation {
 public:
  static Valuation additive(std::vector<Value> item_values) {
    check_items(item_values.size(), kMaxBundleItems);
    Value total = 0;
    for (Value x : item_values) {
      check_range(x, "item value");
      total += x;
    }
    check_range(total, "total additive value");
    const auto m = static_cast<int>(item_values.size());
    return Valuation(ValuationKind::additive, m, std::move(item_values), 0);
  }

  static Valuation capped_additive(std::vector<Value> item_values, Value cap) {
    check_items(item_values.size(), kMaxBundleItems);
    for (Value x : item_values) check_range(x, "item value");
    check_range(cap, "cap");
    const auto m = static_cast<int>(item_values.size());
    return Valuation(ValuationKind::capped_additive, m, std::move(item_values), cap);
  }

  /// Table valuation validated for normalization, range and monotonicity.
  static Valuation table(int m, std::vector<Value> subset_values);

  static Valuation table_unchecked(int m, std::vector<Value> subset_values) {
    if (m < 1 || m > kMaxSolverItems) {
      throw CapExceeded("table valuations support 1 <= m <= " +
                        std::to_string(kMaxSolverItems) + ", got m = " +
                        std::to_string(m));
    }
    if (subset_values.size() != (std::size_t{1} << m)) {
      throw ValidationError("table valuation over " + std::to_string(m) +
                            " items needs " + std::to_string(1U << m) +
                            " entries, got " +
                            std::to_string(subset_values.size()));
    }
    return Valuation(ValuationKind::table, m, std::move(subset_values), 0);
  }

  ValuationKind kind() const { return kind_; }
  int items() const { return m_; }
  /// Per-item values (additive kinds) or the subset table (table kind).
  std::span<const Value> values() const { return values_; }
  Value cap() const { return cap_; }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  Valuation(ValuationKind kind, int m, std::vector<Value> values, Value cap)
      : kind_(kind), m_(m), values_(std::move(values)), cap_(cap) {}

  static void check_items(std::size_t m, int limit) {
    if (m < 1 || m > static_cast<std::size_t>(limit)) {
      throw ValidationError("valuation needs 1 <= m <= " +
                            std::to_string(limit) + " items, got " +
                            std::to_string(m));
    }
  }
  static void check_range(Value x, const char* what) {
    if (x < 0 || x > kMaxValue) {
      throw ValidationError(std::string(what) + " " + std::to_string(x) +
                            " is outside [0, 2^31]");
    }
  }

  Value evaluate(Bundle s) const {
    switch (kind_) {
      case ValuationKind::table:
        return values_[s.mask()];
      case ValuationKind::additive:
      case ValuationKind::capped_additive: {
        Value sum = 0;
        for (Bundle::Mask rest = s.mask(); rest != 0; rest &= rest - 1) {
          sum += values_[static_cast<std::size_t>(std::countr_zero(rest))];
        }
        return kind_ == ValuationKind::additive ? sum : std::min(sum, cap_);
      }
    }
    return 0;
  }

  friend Value value_query(const Valuation& v, Bundle s, QueryLedger& ledger);
  friend bool compare_query(const Valuation& v, Bundle s, Bundle t,
                            QueryLedger& ledger);

  ValuationKind kind_;
  int m_;
  std::vector<Value> values_;
  Value cap_;
};

namespace detail {
inline void check_bundle(const Valuation& v, Bundle s) {
  if (!s.within(v.items())) {
    throw MalformedBundle("bundle " + to_string(s) + " is not a subset of [0, " +
                          std::to_string(v.items()) + ")");
  }
}
}  // namespace detail

/// v(S); counts one value query.
inline Value value_query(const Valuation& v, Bundle s, QueryLedger& ledger) {
  detail::check_bundle(v, s);
  ++ledger.value_queries;
  return v.evaluate(s);
}

/// The single bit v(S) >= v(T); counts one comparison query and no value
/// queries.
inline bool compare_query(const Valuation& v, Bundle s, Bundle t,
                          QueryLedger& ledger) {
  detail::check_bundle(v, s);
  detail::check_bundle(v, t);
  ++ledger.comparison_queries;
  return v.evaluate(s) >= v.evaluate(t);
}

/// One violated valuation invariant, with a witness where one exists.
struct Violation {
  enum class Kind { not_normalized, not_monotone, out_of_range };
  int agent = -1;
  Kind kind;
  Bundle smaller;  // not_monotone: S with S ⊂ T and v(S) > v(T)
  Bundle larger;
  std::string message;
};

inline const char* to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::not_normalized:
      return "not normalized";
    case Violation::Kind::not_monotone:
      return "not monotone";
    case Violation::Kind::out_of_range:
      return "out of range";
  }
  return "?";
}

/// Checks a single valuation. Additive kinds are valid by construction; for
/// tables every (S, S + e) pair is inspected and the first witness in
/// increasing (mask, item) order is reported.
inline std::vector<Violation> validate_valuation(const Valuation& v,
                                                 int agent = -1) {
  std::vector<Violation> out;
  if (v.kind() != ValuationKind::table) return out;
  const auto table = v.values();
  if (table[0] != 0) {
    out.push_back({agent, Violation::Kind::not_normalized, Bundle{}, Bundle{},
                   "v(∅) = " + std::to_string(table[0]) + ", expected 0"});
  }
  for (std::size_t s = 0; s < table.size(); ++s) {
    if (table[s] < 0 || table[s] > kMaxValue) {
      out.push_back({agent, Violation::Kind::out_of_range,
                     Bundle(static_cast<Bundle::Mask>(s)), Bundle{},
                     "v(" + to_string(Bundle(static_cast<Bundle::Mask>(s))) +
                         ") = " + std::to_string(table[s]) +
                         " is outside [0, 2^31]"});
      break;
    }
  }
  std::size_t bad_pairs = 0;
  Violation first{};
  for (std::size_t s = 0; s < table.size(); ++s) {
    const Bundle small(static_cast<Bundle::Mask>(s));
    for (int e = 0; e < v.items(); ++e) {
      if (small.contains(e)) continue;
      const Bundle large = small.with(e);
      if (table[small.mask()] > table[large.mask()]) {
        if (bad_pairs++ == 0) {
          first = {agent, Violation::Kind::not_monotone, small, large,
                   "v(" + to_string(small) + ") = " +
                       std::to_string(table[small.mask()]) + " > v(" +
                       to_string(large) + ") = " +
                       std::to_string(table[large.mask()])};
        }
      }
    }
  }
  if (bad_pairs > 0) {
    if (bad_pairs > 1) {
      first.message += " (" + std::to_string(bad_pairs - 1) +
                       " further violating pairs)";
    }
    out.push_back(std::move(first));
  }
  return out;
}

inline Valuation Valuation::table(int m, std::vector<Value> subset_values) {
  Valuation v = table_unchecked(m, std::move(subset_values));
  const auto problems = validate_valuation(v);
  if (!problems.empty()) {
    throw ValidationError("invalid table valuation: " + problems.front().message);
  }
  return v;
}

}  // namespace rmms

#endif  // RMMS_VALUATION_HPP
