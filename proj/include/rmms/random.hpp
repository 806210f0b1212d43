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

#ifndef RMMS_RANDOM_HPP
#define RMMS_RANDOM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmms/bundle.hpp"
#include "rmms/errors.hpp"
#include "rmms/instance.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

/// SplitMix64 (Steele, Lea & Flood). Chosen over <random> engines and
/// distributions because its output, and `below()`, are fully specified and
/// therefore identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [0, bound] as next() % (bound + 1).
  std::uint64_t below(std::uint64_t bound) {
    return bound == UINT64_MAX ? next() : next() % (bound + 1);
  }

  /// Integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo)));
  }

  /// Independent child stream.
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

struct GenParams {
  int agents = 2;
  int items = 4;
  ValuationKind kind = ValuationKind::additive;
  Value max_value = 10;
  /// Fixed cap for capped_additive; drawn per valuation when absent.
  std::optional<Value> cap;
};

inline void check_gen_params(const GenParams& p) {
  if (p.agents < 1) throw ValidationError("gen needs at least one agent");
  if (p.items < 1 || p.items > kMaxBundleItems) {
    throw ValidationError("gen needs 1 <= items <= " + std::to_string(kMaxBundleItems));
  }
  if (p.kind == ValuationKind::table && p.items > kMaxSolverItems) {
    throw CapExceeded("table generation supports at most " +
                      std::to_string(kMaxSolverItems) + " items");
  }
  if (p.max_value < 0 || p.max_value > kMaxValue / (p.items + 1)) {
    throw ValidationError("max-value must lie in [0, 2^31 / (items + 1)]");
  }
  if (p.cap && (*p.cap < 0 || *p.cap > kMaxValue)) {
    throw ValidationError("cap must lie in [0, 2^31]");
  }
}

/// Draws one valuation.
///
///   additive         item values uniform in [0, max_value]
///   capped_additive  as additive; cap = params.cap, or uniform in
///                    [largest item value, total]
///   table            additive base plus max_{T ⊆ S} r(T), r(∅) = 0 and
///                    r(T) uniform in [0, max_value] drawn in mask order
inline Valuation random_valuation(const GenParams& p, SplitMix64& rng) {
  const auto m = static_cast<std::size_t>(p.items);
  const auto draw = [&] { return static_cast<Value>(rng.below(static_cast<std::uint64_t>(p.max_value))); };
  std::vector<Value> items(m);
  for (auto& x : items) x = draw();
  switch (p.kind) {
    case ValuationKind::additive:
      return Valuation::additive(std::move(items));
    case ValuationKind::capped_additive: {
      Value total = 0;
      Value largest = 0;
      for (Value x : items) {
        total += x;
        largest = std::max(largest, x);
      }
      const Value cap = p.cap ? *p.cap : rng.between(largest, total);
      return Valuation::capped_additive(std::move(items), cap);
    }
    case ValuationKind::table: {
      const std::size_t size = std::size_t{1} << m;
      std::vector<Value> bump(size, 0);
      for (std::size_t s = 1; s < size; ++s) bump[s] = draw();
      std::vector<Value> table(size, 0);
      for (std::size_t s = 1; s < size; ++s) {
        const Bundle b(static_cast<Bundle::Mask>(s));
        Value best = bump[s];
        Value base = 0;
        for (int e : b.items()) {
          best = std::max(best, bump[b.without(e).mask()]);
          base += items[static_cast<std::size_t>(e)];
        }
        bump[s] = best;  // running monotone closure, subsets come first
        table[s] = base + best;
      }
      return Valuation::table(p.items, std::move(table));
    }
  }
  throw ValidationError("unknown valuation kind");
}

inline Instance random_instance(const GenParams& p, SplitMix64& rng) {
  check_gen_params(p);
  std::vector<Valuation> vals;
  for (int i = 0; i < p.agents; ++i) vals.push_back(random_valuation(p, rng));
  return Instance(p.items, std::move(vals));
}

/// Instance k is drawn from its own stream SplitMix64(root.next()), where
/// root = SplitMix64(seed) has been advanced k times.
inline std::vector<Instance> generate_instances(const GenParams& p,
                                                std::uint64_t seed, int count) {
  check_gen_params(p);
  SplitMix64 root(seed);
  std::vector<Instance> out;
  for (int k = 0; k < count; ++k) {
    SplitMix64 child = root.split();
    out.push_back(random_instance(p, child));
  }
  return out;
}

/// Table form of any valuation (m <= 20).
inline Valuation to_table(const Valuation& v) {
  if (v.kind() == ValuationKind::table) return v;
  if (v.items() > kMaxSolverItems) throw CapExceeded("to_table supports at most 20 items");
  QueryLedger scratch;
  std::vector<Value> table;
  for_each_subset(Bundle::all(v.items()),
                  [&](Bundle s) { table.push_back(value_query(v, s, scratch)); });
  return Valuation::table_unchecked(v.items(), std::move(table));
}

/// A monotone valuation w with v <= w <= v + eps everywhere:
/// w(S) = max_{T ⊆ S} (v(T) + r(T)), r(∅) = 0, r(T) uniform in [0, eps].
inline Valuation raise_within(const Valuation& v, Value eps, SplitMix64& rng) {
  const Valuation base = to_table(v);
  const auto src = base.values();
  std::vector<Value> out(src.size(), 0);
  for (std::size_t s = 1; s < src.size(); ++s) {
    const Bundle b(static_cast<Bundle::Mask>(s));
    Value best = src[s] + static_cast<Value>(rng.below(static_cast<std::uint64_t>(eps)));
    for (int e : b.items()) best = std::max(best, out[b.without(e).mask()]);
    out[s] = std::min(best, kMaxValue);
  }
  return Valuation::table(v.items(), std::move(out));
}

}  // namespace rmms

#endif  // RMMS_RANDOM_HPP
