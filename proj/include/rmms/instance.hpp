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

#ifndef RMMS_INSTANCE_HPP
#define RMMS_INSTANCE_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmms/bundle.hpp"
#include "rmms/errors.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

/// m items and one valuation per agent, all over the same items.
class Instance {
 public:
  Instance(int m, std::vector<Valuation> valuations)
      : m_(m), valuations_(std::move(valuations)) {
    if (m_ < 1 || m_ > kMaxBundleItems) {
      throw ValidationError("instance needs 1 <= m <= " +
                            std::to_string(kMaxBundleItems) + ", got " +
                            std::to_string(m_));
    }
    if (valuations_.empty()) {
      throw ValidationError("instance needs at least one agent");
    }
    for (std::size_t i = 0; i < valuations_.size(); ++i) {
      if (valuations_[i].items() != m_) {
        throw ValidationError("valuation of agent " + std::to_string(i) +
                              " is over " +
                              std::to_string(valuations_[i].items()) +
                              " items, instance has " + std::to_string(m_));
      }
    }
  }

  /// n agents sharing one valuation.
  static Instance identical(const Valuation& v, int n) {
    return Instance(v.items(), std::vector<Valuation>(static_cast<std::size_t>(n), v));
  }

  int items() const { return m_; }
  int agents() const { return static_cast<int>(valuations_.size()); }
  Bundle all_items() const { return Bundle::all(m_); }
  const Valuation& valuation(int agent) const {
    return valuations_.at(static_cast<std::size_t>(agent));
  }
  std::span<const Valuation> valuations() const { return valuations_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int m_;
  std::vector<Valuation> valuations_;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  for (int i = 0; i < inst.agents(); ++i) {
    auto found = validate_valuation(inst.valuation(i), i);
    report.violations.insert(report.violations.end(),
                             std::make_move_iterator(found.begin()),
                             std::make_move_iterator(found.end()));
  }
  return report;
}

/// A pool A0 plus one bundle per agent, together partitioning [0, m).
class PartialAllocation {
 public:
  PartialAllocation(int m, Bundle pool, std::vector<Bundle> bundles)
      : m_(m), pool_(pool), bundles_(std::move(bundles)) {
    if (m_ < 1 || m_ > kMaxBundleItems) {
      throw ValidationError("allocation needs 1 <= m <= " +
                            std::to_string(kMaxBundleItems));
    }
    if (bundles_.empty()) throw ValidationError("allocation has no agents");
    Bundle seen = pool_;
    if (!pool_.within(m_)) {
      throw MalformedBundle("pool " + to_string(pool_) + " leaves [0, " +
                            std::to_string(m_) + ")");
    }
    for (std::size_t i = 0; i < bundles_.size(); ++i) {
      const Bundle b = bundles_[i];
      if (!b.within(m_)) {
        throw MalformedBundle("bundle of agent " + std::to_string(i) + " " +
                              to_string(b) + " leaves [0, " +
                              std::to_string(m_) + ")");
      }
      if (!b.disjoint(seen)) {
        throw ValidationError("bundle of agent " + std::to_string(i) + " " +
                              to_string(b) + " overlaps an earlier bundle");
      }
      seen |= b;
    }
    if (seen != Bundle::all(m_)) {
      throw ValidationError("allocation does not cover items " +
                            to_string(Bundle::all(m_) - seen));
    }
  }

  /// Everything in the pool.
  static PartialAllocation empty(int m, int n) {
    return PartialAllocation(m, Bundle::all(m),
                             std::vector<Bundle>(static_cast<std::size_t>(n)));
  }

  /// Builds an allocation from per-agent bundles; unassigned items go to the
  /// pool.
  static PartialAllocation with_pool_rest(int m, std::vector<Bundle> bundles) {
    Bundle used;
    for (Bundle b : bundles) {
      if (!b.disjoint(used)) {
        throw ValidationError("bundles overlap on " + to_string(b & used));
      }
      used |= b;
    }
    return PartialAllocation(m, Bundle::all(m) - used, std::move(bundles));
  }

  int items() const { return m_; }
  int agents() const { return static_cast<int>(bundles_.size()); }
  Bundle pool() const { return pool_; }
  bool is_full() const { return pool_.empty(); }
  std::span<const Bundle> bundles() const { return bundles_; }
  Bundle bundle(int agent) const {
    return bundles_.at(static_cast<std::size_t>(agent));
  }

  friend bool operator==(const PartialAllocation&,
                         const PartialAllocation&) = default;

 private:
  int m_;
  Bundle pool_;
  std::vector<Bundle> bundles_;
};

inline void require_compatible(const Instance& inst,
                               const PartialAllocation& alloc) {
  if (inst.items() != alloc.items() || inst.agents() != alloc.agents()) {
    throw ValidationError(
        "allocation shape (m=" + std::to_string(alloc.items()) +
        ", n=" + std::to_string(alloc.agents()) +
        ") does not match instance (m=" + std::to_string(inst.items()) +
        ", n=" + std::to_string(inst.agents()) + ")");
  }
}

}  // namespace rmms

#endif  // RMMS_INSTANCE_HPP
