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

#ifndef RMMS_SHARES_HPP
#define RMMS_SHARES_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "rmms/bundle.hpp"
#include "rmms/errors.hpp"
#include "rmms/instance.hpp"
#include "rmms/rational.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

enum class ShareKind { mms, mxs, rmms };

inline const char* to_string(ShareKind kind) {
  switch (kind) {
    case ShareKind::mms:
      return "mms";
    case ShareKind::mxs:
      return "mxs";
    case ShareKind::rmms:
      return "rmms";
  }
  return "?";
}

struct ShareReport {
  ShareKind kind = ShareKind::rmms;
  Value value = 0;
  /// MMS / RMMS: an n-partition whose parts are all worth >= value.
  /// MXS: the agent's bundle first, then the other agents' bundles of an
  /// allocation in which the agent has no EFX envy.
  std::vector<Bundle> witness;
  int agent = -1;
  int n_effective = 0;
};

/// Outcome of the residual-feasibility test. On failure, `removed` can be
/// split into `k` bundles each worth less than the threshold, yet the rest
/// has no acceptable (n - k)-partition.
struct ResidualCheck {
  bool feasible = true;
  int k = 0;
  Bundle removed;
};

namespace detail {

inline void check_solver_cap(const Valuation& v, const char* what) {
  if (v.items() > kMaxSolverItems) {
    throw CapExceeded(std::string(what) + " supports at most " +
                      std::to_string(kMaxSolverItems) + " items, got " +
                      std::to_string(v.items()));
  }
}

inline void check_agents(int n) {
  if (n < 1) throw ValidationError("share needs n >= 1, got " + std::to_string(n));
}

inline Bundle::Mask next_subset(Bundle::Mask sub, Bundle::Mask full) {
  return ((sub | ~full) + 1) & full;
}

/// v(T) for every T ⊆ S, indexed by mask. Filled with one value query per
/// subset; entries outside S stay zero and are never read.
class SubsetValues {
 public:
  SubsetValues(const Valuation& v, Bundle s, QueryLedger& ledger)
      : values_(std::size_t{1} << v.items(), 0) {
    for_each_subset(s, [&](Bundle t) {
      values_[t.mask()] = value_query(v, t, ledger);
    });
  }

  Value operator()(Bundle t) const { return values_[t.mask()]; }

  /// Distinct values of subsets of S, plus 0, largest first.
  std::vector<Value> distinct_descending(Bundle s) const {
    std::vector<Value> out{0};
    for_each_subset(s, [&](Bundle t) { out.push_back(values_[t.mask()]); });
    std::sort(out.begin(), out.end(), std::greater<>());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::vector<Value> values_;
};

/// Decides (and constructs) q-partitions of a set in which every part is
/// worth at least the threshold.
///
/// The part holding the lowest remaining item is chosen first, scanning its
/// other members in increasing mask order; failures are memoized on
/// (remaining set, parts still needed). With threshold 0 the answer is
/// (S, ∅, ..., ∅).
class PartitionSearch {
 public:
  PartitionSearch(const SubsetValues& values, Value threshold)
      : values_(values), threshold_(threshold) {}

  Value threshold() const { return threshold_; }

  bool feasible(Bundle rest, int parts) {
    if (threshold_ <= 0) return true;
    if (parts <= 0) return rest.empty();
    if (values_(rest) < threshold_) return false;
    if (parts == 1) return true;
    if (rest.size() < parts) return false;
    const std::uint64_t key =
        rest.mask() | (static_cast<std::uint64_t>(parts) << 32);
    if (dead_.contains(key)) return false;
    if (first_part(rest, parts)) return true;
    dead_.insert(key);
    return false;
  }

  std::optional<std::vector<Bundle>> construct(Bundle rest, int parts) {
    if (threshold_ <= 0) {
      std::vector<Bundle> out(static_cast<std::size_t>(parts));
      out[0] = rest;
      return out;
    }
    if (!feasible(rest, parts)) return std::nullopt;
    std::vector<Bundle> out;
    while (parts > 1) {
      const auto part = first_part(rest, parts);
      if (!part) throw InternalError("partition search lost a feasible branch");
      out.push_back(*part);
      rest = rest - *part;
      --parts;
    }
    out.push_back(rest);
    return out;
  }

 private:
  // First part (containing the lowest item) that leaves a feasible remainder.
  std::optional<Bundle> first_part(Bundle rest, int parts) {
    const int low = rest.lowest();
    const Bundle::Mask others = rest.without(low).mask();
    Bundle::Mask sub = 0;
    while (true) {
      const Bundle part = Bundle(sub).with(low);
      if (values_(part) >= threshold_ && feasible(rest - part, parts - 1)) {
        return part;
      }
      if (sub == others) break;
      sub = next_subset(sub, others);
    }
    return std::nullopt;
  }

  const SubsetValues& values_;
  Value threshold_;
  std::unordered_set<std::uint64_t> dead_;
};

/// Residual feasibility of threshold t for set S and n agents.
///
/// cover[R] is the fewest bundles, each worth < t, that R splits into (empty
/// bundles are worth 0 < t, so "k bundles" means "at most k non-empty
/// ones"). A removal R must then leave an acceptable (n - k)-partition for
/// every k >= cover[R]; the binding case is k = cover[R], since merging parts
/// turns an (n - k)-partition into an (n - k - 1)-partition.
inline ResidualCheck residual_check(const SubsetValues& values, Bundle s,
                                    int n, PartitionSearch& search) {
  const Value t = search.threshold();
  if (t <= 0) return {};
  const int unreachable = n;
  std::vector<int> cover(static_cast<std::size_t>(s.mask()) + 1, unreachable);
  for_each_subset(s, [&](Bundle r) {
    if (r.empty()) {
      cover[0] = 0;
      return;
    }
    const int low = r.lowest();
    const Bundle::Mask others = r.without(low).mask();
    int best = unreachable;
    Bundle::Mask sub = 0;
    while (true) {
      const Bundle part = Bundle(sub).with(low);
      if (values(part) < t) {
        best = std::min(best, 1 + cover[(r - part).mask()]);
      }
      if (sub == others) break;
      sub = next_subset(sub, others);
    }
    cover[r.mask()] = std::min(best, unreachable);
  });

  ResidualCheck failure;
  bool failed = false;
  for_each_subset(s, [&](Bundle r) {
    if (failed) return;
    const int k = cover[r.mask()];
    if (k >= n) return;
    if (!search.feasible(s - r, n - k)) {
      failure = {false, k, r};
      failed = true;
    }
  });
  return failed ? failure : ResidualCheck{};
}

/// Largest candidate value admitting an acceptable n-partition (the MMS).
inline std::size_t mms_index(const SubsetValues& values,
                             const std::vector<Value>& candidates, Bundle s,
                             int n) {
  // candidates are descending and end in 0, which is always feasible.
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    PartitionSearch search(values, candidates[mid]);
    if (search.feasible(s, n)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace detail

/// Maximin share: max over n-partitions of S of the worst part's value.
inline ShareReport mms(const Valuation& v, Bundle s, int n,
                       QueryLedger& ledger) {
  detail::check_agents(n);
  detail::check_solver_cap(v, "mms");
  detail::check_bundle(v, s);
  const detail::SubsetValues values(v, s, ledger);
  const auto candidates = values.distinct_descending(s);
  const Value best = candidates[detail::mms_index(values, candidates, s, n)];
  detail::PartitionSearch search(values, best);
  return {ShareKind::mms, best, *search.construct(s, n), -1, n};
}

inline ShareReport mms(const Valuation& v, Bundle s, int n) {
  QueryLedger scratch;
  return mms(v, s, n, scratch);
}

/// A q-partition of S with every part worth >= t, if one exists.
inline std::optional<std::vector<Bundle>> acceptable_partition(
    const Valuation& v, Bundle s, int q, Value t, QueryLedger& ledger) {
  detail::check_agents(q);
  detail::check_bundle(v, s);
  if (t <= 0) {
    std::vector<Bundle> out(static_cast<std::size_t>(q));
    out[0] = s;
    return out;
  }
  detail::check_solver_cap(v, "acceptable_partition");
  const detail::SubsetValues values(v, s, ledger);
  detail::PartitionSearch search(values, t);
  return search.construct(s, q);
}

inline std::optional<std::vector<Bundle>> acceptable_partition(
    const Valuation& v, Bundle s, int q, Value t) {
  QueryLedger scratch;
  return acceptable_partition(v, s, q, t, scratch);
}

/// Whether every removal of k < n disjoint bundles, each worth < t, leaves
/// an (n - k)-partition of the rest with all parts worth >= t.
inline ResidualCheck is_residual_feasible(const Valuation& v, Bundle s, int n,
                                          Value t, QueryLedger& ledger) {
  detail::check_agents(n);
  detail::check_bundle(v, s);
  if (t <= 0) return {};
  detail::check_solver_cap(v, "is_residual_feasible");
  const detail::SubsetValues values(v, s, ledger);
  detail::PartitionSearch search(values, t);
  return detail::residual_check(values, s, n, search);
}

inline ResidualCheck is_residual_feasible(const Valuation& v, Bundle s, int n,
                                          Value t) {
  QueryLedger scratch;
  return is_residual_feasible(v, s, n, t, scratch);
}

/// Residual maximin share: the largest residually feasible threshold.
///
/// Feasibility only changes at subset values, so the candidates are
/// {v(T) : T ⊆ S} ∪ {0}. They are scanned from the MMS downwards (nothing
/// above the MMS passes the k = 0 case) without assuming feasibility is
/// monotone in t. The witness is the acceptable n-partition at the answer.
inline ShareReport rmms(const Valuation& v, Bundle s, int n,
                        QueryLedger& ledger) {
  detail::check_agents(n);
  detail::check_solver_cap(v, "rmms");
  detail::check_bundle(v, s);
  const detail::SubsetValues values(v, s, ledger);
  const auto candidates = values.distinct_descending(s);
  for (std::size_t i = detail::mms_index(values, candidates, s, n);
       i < candidates.size(); ++i) {
    detail::PartitionSearch search(values, candidates[i]);
    if (detail::residual_check(values, s, n, search).feasible) {
      return {ShareKind::rmms, candidates[i], *search.construct(s, n), -1, n};
    }
  }
  throw InternalError("rmms: threshold 0 was rejected");
}

inline ShareReport rmms(const Valuation& v, Bundle s, int n) {
  QueryLedger scratch;
  return rmms(v, s, n, scratch);
}

inline ShareReport rmms(const Instance& inst, int agent, QueryLedger& ledger) {
  ShareReport r = rmms(inst.valuation(agent), inst.all_items(), inst.agents(), ledger);
  r.agent = agent;
  return r;
}

inline ShareReport mms(const Instance& inst, int agent, QueryLedger& ledger) {
  ShareReport r = mms(inst.valuation(agent), inst.all_items(), inst.agents(), ledger);
  r.agent = agent;
  return r;
}

/// Largest number of item-to-agent assignments the MXS solver accepts.
inline constexpr std::uint64_t kMaxAssignments = std::uint64_t{1} << 24;

/// n^m, saturating just above kMaxAssignments.
inline std::uint64_t assignment_count(int base, int m) {
  std::uint64_t count = 1;
  for (int i = 0; i < m && count <= kMaxAssignments; ++i) {
    count *= static_cast<std::uint64_t>(base);
  }
  return count;
}

/// Minimum EFX share of a valuation for n agents over all m items.
///
/// Whether the agent EFX-envies a bundle B depends only on her own valuation:
/// she does not iff v(B - e) <= v(A_i) for every e in B. So MXS is the least
/// v(S) such that the complement splits into at most n - 1 bundles whose
/// worst "minus one item" value is <= v(S); the min-max split of every
/// complement is found by a DP over subsets.
inline ShareReport mxs(const Valuation& v, int n, QueryLedger& ledger) {
  detail::check_agents(n);
  detail::check_solver_cap(v, "mxs");
  const int m = v.items();
  if (assignment_count(n, m) > kMaxAssignments) {
    throw CapExceeded("mxs supports n^m <= 2^24, got n = " + std::to_string(n) +
                      ", m = " + std::to_string(m));
  }
  const Bundle all = Bundle::all(m);
  const detail::SubsetValues values(v, all, ledger);
  const std::size_t size = std::size_t{1} << m;
  constexpr Value kUnreachable = std::numeric_limits<Value>::max();

  // worst[B]: max over e in B of v(B - e), 0 for |B| <= 1.
  std::vector<Value> worst(size, 0);
  for_each_subset(all, [&](Bundle b) {
    if (b.size() < 2) return;
    Value w = 0;
    for (int e : b.items()) w = std::max(w, values(b.without(e)));
    worst[b.mask()] = w;
  });

  // layers[q][R]: min over splits of R into <= q + 1 bundles of the largest
  // worst[] among them.
  const int others = std::min(n - 1, m);
  std::vector<std::vector<Value>> layers;
  if (others >= 1) layers.push_back(worst);
  for (int q = 2; q <= others; ++q) {
    const auto& prev = layers.back();
    std::vector<Value> next(size, 0);
    for_each_subset(all, [&](Bundle r) {
      if (r.empty()) return;
      const int low = r.lowest();
      const Bundle::Mask rest = r.without(low).mask();
      Value best = kUnreachable;
      Bundle::Mask sub = 0;
      while (true) {
        const Bundle part = Bundle(sub).with(low);
        best = std::min(best, std::max(worst[part.mask()], prev[(r - part).mask()]));
        if (sub == rest) break;
        sub = detail::next_subset(sub, rest);
      }
      next[r.mask()] = best;
    });
    layers.push_back(std::move(next));
  }
  auto need = [&](Bundle r) -> Value {
    if (r.empty()) return 0;
    return layers.empty() ? kUnreachable : layers.back()[r.mask()];
  };

  std::optional<Bundle> best;
  for_each_subset(all, [&](Bundle s) {
    const Value vs = values(s);
    if (vs >= need(all - s) && (!best || vs < values(*best))) best = s;
  });
  if (!best) throw InternalError("mxs: the full bundle was rejected");

  // Re-trace one optimal split of the complement for the witness.
  std::vector<Bundle> witness{*best};
  Bundle rest = all - *best;
  const Value budget = values(*best);
  for (int q = static_cast<int>(layers.size()) - 1; q >= 1 && !rest.empty(); --q) {
    const int low = rest.lowest();
    const Bundle::Mask others_mask = rest.without(low).mask();
    Bundle::Mask sub = 0;
    while (true) {
      const Bundle part = Bundle(sub).with(low);
      if (worst[part.mask()] <= budget &&
          layers[static_cast<std::size_t>(q - 1)][(rest - part).mask()] <= budget) {
        witness.push_back(part);
        rest = rest - part;
        break;
      }
      if (sub == others_mask) throw InternalError("mxs: witness re-trace failed");
      sub = detail::next_subset(sub, others_mask);
    }
  }
  if (!rest.empty()) witness.push_back(rest);
  witness.resize(static_cast<std::size_t>(n));
  return {ShareKind::mxs, budget, std::move(witness), -1, n};
}

inline ShareReport mxs(const Instance& inst, int agent, QueryLedger& ledger) {
  ShareReport r = mxs(inst.valuation(agent), inst.agents(), ledger);
  r.agent = agent;
  return r;
}

inline ShareReport mxs(const Instance& inst, int agent) {
  QueryLedger scratch;
  return mxs(inst, agent, scratch);
}

inline ShareReport compute_share(ShareKind kind, const Instance& inst,
                                 int agent, QueryLedger& ledger) {
  switch (kind) {
    case ShareKind::mms:
      return mms(inst, agent, ledger);
    case ShareKind::mxs:
      return mxs(inst, agent, ledger);
    case ShareKind::rmms:
      return rmms(inst, agent, ledger);
  }
  throw ValidationError("unknown share kind");
}

enum class ValuationClass { additive, subadditive };

/// Guaranteed lower bound on RMMS / MMS for the class.
inline Rational ratio_bound(int n, ValuationClass cls) {
  if (n < 1) throw ValidationError("ratio_bound needs n >= 1");
  if (cls == ValuationClass::subadditive) return Rational(1, n);
  if (n % 2 == 1) return Rational(2 * n, 3 * n - 1);
  return Rational(2 * n - 2, 3 * n - 4);
}

}  // namespace rmms

#endif  // RMMS_SHARES_HPP
