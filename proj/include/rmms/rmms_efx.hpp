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

#ifndef RMMS_RMMS_EFX_HPP
#define RMMS_RMMS_EFX_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmms/algorithms.hpp"
#include "rmms/errors.hpp"
#include "rmms/instance.hpp"
#include "rmms/shares.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

/// RMMS value of every agent over all items.
inline std::vector<Value> rmms_values(const Instance& inst, QueryLedger& ledger) {
  std::vector<Value> out;
  for (int i = 0; i < inst.agents(); ++i) out.push_back(rmms(inst, i, ledger).value);
  return out;
}

namespace detail {

// Calls visit(S) for each non-empty strict subset of `part`, by increasing
// size and then lexicographically by item list, until visit returns true.
template <typename Visitor>
bool find_strict_subset(Bundle part, Visitor&& visit) {
  const std::vector<int> items = part.items();
  const int size = static_cast<int>(items.size());
  for (int k = 1; k < size; ++k) {
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      Bundle s;
      for (int i : pick) s = s.with(items[static_cast<std::size_t>(i)]);
      if (visit(s)) return true;
      int pos = k - 1;
      while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == size - k + pos) --pos;
      if (pos < 0) break;
      ++pick[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < k; ++i) {
        pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
      }
    }
  }
  return false;
}

// Maximum bipartite matching by augmenting paths; rows are agents, columns
// parts.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::vector<std::vector<char>> edges)
      : edges_(std::move(edges)),
        part_of_(edges_.size(), -1),
        agent_of_(edges_.empty() ? 0 : edges_.front().size(), -1) {
    for (std::size_t a = 0; a < edges_.size(); ++a) {
      std::vector<char> visited(agent_of_.size(), 0);
      augment(static_cast<int>(a), visited);
    }
  }

  bool edge(int agent, int part) const {
    return edges_[static_cast<std::size_t>(agent)][static_cast<std::size_t>(part)] != 0;
  }
  int part_of(int agent) const { return part_of_[static_cast<std::size_t>(agent)]; }
  int agent_of(int part) const { return agent_of_[static_cast<std::size_t>(part)]; }
  int parts() const { return static_cast<int>(agent_of_.size()); }
  int agents() const { return static_cast<int>(part_of_.size()); }

  bool perfect() const {
    for (int a : agent_of_) {
      if (a < 0) return false;
    }
    return static_cast<int>(part_of_.size()) == parts();
  }

 private:
  bool augment(int agent, std::vector<char>& visited) {
    for (std::size_t p = 0; p < agent_of_.size(); ++p) {
      if (!edges_[static_cast<std::size_t>(agent)][p] || visited[p]) continue;
      visited[p] = 1;
      if (agent_of_[p] < 0 || augment(agent_of_[p], visited)) {
        agent_of_[p] = agent;
        part_of_[static_cast<std::size_t>(agent)] = static_cast<int>(p);
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<char>> edges_;
  std::vector<int> part_of_;
  std::vector<int> agent_of_;
};

}  // namespace detail

/// Partial allocation that is EFX and gives every agent at least her share.
///
/// Runs in rounds over the poor agents (those without a desired bundle).
/// Each round partitions the free items acceptably for the lowest poor agent,
/// shrinks every part to an inclusion-minimal non-empty subset still desired
/// by some poor agent, and then either lets one wealthy agent trade up to a
/// smaller strictly preferred subset, or matches poor agents to parts: all of
/// them when a perfect matching exists, otherwise the agents of a
/// Hall-deficient family found by alternating paths from an unmatched part.
///
/// `shares[i]` is agent i's threshold; with rmms_values() the result is an
/// RMMS allocation.
inline RunResult rmms_efx_partial(const Instance& inst,
                                  std::span<const Value> shares,
                                  QueryLedger& ledger) {
  const int n = inst.agents();
  const int m = inst.items();
  if (static_cast<int>(shares.size()) != n) {
    throw ValidationError("rmms_efx_partial needs one share per agent");
  }
  if (m > kMaxSolverItems) {
    throw CapExceeded("rmms_efx_partial supports at most " +
                      std::to_string(kMaxSolverItems) + " items");
  }
  const QueryLedger before = ledger;
  const Bundle all = inst.all_items();
  std::vector<Bundle> held(static_cast<std::size_t>(n));
  std::vector<char> wealthy(static_cast<std::size_t>(n), 0);

  auto desires = [&](int agent, Bundle b) {
    return value_query(inst.valuation(agent), b, ledger) >=
           shares[static_cast<std::size_t>(agent)];
  };

  RunTrace trace;
  const std::uint64_t round_limit =
      static_cast<std::uint64_t>(n) * (std::uint64_t{1} << m) + static_cast<std::uint64_t>(n);
  for (std::uint64_t round = 0;; ++round) {
    std::vector<int> poor;
    Bundle taken;
    for (int i = 0; i < n; ++i) {
      if (!wealthy[static_cast<std::size_t>(i)]) poor.push_back(i);
      taken |= held[static_cast<std::size_t>(i)];
    }
    if (poor.empty()) break;
    if (round >= round_limit) {
      throw InternalError("rmms_efx_partial exceeded n*2^m + n rounds");
    }
    const int nr = static_cast<int>(poor.size());
    auto desired_by_poor = [&](Bundle b) {
      for (int p : poor) {
        if (desires(p, b)) return true;
      }
      return false;
    };

    // Step 1: acceptable partition of the free items for the lowest poor agent.
    const int chooser = poor.front();
    auto parts = acceptable_partition(inst.valuation(chooser), all - taken, nr,
                                      shares[static_cast<std::size_t>(chooser)], ledger);
    if (!parts) {
      throw InternalError("no acceptable " + std::to_string(nr) +
                          "-partition of the free items for agent " +
                          std::to_string(chooser));
    }

    // Step 2: shrink each non-empty part to a minimal subset some poor agent
    // still desires.
    for (Bundle& part : *parts) {
      if (part.empty()) continue;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int e : part.items()) {
          if (part.size() > 1 && desired_by_poor(part.without(e))) {
            part = part.without(e);
            changed = true;
          }
        }
      }
    }

    // Step 3: one wealthy agent trades up to a minimal strictly preferred
    // strict subset of some part.
    std::optional<std::pair<int, Bundle>> upgrade;
    for (Bundle part : *parts) {
      if (part.size() < 2) continue;
      const bool found = detail::find_strict_subset(part, [&](Bundle s) {
        for (int w = 0; w < n; ++w) {
          if (!wealthy[static_cast<std::size_t>(w)]) continue;
          if (!compare_query(inst.valuation(w), held[static_cast<std::size_t>(w)], s, ledger)) {
            upgrade.emplace(w, s);
            return true;
          }
        }
        return false;
      });
      if (found) break;
    }
    if (upgrade) {
      const auto [w, s] = *upgrade;
      held[static_cast<std::size_t>(w)] = s;
      if (!desires(w, s)) {
        throw InternalError("upgraded bundle is not desired by agent " + std::to_string(w));
      }
      trace.rounds.push_back({RoundKind::upgrade, {w}, {s}, s, poor});
      continue;
    }

    // Step 4: poor agents against parts.
    std::vector<std::vector<char>> edges(static_cast<std::size_t>(nr),
                                         std::vector<char>(static_cast<std::size_t>(nr), 0));
    for (int a = 0; a < nr; ++a) {
      for (int p = 0; p < nr; ++p) {
        edges[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)] =
            desires(poor[static_cast<std::size_t>(a)], (*parts)[static_cast<std::size_t>(p)]) ? 1 : 0;
      }
    }
    const detail::BipartiteMatcher matcher(std::move(edges));

    std::vector<int> chosen;  // indices into `poor`
    RoundKind kind = RoundKind::perfect_matching;
    if (matcher.perfect()) {
      for (int a = 0; a < nr; ++a) chosen.push_back(a);
    } else {
      kind = RoundKind::hall_matching;
      int unmatched = 0;
      while (matcher.agent_of(unmatched) >= 0) ++unmatched;
      std::vector<char> in_family(static_cast<std::size_t>(nr), 0);
      std::vector<char> reached(static_cast<std::size_t>(nr), 0);
      std::vector<int> queue{unmatched};
      in_family[static_cast<std::size_t>(unmatched)] = 1;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int p = queue[head];
        for (int a = 0; a < nr; ++a) {
          if (!matcher.edge(a, p) || reached[static_cast<std::size_t>(a)]) continue;
          reached[static_cast<std::size_t>(a)] = 1;
          chosen.push_back(a);
          const int mate = matcher.part_of(a);
          if (mate < 0) throw InternalError("augmenting path left in a maximum matching");
          if (!in_family[static_cast<std::size_t>(mate)]) {
            in_family[static_cast<std::size_t>(mate)] = 1;
            queue.push_back(mate);
          }
        }
      }
      const auto family = static_cast<int>(queue.size());
      if (static_cast<int>(chosen.size()) != family - 1 || family < 2) {
        throw InternalError("Hall-deficient family of " + std::to_string(family) +
                            " parts has " + std::to_string(chosen.size()) + " desiring agents");
      }
      std::sort(chosen.begin(), chosen.end());
    }

    RoundRecord record{kind, {}, {}, Bundle{}, poor};
    for (int a : chosen) {
      const int agent = poor[static_cast<std::size_t>(a)];
      const Bundle b = (*parts)[static_cast<std::size_t>(matcher.part_of(a))];
      held[static_cast<std::size_t>(agent)] = b;
      wealthy[static_cast<std::size_t>(agent)] = 1;
      record.agents.push_back(agent);
      record.bundles.push_back(b);
      record.items_added |= b;
    }
    trace.rounds.push_back(std::move(record));
  }

  trace.ledger = ledger - before;
  return {PartialAllocation::with_pool_rest(m, std::move(held)), std::move(trace)};
}

inline RunResult rmms_efx_partial(const Instance& inst, QueryLedger& ledger) {
  const auto shares = rmms_values(inst, ledger);
  return rmms_efx_partial(inst, shares, ledger);
}

/// Checks that every bundle of >= 2 items handed out by a matching round was
/// minimal: dropping any one item leaves a bundle no then-poor agent desires.
inline bool efx_minimality_holds(const Instance& inst, std::span<const Value> shares,
                                 const RunTrace& trace) {
  QueryLedger scratch;
  for (const auto& round : trace.rounds) {
    if (round.kind != RoundKind::perfect_matching && round.kind != RoundKind::hall_matching) {
      continue;
    }
    for (Bundle b : round.bundles) {
      if (b.size() < 2) continue;
      for (int e : b.items()) {
        for (int p : round.poor) {
          if (value_query(inst.valuation(p), b.without(e), scratch) >=
              shares[static_cast<std::size_t>(p)]) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

struct FullRun {
  std::vector<Value> shares;
  RunResult partial;
  RunResult completion;

  const PartialAllocation& allocation() const { return completion.allocation; }
};

/// Full EFL allocation giving every agent at least her RMMS: the partial
/// RMMS+EFX allocation completed by efl_complete.
inline FullRun rmms_efl_full(const Instance& inst, QueryLedger& ledger) {
  auto shares = rmms_values(inst, ledger);
  RunResult partial = rmms_efx_partial(inst, shares, ledger);
  RunResult completion = efl_complete(inst, partial.allocation, ledger);
  return {std::move(shares), std::move(partial), std::move(completion)};
}

inline FullRun rmms_efl_full(const Instance& inst) {
  QueryLedger scratch;
  return rmms_efl_full(inst, scratch);
}

}  // namespace rmms

#endif  // RMMS_RMMS_EFX_HPP
