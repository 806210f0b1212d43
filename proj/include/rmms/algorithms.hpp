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

#ifndef RMMS_ALGORITHMS_HPP
#define RMMS_ALGORITHMS_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rmms/errors.hpp"
#include "rmms/fairness.hpp"
#include "rmms/instance.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

enum class RoundKind {
  grant,             // envy-cycle: an un-envied agent receives a pool item
  rotation,          // envy-cycle: bundles move one step along an envy cycle
  swap,              // preprocessing: an agent trades her bundle for one item
  upgrade,           // RMMS+EFX step 3: a wealthy agent moves to a better subset
  perfect_matching,  // RMMS+EFX step 4a
  hall_matching,     // RMMS+EFX step 4b
};

inline const char* to_string(RoundKind kind) {
  switch (kind) {
    case RoundKind::grant:
      return "grant";
    case RoundKind::rotation:
      return "rotation";
    case RoundKind::swap:
      return "swap";
    case RoundKind::upgrade:
      return "upgrade";
    case RoundKind::perfect_matching:
      return "perfect_matching";
    case RoundKind::hall_matching:
      return "hall_matching";
  }
  return "?";
}

struct RoundRecord {
  RoundKind kind;
  /// Acting agents, in order (for a rotation: agents along the cycle).
  std::vector<int> agents;
  /// Bundles the acting agents hold after the round, aligned with `agents`.
  std::vector<Bundle> bundles;
  /// Items that left the pool this round.
  Bundle items_added;
  /// Poor agents at the start of the round (RMMS+EFX only).
  std::vector<int> poor;
};

struct RunTrace {
  std::vector<RoundRecord> rounds;
  /// matching[i] = index of the start bundle contained in agent i's final
  /// bundle (envy-cycle runs only).
  std::vector<int> matching;
  /// Item most recently added to each agent's final bundle, if it grew.
  std::vector<std::optional<int>> last_added;
  /// Queries issued by this run alone.
  QueryLedger ledger;
};

struct RunResult {
  PartialAllocation allocation;
  RunTrace trace;
};

namespace detail {

// Working state of an envy-cycle run: bundles remember which start bundle
// they grew from and the last item they received.
struct Slot {
  Bundle items;
  int origin;
  std::optional<int> last_added;
};

}  // namespace detail

/// Envy-cycle elimination started from a partial allocation.
///
/// While the pool is non-empty: if some agent is envied (EF sense) by nobody,
/// the lowest such agent receives the lowest pool item; otherwise bundles are
/// rotated along an envy cycle. Envy is decided with comparison queries only.
inline RunResult envy_cycle_run(const Instance& inst,
                                const PartialAllocation& start,
                                QueryLedger& ledger) {
  require_compatible(inst, start);
  const QueryLedger before = ledger;
  const int n = inst.agents();

  std::vector<detail::Slot> slots;
  std::vector<int> held(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    slots.push_back({start.bundle(i), i, std::nullopt});
    held[static_cast<std::size_t>(i)] = i;
  }
  auto bundle_of = [&](int agent) {
    return slots[static_cast<std::size_t>(held[static_cast<std::size_t>(agent)])].items;
  };
  auto envies = [&](int i, int j) {
    return !compare_query(inst.valuation(i), bundle_of(i), bundle_of(j), ledger);
  };

  RunTrace trace;
  Bundle pool = start.pool();
  while (!pool.empty()) {
    // enviers[j]: lowest agent envying j, or -1.
    std::vector<int> enviers(static_cast<std::size_t>(n), -1);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i != j && envies(i, j)) {
          enviers[static_cast<std::size_t>(j)] = i;
          break;
        }
      }
    }
    const auto source = std::find(enviers.begin(), enviers.end(), -1);
    if (source != enviers.end()) {
      const int agent = static_cast<int>(source - enviers.begin());
      const int item = pool.lowest();
      auto& slot = slots[static_cast<std::size_t>(held[static_cast<std::size_t>(agent)])];
      slot.items = slot.items.with(item);
      slot.last_added = item;
      pool = pool.without(item);
      trace.rounds.push_back({RoundKind::grant, {agent}, {slot.items},
                              Bundle::single(item), {}});
      continue;
    }

    // Every agent is envied: walk backwards along envy edges from agent 0
    // until an agent repeats. Each agent on the cycle takes the bundle of the
    // agent she envies.
    std::vector<int> walk{0};
    std::vector<int> position(static_cast<std::size_t>(n), -1);
    position[0] = 0;
    while (true) {
      const int next = enviers[static_cast<std::size_t>(walk.back())];
      if (position[static_cast<std::size_t>(next)] >= 0) {
        walk.erase(walk.begin(), walk.begin() + position[static_cast<std::size_t>(next)]);
        break;
      }
      position[static_cast<std::size_t>(next)] = static_cast<int>(walk.size());
      walk.push_back(next);
    }
    // Now walk[t + 1] envies walk[t] and walk.front() envies walk.back().
    std::vector<int> old_held = held;
    RoundRecord record{RoundKind::rotation, {}, {}, Bundle{}, {}};
    for (std::size_t t = 0; t < walk.size(); ++t) {
      const int taker = t + 1 < walk.size() ? walk[t + 1] : walk.front();
      held[static_cast<std::size_t>(taker)] = old_held[static_cast<std::size_t>(walk[t])];
    }
    for (int agent : walk) {
      record.agents.push_back(agent);
      record.bundles.push_back(bundle_of(agent));
    }
    trace.rounds.push_back(std::move(record));
  }

  std::vector<Bundle> bundles;
  for (int i = 0; i < n; ++i) {
    const auto& slot = slots[static_cast<std::size_t>(held[static_cast<std::size_t>(i)])];
    bundles.push_back(slot.items);
    trace.matching.push_back(slot.origin);
    trace.last_added.push_back(slot.last_added);
  }
  trace.ledger = ledger - before;
  return {PartialAllocation(inst.items(), Bundle{}, std::move(bundles)),
          std::move(trace)};
}

/// Repeatedly lets the lowest agent who strictly prefers some single pool
/// item take the lowest such item, returning her old bundle to the pool.
/// Strict preference is "not v(A_i) >= v({e})", one comparison query.
inline PartialAllocation preprocess_singletons(const Instance& inst,
                                               const PartialAllocation& partial,
                                               QueryLedger& ledger,
                                               RunTrace* trace = nullptr) {
  require_compatible(inst, partial);
  const int n = inst.agents();
  const long long round_limit =
      static_cast<long long>(n) * inst.items();
  std::vector<Bundle> bundles(partial.bundles().begin(), partial.bundles().end());
  Bundle pool = partial.pool();
  long long rounds = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n && !changed; ++i) {
      auto& own = bundles[static_cast<std::size_t>(i)];
      for (int e : pool.items()) {
        if (!compare_query(inst.valuation(i), own, Bundle::single(e), ledger)) {
          pool = (pool.without(e)) | own;
          own = Bundle::single(e);
          if (trace != nullptr) {
            trace->rounds.push_back({RoundKind::swap, {i}, {own}, Bundle::single(e), {}});
          }
          changed = true;
          break;
        }
      }
    }
    if (changed && ++rounds > round_limit) {
      throw InternalError("preprocessing exceeded n*m rounds");
    }
  }
  return PartialAllocation(inst.items(), pool, std::move(bundles));
}

inline PartialAllocation preprocess_singletons(const Instance& inst,
                                               const PartialAllocation& partial) {
  QueryLedger scratch;
  return preprocess_singletons(inst, partial, scratch);
}

/// Completes an EFL partial allocation into a full EFL allocation in which
/// nobody is worse off: singleton preprocessing, then envy-cycle elimination.
/// Only comparison queries reach `ledger`; the EFL precondition is checked
/// outside it.
inline RunResult efl_complete(const Instance& inst,
                              const PartialAllocation& partial,
                              QueryLedger& ledger) {
  require_compatible(inst, partial);
  if (const auto efl = is_efl(inst, partial); !efl.holds) {
    const auto& v = efl.violations.front();
    throw PreconditionError("efl_complete needs an EFL partial allocation; agent " +
                            std::to_string(v.envier) + " EFL-envies agent " +
                            std::to_string(v.envied));
  }
  const QueryLedger before = ledger;
  RunTrace prep;
  const PartialAllocation start = preprocess_singletons(inst, partial, ledger, &prep);
  RunResult result = envy_cycle_run(inst, start, ledger);
  prep.rounds.insert(prep.rounds.end(), result.trace.rounds.begin(),
                     result.trace.rounds.end());
  result.trace.rounds = std::move(prep.rounds);
  result.trace.ledger = ledger - before;
  return result;
}

inline RunResult efl_complete(const Instance& inst,
                              const PartialAllocation& partial) {
  QueryLedger scratch;
  return efl_complete(inst, partial, scratch);
}

/// Mechanical check of the three envy-cycle guarantees for a finished run.
struct EnvyCycleCertificate {
  bool matching_contains = true;  // start bundle matching[i] ⊆ A_i, bijective
  bool value_dominance = true;    // v_i(A_i) >= v_i(P_i)
  bool last_item_bound = true;    // v_i(A_i) >= v_i(A_j - e_j) when A_j grew
  bool last_added_consistent = true;  // last_added present iff A_j grew
  std::string detail;

  bool ok() const {
    return matching_contains && value_dominance && last_item_bound &&
           last_added_consistent;
  }
};

inline EnvyCycleCertificate certify_envy_cycle(const Instance& inst,
                                               const PartialAllocation& start,
                                               const RunResult& run) {
  QueryLedger scratch;
  EnvyCycleCertificate cert;
  const int n = inst.agents();
  const auto& trace = run.trace;
  const auto& a = run.allocation;
  auto fail = [&](bool& flag, const std::string& why) {
    if (flag) cert.detail += why + "; ";
    flag = false;
  };

  if (static_cast<int>(trace.matching.size()) != n ||
      static_cast<int>(trace.last_added.size()) != n) {
    fail(cert.matching_contains, "trace has the wrong number of agents");
    return cert;
  }
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int origin = trace.matching[static_cast<std::size_t>(i)];
    if (origin < 0 || origin >= n || seen[static_cast<std::size_t>(origin)]++ > 0) {
      fail(cert.matching_contains, "matching is not a bijection");
      continue;
    }
    if (!start.bundle(origin).subset_of(a.bundle(i))) {
      fail(cert.matching_contains,
           "start bundle " + std::to_string(origin) + " not inside A_" + std::to_string(i));
    }
    const bool grew = start.bundle(origin) != a.bundle(i);
    const auto& last = trace.last_added[static_cast<std::size_t>(i)];
    if (grew != last.has_value() || (last && !a.bundle(i).contains(*last))) {
      fail(cert.last_added_consistent, "last_added mismatch for agent " + std::to_string(i));
    }
  }
  for (int i = 0; i < n; ++i) {
    const Valuation& v = inst.valuation(i);
    const Value mine = value_query(v, a.bundle(i), scratch);
    if (mine < value_query(v, start.bundle(i), scratch)) {
      fail(cert.value_dominance, "agent " + std::to_string(i) + " lost value");
    }
    for (int j = 0; j < n; ++j) {
      const auto& last = trace.last_added[static_cast<std::size_t>(j)];
      if (!last || !a.bundle(j).contains(*last)) continue;
      if (mine < value_query(v, a.bundle(j).without(*last), scratch)) {
        fail(cert.last_item_bound, "agent " + std::to_string(i) +
                                       " prefers A_" + std::to_string(j) +
                                       " minus its last item");
      }
    }
  }
  return cert;
}

}  // namespace rmms

#endif  // RMMS_ALGORITHMS_HPP
