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

#ifndef RMMS_ORACLE_HPP
#define RMMS_ORACLE_HPP

// Naive reference implementations. Nothing here calls into the search code of
// shares.hpp or rmms_efx.hpp; the corpus verifier compares the two sides.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "rmms/algorithms.hpp"
#include "rmms/errors.hpp"
#include "rmms/fairness.hpp"
#include "rmms/instance.hpp"
#include "rmms/random.hpp"
#include "rmms/rmms_efx.hpp"
#include "rmms/shares.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

inline constexpr int kBruteRmmsMaxItems = 10;
inline constexpr int kBruteRmmsMaxAgents = 4;

namespace oracle_detail {

inline void check_enumeration(int base, int m) {
  std::uint64_t count = 1;
  for (int i = 0; i < m; ++i) {
    count *= static_cast<std::uint64_t>(base);
    if (count > (std::uint64_t{1} << 24)) {
      throw CapExceeded("enumeration of " + std::to_string(base) + "^" +
                        std::to_string(m) + " assignments exceeds 2^24");
    }
  }
}

}  // namespace oracle_detail

/// Visits every assignment of m items to n agents (and to the pool, label 0,
/// when `partial`), in lexicographic order of the label vector with item 0
/// most significant. The visitor may return false to stop early.
template <typename Visitor>
void enumerate_allocations(int m, int n, bool partial, Visitor&& visit) {
  if (m < 1 || n < 1) throw ValidationError("enumerate_allocations needs m, n >= 1");
  const int base = partial ? n + 1 : n;
  oracle_detail::check_enumeration(base, m);
  std::vector<int> label(static_cast<std::size_t>(m), 0);
  while (true) {
    std::vector<Bundle> bundles(static_cast<std::size_t>(n));
    Bundle pool;
    for (int e = 0; e < m; ++e) {
      const int l = label[static_cast<std::size_t>(e)];
      if (partial && l == 0) {
        pool = pool.with(e);
      } else {
        auto& b = bundles[static_cast<std::size_t>(partial ? l - 1 : l)];
        b = b.with(e);
      }
    }
    const PartialAllocation alloc(m, pool, std::move(bundles));
    if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, const PartialAllocation&>, bool>) {
      if (!visit(alloc)) return;
    } else {
      visit(alloc);
    }
    int pos = m - 1;
    while (pos >= 0 && label[static_cast<std::size_t>(pos)] == base - 1) {
      label[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
    ++label[static_cast<std::size_t>(pos)];
  }
}

template <typename Visitor>
void enumerate_allocations(const Instance& inst, bool partial, Visitor&& visit) {
  enumerate_allocations(inst.items(), inst.agents(), partial, std::forward<Visitor>(visit));
}

/// Max over all n-way splits of the m items of the worst part's value.
inline Value brute_mms(const Valuation& v, int n) {
  QueryLedger scratch;
  Value best = 0;
  enumerate_allocations(v.items(), n, false, [&](const PartialAllocation& a) {
    Value worst = std::numeric_limits<Value>::max();
    for (Bundle b : a.bundles()) worst = std::min(worst, value_query(v, b, scratch));
    best = std::max(best, worst);
  });
  return best;
}

/// Min v_i(A_i) over full allocations where agent i EFX-envies nobody.
inline Value brute_mxs(const Instance& inst, int agent) {
  QueryLedger scratch;
  const Valuation& v = inst.valuation(agent);
  Value best = std::numeric_limits<Value>::max();
  enumerate_allocations(inst, false, [&](const PartialAllocation& a) {
    const Value mine = value_query(v, a.bundle(agent), scratch);
    if (mine >= best) return;
    for (int j = 0; j < inst.agents(); ++j) {
      if (j == agent) continue;
      for (int e : a.bundle(j).items()) {
        if (mine < value_query(v, a.bundle(j).without(e), scratch)) return;
      }
    }
    best = mine;
  });
  return best;
}

namespace oracle_detail {

// Plain recursion: can items[idx..] be added to `parts` so that every part
// reaches t?
inline bool split_reaches(const Valuation& v, const std::vector<int>& items,
                          std::size_t idx, std::vector<Bundle>& parts, Value t,
                          QueryLedger& q) {
  if (idx == items.size()) {
    for (Bundle b : parts) {
      if (value_query(v, b, q) < t) return false;
    }
    return true;
  }
  for (Bundle& b : parts) {
    const Bundle saved = b;
    b = b.with(items[idx]);
    const bool ok = split_reaches(v, items, idx + 1, parts, t, q);
    b = saved;
    if (ok) return true;
  }
  return false;
}

// For every ordered choice of k disjoint removed bundles (label 1..k), each
// worth < t, is the remainder (label 0) splittable into n - k parts >= t?
inline bool every_removal_ok(const Valuation& v, const std::vector<int>& items,
                             std::size_t idx, Bundle keep,
                             std::vector<Bundle>& removed, int n, Value t,
                             QueryLedger& q) {
  if (idx == items.size()) {
    for (Bundle r : removed) {
      if (value_query(v, r, q) >= t) return true;  // not a qualifying removal
    }
    std::vector<int> rest = keep.items();
    std::vector<Bundle> parts(static_cast<std::size_t>(n) - removed.size());
    return split_reaches(v, rest, 0, parts, t, q);
  }
  const int e = items[idx];
  if (!every_removal_ok(v, items, idx + 1, keep.with(e), removed, n, t, q)) return false;
  for (Bundle& r : removed) {
    const Bundle saved = r;
    r = r.with(e);
    const bool small = value_query(v, r, q) < t;
    const bool ok = !small || every_removal_ok(v, items, idx + 1, keep, removed, n, t, q);
    r = saved;
    if (!ok) return false;
  }
  return true;
}

}  // namespace oracle_detail

/// RMMS by direct enumeration of the definition, no memoization.
inline Value brute_rmms(const Valuation& v, Bundle s, int n) {
  if (n < 1) throw ValidationError("brute_rmms needs n >= 1");
  if (s.size() > kBruteRmmsMaxItems || n > kBruteRmmsMaxAgents || !s.within(v.items())) {
    throw CapExceeded("brute_rmms supports |S| <= 10 and n <= 4");
  }
  QueryLedger q;
  const std::vector<int> items = s.items();
  std::vector<Value> candidates{0};
  for_each_subset(s, [&](Bundle t) { candidates.push_back(value_query(v, t, q)); });
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (Value t : candidates) {
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      std::vector<Bundle> removed(static_cast<std::size_t>(k));
      ok = oracle_detail::every_removal_ok(v, items, 0, Bundle{}, removed, n, t, q);
    }
    if (ok) return t;
  }
  return 0;
}

inline Value brute_rmms(const Valuation& v, int n) {
  return brute_rmms(v, Bundle::all(v.items()), n);
}

/// share(v, n) over all items of v.
using ShareFunction = std::function<Value(const Valuation&, int)>;

inline ShareFunction rmms_share() {
  return [](const Valuation& v, int n) { return rmms(v, Bundle::all(v.items()), n).value; };
}
inline ShareFunction mms_share() {
  return [](const Valuation& v, int n) { return mms(v, Bundle::all(v.items()), n).value; };
}
inline ShareFunction mxs_share() {
  return [](const Valuation& v, int n) {
    QueryLedger scratch;
    return mxs(v, n, scratch).value;
  };
}

struct ShareCheck {
  bool holds = false;
  Value share_true = 0;      // share under v
  Value share_reported = 0;  // share under v'
  std::optional<Bundle> witness;
};

namespace oracle_detail {
inline void check_same_items(const Valuation& v, const Valuation& w) {
  if (v.items() != w.items()) throw PreconditionError("valuations differ in item count");
  if (v.items() > kMaxSolverItems) throw CapExceeded("share checks support at most 20 items");
}
}  // namespace oracle_detail

/// Self-maximization for one (true v, reported v') pair: some bundle T that
/// is acceptable under v' is worth at most share(v) under v. The witness is
/// the v-cheapest such T (smallest mask on ties).
inline ShareCheck check_self_maximizing(const ShareFunction& share,
                                        const Valuation& v,
                                        const Valuation& reported, int n) {
  oracle_detail::check_same_items(v, reported);
  QueryLedger q;
  ShareCheck out;
  out.share_true = share(v, n);
  out.share_reported = share(reported, n);
  Value cheapest = std::numeric_limits<Value>::max();
  for_each_subset(Bundle::all(v.items()), [&](Bundle t) {
    if (value_query(reported, t, q) < out.share_reported) return;
    const Value worth = value_query(v, t, q);
    if (worth < cheapest) {
      cheapest = worth;
      out.witness = t;
    }
  });
  out.holds = out.witness.has_value() && cheapest <= out.share_true;
  return out;
}

/// share(v) >= share(w) when v dominates w.
inline ShareCheck check_monotone_share(const ShareFunction& share,
                                       const Valuation& v, const Valuation& w,
                                       int n) {
  oracle_detail::check_same_items(v, w);
  QueryLedger q;
  for_each_subset(Bundle::all(v.items()), [&](Bundle s) {
    if (value_query(v, s, q) < value_query(w, s, q)) {
      throw PreconditionError("first valuation does not dominate the second at " + to_string(s));
    }
  });
  ShareCheck out;
  out.share_true = share(v, n);
  out.share_reported = share(w, n);
  out.holds = out.share_true >= out.share_reported;
  return out;
}

/// |share(v) - share(w)| <= eps when v and w are eps-close.
inline ShareCheck check_lipschitz_share(const ShareFunction& share,
                                        const Valuation& v, const Valuation& w,
                                        int n, Value eps) {
  oracle_detail::check_same_items(v, w);
  QueryLedger q;
  for_each_subset(Bundle::all(v.items()), [&](Bundle s) {
    if (std::llabs(value_query(v, s, q) - value_query(w, s, q)) > eps) {
      throw PreconditionError("valuations are not " + std::to_string(eps) +
                              "-close at " + to_string(s));
    }
  });
  ShareCheck out;
  out.share_true = share(v, n);
  out.share_reported = share(w, n);
  out.holds = std::llabs(out.share_true - out.share_reported) <= eps;
  return out;
}

// ---------------------------------------------------------------------------
// Corpora and batch verification.

/// Every additive value vector over m items with entries in [0, max_value],
/// as an n-agent instance with identical valuations. Shares depend only on
/// (v_i, n), so this covers every additive share question at that size.
inline std::vector<Instance> exhaustive_additive_corpus(std::span<const int> agent_counts,
                                                        std::span<const int> item_counts,
                                                        Value max_value) {
  std::vector<Instance> out;
  for (int n : agent_counts) {
    for (int m : item_counts) {
      std::vector<Value> values(static_cast<std::size_t>(m), 0);
      while (true) {
        out.push_back(Instance::identical(Valuation::additive(values), n));
        int pos = m - 1;
        while (pos >= 0 && values[static_cast<std::size_t>(pos)] == max_value) {
          values[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
        ++values[static_cast<std::size_t>(pos)];
      }
    }
  }
  return out;
}

struct RandomCorpusParams {
  int count = 0;
  ValuationKind kind = ValuationKind::additive;
  int min_agents = 2;
  int max_agents = 3;
  int min_items = 1;
  int max_items = 6;
  Value max_value = 3;
  std::uint64_t seed = 0;
};

/// Instance k draws n in [min_agents, max_agents], m in [min_items,
/// max_items], then its valuations, all from the k-th child stream of
/// SplitMix64(seed).
inline std::vector<Instance> random_corpus(const RandomCorpusParams& p) {
  if (p.min_agents < 1 || p.max_agents < p.min_agents || p.min_items < 1 ||
      p.max_items < p.min_items) {
    throw ValidationError("random corpus needs 1 <= min <= max for agents and items");
  }
  SplitMix64 root(p.seed);
  std::vector<Instance> out;
  for (int k = 0; k < p.count; ++k) {
    SplitMix64 rng = root.split();
    GenParams g;
    g.agents = static_cast<int>(rng.between(p.min_agents, p.max_agents));
    g.items = static_cast<int>(rng.between(p.min_items, p.max_items));
    g.kind = p.kind;
    g.max_value = p.max_value;
    out.push_back(random_instance(g, rng));
  }
  return out;
}

enum class Check {
  rmms_matches_brute,
  mms_matches_brute,
  mxs_matches_brute,
  share_order,          // MXS <= RMMS <= MMS
  additive_ratio,       // RMMS >= ratio_bound(n, additive) * MMS
  subadditive_ratio,    // RMMS * n >= MMS
  partial_mms_fraction, // v_i(partial A_i) * n >= MMS, subadditive agents
  efx_partial,          // rmms_efx_partial: EFX, RMMS, minimal bundles
  efl_full,             // rmms_efl_full: full, EFL, RMMS, dominates partial
  comparison_only,      // completion issues no value queries
};

inline const char* to_string(Check c) {
  switch (c) {
    case Check::rmms_matches_brute:
      return "rmms_matches_brute";
    case Check::mms_matches_brute:
      return "mms_matches_brute";
    case Check::mxs_matches_brute:
      return "mxs_matches_brute";
    case Check::share_order:
      return "share_order";
    case Check::additive_ratio:
      return "additive_ratio";
    case Check::subadditive_ratio:
      return "subadditive_ratio";
    case Check::partial_mms_fraction:
      return "partial_mms_fraction";
    case Check::efx_partial:
      return "efx_partial";
    case Check::efl_full:
      return "efl_full";
    case Check::comparison_only:
      return "comparison_only";
  }
  return "?";
}

inline std::vector<Check> all_checks() {
  return {Check::rmms_matches_brute, Check::mms_matches_brute,  Check::mxs_matches_brute,
          Check::share_order,        Check::additive_ratio,     Check::subadditive_ratio,
          Check::partial_mms_fraction, Check::efx_partial,      Check::efl_full,
          Check::comparison_only};
}

inline std::optional<Check> check_from_string(const std::string& name) {
  for (Check c : all_checks()) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

struct CheckTally {
  Check check;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  std::vector<Instance> failures;
};

struct VerifyReport {
  std::vector<CheckTally> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckTally& t) { return t.failed == 0; });
  }
};

enum class Outcome { pass, fail, skip };

namespace oracle_detail {

// Lazily computed per-instance quantities shared by the checks.
class InstanceProbe {
 public:
  explicit InstanceProbe(const Instance& inst) : inst_(inst) {}

  const std::vector<Value>& rmms_all() {
    if (!rmms_) {
      QueryLedger q;
      rmms_ = rmms_values(inst_, q);
    }
    return *rmms_;
  }
  const std::vector<Value>& mms_all() {
    if (!mms_) {
      QueryLedger q;
      mms_.emplace();
      for (int i = 0; i < inst_.agents(); ++i) mms_->push_back(mms(inst_, i, q).value);
    }
    return *mms_;
  }
  const std::vector<Value>& mxs_all() {
    if (!mxs_) {
      QueryLedger q;
      mxs_.emplace();
      for (int i = 0; i < inst_.agents(); ++i) mxs_->push_back(mxs(inst_, i, q).value);
    }
    return *mxs_;
  }
  const FullRun& full_run() {
    if (!full_) {
      QueryLedger q;
      RunResult partial = rmms_efx_partial(inst_, rmms_all(), q);
      RunResult completion = efl_complete(inst_, partial.allocation, q);
      full_.emplace(FullRun{rmms_all(), std::move(partial), std::move(completion)});
    }
    return *full_;
  }

  Outcome run(Check c) {
    try {
      return evaluate(c) ? Outcome::pass : Outcome::fail;
    } catch (const CapExceeded&) {
      return Outcome::skip;
    } catch (const NotApplicable&) {
      return Outcome::skip;
    } catch (const std::exception&) {
      return Outcome::fail;
    }
  }

 private:
  struct NotApplicable {};

  bool is_subadditive_kind(int i) const {
    const auto kind = inst_.valuation(i).kind();
    return kind == ValuationKind::additive || kind == ValuationKind::capped_additive;
  }

  bool evaluate(Check c) {
    const int n = inst_.agents();
    QueryLedger q;
    switch (c) {
      case Check::rmms_matches_brute: {
        for (int i = 0; i < n; ++i) {
          if (brute_rmms(inst_.valuation(i), n) != rmms_all()[static_cast<std::size_t>(i)]) return false;
        }
        return true;
      }
      case Check::mms_matches_brute: {
        for (int i = 0; i < n; ++i) {
          if (brute_mms(inst_.valuation(i), n) != mms_all()[static_cast<std::size_t>(i)]) return false;
        }
        return true;
      }
      case Check::mxs_matches_brute: {
        for (int i = 0; i < n; ++i) {
          if (brute_mxs(inst_, i) != mxs_all()[static_cast<std::size_t>(i)]) return false;
        }
        return true;
      }
      case Check::share_order: {
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
          if (!(mxs_all()[i] <= rmms_all()[i] && rmms_all()[i] <= mms_all()[i])) return false;
        }
        return true;
      }
      case Check::additive_ratio: {
        const Rational bound = ratio_bound(n, ValuationClass::additive);
        bool any = false;
        for (int i = 0; i < n; ++i) {
          if (inst_.valuation(i).kind() != ValuationKind::additive) continue;
          any = true;
          const auto r = static_cast<__int128>(rmms_all()[static_cast<std::size_t>(i)]);
          const auto mm = static_cast<__int128>(mms_all()[static_cast<std::size_t>(i)]);
          if (r * bound.den() < bound.num() * mm) return false;
        }
        if (!any) throw NotApplicable{};
        return true;
      }
      case Check::subadditive_ratio: {
        bool any = false;
        for (int i = 0; i < n; ++i) {
          if (!is_subadditive_kind(i)) continue;
          any = true;
          if (rmms_all()[static_cast<std::size_t>(i)] * n < mms_all()[static_cast<std::size_t>(i)]) return false;
        }
        if (!any) throw NotApplicable{};
        return true;
      }
      case Check::partial_mms_fraction: {
        bool any = false;
        const auto& alloc = full_run().partial.allocation;
        for (int i = 0; i < n; ++i) {
          if (!is_subadditive_kind(i)) continue;
          any = true;
          if (value_query(inst_.valuation(i), alloc.bundle(i), q) * n < mms_all()[static_cast<std::size_t>(i)]) {
            return false;
          }
        }
        if (!any) throw NotApplicable{};
        return true;
      }
      case Check::efx_partial: {
        const auto& run = full_run().partial;
        if (!is_efx(inst_, run.allocation).holds) return false;
        for (int i = 0; i < n; ++i) {
          if (value_query(inst_.valuation(i), run.allocation.bundle(i), q) <
              rmms_all()[static_cast<std::size_t>(i)]) {
            return false;
          }
        }
        return efx_minimality_holds(inst_, rmms_all(), run.trace);
      }
      case Check::efl_full: {
        const auto& full = full_run();
        const auto& a = full.completion.allocation;
        if (!a.is_full() || !is_efl(inst_, a).holds) return false;
        for (int i = 0; i < n; ++i) {
          const Value now = value_query(inst_.valuation(i), a.bundle(i), q);
          if (now < rmms_all()[static_cast<std::size_t>(i)]) return false;
          if (now < value_query(inst_.valuation(i), full.partial.allocation.bundle(i), q)) return false;
        }
        return true;
      }
      case Check::comparison_only:
        return full_run().completion.trace.ledger.value_queries == 0;
    }
    return false;
  }

  const Instance& inst_;
  std::optional<std::vector<Value>> rmms_;
  std::optional<std::vector<Value>> mms_;
  std::optional<std::vector<Value>> mxs_;
  std::optional<FullRun> full_;
};

}  // namespace oracle_detail

/// Runs every enabled check on every instance. Instances are processed on
/// `jobs` threads; tallies are merged in corpus order, so the report does not
/// depend on scheduling.
inline VerifyReport verify_corpus(std::span<const Instance> corpus,
                                  std::span<const Check> checks, int jobs = 1) {
  std::vector<std::vector<Outcome>> outcomes(corpus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < corpus.size(); k = next++) {
      oracle_detail::InstanceProbe probe(corpus[k]);
      for (Check c : checks) outcomes[k].push_back(probe.run(c));
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(corpus.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  VerifyReport report;
  for (Check c : checks) report.checks.push_back({c, 0, 0, 0, {}});
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    for (std::size_t c = 0; c < checks.size(); ++c) {
      auto& tally = report.checks[c];
      switch (outcomes[k][c]) {
        case Outcome::pass:
          ++tally.passed;
          break;
        case Outcome::fail:
          ++tally.failed;
          tally.failures.push_back(corpus[k]);
          break;
        case Outcome::skip:
          ++tally.skipped;
          break;
      }
    }
  }
  return report;
}

}  // namespace rmms

#endif  // RMMS_ORACLE_HPP
