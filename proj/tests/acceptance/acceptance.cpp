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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rmms/io.hpp"
#include "rmms/oracle.hpp"
#include "rmms/rmms.hpp"

#ifndef RMMS_CLI_PATH
#error "RMMS_CLI_PATH must name the rmms executable"
#endif

namespace rmms {
namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Tallies a criterion: counts checks and keeps the first failure message.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  Verdict verdict(const std::string& extra = "") const {
    std::ostringstream out;
    out << checks_ << " checks, " << failures_ << " failures";
    if (!extra.empty()) out << ", " << extra;
    if (!first_.empty()) out << "; first: " << first_;
    return {failures_ == 0 && checks_ > 0, out.str()};
  }

 private:
  long long checks_ = 0;
  long long failures_ = 0;
  std::string first_;
};

std::string describe(const Instance& inst) { return to_json(inst).dump(); }

Value value(const Valuation& v, Bundle s) {
  QueryLedger q;
  return value_query(v, s, q);
}

const std::vector<Instance>& exhaustive() {
  static const std::vector<Instance> corpus =
      exhaustive_additive_corpus(std::vector<int>{2, 3}, std::vector<int>{3, 4, 5}, 3);
  return corpus;
}

std::vector<Instance> random_additive_500() {
  return random_corpus({500, ValuationKind::additive, 1, 3, 1, 8, 10, 20260101});
}

// Mostly zero-valued items, so some agents' RMMS is 0.
std::vector<Instance> random_sparse_500() {
  std::vector<Instance> out;
  const ValuationKind kinds[] = {ValuationKind::additive, ValuationKind::capped_additive,
                                 ValuationKind::table};
  SplitMix64 root(515);
  for (int k = 0; k < 500; ++k) {
    SplitMix64 rng = root.split();
    GenParams p;
    p.agents = static_cast<int>(rng.between(2, 4));
    p.items = static_cast<int>(rng.between(1, 8));
    p.kind = kinds[k % 3];
    p.max_value = k % 2 == 0 ? 1 : 6;
    out.push_back(random_instance(p, rng));
  }
  return out;
}

PartialAllocation random_start(const Instance& inst, SplitMix64& rng) {
  std::vector<Bundle> bundles(static_cast<std::size_t>(inst.agents()));
  Bundle pool;
  for (int e = 0; e < inst.items(); ++e) {
    const auto label = rng.below(static_cast<std::uint64_t>(inst.agents()));
    if (label == 0) {
      pool = pool.with(e);
    } else {
      bundles[label - 1] = bundles[label - 1].with(e);
    }
  }
  return PartialAllocation(inst.items(), pool, std::move(bundles));
}

Verdict oracle_equivalence() {
  Tally t;
  for (const auto& inst : exhaustive()) {
    const int n = inst.agents();
    for (int i = 0; i < n; ++i) {
      const Valuation& v = inst.valuation(i);
      QueryLedger q;
      t.expect(mms(inst, i, q).value == brute_mms(v, n), "mms " + describe(inst));
      t.expect(mxs(inst, i, q).value == brute_mxs(inst, i), "mxs " + describe(inst));
      t.expect(rmms(inst, i, q).value == brute_rmms(v, n), "rmms " + describe(inst));
    }
  }
  return t.verdict(std::to_string(exhaustive().size()) + " instances");
}

std::vector<Instance> corpus_two() {
  std::vector<Instance> out = exhaustive();
  for (auto& inst : random_additive_500()) out.push_back(std::move(inst));
  return out;
}

Verdict share_order() {
  Tally t;
  for (const auto& inst : corpus_two()) {
    for (int i = 0; i < inst.agents(); ++i) {
      QueryLedger q;
      const Value x = mxs(inst, i, q).value;
      const Value r = rmms(inst, i, q).value;
      const Value m = mms(inst, i, q).value;
      t.expect(x <= r && r <= m, "agent " + std::to_string(i) + " " + describe(inst));
    }
  }
  return t.verdict();
}

Verdict additive_ratio() {
  Tally t;
  for (const auto& inst : corpus_two()) {
    const long long n = inst.agents();
    for (int i = 0; i < inst.agents(); ++i) {
      QueryLedger q;
      const long long r = rmms(inst, i, q).value;
      const long long m = mms(inst, i, q).value;
      const bool ok = n % 2 == 1 ? r * (3 * n - 1) >= 2 * n * m
                                 : r * (3 * n - 4) >= (2 * n - 2) * m;
      t.expect(ok, "agent " + std::to_string(i) + " " + describe(inst));
    }
  }
  return t.verdict();
}

Verdict subadditive_ratio() {
  Tally t;
  SplitMix64 root(4040);
  for (int k = 0; k < 300; ++k) {
    SplitMix64 rng = root.split();
    GenParams p;
    p.agents = static_cast<int>(rng.between(2, 4));
    p.items = static_cast<int>(rng.between(1, 8));
    p.kind = ValuationKind::capped_additive;
    p.max_value = 10;
    const Instance inst = random_instance(p, rng);
    const int n = inst.agents();
    QueryLedger q;
    const auto shares = rmms_values(inst, q);
    const auto run = rmms_efx_partial(inst, shares, q);
    for (int i = 0; i < n; ++i) {
      const Value m = mms(inst, i, q).value;
      t.expect(shares[static_cast<std::size_t>(i)] * n >= m, "ratio " + describe(inst));
      t.expect(value(inst.valuation(i), run.allocation.bundle(i)) * n >= m,
               "partial value " + describe(inst));
    }
  }
  return t.verdict();
}

std::vector<Instance> corpus_five() {
  std::vector<Instance> out = exhaustive();
  for (auto& inst : random_sparse_500()) out.push_back(std::move(inst));
  return out;
}

Verdict efx_partial() {
  Tally t;
  int zero_share_agents = 0;
  double slowest = 0;
  for (const auto& inst : corpus_five()) {
    const auto start = std::chrono::steady_clock::now();
    QueryLedger q;
    const auto shares = rmms_values(inst, q);
    const auto run = rmms_efx_partial(inst, shares, q);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    slowest = std::max(slowest, secs);
    t.expect(secs < 5.0, "runtime " + describe(inst));
    t.expect(is_efx(inst, run.allocation).holds, "EFX " + describe(inst));
    for (int i = 0; i < inst.agents(); ++i) {
      const Value s = shares[static_cast<std::size_t>(i)];
      zero_share_agents += s == 0;
      t.expect(value(inst.valuation(i), run.allocation.bundle(i)) >= s, "RMMS " + describe(inst));
    }
  }
  t.expect(zero_share_agents > 0, "corpus has no agent with RMMS = 0");
  std::ostringstream extra;
  extra << zero_share_agents << " agents with RMMS = 0, slowest instance " << slowest << " s";
  return t.verdict(extra.str());
}

// Runs of the full pipeline over the criterion-5 corpus, shared with the
// comparison-query criterion.
struct FullRuns {
  std::vector<Instance> corpus;
  std::vector<FullRun> runs;
};

const FullRuns& full_runs() {
  static const FullRuns cached = [] {
    FullRuns out;
    out.corpus = corpus_five();
    for (const auto& inst : out.corpus) out.runs.push_back(rmms_efl_full(inst));
    return out;
  }();
  return cached;
}

Verdict efl_full() {
  Tally t;
  const auto& all = full_runs();
  for (std::size_t k = 0; k < all.corpus.size(); ++k) {
    const auto& inst = all.corpus[k];
    const auto& run = all.runs[k];
    const auto& a = run.allocation();
    t.expect(a.is_full(), "pool not empty " + describe(inst));
    t.expect(is_efl(inst, a).holds, "EFL " + describe(inst));
    for (int i = 0; i < inst.agents(); ++i) {
      const Value now = value(inst.valuation(i), a.bundle(i));
      t.expect(now >= run.shares[static_cast<std::size_t>(i)], "RMMS " + describe(inst));
      t.expect(now >= value(inst.valuation(i), run.partial.allocation.bundle(i)),
               "dominance " + describe(inst));
    }
  }
  return t.verdict();
}

std::vector<std::pair<Instance, PartialAllocation>> start_pairs() {
  std::vector<std::pair<Instance, PartialAllocation>> out;
  const ValuationKind kinds[] = {ValuationKind::additive, ValuationKind::capped_additive,
                                 ValuationKind::table};
  SplitMix64 root(7007);
  for (int k = 0; k < 500; ++k) {
    SplitMix64 rng = root.split();
    GenParams p;
    p.agents = static_cast<int>(rng.between(1, 5));
    p.items = static_cast<int>(rng.between(1, 10));
    p.kind = kinds[k % 3];
    p.max_value = 8;
    Instance inst = random_instance(p, rng);
    PartialAllocation start = random_start(inst, rng);
    out.emplace_back(std::move(inst), std::move(start));
  }
  return out;
}

Verdict envy_cycle_lemma() {
  Tally t;
  for (const auto& [inst, start] : start_pairs()) {
    QueryLedger q;
    const auto run = envy_cycle_run(inst, start, q);
    const auto cert = certify_envy_cycle(inst, start, run);
    t.expect(run.allocation.is_full(), "pool not empty " + describe(inst));
    t.expect(cert.ok(), cert.detail + " " + describe(inst));
  }
  return t.verdict();
}

Verdict comparison_only() {
  Tally t;
  for (const auto& run : full_runs().runs) {
    t.expect(run.completion.trace.ledger.value_queries == 0, "efl_complete issued value queries");
  }
  for (const auto& [inst, start] : start_pairs()) {
    QueryLedger q;
    envy_cycle_run(inst, start, q);
    t.expect(q.value_queries == 0, "envy_cycle_run issued value queries");
    QueryLedger p;
    preprocess_singletons(inst, start, p);
    t.expect(p.value_queries == 0, "preprocess_singletons issued value queries");
  }
  return t.verdict();
}

Verdict self_maximizing() {
  Tally t;
  const auto& corpus = exhaustive();
  SplitMix64 rng(9009);
  int pairs = 0;
  while (pairs < 2000) {
    const auto& a = corpus[rng.below(corpus.size() - 1)];
    const auto& b = corpus[rng.below(corpus.size() - 1)];
    if (a.items() != b.items() || a.agents() != b.agents()) continue;
    ++pairs;
    const auto r = check_self_maximizing(rmms_share(), a.valuation(0), b.valuation(0), a.agents());
    t.expect(r.holds, "self-maximizing " + describe(a) + " vs " + describe(b));
  }
  for (int k = 0; k < 500; ++k) {
    const auto& inst = corpus[rng.below(corpus.size() - 1)];
    const Valuation& v = inst.valuation(0);
    const Value eps = static_cast<Value>(rng.below(3));
    const Valuation w = raise_within(v, eps, rng);
    t.expect(check_monotone_share(rmms_share(), w, v, inst.agents()).holds,
             "monotone " + describe(inst));
    t.expect(check_lipschitz_share(rmms_share(), v, w, inst.agents(), eps).holds,
             "lipschitz " + describe(inst));
  }
  return t.verdict("2000 sampled pairs, 500 constructed pairs");
}

Verdict hierarchy() {
  Tally t;
  long long allocations = 0;
  for (int m = 1; m <= 4; ++m) {
    int vectors = 1;
    for (int e = 0; e < m; ++e) vectors *= 3;
    auto decode = [m](int code) {
      std::vector<Value> xs(static_cast<std::size_t>(m));
      for (auto& x : xs) {
        x = code % 3;
        code /= 3;
      }
      return Valuation::additive(xs);
    };
    for (int a = 0; a < vectors; ++a) {
      for (int b = 0; b < vectors; ++b) {
        const Instance inst(m, {decode(a), decode(b)});
        enumerate_allocations(inst, false, [&](const PartialAllocation& alloc) {
          ++allocations;
          const bool efx = is_efx(inst, alloc).holds;
          const bool efl = is_efl(inst, alloc).holds;
          const bool ef1 = is_ef1(inst, alloc).holds;
          t.expect(!efx || efl, "EFX but not EFL " + describe(inst));
          t.expect(!efl || ef1, "EFL but not EF1 " + describe(inst));
        });
      }
    }
  }
  return t.verdict(std::to_string(allocations) + " allocations");
}

// ---------------------------------------------------------------------------
// CLI determinism.

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + RMMS_CLI_PATH + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

Verdict cli_determinism() {
  namespace fs = std::filesystem;
  Tally t;
  const fs::path root = fs::temp_directory_path() /
                        ("rmms-acceptance-" + std::to_string(std::chrono::steady_clock::now()
                                                                  .time_since_epoch()
                                                                  .count()));
  fs::create_directories(root);
  const std::string q = "\"";
  auto path = [&](const std::string& name) { return q + (root / name).string() + q; };

  // Each command runs twice, writing to <name>.a and <name>.b.
  struct Command {
    std::string name;
    std::function<std::string(const std::string&)> args;  // suffix -> argv tail
    std::vector<std::string> outputs;                     // files compared per suffix
  };
  const std::string inst = path("gen.a/instance-0001.json");
  const std::vector<Command> commands = {
      {"gen", [&](const std::string& s) {
         return "gen --agents 3 --items 6 --kind capped_additive --seed 1 --count 3 -o " +
                path("gen" + s);
       },
       {"instance-0000.json", "instance-0001.json", "instance-0002.json"}},
      {"gen-stdout", [&](const std::string& s) {
         return "gen --agents 2 --items 4 --kind table --seed 9 --count 2 > " + path("lines" + s);
       },
       {}},
      {"shares", [&](const std::string& s) {
         return "shares " + inst + " -o " + path("rmms" + s) + " && \"" + RMMS_CLI_PATH +
                "\" shares " + inst + " --share mxs -o " + path("mxs" + s) + " && \"" +
                RMMS_CLI_PATH + "\" shares " + inst + " --share mms --agent 2 -o " +
                path("mms" + s);
       },
       {}},
      {"allocate", [&](const std::string& s) {
         std::string out;
         for (const char* algo : {"envy-cycle", "rmms-efx", "rmms-efl"}) {
           if (!out.empty()) out += " && \"" + std::string(RMMS_CLI_PATH) + "\" ";
           out += std::string("allocate ") + inst + " --algorithm " + algo + " -o " +
                  path(std::string("alloc-") + algo + s) + " --trace " +
                  path(std::string("trace-") + algo + s);
         }
         return out;
       },
       {}},
      {"check", [&](const std::string& s) {
         return "check " + inst + " " + path("alloc-rmms-efl.a") + " --require efl -o " +
                path("check" + s);
       },
       {}},
      {"verify", [&](const std::string& s) {
         return "verify --exhaustive-agents 2 --exhaustive-items 3 --exhaustive-max-value 2 "
                "--random 40 --kind table --max-agents 3 --max-items 6 --seed 5 --jobs 4 -o " +
                path("verify" + s);
       },
       {}},
      {"bench", [&](const std::string& s) {
         return "bench --agents 3 --items 5 --kind additive --trials 12 --seed 7 --jobs 4 --csv " +
                path("bench" + s) + " --summary " + path("summary" + s);
       },
       {}},
  };
  const std::vector<std::vector<std::string>> compared = {
      {},
      {"lines"},
      {"rmms", "mxs", "mms"},
      {"alloc-envy-cycle", "trace-envy-cycle", "alloc-rmms-efx", "trace-rmms-efx",
       "alloc-rmms-efl", "trace-rmms-efl"},
      {"check"},
      {"verify"},
      {"bench", "summary"},
  };

  int files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    const auto& cmd = commands[c];
    for (const char* suffix : {".a", ".b"}) {
      t.expect(run_cli(cmd.args(suffix)) == 0, cmd.name + " exited with an error");
    }
    std::vector<fs::path> pairs;
    for (const auto& f : cmd.outputs) {
      pairs.push_back(fs::path(cmd.name + ".a") / f);
    }
    for (const auto& f : compared[c]) pairs.push_back(f + ".a");
    for (const auto& a : pairs) {
      std::string b = a.string();
      if (b.starts_with(cmd.name + ".a")) {
        b.replace(0, cmd.name.size() + 2, cmd.name + ".b");
      } else {
        b.replace(b.size() - 2, 2, ".b");
      }
      const bool exists = fs::exists(root / a) && fs::exists(root / b);
      const bool same = exists && slurp(root / a) == slurp(root / b);
      t.expect(exists && fs::file_size(root / a) > 0, cmd.name + ": missing output " + a.string());
      t.expect(same, cmd.name + ": outputs differ for " + a.string());
      ++files;
    }
  }
  std::error_code ignored;
  fs::remove_all(root, ignored);
  return t.verdict(std::to_string(files) + " output pairs");
}

}  // namespace
}  // namespace rmms

int main() {
  using namespace rmms;
  struct Criterion {
    int id;
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence of mms, mxs, rmms on the exhaustive corpus", oracle_equivalence},
      {2, "MXS <= RMMS <= MMS", share_order},
      {3, "additive RMMS/MMS ratio bound", additive_ratio},
      {4, "capped additive RMMS >= MMS/n and partial values >= MMS/n", subadditive_ratio},
      {5, "RMMS+EFX partial allocation is EFX and RMMS", efx_partial},
      {6, "full allocation is EFL, RMMS and dominates the partial", efl_full},
      {7, "envy-cycle elimination certificate on random starts", envy_cycle_lemma},
      {8, "completion uses comparison queries only", comparison_only},
      {9, "RMMS is self-maximizing, monotone and 1-Lipschitz", self_maximizing},
      {10, "EFX => EFL => EF1 on all small two-agent allocations", hierarchy},
      {11, "CLI outputs are byte-identical across reruns", cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("%s criterion %2d: %s (%s; %.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
