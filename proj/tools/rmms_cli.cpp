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

// Command-line front end: gen, shares, allocate, check, verify, bench.
//
// Exit codes: 0 success, 2 invalid input, 3 solver cap exceeded, 4 a
// required property failed (check --require, verify --assert).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmms/bench.hpp"
#include "rmms/io.hpp"
#include "rmms/rmms.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;
constexpr int kExitProperty = 4;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    rmms::write_text_file(path, text);
  }
}

rmms::Instance load_valid_instance(const std::string& path) {
  rmms::Instance inst = rmms::read_instance(path);
  const auto report = rmms::validate_instance(inst);
  if (!report.ok()) {
    std::cerr << rmms::to_json(report).dump(2) << "\n";
    throw rmms::ValidationError(path + ": instance violates valuation invariants");
  }
  return inst;
}

rmms::ValuationKind parse_kind(const std::string& s) {
  const auto kind = rmms::kind_from_string(s);
  if (!kind) throw rmms::ValidationError("unknown valuation kind \"" + s + "\"");
  return *kind;
}

struct GenOptions {
  rmms::GenParams params;
  std::string kind = "additive";
  std::optional<rmms::Value> cap;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out;
};

int run_gen(GenOptions& o) {
  o.params.kind = parse_kind(o.kind);
  o.params.cap = o.cap;
  if (o.count < 0) throw rmms::ValidationError("count must be >= 0");
  const auto instances = rmms::generate_instances(o.params, o.seed, o.count);
  for (const auto& inst : instances) {
    if (!rmms::validate_instance(inst).ok()) {
      throw rmms::InternalError("generator produced an invalid instance");
    }
  }
  if (o.out.empty()) {
    for (const auto& inst : instances) std::cout << rmms::to_json(inst).dump() << "\n";
    return 0;
  }
  std::filesystem::create_directories(o.out);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "instance-%04zu.json", k);
    rmms::write_text_file((std::filesystem::path(o.out) / name).string(),
                          rmms::to_json(instances[k]).dump() + "\n");
  }
  return 0;
}

struct SharesOptions {
  std::string instance;
  std::optional<int> agent;
  std::string share = "rmms";
  std::string out;
};

int run_shares(const SharesOptions& o) {
  const rmms::Instance inst = load_valid_instance(o.instance);
  rmms::ShareKind kind;
  if (o.share == "rmms") {
    kind = rmms::ShareKind::rmms;
  } else if (o.share == "mms") {
    kind = rmms::ShareKind::mms;
  } else if (o.share == "mxs") {
    kind = rmms::ShareKind::mxs;
  } else {
    throw rmms::ValidationError("unknown share \"" + o.share + "\"");
  }
  rmms::QueryLedger ledger;
  if (o.agent) {
    if (*o.agent < 0 || *o.agent >= inst.agents()) {
      throw rmms::ValidationError("agent index out of range");
    }
    emit(rmms::to_json(rmms::compute_share(kind, inst, *o.agent, ledger)).dump(2) + "\n", o.out);
    return 0;
  }
  rmms::Json all = rmms::Json::array();
  for (int i = 0; i < inst.agents(); ++i) {
    all.push_back(rmms::to_json(rmms::compute_share(kind, inst, i, ledger)));
  }
  emit(all.dump(2) + "\n", o.out);
  return 0;
}

struct AllocateOptions {
  std::string instance;
  std::string algorithm;
  std::string start;
  std::string trace;
  std::string out;
};

int run_allocate(const AllocateOptions& o) {
  const rmms::Instance inst = load_valid_instance(o.instance);
  std::optional<rmms::PartialAllocation> start;
  if (!o.start.empty()) {
    start = rmms::allocation_from_json(rmms::read_json_file(o.start), inst.items());
    rmms::require_compatible(inst, *start);
  }
  rmms::QueryLedger ledger;
  rmms::Json trace;
  std::optional<rmms::PartialAllocation> result;
  if (o.algorithm == "envy-cycle") {
    auto run = rmms::envy_cycle_run(
        inst, start ? *start : rmms::PartialAllocation::empty(inst.items(), inst.agents()), ledger);
    trace = rmms::to_json(run.trace);
    result = run.allocation;
  } else if (o.algorithm == "rmms-efx") {
    if (start) throw rmms::ValidationError("rmms-efx does not take --start");
    auto run = rmms::rmms_efx_partial(inst, ledger);
    trace = rmms::to_json(run.trace);
    result = run.allocation;
  } else if (o.algorithm == "rmms-efl") {
    if (start) {
      auto run = rmms::efl_complete(inst, *start, ledger);
      trace["completion"] = rmms::to_json(run.trace);
      result = run.allocation;
    } else {
      auto run = rmms::rmms_efl_full(inst, ledger);
      trace["shares"] = run.shares;
      trace["partial"] = rmms::to_json(run.partial.trace);
      trace["completion"] = rmms::to_json(run.completion.trace);
      result = run.allocation();
    }
  } else {
    throw rmms::ValidationError("unknown algorithm \"" + o.algorithm + "\"");
  }
  emit(rmms::to_json(*result).dump() + "\n", o.out);
  if (!o.trace.empty()) rmms::write_text_file(o.trace, trace.dump(2) + "\n");
  return 0;
}

struct CheckOptions {
  std::string instance;
  std::string allocation;
  std::vector<std::string> require;
  std::string out;
};

int run_check(const CheckOptions& o) {
  const rmms::Instance inst = load_valid_instance(o.instance);
  const auto alloc = rmms::allocation_from_json(rmms::read_json_file(o.allocation), inst.items());
  rmms::require_compatible(inst, alloc);
  const auto cert = rmms::certify(inst, alloc);
  emit(rmms::to_json(cert).dump(2) + "\n", o.out);
  for (const auto& name : o.require) {
    bool holds = false;
    if (name == "ef1") {
      holds = cert.ef1;
    } else if (name == "efl") {
      holds = cert.efl;
    } else if (name == "efx") {
      holds = cert.efx;
    } else if (name == "ef") {
      holds = cert.ef;
    } else if (name == "full") {
      holds = alloc.is_full();
    } else {
      throw rmms::ValidationError("unknown property \"" + name + "\"");
    }
    if (!holds) {
      std::cerr << "property " << name << " does not hold\n";
      return kExitProperty;
    }
  }
  return 0;
}

struct VerifyOptions {
  std::vector<std::string> files;
  std::vector<int> exhaustive_agents;
  std::vector<int> exhaustive_items;
  rmms::Value exhaustive_max_value = 3;
  int random = 0;
  std::string kind = "additive";
  int max_agents = 3;
  int max_items = 6;
  rmms::Value max_value = 3;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  int jobs = 1;
  bool assert_all = false;
  std::string out;
};

int run_verify(const VerifyOptions& o) {
  std::vector<rmms::Instance> corpus;
  for (const auto& f : o.files) corpus.push_back(load_valid_instance(f));
  if (!o.exhaustive_agents.empty() || !o.exhaustive_items.empty()) {
    if (o.exhaustive_agents.empty() || o.exhaustive_items.empty()) {
      throw rmms::ValidationError("--exhaustive-agents and --exhaustive-items go together");
    }
    auto tier = rmms::exhaustive_additive_corpus(o.exhaustive_agents, o.exhaustive_items,
                                                 o.exhaustive_max_value);
    corpus.insert(corpus.end(), tier.begin(), tier.end());
  }
  if (o.random > 0) {
    rmms::RandomCorpusParams p;
    p.count = o.random;
    p.kind = parse_kind(o.kind);
    p.min_agents = std::min(2, o.max_agents);
    p.max_agents = o.max_agents;
    p.max_items = o.max_items;
    p.max_value = o.max_value;
    p.seed = o.seed;
    auto tier = rmms::random_corpus(p);
    corpus.insert(corpus.end(), tier.begin(), tier.end());
  }
  std::vector<rmms::Check> checks;
  if (o.checks.empty()) {
    checks = rmms::all_checks();
  } else {
    for (const auto& name : o.checks) {
      const auto c = rmms::check_from_string(name);
      if (!c) throw rmms::ValidationError("unknown check \"" + name + "\"");
      checks.push_back(*c);
    }
  }
  const auto report = rmms::verify_corpus(corpus, checks, o.jobs);
  rmms::Json out;
  out["seed"] = o.seed;
  out["instances"] = corpus.size();
  out["checks"] = rmms::to_json(report)["checks"];
  emit(out.dump(2) + "\n", o.out);
  return o.assert_all && !report.ok() ? kExitProperty : 0;
}

struct BenchOptions {
  std::string config;
  int agents = 3;
  int items = 6;
  std::string kind = "additive";
  int trials = 0;
  rmms::Value max_value = 10;
  std::optional<rmms::Value> cap;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool timing = false;
  std::string out;
  std::string summary;
};

int run_bench(const BenchOptions& o) {
  rmms::BenchConfig config;
  if (!o.config.empty()) {
    config = rmms::bench_config_from_json(rmms::read_json_file(o.config));
  } else {
    rmms::BenchRun run;
    run.params.agents = o.agents;
    run.params.items = o.items;
    run.params.kind = parse_kind(o.kind);
    run.params.max_value = o.max_value;
    run.params.cap = o.cap;
    run.trials = o.trials;
    run.seed = o.seed;
    if (run.trials < 0) throw rmms::ValidationError("trials must be >= 0");
    rmms::check_gen_params(run.params);
    config.runs.push_back(run);
  }
  config.jobs = o.jobs;
  config.timing = o.timing;
  const auto records = rmms::run_bench(config);
  emit(rmms::bench_csv(records), o.out);
  if (!o.summary.empty()) {
    rmms::write_text_file(o.summary, rmms::bench_summary(records).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact fair division of indivisible goods with residual maximin shares"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate seeded random instances");
  gen_cmd->add_option("--agents", gen.params.agents, "Number of agents")->required();
  gen_cmd->add_option("--items", gen.params.items, "Number of items")->required();
  gen_cmd->add_option("--kind", gen.kind, "additive | capped_additive | table");
  gen_cmd->add_option("--max-value", gen.params.max_value, "Largest per-item value");
  gen_cmd->add_option("--cap", gen.cap, "Fixed cap for capped_additive");
  gen_cmd->add_option("--seed", gen.seed, "Root seed");
  gen_cmd->add_option("--count", gen.count, "Number of instances");
  gen_cmd->add_option("-o,--out", gen.out, "Output directory (default: JSON lines on stdout)");

  SharesOptions shares;
  auto* shares_cmd = app.add_subcommand("shares", "Compute MMS, MXS or RMMS");
  shares_cmd->add_option("instance", shares.instance, "Instance JSON")->required();
  shares_cmd->add_option("--agent", shares.agent, "Single agent (default: all)");
  shares_cmd->add_option("--share", shares.share, "rmms | mms | mxs");
  shares_cmd->add_option("-o,--out", shares.out, "Output file");

  AllocateOptions alloc;
  auto* alloc_cmd = app.add_subcommand("allocate", "Run an allocation algorithm");
  alloc_cmd->add_option("instance", alloc.instance, "Instance JSON")->required();
  alloc_cmd->add_option("--algorithm", alloc.algorithm, "envy-cycle | rmms-efx | rmms-efl")
      ->required();
  alloc_cmd->add_option("--start", alloc.start, "Starting partial allocation JSON");
  alloc_cmd->add_option("--trace", alloc.trace, "Write the run trace here");
  alloc_cmd->add_option("-o,--out", alloc.out, "Output file");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Certify envy properties of an allocation");
  check_cmd->add_option("instance", check.instance, "Instance JSON")->required();
  check_cmd->add_option("allocation", check.allocation, "Allocation JSON")->required();
  check_cmd->add_option("--require", check.require, "ef1 | efl | efx | ef | full (exit 4 if violated)")
      ->delimiter(',');
  check_cmd->add_option("-o,--out", check.out, "Output file");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check solvers against brute-force oracles");
  verify_cmd->add_option("instances", verify.files, "Instance JSON files");
  verify_cmd->add_option("--exhaustive-agents", verify.exhaustive_agents, "e.g. 2,3")->delimiter(',');
  verify_cmd->add_option("--exhaustive-items", verify.exhaustive_items, "e.g. 3,4,5")->delimiter(',');
  verify_cmd->add_option("--exhaustive-max-value", verify.exhaustive_max_value, "Largest item value");
  verify_cmd->add_option("--random", verify.random, "Number of seeded random instances");
  verify_cmd->add_option("--kind", verify.kind, "Kind of the random tier");
  verify_cmd->add_option("--max-agents", verify.max_agents, "Random tier: largest n");
  verify_cmd->add_option("--max-items", verify.max_items, "Random tier: largest m");
  verify_cmd->add_option("--max-value", verify.max_value, "Random tier: largest item value");
  verify_cmd->add_option("--seed", verify.seed, "Random tier seed");
  verify_cmd->add_option("--checks", verify.checks, "Subset of checks")->delimiter(',');
  verify_cmd->add_option("--jobs", verify.jobs, "Worker threads");
  verify_cmd->add_flag("--assert", verify.assert_all, "Exit 4 if any check fails");
  verify_cmd->add_option("-o,--out", verify.out, "Output file");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Batch experiments to CSV");
  bench_cmd->add_option("--config", bench.config, "JSON config with a \"runs\" array");
  bench_cmd->add_option("--agents", bench.agents, "n (without --config)");
  bench_cmd->add_option("--items", bench.items, "m (without --config)");
  bench_cmd->add_option("--kind", bench.kind, "Valuation kind (without --config)");
  bench_cmd->add_option("--trials", bench.trials, "Instances (without --config)");
  bench_cmd->add_option("--max-value", bench.max_value, "Largest item value (without --config)");
  bench_cmd->add_option("--cap", bench.cap, "Fixed cap (without --config)");
  bench_cmd->add_option("--seed", bench.seed, "Seed (without --config)");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads");
  bench_cmd->add_flag("--timing", bench.timing, "Record wall time (output no longer reproducible)");
  bench_cmd->add_option("-o,--out,--csv", bench.out, "CSV file (default: stdout)");
  bench_cmd->add_option("--summary", bench.summary, "Summary JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*shares_cmd) return run_shares(shares);
    if (*alloc_cmd) return run_allocate(alloc);
    if (*check_cmd) return run_check(check);
    if (*verify_cmd) return run_verify(verify);
    if (*bench_cmd) return run_bench(bench);
  } catch (const rmms::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const rmms::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const rmms::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
