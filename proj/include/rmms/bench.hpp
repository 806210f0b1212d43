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

#ifndef RMMS_BENCH_HPP
#define RMMS_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rmms/algorithms.hpp"
#include "rmms/fairness.hpp"
#include "rmms/io.hpp"
#include "rmms/random.hpp"
#include "rmms/rational.hpp"
#include "rmms/rmms_efx.hpp"
#include "rmms/shares.hpp"

namespace rmms {

struct BenchRun {
  GenParams params;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct BenchConfig {
  std::vector<BenchRun> runs;
  int jobs = 1;
  /// Fill wall_time_us. Off by default so reruns are byte-identical.
  bool timing = false;
};

/// One (instance, algorithm) row.
struct BenchRecord {
  std::uint64_t seed = 0;
  int trial = 0;
  int n = 0;
  int m = 0;
  ValuationKind kind = ValuationKind::additive;
  std::vector<Value> mms;
  std::vector<Value> mxs;
  std::vector<Value> rmms;
  /// min over agents with MMS > 0 of RMMS / MMS; absent when every MMS is 0.
  std::optional<Rational> rmms_over_mms;
  std::string algorithm;
  bool efx = false;
  bool efl = false;
  bool ef1 = false;
  std::optional<std::int64_t> wall_time_us;
  QueryLedger queries;
  std::string status = "ok";
};

namespace bench_detail {

inline std::vector<BenchRecord> run_instance(const BenchRun& run, int trial,
                                             const Instance& inst, bool timing) {
  BenchRecord base;
  base.seed = run.seed;
  base.trial = trial;
  base.n = inst.agents();
  base.m = inst.items();
  base.kind = run.params.kind;

  std::vector<BenchRecord> rows;
  for (const char* algorithm : {"rmms-efx", "rmms-efl"}) {
    rows.push_back(base);
    rows.back().algorithm = algorithm;
  }
  try {
    QueryLedger shares_ledger;
    for (int i = 0; i < inst.agents(); ++i) {
      base.mms.push_back(mms(inst, i, shares_ledger).value);
      base.mxs.push_back(mxs(inst, i, shares_ledger).value);
      base.rmms.push_back(rmms(inst, i, shares_ledger).value);
      const Value mm = base.mms.back();
      if (mm > 0) {
        const Rational ratio(base.rmms.back(), mm);
        if (!base.rmms_over_mms || ratio < *base.rmms_over_mms) base.rmms_over_mms = ratio;
      }
    }

    const auto t0 = std::chrono::steady_clock::now();
    QueryLedger partial_ledger;
    RunResult partial = rmms_efx_partial(inst, base.rmms, partial_ledger);
    const auto t1 = std::chrono::steady_clock::now();
    QueryLedger completion_ledger;
    RunResult full = efl_complete(inst, partial.allocation, completion_ledger);
    const auto t2 = std::chrono::steady_clock::now();
    const auto micros = [](auto d) {
      return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
    };

    const std::pair<const RunResult*, std::int64_t> outcomes[] = {
        {&partial, micros(t1 - t0)}, {&full, micros(t2 - t1)}};
    for (std::size_t k = 0; k < rows.size(); ++k) {
      BenchRecord row = base;
      row.algorithm = rows[k].algorithm;
      const auto cert = certify(inst, outcomes[k].first->allocation);
      row.efx = cert.efx;
      row.efl = cert.efl;
      row.ef1 = cert.ef1;
      row.queries = outcomes[k].first->trace.ledger;
      if (timing) row.wall_time_us = outcomes[k].second;
      rows[k] = std::move(row);
    }
  } catch (const CapExceeded&) {
    for (auto& row : rows) row.status = "skipped";
  }
  return rows;
}

inline std::string join(const std::vector<Value>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace bench_detail

/// Generates every run's instances and evaluates them, `jobs` instances at a
/// time. Rows come back in (run, trial, algorithm) order regardless of
/// scheduling.
inline std::vector<BenchRecord> run_bench(const BenchConfig& config) {
  struct Task {
    std::size_t run;
    int trial;
    Instance inst;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.runs.size(); ++r) {
    const auto& run = config.runs[r];
    auto instances = generate_instances(run.params, run.seed, run.trials);
    for (int t = 0; t < run.trials; ++t) {
      tasks.push_back({r, t, std::move(instances[static_cast<std::size_t>(t)])});
    }
  }
  std::vector<std::vector<BenchRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto& task = tasks[k];
      results[k] = bench_detail::run_instance(config.runs[task.run], task.trial, task.inst,
                                              config.timing);
    }
  };
  const int threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(tasks.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<BenchRecord> out;
  for (auto& rows : results) {
    for (auto& row : rows) out.push_back(std::move(row));
  }
  return out;
}

inline const char* kBenchCsvHeader =
    "seed,trial,n,m,kind,mms,mxs,rmms,rmms_over_mms,rmms_over_mms_decimal,algorithm,"
    "efx,efl,ef1,wall_time_us,value_queries,comparison_queries,status";

/// RFC 4180 CSV. No field contains a comma, quote or line break, so none is
/// quoted; lines end in CRLF.
inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << kBenchCsvHeader << "\r\n";
  for (const auto& r : records) {
    const bool ok = r.status == "ok";
    out << r.seed << ',' << r.trial << ',' << r.n << ',' << r.m << ',' << to_string(r.kind) << ','
        << bench_detail::join(r.mms) << ',' << bench_detail::join(r.mxs) << ','
        << bench_detail::join(r.rmms) << ',';
    if (!ok) {
      out << ",,";
    } else if (r.rmms_over_mms) {
      out << r.rmms_over_mms->str() << ',' << r.rmms_over_mms->decimal(6) << ',';
    } else {
      out << "undefined,,";
    }
    out << r.algorithm << ',';
    if (ok) {
      out << (r.efx ? "true" : "false") << ',' << (r.efl ? "true" : "false") << ','
          << (r.ef1 ? "true" : "false") << ',';
    } else {
      out << ",,,";
    }
    if (r.wall_time_us) out << *r.wall_time_us;
    out << ',';
    if (ok) out << r.queries.value_queries << ',' << r.queries.comparison_queries;
    else out << ',';
    out << ',' << r.status << "\r\n";
  }
  return out.str();
}

/// Per (kind, n) class: the smallest observed RMMS/MMS against the
/// guaranteed bound (additive: 2n/(3n-1) or (2n-2)/(3n-4); capped additive:
/// 1/n; tables carry no guarantee).
inline Json bench_summary(const std::vector<BenchRecord>& records) {
  struct ClassStats {
    int instances = 0;
    int skipped = 0;
    int efx_failures = 0;
    int efl_failures = 0;
    std::optional<Rational> min_ratio;
  };
  std::map<std::pair<std::string, int>, ClassStats> classes;
  for (const auto& r : records) {
    auto& s = classes[{to_string(r.kind), r.n}];
    if (r.algorithm != "rmms-efx") {
      if (r.status == "ok" && !r.efl) ++s.efl_failures;
      continue;
    }
    if (r.status != "ok") {
      ++s.skipped;
      continue;
    }
    ++s.instances;
    if (!r.efx) ++s.efx_failures;
    if (r.rmms_over_mms && (!s.min_ratio || *r.rmms_over_mms < *s.min_ratio)) {
      s.min_ratio = r.rmms_over_mms;
    }
  }
  Json list = Json::array();
  for (const auto& [key, s] : classes) {
    Json c;
    c["kind"] = key.first;
    c["n"] = key.second;
    c["instances"] = s.instances;
    c["skipped"] = s.skipped;
    c["min_rmms_over_mms"] = s.min_ratio ? Json(s.min_ratio->str()) : Json(nullptr);
    c["min_rmms_over_mms_decimal"] = s.min_ratio ? Json(s.min_ratio->decimal(6)) : Json(nullptr);
    std::optional<Rational> bound;
    if (key.first == "additive") bound = ratio_bound(key.second, ValuationClass::additive);
    if (key.first == "capped_additive") bound = ratio_bound(key.second, ValuationClass::subadditive);
    c["guarantee"] = bound ? Json(bound->str()) : Json(nullptr);
    c["guarantee_met"] = bound && s.min_ratio ? Json(*s.min_ratio >= *bound) : Json(nullptr);
    c["efx_failures"] = s.efx_failures;
    c["efl_failures"] = s.efl_failures;
    list.push_back(std::move(c));
  }
  Json out;
  out["classes"] = std::move(list);
  out["rows"] = records.size();
  return out;
}

inline std::optional<ValuationKind> kind_from_string(const std::string& s) {
  if (s == "additive") return ValuationKind::additive;
  if (s == "capped_additive") return ValuationKind::capped_additive;
  if (s == "table") return ValuationKind::table;
  return std::nullopt;
}

/// {"runs":[{"n":3,"m":6,"kind":"additive","trials":100,"seed":7,
///           "max_value":10,"cap":5}, ...]}; max_value and cap optional.
inline BenchConfig bench_config_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("runs") || !j.at("runs").is_array()) {
    throw ValidationError("bench config needs an array \"runs\"");
  }
  BenchConfig config;
  for (const auto& r : j.at("runs")) {
    BenchRun run;
    run.params.agents = io_detail::field<int>(r, "n");
    run.params.items = io_detail::field<int>(r, "m");
    const auto kind = kind_from_string(io_detail::field<std::string>(r, "kind"));
    if (!kind) throw ValidationError("unknown kind in bench config");
    run.params.kind = *kind;
    run.trials = io_detail::field<int>(r, "trials");
    run.seed = io_detail::field<std::uint64_t>(r, "seed");
    if (r.contains("max_value")) run.params.max_value = io_detail::field<Value>(r, "max_value");
    if (r.contains("cap")) run.params.cap = io_detail::field<Value>(r, "cap");
    if (run.trials < 0) throw ValidationError("trials must be >= 0");
    check_gen_params(run.params);
    config.runs.push_back(run);
  }
  return config;
}

}  // namespace rmms

#endif  // RMMS_BENCH_HPP
