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

#ifndef RMMS_IO_HPP
#define RMMS_IO_HPP

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmms/algorithms.hpp"
#include "rmms/fairness.hpp"
#include "rmms/instance.hpp"
#include "rmms/oracle.hpp"
#include "rmms/shares.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

using Json = nlohmann::ordered_json;

inline Json bundle_to_json(Bundle b) {
  Json out = Json::array();
  for (int e : b.items()) out.push_back(e);
  return out;
}

inline Json bundles_to_json(std::span<const Bundle> bundles) {
  Json out = Json::array();
  for (Bundle b : bundles) out.push_back(bundle_to_json(b));
  return out;
}

inline Json to_json(const Valuation& v) {
  Json out;
  out["kind"] = to_string(v.kind());
  out["values"] = std::vector<Value>(v.values().begin(), v.values().end());
  if (v.kind() == ValuationKind::capped_additive) out["cap"] = v.cap();
  return out;
}

inline Json to_json(const Instance& inst) {
  Json out;
  out["m"] = inst.items();
  out["n"] = inst.agents();
  Json vals = Json::array();
  for (const auto& v : inst.valuations()) vals.push_back(to_json(v));
  out["valuations"] = std::move(vals);
  return out;
}

inline Json to_json(const PartialAllocation& a) {
  Json out;
  out["pool"] = bundle_to_json(a.pool());
  out["bundles"] = bundles_to_json(a.bundles());
  return out;
}

namespace io_detail {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("field \"") + key + "\": " + e.what());
  }
}

inline Bundle bundle_from_json(const Json& j, int m) {
  if (!j.is_array()) throw ValidationError("bundle must be an array of item indices");
  Bundle out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ValidationError("item index must be an integer");
    const auto e = x.get<long long>();
    if (e < 0 || e >= m) {
      throw MalformedBundle("item index " + std::to_string(e) + " outside [0, " + std::to_string(m) + ")");
    }
    if (out.contains(static_cast<int>(e))) {
      throw ValidationError("item " + std::to_string(e) + " listed twice in a bundle");
    }
    out = out.with(static_cast<int>(e));
  }
  return out;
}

}  // namespace io_detail

inline Valuation valuation_from_json(const Json& j, int m) {
  const auto kind = io_detail::field<std::string>(j, "kind");
  auto values = io_detail::field<std::vector<Value>>(j, "values");
  if (kind == "additive" || kind == "capped_additive") {
    if (static_cast<int>(values.size()) != m) {
      throw ValidationError(kind + " valuation lists " + std::to_string(values.size()) +
                            " values for m = " + std::to_string(m));
    }
    if (kind == "additive") return Valuation::additive(std::move(values));
    return Valuation::capped_additive(std::move(values), io_detail::field<Value>(j, "cap"));
  }
  if (kind == "table") return Valuation::table_unchecked(m, std::move(values));
  throw ValidationError("unknown valuation kind \"" + kind + "\"");
}

/// Parses the instance schema. Table valuations are not checked for
/// monotonicity here; run validate_instance on the result.
inline Instance instance_from_json(const Json& j) {
  const int m = io_detail::field<int>(j, "m");
  const int n = io_detail::field<int>(j, "n");
  const Json& vals = j.contains("valuations") ? j.at("valuations") : Json();
  if (!vals.is_array()) throw ValidationError("missing array \"valuations\"");
  if (static_cast<int>(vals.size()) != n) {
    throw ValidationError("n = " + std::to_string(n) + " but " + std::to_string(vals.size()) +
                          " valuations given");
  }
  std::vector<Valuation> out;
  for (const auto& v : vals) out.push_back(valuation_from_json(v, m));
  return Instance(m, std::move(out));
}

inline PartialAllocation allocation_from_json(const Json& j, int m) {
  if (!j.is_object() || !j.contains("bundles") || !j.at("bundles").is_array()) {
    throw ValidationError("allocation needs an array \"bundles\"");
  }
  std::vector<Bundle> bundles;
  for (const auto& b : j.at("bundles")) bundles.push_back(io_detail::bundle_from_json(b, m));
  const Bundle pool = j.contains("pool") ? io_detail::bundle_from_json(j.at("pool"), m) : Bundle{};
  return PartialAllocation(m, pool, std::move(bundles));
}

inline Json to_json(const ShareReport& r) {
  Json out;
  out["agent"] = r.agent;
  out["share"] = to_string(r.kind);
  out["value"] = r.value;
  out["witness"] = bundles_to_json(r.witness);
  return out;
}

inline Json to_json(const EnvyVerdict& v) {
  Json out;
  out["envier"] = v.envier;
  out["envied"] = v.envied;
  out["kind"] = to_string(v.kind);
  out["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
  return out;
}

inline Json to_json(const FairnessCertificate& c) {
  Json out;
  out["ef1"] = c.ef1;
  out["efl"] = c.efl;
  out["efx"] = c.efx;
  out["ef"] = c.ef;
  Json violations = Json::array();
  for (const auto& v : c.violations) violations.push_back(to_json(v));
  out["violations"] = std::move(violations);
  return out;
}

inline Json to_json(const QueryLedger& l) {
  Json out;
  out["value_queries"] = l.value_queries;
  out["comparison_queries"] = l.comparison_queries;
  return out;
}

inline Json to_json(const RunTrace& t) {
  Json out;
  Json rounds = Json::array();
  for (const auto& r : t.rounds) {
    Json round;
    round["kind"] = to_string(r.kind);
    round["agents"] = r.agents;
    round["bundles"] = bundles_to_json(r.bundles);
    round["items_added"] = bundle_to_json(r.items_added);
    if (!r.poor.empty()) round["poor"] = r.poor;
    rounds.push_back(std::move(round));
  }
  out["rounds"] = std::move(rounds);
  out["matching"] = t.matching;
  Json last = Json::array();
  for (const auto& e : t.last_added) last.push_back(e ? Json(*e) : Json(nullptr));
  out["last_added"] = std::move(last);
  out["ledger"] = to_json(t.ledger);
  return out;
}

inline Json to_json(const ValidationReport& r) {
  Json out;
  out["valid"] = r.ok();
  Json list = Json::array();
  for (const auto& v : r.violations) {
    Json item;
    item["agent"] = v.agent;
    item["violation"] = to_string(v.kind);
    item["message"] = v.message;
    if (v.kind == Violation::Kind::not_monotone) {
      item["witness"] = Json::array({bundle_to_json(v.smaller), bundle_to_json(v.larger)});
    }
    list.push_back(std::move(item));
  }
  out["violations"] = std::move(list);
  return out;
}

inline Json to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& t : r.checks) {
    Json c;
    c["name"] = to_string(t.check);
    c["passed"] = t.passed;
    c["failed"] = t.failed;
    c["skipped"] = t.skipped;
    Json failures = Json::array();
    for (const auto& inst : t.failures) failures.push_back(to_json(inst));
    c["failures"] = std::move(failures);
    checks.push_back(std::move(c));
  }
  Json out;
  out["checks"] = std::move(checks);
  return out;
}

inline Json parse_json(const std::string& text, const std::string& origin = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Json read_json_file(const std::string& path) {
  return parse_json(read_text_file(path), path);
}

inline Instance read_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

}  // namespace rmms

#endif  // RMMS_IO_HPP
