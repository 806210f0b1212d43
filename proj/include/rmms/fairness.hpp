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

#ifndef RMMS_FAIRNESS_HPP
#define RMMS_FAIRNESS_HPP

#include <optional>
#include <vector>

#include "rmms/errors.hpp"
#include "rmms/instance.hpp"
#include "rmms/valuation.hpp"

namespace rmms {

/// Envy kinds ordered from weakest to strongest. Each stronger kind implies
/// every weaker one, so a verdict records only the strongest present.
enum class EnvyKind { none, ef, efx, efl, ef1 };

inline const char* to_string(EnvyKind kind) {
  switch (kind) {
    case EnvyKind::none:
      return "none";
    case EnvyKind::ef:
      return "EF";
    case EnvyKind::efx:
      return "EFX";
    case EnvyKind::efl:
      return "EFL";
    case EnvyKind::ef1:
      return "EF1";
  }
  return "?";
}

/// Which of the four envy predicates hold for one ordered pair.
struct EnvyFlags {
  bool ef = false;
  bool efx = false;
  bool efl = false;
  bool ef1 = false;

  bool has(EnvyKind kind) const {
    switch (kind) {
      case EnvyKind::none:
        return false;
      case EnvyKind::ef:
        return ef;
      case EnvyKind::efx:
        return efx;
      case EnvyKind::efl:
        return efl;
      case EnvyKind::ef1:
        return ef1;
    }
    return false;
  }
};

struct EnvyVerdict {
  int envier = -1;
  int envied = -1;
  EnvyKind kind = EnvyKind::none;
  /// Lowest-index item certifying the reported kind (absent for EF / none).
  std::optional<int> witness;
  EnvyFlags flags;
};

/// Evaluates all four envy predicates of agent i toward agent j.
///
///   EF   v_i(A_i) < v_i(A_j)
///   EFX  some e in A_j has v_i(A_i) < v_i(A_j - e)
///   EFL  every e in A_j has v_i(A_i) < v_i({e}) or v_i(A_i) < v_i(A_j - e)
///   EF1  every e in A_j has v_i(A_i) < v_i(A_j - e)
///
/// An empty A_j is envied in no sense, and EFL envy additionally needs
/// |A_j| >= 2; a single item is never EFL-envied. The pool is never a target.
inline EnvyVerdict envy_between(const Instance& inst,
                                const PartialAllocation& alloc, int i, int j,
                                QueryLedger& ledger) {
  require_compatible(inst, alloc);
  if (i == j || i < 0 || j < 0 || i >= inst.agents() || j >= inst.agents()) {
    throw PreconditionError("envy_between needs two distinct valid agents");
  }
  const Valuation& v = inst.valuation(i);
  const Bundle own = alloc.bundle(i);
  const Bundle other = alloc.bundle(j);

  EnvyVerdict verdict{i, j, EnvyKind::none, std::nullopt, {}};
  if (other.empty()) return verdict;

  const Value mine = value_query(v, own, ledger);
  EnvyFlags& f = verdict.flags;
  f.ef = mine < value_query(v, other, ledger);

  std::optional<int> efx_witness;
  bool all_minus_one = true;   // EF1 condition over every e
  bool all_lexicographic = true;  // EFL condition over every e
  for (int e : other.items()) {
    const bool beats_rest = mine < value_query(v, other.without(e), ledger);
    const bool beats_item = mine < value_query(v, Bundle::single(e), ledger);
    if (beats_rest && !efx_witness) efx_witness = e;
    all_minus_one = all_minus_one && beats_rest;
    all_lexicographic = all_lexicographic && (beats_rest || beats_item);
  }
  f.efx = efx_witness.has_value();
  f.ef1 = all_minus_one;
  f.efl = other.size() >= 2 && all_lexicographic;

  const int lowest = other.lowest();
  if (f.ef1) {
    verdict.kind = EnvyKind::ef1;
    verdict.witness = lowest;
  } else if (f.efl) {
    verdict.kind = EnvyKind::efl;
    verdict.witness = lowest;
  } else if (f.efx) {
    verdict.kind = EnvyKind::efx;
    verdict.witness = efx_witness;
  } else if (f.ef) {
    verdict.kind = EnvyKind::ef;
  }
  return verdict;
}

inline EnvyVerdict envy_between(const Instance& inst,
                                const PartialAllocation& alloc, int i, int j) {
  QueryLedger scratch;
  return envy_between(inst, alloc, i, j, scratch);
}

struct FairnessResult {
  bool holds = true;
  std::vector<EnvyVerdict> violations;
};

/// Pairwise verdicts in (envier, envied) order.
inline std::vector<EnvyVerdict> all_verdicts(const Instance& inst,
                                             const PartialAllocation& alloc,
                                             QueryLedger& ledger) {
  std::vector<EnvyVerdict> out;
  for (int i = 0; i < inst.agents(); ++i) {
    for (int j = 0; j < inst.agents(); ++j) {
      if (i != j) out.push_back(envy_between(inst, alloc, i, j, ledger));
    }
  }
  return out;
}

/// True iff no ordered pair exhibits `kind` envy.
inline FairnessResult is_free_of(EnvyKind kind, const Instance& inst,
                                 const PartialAllocation& alloc) {
  QueryLedger scratch;
  FairnessResult result;
  for (auto& verdict : all_verdicts(inst, alloc, scratch)) {
    if (verdict.flags.has(kind)) {
      result.holds = false;
      result.violations.push_back(verdict);
    }
  }
  return result;
}

inline FairnessResult is_ef(const Instance& inst, const PartialAllocation& a) {
  return is_free_of(EnvyKind::ef, inst, a);
}
inline FairnessResult is_efx(const Instance& inst, const PartialAllocation& a) {
  return is_free_of(EnvyKind::efx, inst, a);
}
inline FairnessResult is_efl(const Instance& inst, const PartialAllocation& a) {
  return is_free_of(EnvyKind::efl, inst, a);
}
inline FairnessResult is_ef1(const Instance& inst, const PartialAllocation& a) {
  return is_free_of(EnvyKind::ef1, inst, a);
}

/// Everything the `check` subcommand reports about an allocation.
struct FairnessCertificate {
  bool ef1 = true;
  bool efl = true;
  bool efx = true;
  bool ef = true;
  /// Every ordered pair with some envy, strongest kind first per pair.
  std::vector<EnvyVerdict> violations;
};

inline FairnessCertificate certify(const Instance& inst,
                                   const PartialAllocation& alloc) {
  QueryLedger scratch;
  FairnessCertificate cert;
  for (auto& verdict : all_verdicts(inst, alloc, scratch)) {
    cert.ef = cert.ef && !verdict.flags.ef;
    cert.efx = cert.efx && !verdict.flags.efx;
    cert.efl = cert.efl && !verdict.flags.efl;
    cert.ef1 = cert.ef1 && !verdict.flags.ef1;
    if (verdict.flags.ef || verdict.flags.efx || verdict.flags.efl ||
        verdict.flags.ef1) {
      cert.violations.push_back(verdict);
    }
  }
  return cert;
}

}  // namespace rmms

#endif  // RMMS_FAIRNESS_HPP
