#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reqc/block_graph.hpp"
#include "reqc/diagnostic.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/trace.hpp"

namespace reqc {

struct AnnotateOptions {
  /// Adds an all-combinations objective to And/Or/Implies blocks. This only
  /// approximates MC/DC: the combinations are demanded, independence is not.
  bool combinations = false;
};

/// Appends TestObjective blocks:
///   decision    {T,F} on the output of every logical and relational block
///   condition   {T,F} on each Boolean input of And, Or and Implies
///   timing      {T}   on DurationCheck, DelayLine and Detector outputs
///   combination all four input pairs of And, Or, Implies (opt-in)
BlockGraph annotate(BlockGraph g, const AnnotateOptions& opts = {});

struct TestVector {
  std::string id;
  Trace trace;  // one column per signal
  std::vector<std::pair<std::string, Value>> calibration;
};

/// Trace to simulate: the vector's columns plus constant calibration columns.
Trace simulation_trace(const TestVector& v);

struct Witness {
  std::size_t vector = 0;  // index into the vector list
  std::int64_t step = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class UnsatisfiedReason { SearchExhausted, StaticallyUnreachable };

std::string_view to_string(UnsatisfiedReason r);

struct TargetStatus {
  unsigned bit = 0;  // bit index within the objective's target set
  std::optional<Witness> witness;
  UnsatisfiedReason reason = UnsatisfiedReason::SearchExhausted;

  friend bool operator==(const TargetStatus&, const TargetStatus&) = default;
};

struct ObjectiveStatus {
  int block = -1;  // TestObjective block index
  ObjectiveKind kind = ObjectiveKind::Decision;
  int observed_block = -1;
  int observed_port = -1;
  std::vector<TargetStatus> targets;

  friend bool operator==(const ObjectiveStatus&, const ObjectiveStatus&) = default;
};

struct KindTotals {
  std::size_t targets = 0;
  std::size_t satisfied = 0;

  friend bool operator==(const KindTotals&, const KindTotals&) = default;
};

struct CoverageReport {
  std::string requirement_id;
  std::vector<ObjectiveStatus> objectives;
  KindTotals decision, condition, timing, combination;
  bool include_timing = false;
  /// satisfied / total targets over the counted kinds, 100 when there are none.
  double percentage = 100.0;

  /// Every target of the counted kinds is satisfied.
  bool complete() const;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

struct GenerateOptions {
  std::int64_t horizon = 20;
  std::int64_t budget = 5000;  // candidate traces tried by the random search
  std::uint64_t seed = 1;
  /// Exhaustive enumeration runs when (per-step input space)^horizon is at most this.
  std::uint64_t exhaustive_limit = 1u << 16;
  bool search_calibrations = false;
  bool include_timing = false;
  std::int64_t step_ms = 0;  // stamped on the emitted traces
};

struct GenerateResult {
  std::vector<TestVector> vectors;
  CoverageReport report;
};

/// Throws Error when the horizon cannot reach a response instance.
GenerateResult generate(const BlockGraph& annotated, const VariableDictionary& dict, const GenerateOptions& opts = {});

CoverageReport measure(const BlockGraph& annotated, const VariableDictionary& dict,
                       const std::vector<TestVector>& vectors, bool include_timing = false);

std::string coverage_report_json(const CoverageReport& report, const std::vector<TestVector>& vectors);

}  // namespace reqc
