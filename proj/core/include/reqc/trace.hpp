#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "reqc/diagnostic.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/value.hpp"

namespace reqc {

struct TraceColumn {
  std::string name;
  std::vector<Value> values;

  friend bool operator==(const TraceColumn&, const TraceColumn&) = default;
};

/// Finite table of variable valuations, one row per simulation step.
struct Trace {
  std::int64_t step_ms = 0;  // 0 when the source did not state it
  std::size_t length = 0;
  std::vector<TraceColumn> columns;

  const std::vector<Value>* find(std::string_view name) const;
  /// Adds or replaces a column; `values` must hold `length` entries.
  void set(std::string name, std::vector<Value> values);

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class TraceFormat { Csv, Json };

/// Reads a trace, typing every column through the dictionary. Columns for
/// undeclared variables or constants are errors; values outside the declared
/// range are warnings.
Parsed<Trace> load_trace(std::string_view text, TraceFormat format, const VariableDictionary& dict);

/// CSV: a `# step_ms=<n>` line (when known), header `step,<vars>`, one row per
/// step. JSON: {"step_ms": n, "length": T, "columns": {name: [...]}}. Bools
/// are written as 0/1 in both.
std::string serialize_trace(const Trace& trace, TraceFormat format);

}  // namespace reqc
