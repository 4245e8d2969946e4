#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reqc/diagnostic.hpp"
#include "reqc/value.hpp"

namespace reqc {

enum class VariableKind { Signal, Calibratable, Constant };

std::string_view to_string(VariableKind k);
std::optional<VariableKind> variable_kind_from_string(std::string_view s);

struct VariableDecl {
  std::string name;
  VariableKind kind = VariableKind::Signal;
  ScalarType data_type = ScalarType::Bool;
  int rows = 1;
  int cols = 1;
  std::optional<Value> min;
  std::optional<Value> max;
  std::optional<Value> value;
  std::optional<Value> initial;
  std::string description;
  SourceLoc loc;  // where the declaration was read from; not compared

  bool is_scalar() const { return rows == 1 && cols == 1; }

  /// `initial` if given, otherwise false / 0 / 0.0.
  Value initial_value() const;

  /// Value used for a constant or calibratable when nothing overrides it:
  /// `value` if given, otherwise the type's zero clamped into [min, max].
  Value default_value() const;

  friend bool operator==(const VariableDecl& a, const VariableDecl& b);
};

/// Checks one declaration in isolation (name rule, bounds, value ranges).
std::vector<Diagnostic> validate(const VariableDecl& d);

/// Ordered, name-indexed symbol table. Iteration follows insertion order.
class VariableDictionary {
 public:
  /// Adds `d`; returns false (and leaves the dictionary unchanged) when the
  /// name is already taken.
  bool add(VariableDecl d);

  /// Exact, case-sensitive lookup.
  const VariableDecl* find(std::string_view name) const;

  const std::vector<VariableDecl>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const VariableDictionary& a, const VariableDictionary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<VariableDecl> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class DictFormat { Json, Csv };

/// Loads and validates a dictionary. Every problem is reported with the line
/// of the offending row (CSV) or array element (JSON).
Parsed<VariableDictionary> load_dictionary(std::string_view text, DictFormat format);

/// Canonical serialization; load_dictionary reads it back to an equal value.
std::string serialize_dictionary(const VariableDictionary& dict, DictFormat format);

}  // namespace reqc
