#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reqc {

enum class Severity { Error, Warning };

std::string_view to_string(Severity s);

/// 1-based line and column. A zero line means "no position available".
struct SourceLoc {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourceLoc loc;
  /// Tokens the parser would have accepted at `loc` (syntax errors only).
  std::vector<std::string> expected;
};

Diagnostic make_error(std::string message, SourceLoc loc = {});
Diagnostic make_warning(std::string message, SourceLoc loc = {});

bool has_errors(const std::vector<Diagnostic>& diags);

/// `<file>:<line>:<col>: <severity>: <message>`
std::string format_diagnostic(std::string_view file, const Diagnostic& d);

/// Outcome of a front-end operation that reports problems instead of throwing.
/// Either `value` is set and `diagnostics` holds no errors, or `value` is empty
/// and at least one error is present. Warnings may accompany a value.
template <typename T>
struct Parsed {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
  explicit operator bool() const { return ok(); }
};

/// Base for recoverable failures raised by evaluation, normalization and export.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reqc
