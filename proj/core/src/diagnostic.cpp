#include "reqc/diagnostic.hpp"

#include <algorithm>

namespace reqc {

std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

Diagnostic make_error(std::string message, SourceLoc loc) {
  return Diagnostic{Severity::Error, std::move(message), loc, {}};
}

Diagnostic make_warning(std::string message, SourceLoc loc) {
  return Diagnostic{Severity::Warning, std::move(message), loc, {}};
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(std::string_view file, const Diagnostic& d) {
  std::string out;
  out += file;
  out += ':';
  out += std::to_string(d.loc.line);
  out += ':';
  out += std::to_string(d.loc.column);
  out += ": ";
  out += to_string(d.severity);
  out += ": ";
  out += d.message;
  if (!d.expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < d.expected.size(); ++i) {
      if (i > 0) out += i + 1 == d.expected.size() ? " or " : ", ";
      out += d.expected[i];
    }
    out += ')';
  }
  return out;
}

}  // namespace reqc
