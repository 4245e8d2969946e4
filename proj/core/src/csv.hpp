#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqc/diagnostic.hpp"

namespace reqc::csv {

struct Record {
  int line = 0;  // physical line the record starts on
  std::vector<std::string> fields;
};

struct Table {
  std::vector<Record> records;
  std::optional<Diagnostic> error;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and line
/// breaks; CRLF and LF are both accepted. Blank lines are skipped. Lines whose
/// first character is '#' are returned separately through `comments`.
Table parse(std::string_view text, std::vector<Record>* comments = nullptr);

/// Quotes a field when it contains a delimiter, quote, line break or
/// surrounding whitespace.
std::string quote(std::string_view field);

}  // namespace reqc::csv
