#include "csv.hpp"

namespace reqc::csv {

Table parse(std::string_view text, std::vector<Record>* comments) {
  Table out;
  std::size_t i = 0;
  int line = 1;
  while (i < text.size()) {
    if (text[i] == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      i += 2;
      ++line;
      continue;
    }
    Record rec;
    rec.line = line;
    if (text[i] == '#') {
      std::size_t end = text.find('\n', i);
      if (end == std::string_view::npos) end = text.size();
      std::string_view body = text.substr(i, end - i);
      if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
      rec.fields.emplace_back(body);
      if (comments) comments->push_back(std::move(rec));
      i = end;
      continue;
    }
    std::string field;
    bool done = false;
    while (!done) {
      field.clear();
      if (i < text.size() && text[i] == '"') {
        int quote_line = line;
        ++i;
        bool closed = false;
        while (i < text.size()) {
          char c = text[i];
          if (c == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        if (!closed) {
          out.error = make_error("unterminated quoted field", SourceLoc{quote_line, 1});
          return out;
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          out.error = make_error("unexpected character after quoted field", SourceLoc{line, 1});
          return out;
        }
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' &&
               !(text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
          if (text[i] == '"') {
            out.error = make_error("stray quote in unquoted field", SourceLoc{line, 1});
            return out;
          }
          field += text[i];
          ++i;
        }
        if (!field.empty() && field.back() == '\r' && i >= text.size()) field.pop_back();
      }
      rec.fields.push_back(field);
      if (i < text.size() && text[i] == ',') {
        ++i;
      } else {
        done = true;
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::string quote(std::string_view field) {
  bool needs = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') needs = true;
  }
  if (!field.empty() && (field.front() == ' ' || field.back() == ' ' || field.front() == '#')) needs = true;
  if (!needs) return std::string(field);
  std::string s = "\"";
  for (char c : field) {
    if (c == '"') s += '"';
    s += c;
  }
  s += '"';
  return s;
}

}  // namespace reqc::csv
