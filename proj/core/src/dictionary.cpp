#include "reqc/dictionary.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "csv.hpp"
#include "reqc/lexer.hpp"

namespace reqc {

std::string_view to_string(VariableKind k) {
  switch (k) {
    case VariableKind::Signal: return "signal";
    case VariableKind::Calibratable: return "calibratable";
    case VariableKind::Constant: return "constant";
  }
  return "?";
}

std::optional<VariableKind> variable_kind_from_string(std::string_view s) {
  if (s == "signal") return VariableKind::Signal;
  if (s == "calibratable") return VariableKind::Calibratable;
  if (s == "constant") return VariableKind::Constant;
  return std::nullopt;
}

Value VariableDecl::initial_value() const {
  return initial ? *initial : Value::zero(data_type);
}

Value VariableDecl::default_value() const {
  if (value) return *value;
  Value v = Value::zero(data_type);
  if (min && v.to_double() < min->to_double()) return *min;
  if (max && v.to_double() > max->to_double()) return *max;
  return v;
}

bool operator==(const VariableDecl& a, const VariableDecl& b) {
  return a.name == b.name && a.kind == b.kind && a.data_type == b.data_type && a.rows == b.rows &&
         a.cols == b.cols && a.min == b.min && a.max == b.max && a.value == b.value &&
         a.initial == b.initial && a.description == b.description;
}

namespace {

bool in_range(const VariableDecl& d, const Value& v) {
  double x = v.to_double();
  if (d.min && x < d.min->to_double()) return false;
  if (d.max && x > d.max->to_double()) return false;
  return true;
}

}  // namespace

std::vector<Diagnostic> validate(const VariableDecl& d) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string msg) { out.push_back(make_error(std::move(msg), d.loc)); };
  if (!matches_identifier_rule(d.name)) {
    err("invalid variable name '" + d.name + "'");
  } else if (is_reserved_word(d.name)) {
    err("variable name '" + d.name + "' is a reserved word");
  }
  if (d.rows < 1 || d.cols < 1) err("dimensions of '" + d.name + "' must be positive");
  if (d.data_type == ScalarType::Bool && (d.min || d.max)) {
    err("bool variable '" + d.name + "' cannot have min/max");
  }
  for (const auto* v : {&d.min, &d.max, &d.value, &d.initial}) {
    if (*v && v->value().type() != d.data_type) {
      err("value of type " + std::string(to_string(v->value().type())) + " given for " +
          std::string(to_string(d.data_type)) + " variable '" + d.name + "'");
      return out;
    }
    if (*v && v->value().is_float() && !std::isfinite(v->value().as_float())) {
      err("non-finite value for '" + d.name + "'");
      return out;
    }
  }
  if (d.min && d.max && d.min->to_double() > d.max->to_double()) {
    err("min > max for '" + d.name + "'");
  }
  if (d.kind == VariableKind::Constant && !d.value) err("constant '" + d.name + "' has no value");
  if (d.value && !in_range(d, *d.value)) err("value of '" + d.name + "' lies outside [min, max]");
  if (d.initial && !in_range(d, *d.initial)) err("initial value of '" + d.name + "' lies outside [min, max]");
  return out;
}

bool VariableDictionary::add(VariableDecl d) {
  if (index_.count(d.name)) return false;
  index_.emplace(d.name, entries_.size());
  entries_.push_back(std::move(d));
  return true;
}

const VariableDecl* VariableDictionary::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

SourceLoc offset_to_loc(std::string_view text, std::size_t offset) {
  SourceLoc loc{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

// Start positions of the elements of a top-level JSON array, in order.
std::vector<SourceLoc> array_element_locs(std::string_view text) {
  std::vector<SourceLoc> out;
  int depth = 0;
  bool in_string = false;
  bool expect_element = false;
  SourceLoc loc{1, 1};
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
        ++loc.column;
      } else if (c == '"') {
        in_string = false;
      }
    } else {
      bool blank = c == ' ' || c == '\t' || c == '\r' || c == '\n';
      if (depth == 1 && expect_element && !blank && c != ']') {
        out.push_back(loc);
        expect_element = false;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{' || c == '[') {
        ++depth;
        if (depth == 1) expect_element = true;
      } else if (c == '}' || c == ']') {
        --depth;
      } else if (c == ',' && depth == 1) {
        expect_element = true;
      }
    }
    if (c == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return out;
}

std::optional<Value> json_value(const json& j, ScalarType t) {
  switch (t) {
    case ScalarType::Bool:
      if (j.is_boolean()) return Value::boolean(j.get<bool>());
      if (j.is_number_integer() && (j.get<std::int64_t>() == 0 || j.get<std::int64_t>() == 1)) {
        return Value::boolean(j.get<std::int64_t>() == 1);
      }
      return std::nullopt;
    case ScalarType::Int:
      if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        return std::nullopt;
      }
      if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
      if (j.is_number_float()) return Value::real(j.get<double>()).convert_to(ScalarType::Int);
      return std::nullopt;
    case ScalarType::Float:
      if (j.is_number()) return Value::real(j.get<double>());
      return std::nullopt;
  }
  return std::nullopt;
}

ordered_json value_json(const Value& v) {
  switch (v.type()) {
    case ScalarType::Bool: return v.as_bool();
    case ScalarType::Int: return v.as_int();
    case ScalarType::Float: return v.as_float();
  }
  return nullptr;
}

void finish(Parsed<VariableDictionary>& out, VariableDictionary& dict, VariableDecl decl) {
  auto diags = validate(decl);
  bool bad = has_errors(diags);
  out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
  if (bad) return;
  SourceLoc loc = decl.loc;
  std::string name = decl.name;
  if (!dict.add(std::move(decl))) {
    out.diagnostics.push_back(make_error("duplicate variable name '" + name + "'", loc));
  }
}

constexpr std::string_view kFields[] = {"name", "kind", "data_type", "dims", "min", "max",
                                        "value", "initial", "description"};

Parsed<VariableDictionary> load_json(std::string_view text) {
  Parsed<VariableDictionary> out;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    auto pos = what.find("syntax error");
    out.diagnostics.push_back(
        make_error("malformed JSON: " + (pos == std::string::npos ? what : what.substr(pos)),
                   offset_to_loc(text, at)));
    return out;
  }
  if (!doc.is_array()) {
    out.diagnostics.push_back(make_error("dictionary must be a JSON array of objects", SourceLoc{1, 1}));
    return out;
  }
  std::vector<SourceLoc> locs = array_element_locs(text);
  VariableDictionary dict;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& row = doc[i];
    SourceLoc loc = i < locs.size() ? locs[i] : SourceLoc{1, 1};
    auto err = [&](std::string msg) { out.diagnostics.push_back(make_error(std::move(msg), loc)); };
    if (!row.is_object()) {
      err("dictionary entry must be an object");
      continue;
    }
    for (const auto& item : row.items()) {
      if (std::find(std::begin(kFields), std::end(kFields), item.key()) == std::end(kFields)) {
        out.diagnostics.push_back(make_warning("unknown field '" + item.key() + "' ignored", loc));
      }
    }
    VariableDecl d;
    d.loc = loc;
    auto str = [&](const char* key, bool required) -> std::optional<std::string> {
      auto it = row.find(key);
      if (it == row.end() || it->is_null()) {
        if (required) err(std::string("missing field '") + key + "'");
        return std::nullopt;
      }
      if (!it->is_string()) {
        err(std::string("field '") + key + "' must be a string");
        return std::nullopt;
      }
      return it->get<std::string>();
    };
    auto name = str("name", true);
    auto kind = str("kind", true);
    auto type = str("data_type", true);
    auto desc = str("description", false);
    if (!name || !kind || !type) continue;
    d.name = *name;
    auto k = variable_kind_from_string(*kind);
    if (!k) {
      err("unknown kind '" + *kind + "'");
      continue;
    }
    auto t = scalar_type_from_string(*type);
    if (!t) {
      err("unknown data_type '" + *type + "'");
      continue;
    }
    d.kind = *k;
    d.data_type = *t;
    if (desc) d.description = *desc;
    if (auto it = row.find("dims"); it != row.end() && !it->is_null()) {
      if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() || !(*it)[1].is_number_integer()) {
        err("field 'dims' must be a pair of integers");
        continue;
      }
      auto r = (*it)[0].get<std::int64_t>();
      auto c = (*it)[1].get<std::int64_t>();
      if (r < 1 || c < 1 || r > INT32_MAX || c > INT32_MAX) {
        err("dimensions of '" + d.name + "' must be positive");
        continue;
      }
      d.rows = static_cast<int>(r);
      d.cols = static_cast<int>(c);
    }
    bool ok = true;
    auto num = [&](const char* key, std::optional<Value>& slot) {
      auto it = row.find(key);
      if (it == row.end() || it->is_null()) return;
      slot = json_value(*it, d.data_type);
      if (!slot) {
        err(std::string("field '") + key + "' of '" + d.name + "' is not a valid " +
            std::string(to_string(d.data_type)));
        ok = false;
      }
    };
    num("min", d.min);
    num("max", d.max);
    num("value", d.value);
    num("initial", d.initial);
    if (!ok) continue;
    finish(out, dict, std::move(d));
  }
  if (!has_errors(out.diagnostics)) out.value = std::move(dict);
  return out;
}

constexpr std::string_view kCsvHeader[] = {"name", "kind", "data_type", "rows", "cols",
                                           "min", "max", "value", "initial", "description"};

Parsed<VariableDictionary> load_csv(std::string_view text) {
  Parsed<VariableDictionary> out;
  csv::Table table = csv::parse(text);
  if (table.error) {
    out.diagnostics.push_back(*table.error);
    return out;
  }
  if (table.records.empty()) {
    out.diagnostics.push_back(make_error("missing CSV header", SourceLoc{1, 1}));
    return out;
  }
  const csv::Record& header = table.records.front();
  std::vector<int> column(std::size(kCsvHeader), -1);
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    auto it = std::find(std::begin(kCsvHeader), std::end(kCsvHeader), header.fields[i]);
    if (it == std::end(kCsvHeader)) {
      out.diagnostics.push_back(
          make_warning("unknown column '" + header.fields[i] + "' ignored", SourceLoc{header.line, 1}));
      continue;
    }
    auto idx = static_cast<std::size_t>(it - std::begin(kCsvHeader));
    if (column[idx] >= 0) {
      out.diagnostics.push_back(make_error("duplicate column '" + header.fields[i] + "'", SourceLoc{header.line, 1}));
      return out;
    }
    column[idx] = static_cast<int>(i);
  }
  for (int i = 0; i < 3; ++i) {
    if (column[static_cast<std::size_t>(i)] < 0) {
      out.diagnostics.push_back(
          make_error("missing column '" + std::string(kCsvHeader[i]) + "'", SourceLoc{header.line, 1}));
    }
  }
  if (has_errors(out.diagnostics)) return out;

  VariableDictionary dict;
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    const csv::Record& rec = table.records[r];
    SourceLoc loc{rec.line, 1};
    auto err = [&](std::string msg) { out.diagnostics.push_back(make_error(std::move(msg), loc)); };
    if (rec.fields.size() != header.fields.size()) {
      err("expected " + std::to_string(header.fields.size()) + " fields, found " +
          std::to_string(rec.fields.size()));
      continue;
    }
    auto cell = [&](std::size_t idx) -> std::string_view {
      int c = column[idx];
      return c < 0 ? std::string_view{} : std::string_view(rec.fields[static_cast<std::size_t>(c)]);
    };
    VariableDecl d;
    d.loc = loc;
    d.name = std::string(cell(0));
    auto k = variable_kind_from_string(cell(1));
    if (!k) {
      err("unknown kind '" + std::string(cell(1)) + "'");
      continue;
    }
    auto t = scalar_type_from_string(cell(2));
    if (!t) {
      err("unknown data_type '" + std::string(cell(2)) + "'");
      continue;
    }
    d.kind = *k;
    d.data_type = *t;
    bool ok = true;
    for (std::size_t idx : {std::size_t{3}, std::size_t{4}}) {
      std::string_view s = cell(idx);
      if (s.empty()) continue;
      auto v = parse_value(s, ScalarType::Int);
      if (!v || v->as_int() < 1 || v->as_int() > INT32_MAX) {
        err("dimensions of '" + d.name + "' must be positive integers");
        ok = false;
        break;
      }
      (idx == 3 ? d.rows : d.cols) = static_cast<int>(v->as_int());
    }
    if (!ok) continue;
    std::optional<Value>* slots[] = {&d.min, &d.max, &d.value, &d.initial};
    for (std::size_t s = 0; s < 4; ++s) {
      std::string_view text_value = cell(5 + s);
      if (text_value.empty()) continue;
      *slots[s] = parse_value(text_value, d.data_type);
      if (!*slots[s]) {
        err("field '" + std::string(kCsvHeader[5 + s]) + "' of '" + d.name + "' is not a valid " +
            std::string(to_string(d.data_type)));
        ok = false;
      }
    }
    if (!ok) continue;
    d.description = std::string(cell(9));
    finish(out, dict, std::move(d));
  }
  if (!has_errors(out.diagnostics)) out.value = std::move(dict);
  return out;
}

std::string csv_value(const std::optional<Value>& v) {
  return v ? to_string(*v) : std::string{};
}

}  // namespace

Parsed<VariableDictionary> load_dictionary(std::string_view text, DictFormat format) {
  return format == DictFormat::Json ? load_json(text) : load_csv(text);
}

std::string serialize_dictionary(const VariableDictionary& dict, DictFormat format) {
  if (format == DictFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const VariableDecl& d : dict.entries()) {
      ordered_json o;
      o["name"] = d.name;
      o["kind"] = to_string(d.kind);
      o["data_type"] = to_string(d.data_type);
      o["dims"] = {d.rows, d.cols};
      if (d.min) o["min"] = value_json(*d.min);
      if (d.max) o["max"] = value_json(*d.max);
      if (d.value) o["value"] = value_json(*d.value);
      if (d.initial) o["initial"] = value_json(*d.initial);
      o["description"] = d.description;
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }
  std::string s;
  for (std::size_t i = 0; i < std::size(kCsvHeader); ++i) {
    if (i) s += ',';
    s += kCsvHeader[i];
  }
  s += '\n';
  for (const VariableDecl& d : dict.entries()) {
    s += csv::quote(d.name) + ',' + std::string(to_string(d.kind)) + ',' + std::string(to_string(d.data_type)) +
         ',' + std::to_string(d.rows) + ',' + std::to_string(d.cols) + ',' + csv_value(d.min) + ',' +
         csv_value(d.max) + ',' + csv_value(d.value) + ',' + csv_value(d.initial) + ',' +
         csv::quote(d.description) + '\n';
  }
  return s;
}

}  // namespace reqc
