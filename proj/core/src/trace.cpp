#include "reqc/trace.hpp"

#include <charconv>

#include "csv.hpp"
#include "json.hpp"

namespace reqc {

const std::vector<Value>* Trace::find(std::string_view name) const {
  for (const TraceColumn& c : columns) {
    if (c.name == name) return &c.values;
  }
  return nullptr;
}

void Trace::set(std::string name, std::vector<Value> values) {
  for (TraceColumn& c : columns) {
    if (c.name == name) {
      c.values = std::move(values);
      return;
    }
  }
  columns.push_back({std::move(name), std::move(values)});
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const VariableDecl* column_decl(const std::string& name, const VariableDictionary& dict, SourceLoc loc,
                                std::vector<Diagnostic>& diags) {
  const VariableDecl* d = dict.find(name);
  if (!d) {
    diags.push_back(make_error("trace column '" + name + "' is not declared in the dictionary", loc));
    return nullptr;
  }
  if (d->kind == VariableKind::Constant) {
    diags.push_back(make_error("trace column '" + name + "' names a constant", loc));
    return nullptr;
  }
  if (!d->is_scalar()) {
    diags.push_back(make_error("trace column '" + name + "' names an array variable", loc));
    return nullptr;
  }
  return d;
}

void range_warning(const VariableDecl& d, const Value& v, SourceLoc loc, std::vector<Diagnostic>& diags) {
  double x = v.to_double();
  if ((d.min && x < d.min->to_double()) || (d.max && x > d.max->to_double())) {
    diags.push_back(make_warning("value " + to_string(v) + " of '" + d.name + "' is outside its declared range", loc));
  }
}

bool parse_step_ms(std::string_view s, std::int64_t& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size() && out >= 1;
}

Parsed<Trace> load_csv(std::string_view text, const VariableDictionary& dict) {
  Parsed<Trace> out;
  std::vector<csv::Record> comments;
  csv::Table table = csv::parse(text, &comments);
  if (table.error) {
    out.diagnostics.push_back(*table.error);
    return out;
  }
  Trace trace;
  for (const csv::Record& c : comments) {
    std::string_view body = c.fields.front();
    body.remove_prefix(1);
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    if (body.substr(0, 8) == "step_ms=") {
      std::string_view v = body.substr(8);
      while (!v.empty() && (v.back() == ' ' || v.back() == '\r')) v.remove_suffix(1);
      if (!parse_step_ms(v, trace.step_ms)) {
        out.diagnostics.push_back(make_error("invalid step_ms '" + std::string(v) + "'", SourceLoc{c.line, 1}));
      }
    }
  }
  if (table.records.empty()) {
    out.diagnostics.push_back(make_error("missing trace header", SourceLoc{1, 1}));
    return out;
  }
  const csv::Record& header = table.records.front();
  SourceLoc hloc{header.line, 1};
  if (header.fields.empty() || header.fields.front() != "step") {
    out.diagnostics.push_back(make_error("trace header must start with 'step'", hloc));
    return out;
  }
  std::vector<const VariableDecl*> decls;
  for (std::size_t i = 1; i < header.fields.size(); ++i) {
    const std::string& name = header.fields[i];
    for (std::size_t j = 1; j < i; ++j) {
      if (header.fields[j] == name) out.diagnostics.push_back(make_error("duplicate trace column '" + name + "'", hloc));
    }
    decls.push_back(column_decl(name, dict, hloc, out.diagnostics));
  }
  if (has_errors(out.diagnostics)) return out;
  std::vector<std::vector<Value>> values(decls.size());
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    const csv::Record& rec = table.records[r];
    SourceLoc loc{rec.line, 1};
    if (rec.fields.size() != header.fields.size()) {
      out.diagnostics.push_back(make_error("expected " + std::to_string(header.fields.size()) + " fields, found " +
                                               std::to_string(rec.fields.size()),
                                           loc));
      return out;
    }
    auto step = parse_value(rec.fields[0], ScalarType::Int);
    if (!step || step->as_int() != static_cast<std::int64_t>(r - 1)) {
      out.diagnostics.push_back(make_error("step column must count 0, 1, 2, ...", loc));
      return out;
    }
    for (std::size_t i = 0; i < decls.size(); ++i) {
      auto v = parse_value(rec.fields[i + 1], decls[i]->data_type);
      if (!v) {
        out.diagnostics.push_back(make_error("'" + rec.fields[i + 1] + "' is not a valid " +
                                                 std::string(to_string(decls[i]->data_type)) + " for '" +
                                                 decls[i]->name + "'",
                                             loc));
        return out;
      }
      range_warning(*decls[i], *v, loc, out.diagnostics);
      values[i].push_back(*v);
    }
  }
  trace.length = table.records.size() - 1;
  if (trace.length == 0) {
    out.diagnostics.push_back(make_error("trace has no steps", hloc));
    return out;
  }
  for (std::size_t i = 0; i < decls.size(); ++i) trace.columns.push_back({decls[i]->name, std::move(values[i])});
  out.value = std::move(trace);
  return out;
}

Parsed<Trace> load_json(std::string_view text, const VariableDictionary& dict) {
  Parsed<Trace> out;
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    out.diagnostics.push_back(make_error(std::string("malformed JSON trace: ") + e.what(), SourceLoc{1, 1}));
    return out;
  }
  SourceLoc loc{1, 1};
  auto fail = [&](std::string msg) {
    out.diagnostics.push_back(make_error(std::move(msg), loc));
    return out;
  };
  if (!doc.is_object()) return fail("trace must be a JSON object");
  Trace trace;
  if (auto it = doc.find("step_ms"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) return fail("step_ms must be a positive integer");
    trace.step_ms = it->get<std::int64_t>();
  }
  auto cols = doc.find("columns");
  if (cols == doc.end() || !cols->is_object()) return fail("trace needs a 'columns' object");
  std::optional<std::size_t> length;
  if (auto it = doc.find("length"); it != doc.end()) {
    if (!it->is_number_unsigned()) return fail("length must be a non-negative integer");
    length = it->get<std::size_t>();
  }
  for (const auto& item : cols->items()) {
    const VariableDecl* d = column_decl(item.key(), dict, loc, out.diagnostics);
    if (!d) continue;
    if (!item.value().is_array()) return fail("column '" + item.key() + "' must be an array");
    std::vector<Value> vals;
    for (const auto& cell : item.value()) {
      std::optional<Value> v;
      if (cell.is_boolean()) {
        v = Value::boolean(cell.get<bool>()).convert_to(d->data_type);
        if (d->data_type != ScalarType::Bool) v.reset();
      } else if (cell.is_number_integer()) {
        v = Value::integer(cell.get<std::int64_t>()).convert_to(d->data_type);
      } else if (cell.is_number_float()) {
        v = Value::real(cell.get<double>()).convert_to(d->data_type);
        if (d->data_type == ScalarType::Bool) v.reset();
      }
      if (!v) return fail("column '" + item.key() + "' holds a value that is not a valid " +
                          std::string(to_string(d->data_type)));
      range_warning(*d, *v, loc, out.diagnostics);
      vals.push_back(*v);
    }
    if (!length) length = vals.size();
    if (vals.size() != *length) return fail("column '" + item.key() + "' does not have " + std::to_string(*length) + " values");
    trace.columns.push_back({item.key(), std::move(vals)});
  }
  if (has_errors(out.diagnostics)) return out;
  if (!length || *length == 0) return fail("trace has no steps");
  trace.length = *length;
  out.value = std::move(trace);
  return out;
}

}  // namespace

Parsed<Trace> load_trace(std::string_view text, TraceFormat format, const VariableDictionary& dict) {
  return format == TraceFormat::Csv ? load_csv(text, dict) : load_json(text, dict);
}

std::string serialize_trace(const Trace& trace, TraceFormat format) {
  if (format == TraceFormat::Json) {
    ordered_json doc;
    if (trace.step_ms > 0) doc["step_ms"] = trace.step_ms;
    doc["length"] = trace.length;
    ordered_json cols = ordered_json::object();
    for (const TraceColumn& c : trace.columns) {
      ordered_json arr = ordered_json::array();
      for (const Value& v : c.values) {
        switch (v.type()) {
          case ScalarType::Bool: arr.push_back(v.as_bool() ? 1 : 0); break;
          case ScalarType::Int: arr.push_back(v.as_int()); break;
          case ScalarType::Float: arr.push_back(v.as_float()); break;
        }
      }
      cols[c.name] = std::move(arr);
    }
    doc["columns"] = std::move(cols);
    return doc.dump(2) + "\n";
  }
  std::string s;
  if (trace.step_ms > 0) s += "# step_ms=" + std::to_string(trace.step_ms) + "\n";
  s += "step";
  for (const TraceColumn& c : trace.columns) s += "," + c.name;
  s += "\n";
  for (std::size_t t = 0; t < trace.length; ++t) {
    s += std::to_string(t);
    for (const TraceColumn& c : trace.columns) s += "," + to_trace_string(c.values[t]);
    s += "\n";
  }
  return s;
}

}  // namespace reqc
