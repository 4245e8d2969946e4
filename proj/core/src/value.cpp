#include "reqc/value.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace reqc {

std::string_view to_string(ScalarType t) {
  switch (t) {
    case ScalarType::Bool: return "bool";
    case ScalarType::Int: return "int";
    case ScalarType::Float: return "float";
  }
  return "?";
}

std::optional<ScalarType> scalar_type_from_string(std::string_view s) {
  if (s == "bool") return ScalarType::Bool;
  if (s == "int") return ScalarType::Int;
  if (s == "float") return ScalarType::Float;
  return std::nullopt;
}

Value Value::zero(ScalarType t) {
  switch (t) {
    case ScalarType::Bool: return boolean(false);
    case ScalarType::Int: return integer(0);
    case ScalarType::Float: return real(0.0);
  }
  return {};
}

ScalarType Value::type() const {
  if (is_bool()) return ScalarType::Bool;
  if (is_int()) return ScalarType::Int;
  return ScalarType::Float;
}

double Value::to_double() const {
  if (is_bool()) return as_bool() ? 1.0 : 0.0;
  if (is_int()) return static_cast<double>(as_int());
  return as_float();
}

std::optional<Value> Value::convert_to(ScalarType t) const {
  if (type() == t) return *this;
  switch (t) {
    case ScalarType::Bool:
      if (is_int() && (as_int() == 0 || as_int() == 1)) return boolean(as_int() == 1);
      if (is_float() && (as_float() == 0.0 || as_float() == 1.0)) return boolean(as_float() == 1.0);
      return std::nullopt;
    case ScalarType::Int:
      if (is_bool()) return integer(as_bool() ? 1 : 0);
      if (is_float()) {
        double d = as_float();
        if (std::isfinite(d) && std::trunc(d) == d && std::fabs(d) < 9.0e18) {
          return integer(static_cast<std::int64_t>(d));
        }
      }
      return std::nullopt;
    case ScalarType::Float:
      return real(to_double());
  }
  return std::nullopt;
}

std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d < 0 ? "-inf" : "inf";
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), d, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string to_string(const Value& v) {
  switch (v.type()) {
    case ScalarType::Bool: return v.as_bool() ? "true" : "false";
    case ScalarType::Int: return std::to_string(v.as_int());
    case ScalarType::Float: return format_float(v.as_float());
  }
  return {};
}

std::string to_trace_string(const Value& v) {
  if (v.is_bool()) return v.as_bool() ? "1" : "0";
  return to_string(v);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

}  // namespace

std::optional<Value> parse_value(std::string_view text, ScalarType t) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  switch (t) {
    case ScalarType::Bool:
      if (text == "1" || iequals(text, "true")) return Value::boolean(true);
      if (text == "0" || iequals(text, "false")) return Value::boolean(false);
      return std::nullopt;
    case ScalarType::Int: {
      std::string_view digits = text;
      if (digits.front() == '+') digits.remove_prefix(1);
      std::int64_t i = 0;
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), i);
      if (res.ec == std::errc{} && res.ptr == digits.data() + digits.size()) return Value::integer(i);
      // Integral float spellings such as "3.0" are accepted for int columns.
      double d = 0;
      auto fres = std::from_chars(digits.data(), digits.data() + digits.size(), d);
      if (fres.ec == std::errc{} && fres.ptr == digits.data() + digits.size()) {
        return Value::real(d).convert_to(ScalarType::Int);
      }
      return std::nullopt;
    }
    case ScalarType::Float: {
      std::string_view digits = text;
      if (digits.front() == '+') digits.remove_prefix(1);
      double d = 0;
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), d);
      if (res.ec == std::errc{} && res.ptr == digits.data() + digits.size()) return Value::real(d);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace reqc
