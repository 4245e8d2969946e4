#include <gtest/gtest.h>

#include "example1.hpp"
#include "fuzz.hpp"
#include "reqc/dictionary.hpp"

namespace reqc {
namespace {

bool has_message(const std::vector<Diagnostic>& diags, const std::string& needle) {
  for (const Diagnostic& d : diags) {
    if (d.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(Dictionary, Example1LoadsInOrder) {
  VariableDictionary d = testing::example1_dictionary();
  ASSERT_EQ(d.size(), 8u);
  EXPECT_EQ(d.entries()[0].name, "signal_A");
  EXPECT_EQ(d.entries()[7].name, "constant_C");
  const VariableDecl* c = d.find("signal_C");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->data_type, ScalarType::Int);
  EXPECT_EQ(*c->min, Value::integer(-100));
  EXPECT_EQ(d.find("constant_B")->default_value(), Value::real(3.5));
  EXPECT_EQ(d.find("SIGNAL_A"), nullptr);
}

TEST(Dictionary, JsonAndCsvRoundTrip) {
  VariableDictionary d = testing::example1_dictionary();
  for (DictFormat f : {DictFormat::Json, DictFormat::Csv}) {
    std::string text = serialize_dictionary(d, f);
    auto back = load_dictionary(text, f);
    ASSERT_TRUE(back.ok()) << text;
    EXPECT_EQ(*back.value, d);
    EXPECT_EQ(serialize_dictionary(*back.value, f), text);
  }
}

TEST(Dictionary, GeneratedDictionariesRoundTrip) {
  testing::Gen g(5);
  for (int i = 0; i < 200; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    for (DictFormat f : {DictFormat::Json, DictFormat::Csv}) {
      auto back = load_dictionary(serialize_dictionary(d, f), f);
      ASSERT_TRUE(back.ok());
      EXPECT_EQ(*back.value, d);
    }
  }
}

TEST(Dictionary, CsvWithQuotedDescription) {
  const char* text =
      "name,kind,data_type,rows,cols,min,max,value,initial,description\n"
      "speed,signal,float,1,1,0,250,,,\"vehicle speed, km/h\"\n"
      "limit,calibratable,int,1,1,0,10,4,,\n";
  auto r = load_dictionary(text, DictFormat::Csv);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value->find("speed")->description, "vehicle speed, km/h");
  EXPECT_EQ(r.value->find("limit")->default_value(), Value::integer(4));
}

TEST(Dictionary, DuplicateNameReportsSecondRow) {
  const char* text =
      "[\n"
      "  {\"name\": \"a\", \"kind\": \"signal\", \"data_type\": \"bool\"},\n"
      "  {\"name\": \"a\", \"kind\": \"signal\", \"data_type\": \"int\"}\n"
      "]\n";
  auto r = load_dictionary(text, DictFormat::Json);
  ASSERT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_TRUE(has_message(r.diagnostics, "duplicate variable name 'a'"));
  EXPECT_EQ(r.diagnostics[0].loc.line, 3);
}

TEST(Dictionary, ValidationRules) {
  VariableDecl d;
  d.name = "and";
  EXPECT_TRUE(has_message(validate(d), "reserved word"));
  d.name = "2fast";
  EXPECT_TRUE(has_message(validate(d), "invalid variable name"));
  d.name = "flag";
  d.min = Value::boolean(false);
  EXPECT_TRUE(has_message(validate(d), "cannot have min/max"));

  VariableDecl k;
  k.name = "k";
  k.kind = VariableKind::Constant;
  k.data_type = ScalarType::Int;
  EXPECT_TRUE(has_message(validate(k), "has no value"));
  k.value = Value::integer(11);
  k.min = Value::integer(0);
  k.max = Value::integer(10);
  EXPECT_TRUE(has_message(validate(k), "outside [min, max]"));
  k.value = Value::real(1.0);
  EXPECT_TRUE(has_message(validate(k), "value of type float"));
  k.value = Value::integer(3);
  k.min = Value::integer(5);
  k.max = Value::integer(4);
  EXPECT_TRUE(has_message(validate(k), "min > max"));
}

TEST(Dictionary, DefaultValueClampsZeroIntoRange) {
  VariableDecl c;
  c.name = "c";
  c.kind = VariableKind::Calibratable;
  c.data_type = ScalarType::Int;
  c.min = Value::integer(3);
  c.max = Value::integer(9);
  EXPECT_EQ(c.default_value(), Value::integer(3));
  c.min = Value::integer(-9);
  c.max = Value::integer(-2);
  EXPECT_EQ(c.default_value(), Value::integer(-2));
}

TEST(Dictionary, MalformedJsonHasPosition) {
  auto r = load_dictionary("[\n  {\"name\": }\n]", DictFormat::Json);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_message(r.diagnostics, "malformed JSON"));
  EXPECT_EQ(r.diagnostics[0].loc.line, 2);
}

TEST(Dictionary, CsvMissingColumn) {
  auto r = load_dictionary("name,kind\nx,signal\n", DictFormat::Csv);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_message(r.diagnostics, "missing column 'data_type'"));
}

}  // namespace
}  // namespace reqc
