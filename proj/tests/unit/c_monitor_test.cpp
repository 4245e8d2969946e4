#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmon_interp.hpp"
#include "differential.hpp"
#include "example1.hpp"
#include "fuzz.hpp"
#include "oracle.hpp"
#include "reqc/c_monitor.hpp"
#include "reqc/parser.hpp"
#include "reqc/semantics.hpp"

namespace reqc {
namespace {

VariableDictionary b_dict() {
  return *load_dictionary(R"([
    {"name": "b", "kind": "signal", "data_type": "bool"},
    {"name": "n", "kind": "signal", "data_type": "int", "min": -200, "max": 200},
    {"name": "lim", "kind": "calibratable", "data_type": "int", "min": 0, "max": 1000, "value": 10}
  ])", DictFormat::Json).value;
}

Requirement req(const char* text) { return *parse_requirement(text).value; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

TEST(CMonitor, InvariantBodyIsGuardedByStepZeroSkip) {
  std::string c = print_c_harness(build_c_monitor(req("At each time step, [b] holds."), b_dict(), StepConfig{10}));
  EXPECT_TRUE(contains(c, "    if (step >= 1) {\n      if (!(in_b)) __VERIFIER_error();\n    }\n")) << c;
  EXPECT_TRUE(contains(c, "step = (step < 1) ? (step + 1) : 1;"));
  EXPECT_FALSE(contains(c, "reqc_abs"));
  EXPECT_FALSE(contains(c, "__VERIFIER_nondet_int"));
}

TEST(CMonitor, InitiallyChecksOneStep) {
  std::string c = print_c_harness(build_c_monitor(req("At system start, [b] holds."), b_dict(), StepConfig{10}));
  EXPECT_TRUE(contains(c, "if (step == 0) {")) << c;
}

TEST(CMonitor, Example1RunLengthAgainstFive) {
  Requirement r = req(testing::kExample1.c_str());
  cmon::Monitor m = build_c_monitor(r, testing::example1_dictionary(), StepConfig{10});
  std::string c = print_c_harness(m);
  EXPECT_TRUE(contains(c, "trigger_run = t8 ? ((trigger_run < 5) ? (trigger_run + 1) : 5) : 0;")) << c;
  EXPECT_TRUE(contains(c, "if (step >= 6) {"));
  EXPECT_TRUE(contains(c, "__VERIFIER_assume(in_signal_C >= (-100) && in_signal_C <= 100);"));
  EXPECT_EQ(c, print_c_harness(build_c_monitor(r, testing::example1_dictionary(), StepConfig{10})));
}

TEST(CMonitor, CalibrationsAreChosenOnce) {
  std::string c = print_c_harness(build_c_monitor(req("At each time step, [n < lim] holds."), b_dict(),
                                                  StepConfig{10}));
  auto cal = c.find("cal_lim = __VERIFIER_nondet_int();");
  auto loop = c.find("for (;;)");
  ASSERT_NE(cal, std::string::npos) << c;
  EXPECT_LT(cal, loop);
  EXPECT_TRUE(contains(c, "__VERIFIER_assume(cal_lim >= 0 && cal_lim <= 1000);"));
}

TEST(CMonitor, Widths) {
  cmon::Monitor m = build_c_monitor(req("At each time step, [n < lim] holds."), b_dict(), StepConfig{10});
  EXPECT_THROW(print_c_harness(m, CWidths{"unsigned char", 8, "double"}), ExportError);
  std::string c16 = print_c_harness(m, CWidths{"_Bool", 16, "float"});
  EXPECT_TRUE(contains(c16, "static short in_n;"));
  EXPECT_TRUE(contains(c16, "__VERIFIER_nondet_short"));
  EXPECT_THROW(print_c_harness(m, CWidths{"unsigned char", 12, "double"}), ExportError);
  EXPECT_THROW(print_c_harness(m, CWidths{"bool", 32, "double"}), ExportError);
  cmon::Monitor mb = build_c_monitor(req("At each time step, [b] holds."), b_dict(), StepConfig{10});
  std::string cb = print_c_harness(mb, CWidths{"_Bool", 32, "double"});
  EXPECT_TRUE(contains(cb, "static _Bool in_b;"));
  EXPECT_FALSE(contains(cb, "__VERIFIER_assume(in_b"));
}

TEST(CMonitor, LastUsesRingBufferSeededFromPrehistory) {
  VariableDictionary d = *load_dictionary(R"([
    {"name": "x", "kind": "signal", "data_type": "int", "initial": 3}
  ])", DictFormat::Json).value;
  cmon::Monitor m = build_c_monitor(req("At each time step, [the value of x 2 steps ago < 5] holds."), d,
                                    StepConfig{10});
  std::string c = print_c_harness(m);
  EXPECT_TRUE(contains(c, "for (long long i = 0; i < 2; ++i) hist0[i] = 3;")) << c;
  Trace t;
  t.length = 5;
  t.set("x", {Value::integer(9), Value::integer(9), Value::integer(1), Value::integer(1), Value::integer(1)});
  EXPECT_EQ(testing::run_monitor(m, t, d), (std::vector<std::int64_t>{2, 3}));
}

TEST(CMonitor, InterpreterAgreesWithVerdicts) {
  testing::Gen g(81);
  for (int i = 0; i < 2000; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    Requirement r = testing::fuzz_requirement(g, d);
    Trace t = testing::fuzz_trace(g, d);
    std::string diff = testing::compare(testing::Comparison::MonitorVsVerdict, r, d, t, StepConfig{10});
    ASSERT_TRUE(diff.empty()) << diff;
  }
}

#ifdef REQC_TEST_CC

const char* kStub = R"(#include <stdio.h>
#include <stdlib.h>
static long reads = 0;
static void token(const char* fmt, void* out) {
  if (scanf(fmt, out) != 1) { printf("end %ld\n", reads); exit(0); }
  ++reads;
}
void __VERIFIER_error(void) { printf("error %ld\n", reads); }
void __VERIFIER_assume(int cond) { if (!cond) { printf("assume %ld\n", reads); exit(0); } }
unsigned char __VERIFIER_nondet_uchar(void) { int v; token("%d", &v); return (unsigned char)v; }
_Bool __VERIFIER_nondet_bool(void) { int v; token("%d", &v); return (_Bool)v; }
char __VERIFIER_nondet_char(void) { int v; token("%d", &v); return (char)v; }
short __VERIFIER_nondet_short(void) { int v; token("%d", &v); return (short)v; }
int __VERIFIER_nondet_int(void) { int v; token("%d", &v); return v; }
long long __VERIFIER_nondet_longlong(void) { long long v; token("%lld", &v); return v; }
double __VERIFIER_nondet_double(void) { double v; token("%lf", &v); return v; }
float __VERIFIER_nondet_float(void) { float v; token("%f", &v); return v; }
)";

std::string run(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) out += buf;
  pclose(p);
  return out;
}

std::string token(const Value& v) {
  if (v.is_bool()) return v.as_bool() ? "1" : "0";
  return to_string(v);
}

TEST(CMonitor, CompiledHarnessMatchesInterpreter) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "reqc_cmon_test";
  fs::create_directories(dir);
  std::ofstream(dir / "stub.c") << kStub;
  ASSERT_EQ(std::system((std::string(REQC_TEST_CC) + " -std=c99 -O0 -c " + (dir / "stub.c").string() + " -o " +
                         (dir / "stub.o").string())
                            .c_str()),
            0);
  testing::Gen g(91);
  int compiled = 0;
  for (int i = 0; i < 400 && compiled < 40; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    Requirement r = testing::fuzz_requirement(g, d);
    Trace t = testing::fuzz_trace(g, d);
    cmon::Monitor m = build_c_monitor(r, d, StepConfig{10});
    std::vector<const cmon::Var*> cals, ins;
    for (const cmon::Var& v : m.vars) {
      if (v.role == cmon::Role::Calibration) cals.push_back(&v);
      if (v.role == cmon::Role::Input) ins.push_back(&v);
    }
    if (ins.empty()) continue;
    std::vector<std::int64_t> expected;
    try {
      expected = testing::run_monitor(m, t, d);
    } catch (const testing::OracleFault&) {
      continue;
    }
    ++compiled;
    std::ofstream(dir / "h.c") << print_c_harness(m);
    std::string cc = std::string(REQC_TEST_CC) + " -std=c99 -Wall -Wextra -Wno-tautological-compare -Werror -O0 " + (dir / "h.c").string() +
                     " " + (dir / "stub.o").string() + " -o " + (dir / "h").string() + " 2>&1";
    std::string diag = run(cc);
    ASSERT_TRUE(diag.empty()) << diag << "\n" << print_c_harness(m);
    std::ostringstream input;
    for (const cmon::Var* v : cals) {
      const auto* col = t.find(v->source);
      input << token(col ? (*col)[0] : d.find(v->source)->default_value()) << "\n";
    }
    for (std::size_t k = 0; k < t.length; ++k) {
      for (const cmon::Var* v : ins) input << token((*t.find(v->source))[k]) << " ";
      input << "\n";
    }
    std::ofstream(dir / "in.txt") << input.str();
    std::istringstream lines(run((dir / "h").string() + " < " + (dir / "in.txt").string()));
    std::vector<std::int64_t> got;
    std::string word;
    long reads = 0;
    while (lines >> word >> reads) {
      ASSERT_NE(word, "assume") << testing::describe_case(r, t);
      if (word == "error") {
        got.push_back((reads - static_cast<long>(cals.size())) / static_cast<long>(ins.size()) - 1);
      }
    }
    EXPECT_EQ(got, expected) << testing::describe_case(r, t);
  }
  EXPECT_GE(compiled, 20);
}

#endif

}  // namespace
}  // namespace reqc
