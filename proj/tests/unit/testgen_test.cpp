#include <gtest/gtest.h>

#include <chrono>

#include "example1.hpp"
#include "fuzz.hpp"
#include "json.hpp"
#include "reqc/parser.hpp"
#include "reqc/testgen.hpp"

namespace reqc {
namespace {

VariableDictionary ab_dict() {
  return *load_dictionary(R"([
    {"name": "a", "kind": "signal", "data_type": "bool"},
    {"name": "b", "kind": "signal", "data_type": "bool"},
    {"name": "x", "kind": "signal", "data_type": "int", "min": -5, "max": 5},
    {"name": "k", "kind": "calibratable", "data_type": "int", "min": 0, "max": 3, "value": 2}
  ])", DictFormat::Json).value;
}

BlockGraph annotated(const char* text, const VariableDictionary& d, AnnotateOptions o = {}) {
  Requirement r = *parse_requirement(text).value;
  r.id = "R";
  return annotate(build_graph(r, d, StepConfig{10}), o);
}

std::size_t count_targets(const BlockGraph& g, ObjectiveKind kind) {
  std::size_t n = 0;
  for (int i : g.test_objectives) {
    const Block& b = g.blocks[static_cast<std::size_t>(i)];
    if (b.objective == kind) n += static_cast<std::size_t>(__builtin_popcount(b.targets));
  }
  return n;
}

TestVector vec(const std::string& id, std::vector<std::pair<std::string, std::vector<Value>>> cols) {
  TestVector v;
  v.id = id;
  v.trace.length = cols.front().second.size();
  for (auto& [n, c] : cols) v.trace.set(n, c);
  return v;
}

std::vector<Value> B(std::initializer_list<int> xs) {
  std::vector<Value> out;
  for (int x : xs) out.push_back(Value::boolean(x != 0));
  return out;
}

TEST(Annotate, SingleOrBlockHasSixTargets) {
  BlockGraph g = annotated("At each time step, [a or b] holds.", ab_dict());
  EXPECT_EQ(count_targets(g, ObjectiveKind::Decision), 2u);
  EXPECT_EQ(count_targets(g, ObjectiveKind::Condition), 4u);
  EXPECT_EQ(count_targets(g, ObjectiveKind::Timing), 0u);
  EXPECT_TRUE(validate(g).empty());
}

TEST(Annotate, NotBlockGetsOutputObjectivesOnly) {
  BlockGraph g = annotated("At each time step, [not a] holds.", ab_dict());
  EXPECT_EQ(count_targets(g, ObjectiveKind::Decision), 2u);
  EXPECT_EQ(count_targets(g, ObjectiveKind::Condition), 0u);
  g = annotated("At each time step, [not (x > 1)] holds.", ab_dict());
  EXPECT_EQ(count_targets(g, ObjectiveKind::Decision), 4u);
}

TEST(Annotate, Example1Counts) {
  Requirement r = *parse_requirement(testing::kExample1).value;
  BlockGraph g = annotate(build_graph(r, testing::example1_dictionary(), StepConfig{10}));
  std::size_t trigger_targets = 0;
  for (int i : g.test_objectives) {
    const Block& b = g.blocks[static_cast<std::size_t>(i)];
    if (g.blocks[static_cast<std::size_t>(b.observed_block)].role == "trigger" && b.objective != ObjectiveKind::Timing) {
      trigger_targets += static_cast<std::size_t>(__builtin_popcount(b.targets));
    }
  }
  // 8 trigger blocks with decision pairs, 3 And blocks with two condition pairs each
  EXPECT_EQ(trigger_targets, 8u * 2 + 3u * 4);
  EXPECT_EQ(count_targets(g, ObjectiveKind::Decision), 20u);
  EXPECT_EQ(count_targets(g, ObjectiveKind::Condition), 16u);
  EXPECT_EQ(count_targets(g, ObjectiveKind::Timing), 3u);
}

TEST(Annotate, Combinations) {
  BlockGraph g = annotated("At each time step, [a or b] holds.", ab_dict(), AnnotateOptions{true});
  EXPECT_EQ(count_targets(g, ObjectiveKind::Combination), 4u);
}

TEST(Generate, OrBlockHorizonOne) {
  BlockGraph g = annotated("At each time step, [a or b] holds.", ab_dict());
  GenerateOptions o;
  o.horizon = 1;
  GenerateResult res = generate(g, ab_dict(), o);
  EXPECT_TRUE(res.report.complete());
  EXPECT_DOUBLE_EQ(res.report.percentage, 100.0);
  EXPECT_LE(res.vectors.size(), 3u);
  for (const TestVector& v : res.vectors) EXPECT_EQ(v.trace.length, 1u);
}

TEST(Generate, OrBlockMinimumVectorsAtHorizonOne) {
  // Brute force over single-step vectors: no single one is enough, {FF, TT} is.
  BlockGraph g = annotated("At each time step, [a or b] holds.", ab_dict());
  std::vector<TestVector> all;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) all.push_back(vec("v", {{"a", B({a})}, {"b", B({b})}, {"x", {Value::integer(0)}}}));
  }
  for (std::size_t i = 0; i < 4; ++i) EXPECT_FALSE(measure(g, ab_dict(), {all[i]}).complete());
  EXPECT_TRUE(measure(g, ab_dict(), {all[0], all[3]}).complete());
  EXPECT_FALSE(measure(g, ab_dict(), {all[1], all[2]}).complete());
}

TEST(Generate, TimingObjectiveNeedsConsecutiveSteps) {
  BlockGraph g = annotated(
      "At each time step, if [a] has been valid for [5 steps], then in response, after a delay of [0 steps], "
      "[b] is valid for [1 step].",
      ab_dict());
  GenerateOptions o;
  o.horizon = 10;
  o.include_timing = true;
  GenerateResult res = generate(g, ab_dict(), o);
  ASSERT_TRUE(res.report.complete());
  bool found = false;
  for (const TestVector& v : res.vectors) {
    const auto& col = *v.trace.find("a");
    std::size_t run = 0;
    for (const Value& x : col) {
      run = x.as_bool() ? run + 1 : 0;
      if (run >= 5) found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Generate, ContradictionIsReportedUnsatisfied) {
  BlockGraph g = annotated("At each time step, [a and (not a)] holds.", ab_dict());
  GenerateOptions o;
  o.horizon = 3;
  GenerateResult res = generate(g, ab_dict(), o);
  EXPECT_FALSE(res.report.complete());
  int unsatisfied = 0;
  for (const ObjectiveStatus& s : res.report.objectives) {
    for (const TargetStatus& t : s.targets) {
      if (t.witness) continue;
      ++unsatisfied;
      EXPECT_EQ(s.kind, ObjectiveKind::Decision);
      EXPECT_EQ(t.bit, 1u);
      EXPECT_EQ(t.reason, UnsatisfiedReason::SearchExhausted);
    }
  }
  EXPECT_EQ(unsatisfied, 1);
}

TEST(Generate, ConstantSourcesAreStaticallyUnreachable) {
  BlockGraph g = annotated("At each time step, [a or FALSE] holds.", ab_dict());
  GenerateOptions o;
  o.horizon = 2;
  GenerateResult res = generate(g, ab_dict(), o);
  bool seen = false;
  for (const ObjectiveStatus& s : res.report.objectives) {
    for (const TargetStatus& t : s.targets) {
      if (!t.witness && t.reason == UnsatisfiedReason::StaticallyUnreachable) seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Generate, HorizonTooShort) {
  BlockGraph g = annotated(
      "At each time step, if [a] has been valid for [3 steps], then in response, after a delay of [1 step], "
      "[b] is valid for [1 step].",
      ab_dict());
  GenerateOptions o;
  o.horizon = 5;
  EXPECT_THROW(generate(g, ab_dict(), o), Error);
  o.horizon = 0;
  EXPECT_THROW(generate(g, ab_dict(), o), Error);
}

TEST(Measure, EmptyVectorSetIsZero) {
  BlockGraph g = annotated("At each time step, [a or b] holds.", ab_dict());
  CoverageReport r = measure(g, ab_dict(), {});
  EXPECT_DOUBLE_EQ(r.percentage, 0.0);
  EXPECT_EQ(r.decision.satisfied + r.condition.satisfied, 0u);
}

TEST(Measure, ToggleOneInput) {
  BlockGraph g = annotated("At each time step, [a and b] holds.", ab_dict());
  // b stays false: only a toggles, so a's condition targets and the false decision are hit.
  TestVector v = vec("v1", {{"a", B({0, 1})}, {"b", B({0, 0})}});
  CoverageReport r = measure(g, ab_dict(), {v});
  for (const ObjectiveStatus& s : r.objectives) {
    const Block& observed = g.blocks[static_cast<std::size_t>(s.observed_block)];
    ASSERT_EQ(observed.kind, BlockKind::And);
    for (const TargetStatus& t : s.targets) {
      bool expect = false;
      if (s.kind == ObjectiveKind::Condition && s.observed_port == 0) expect = true;
      if (s.kind == ObjectiveKind::Condition && s.observed_port == 1) expect = t.bit == 0;
      if (s.kind == ObjectiveKind::Decision) expect = t.bit == 0;
      EXPECT_EQ(t.witness.has_value(), expect) << to_string(s.kind) << " port " << s.observed_port << " bit " << t.bit;
    }
  }
}

TEST(Generate, ReplayAndSoundness) {
  testing::Gen g(151);
  testing::FuzzOptions fo;
  fo.max_depth = 3;
  int ran = 0;
  for (int i = 0; i < 60; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    Requirement r = testing::fuzz_requirement(g, d, fo);
    BlockGraph graph = annotate(build_graph(r, d, StepConfig{10}));
    GenerateOptions o;
    o.horizon = graph.shift + 4;
    o.budget = 300;
    o.seed = 1 + static_cast<std::uint64_t>(i);
    GenerateResult res;
    try {
      res = generate(graph, d, o);
    } catch (const EvalError&) {
      continue;
    }
    ++ran;
    EXPECT_EQ(measure(graph, d, res.vectors), res.report);
    for (const TestVector& v : res.vectors) EXPECT_LE(v.trace.length, static_cast<std::size_t>(o.horizon));
    for (const ObjectiveStatus& s : res.report.objectives) {
      for (const TargetStatus& t : s.targets) {
        if (!t.witness) continue;
        const TestVector& v = res.vectors[t.witness->vector];
        SimResult sim = simulate(graph, simulation_trace(v), d);
        const Block& obj = graph.blocks[static_cast<std::size_t>(s.block)];
        if (s.kind == ObjectiveKind::Combination) {
          const Block& src = graph.blocks[static_cast<std::size_t>(s.observed_block)];
          unsigned a = sim.at(static_cast<std::size_t>(t.witness->step), src.inputs[0]).as_bool() ? 1 : 0;
          unsigned b = sim.at(static_cast<std::size_t>(t.witness->step), src.inputs[1]).as_bool() ? 1 : 0;
          EXPECT_EQ(2 * a + b, t.bit);
        } else {
          bool value = sim.at(static_cast<std::size_t>(t.witness->step), obj.inputs[0]).as_bool();
          EXPECT_EQ(value ? 1u : 0u, t.bit);
        }
      }
    }
  }
  EXPECT_GT(ran, 30);
}

TEST(Generate, CompleteCoverageMeansConditionAndDecisionCoverage) {
  // Unfold the definitions: every logical block output and every Boolean input
  // of a multi-input logical block takes both values across the vector set.
  for (const char* text : {"At each time step, [(a and b) or (not a)] holds.",
                           "At each time step, [(a implies b) = (x > 2)] holds.",
                           "At each time step, [(x < k) or (a and (x = 0))] holds."}) {
    BlockGraph g = annotated(text, ab_dict());
    GenerateOptions o;
    o.horizon = 3;
    GenerateResult res = generate(g, ab_dict(), o);
    ASSERT_TRUE(res.report.complete()) << text;
    std::map<std::pair<int, int>, unsigned> seen;
    for (const TestVector& v : res.vectors) {
      SimResult sim = simulate(g, simulation_trace(v), ab_dict());
      for (std::size_t t = 0; t < sim.steps; ++t) {
        for (std::size_t i = 0; i < g.blocks.size(); ++i) {
          const Block& b = g.blocks[i];
          bool logical = b.kind == BlockKind::And || b.kind == BlockKind::Or || b.kind == BlockKind::Implies;
          if (logical || b.kind == BlockKind::Not || b.kind == BlockKind::Eq || b.kind == BlockKind::Lt ||
              b.kind == BlockKind::Gt) {
            seen[{static_cast<int>(i), -1}] |= sim.at(t, static_cast<int>(i)).as_bool() ? 2u : 1u;
          }
          if (logical) {
            for (int p = 0; p < 2; ++p) seen[{static_cast<int>(i), p}] |= sim.at(t, b.inputs[p]).as_bool() ? 2u : 1u;
          }
        }
      }
    }
    for (const auto& [key, bits] : seen) EXPECT_EQ(bits, 3u) << text << " block " << key.first << " port " << key.second;
  }
}

TEST(Generate, SameSeedSameVectors) {
  Requirement r = *parse_requirement(testing::kExample1).value;
  BlockGraph g = annotate(build_graph(r, testing::example1_dictionary(), StepConfig{10}));
  GenerateOptions o;
  o.horizon = 12;
  GenerateResult a = generate(g, testing::example1_dictionary(), o);
  GenerateResult b = generate(g, testing::example1_dictionary(), o);
  ASSERT_EQ(a.vectors.size(), b.vectors.size());
  for (std::size_t i = 0; i < a.vectors.size(); ++i) EXPECT_EQ(a.vectors[i].trace, b.vectors[i].trace);
  EXPECT_EQ(a.report, b.report);
}

TEST(Generate, CalibrationSearch) {
  BlockGraph g = annotated("At each time step, [x < k] holds.", ab_dict());
  GenerateOptions o;
  o.horizon = 2;
  o.search_calibrations = true;
  GenerateResult res = generate(g, ab_dict(), o);
  EXPECT_TRUE(res.report.complete());
  for (const TestVector& v : res.vectors) {
    ASSERT_EQ(v.calibration.size(), 1u);
    EXPECT_GE(v.calibration[0].second.as_int(), 0);
    EXPECT_LE(v.calibration[0].second.as_int(), 3);
  }
}

TEST(CoverageJson, Shape) {
  BlockGraph g = annotated("At each time step, [a or b] holds.", ab_dict());
  GenerateOptions o;
  o.horizon = 1;
  GenerateResult res = generate(g, ab_dict(), o);
  auto doc = nlohmann::json::parse(coverage_report_json(res.report, res.vectors));
  EXPECT_EQ(doc["requirement"], "R");
  EXPECT_EQ(doc["percentage"], 100.0);
  EXPECT_EQ(doc["vectors"].size(), res.vectors.size());
  EXPECT_EQ(doc["objectives"].size(), res.report.objectives.size());
}

}  // namespace
}  // namespace reqc
