#include <gtest/gtest.h>

#include "differential.hpp"
#include "example1.hpp"
#include "fuzz.hpp"
#include "oracle.hpp"
#include "reqc/parser.hpp"
#include "reqc/semantics.hpp"

namespace reqc {
namespace {

VariableDictionary pq_dict() {
  return *load_dictionary(R"([
    {"name": "p", "kind": "signal", "data_type": "bool"},
    {"name": "q", "kind": "signal", "data_type": "bool"},
    {"name": "x", "kind": "signal", "data_type": "int", "initial": 0},
    {"name": "y", "kind": "signal", "data_type": "int", "initial": 7}
  ])", DictFormat::Json).value;
}

// 'T'/'F' per step; '_' steps take `blank`.
std::vector<Value> bools(const std::string& s, bool blank = false) {
  std::vector<Value> out;
  for (char c : s) out.push_back(Value::boolean(c == '_' ? blank : c == 'T'));
  return out;
}

std::vector<Value> ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(Value::integer(x));
  return out;
}

Trace pq_trace(const std::string& p, const std::string& q, bool blank = false) {
  Trace t;
  t.length = p.size();
  t.set("p", bools(p, blank));
  t.set("q", bools(q, blank));
  return t;
}

NormalizedResponse nr(std::int64_t tp, std::int64_t td, std::int64_t tq) {
  NormalizedResponse r;
  r.t_p = tp;
  r.t_d = td;
  r.t_q = tq;
  r.trigger = Expr::var("p");
  r.response = Expr::var("q");
  return r;
}

std::vector<std::int64_t> anchors(const Verdict& v) {
  std::vector<std::int64_t> out;
  for (const Violation& x : v.violations) out.push_back(x.anchor_step);
  return out;
}

Expr ev(const char* text) { return *parse_event(text).value; }

TEST(ToSteps, UnitConversions) {
  StepConfig ten{10};
  EXPECT_EQ(to_steps({2, TimeUnit::Seconds, {}}, ten), 200);
  EXPECT_EQ(to_steps({50, TimeUnit::Milliseconds, {}}, ten), 5);
  EXPECT_EQ(to_steps({7, TimeUnit::Steps, {}}, StepConfig{3}), 7);
  EXPECT_EQ(to_steps({1, TimeUnit::Minutes, {}}, ten), 6000);
  EXPECT_EQ(to_steps({1, TimeUnit::Hours, {}}, ten), 360000);
  EXPECT_THROW(to_steps({50, TimeUnit::Milliseconds, {}}, StepConfig{20}), DurationError);
  EXPECT_EQ(try_to_steps({50, TimeUnit::Milliseconds, {}}, StepConfig{20}), std::nullopt);
}

TEST(ToSteps, Linear) {
  const TimeUnit units[] = {TimeUnit::Steps, TimeUnit::Milliseconds, TimeUnit::Seconds, TimeUnit::Minutes,
                            TimeUnit::Hours};
  for (std::int64_t step : {1, 3, 7, 10, 20, 250, 1000}) {
    for (TimeUnit u : units) {
      auto one = try_to_steps({1, u, {}}, StepConfig{step});
      for (std::uint64_t n : {0u, 1u, 2u, 5u, 13u, 100u, 999u}) {
        auto many = try_to_steps({n, u, {}}, StepConfig{step});
        if (one && many) EXPECT_EQ(*many, static_cast<std::int64_t>(n) * *one);
      }
    }
  }
}

TEST(Normalize, Example1) {
  auto r = parse_requirement(testing::kExample1);
  NormalizedResponse n = normalize(r.value->response(), StepConfig{10});
  EXPECT_EQ(n.t_p, 5);
  EXPECT_EQ(n.t_d, 0);
  EXPECT_EQ(n.t_q, 1);
  EXPECT_EQ(n.shift(), 6);
}

TEST(EvalEvent, Basics) {
  VariableDictionary d = pq_dict();
  Trace t;
  t.length = 3;
  t.set("x", ints({-4, 5, 9}));
  t.set("y", ints({1, 2, 3}));
  EXPECT_EQ(eval_event(ev("abs(x)"), t, d, 0), Value::integer(4));
  EXPECT_EQ(eval_event(ev("bit 0 of 5"), t, d, 0), Value::boolean(true));
  EXPECT_EQ(eval_event(ev("bit 1 of 5"), t, d, 0), Value::boolean(false));
  // initial x = 0 fills the steps before the trace
  EXPECT_EQ(eval_event(ev("the value of x 4 steps ago"), t, d, 2), Value::integer(0));
  EXPECT_EQ(eval_event(ev("the value of y 2 steps ago"), t, d, 1), Value::integer(7));
  EXPECT_EQ(eval_event(ev("the value of y 2 steps ago"), t, d, 2), Value::integer(1));
  EXPECT_EQ(eval_event(ev("last(x)"), t, d, 2), Value::integer(5));
  EXPECT_EQ(eval_event(ev("x / 2"), t, d, 2), Value::integer(4));
  EXPECT_EQ(eval_event(ev("x / 2.0"), t, d, 2), Value::real(4.5));
  EXPECT_EQ(eval_event(ev("-x / 2"), t, d, 0), Value::integer(2));
  EXPECT_EQ(eval_event(ev("min(x, y) >= -4"), t, d, 0), Value::boolean(true));
}

TEST(EvalEvent, LastNMatchesPaddedTrace) {
  VariableDictionary d = pq_dict();
  Trace t;
  t.length = 6;
  t.set("y", ints({1, 2, 3, 4, 5, 6}));
  std::vector<std::int64_t> padded = {7, 7, 7, 7, 1, 2, 3, 4, 5, 6};
  std::vector<Value> s = eval_series(ev("the value of y 4 steps ago"), t, d);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(s[k], Value::integer(padded[k])) << k;
}

TEST(EvalEvent, FaultsNameStepAndSubterm) {
  VariableDictionary d = pq_dict();
  Trace t;
  t.length = 3;
  t.set("x", ints({1, 0, 2}));
  try {
    eval_series(ev("10 / x > 1"), t, d);
    FAIL() << "expected EvalError";
  } catch (const EvalError& e) {
    EXPECT_EQ(e.step(), 1);
    EXPECT_EQ(e.subterm(), "(10 divided by x)");
  }
  t.set("x", ints({1, 64, 2}));
  EXPECT_THROW(eval_series(ev("bit x of 3"), t, d), EvalError);
  t.set("x", ints({INT64_MAX, 0, 0}));
  EXPECT_THROW(eval_series(ev("x + 1 > 0"), t, d), EvalError);
}

TEST(EvalEvent, Deterministic) {
  testing::Gen g(21);
  for (int i = 0; i < 200; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    Expr e = testing::fuzz_bool_event(g, {});
    Trace t = testing::fuzz_trace(g, d);
    try {
      EXPECT_EQ(eval_series(e, t, d), eval_series(e, t, d));
    } catch (const EvalError&) {
    }
  }
}

TEST(Invariant, GloballySkipsStepZero) {
  VariableDictionary d = pq_dict();
  Verdict v = eval_invariant(Scope::Globally, ev("p"), pq_trace("FTT", "FFF"), d);
  EXPECT_EQ(v.status, Status::Pass);
  v = eval_invariant(Scope::Globally, ev("p"), pq_trace("TTF", "FFF"), d);
  EXPECT_EQ(v.status, Status::Fail);
  EXPECT_EQ(anchors(v), std::vector<std::int64_t>{2});
}

TEST(Invariant, InitiallyChecksStepZeroOnly) {
  VariableDictionary d = pq_dict();
  Verdict v = eval_invariant(Scope::Initially, ev("p"), pq_trace("FTT", "FFF"), d);
  EXPECT_EQ(v.status, Status::Fail);
  EXPECT_EQ(anchors(v), std::vector<std::int64_t>{0});
  EXPECT_EQ(eval_invariant(Scope::Initially, ev("p"), pq_trace("TFF", "FFF"), d).status, Status::Pass);
}

TEST(Response, AnchoredExamples) {
  VariableDictionary d = pq_dict();
  for (Form form : {Form::Future, Form::Past}) {
    auto run = [&](const Trace& t, NormalizedResponse r) {
      return form == Form::Future ? eval_response_future(Scope::Globally, r, t, d)
                                  : eval_response_past(Scope::Globally, r, t, d);
    };
    for (bool blank : {false, true}) {
      Verdict pass = run(pq_trace("_TTF", "___T", blank), nr(2, 0, 1));
      EXPECT_EQ(pass.status, Status::Pass);

      Verdict fail = run(pq_trace("_TTF", "___F", blank), nr(2, 0, 1));
      EXPECT_EQ(fail.status, Status::Fail);
      EXPECT_EQ(anchors(fail), std::vector<std::int64_t>{1});
    }

    Verdict pending = run(pq_trace("TTT", "TTT"), nr(3, 0, 1));
    EXPECT_EQ(pending.status, Status::PassWithPending);
    EXPECT_EQ(pending.pending, 2);

    Verdict tail = run(pq_trace("_T__", "___T", true), nr(1, 1, 1));
    EXPECT_EQ(tail.status, Status::PassWithPending);
    EXPECT_EQ(tail.pending, 2);
  }
}

TEST(Response, ShortTraceIsVacuousOnlyWhenTriggerIsFalse) {
  VariableDictionary d = pq_dict();
  for (Form form : {Form::Future, Form::Past}) {
    auto run = [&](const Trace& t) {
      return form == Form::Future ? eval_response_future(Scope::Globally, nr(1, 1, 1), t, d)
                                  : eval_response_past(Scope::Globally, nr(1, 1, 1), t, d);
    };
    EXPECT_EQ(run(pq_trace("FF", "FF")).status, Status::Pass);
    EXPECT_EQ(run(pq_trace("TT", "FF")).status, Status::PassWithPending);
  }
}

TEST(Response, InitiallyHasOneInstance) {
  VariableDictionary d = pq_dict();
  Verdict v = eval_response_future(Scope::Initially, nr(2, 1, 1), pq_trace("TTFF", "FFFF"), d);
  EXPECT_EQ(anchors(v), std::vector<std::int64_t>{0});
  EXPECT_EQ(v.violations[0].check_step, 3);
  v = eval_response_past(Scope::Initially, nr(2, 1, 1), pq_trace("TTFF", "FFFF"), d);
  EXPECT_EQ(anchors(v), std::vector<std::int64_t>{0});
  // Anchor 1 would fail too, but only the start instance is in scope.
  v = eval_response_future(Scope::Initially, nr(2, 1, 1), pq_trace("FTTFF", "FFFFF"), d);
  EXPECT_EQ(v.status, Status::Pass);
}

TEST(Response, Example1Trace) {
  VariableDictionary d = testing::example1_dictionary();
  Requirement r = *parse_requirement(testing::kExample1).value;
  // Trigger holds on steps 0..6, response is false throughout.
  Trace t;
  t.length = 10;
  t.set("signal_A", bools("TTTTTTTFFF"));
  t.set("signal_B", bools("FFFFFFFFFF"));
  t.set("signal_C", ints({5, 5, 5, 5, 5, 5, 5, 5, 5, 5}));
  t.set("signal_D", std::vector<Value>(10, Value::real(10.0)));
  t.set("signal_E", bools("FFFFFFFFFF"));
  Verdict v = evaluate(r, t, d, StepConfig{10});
  EXPECT_EQ(anchors(v), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(v.violations[0].check_step, 6);
  EXPECT_EQ(v.violations[1].check_step, 7);
  EXPECT_EQ(evaluate(r, t, d, StepConfig{10}, Form::Past).violations.size(), 2u);
}

TEST(Response, MonotoneUnderExtension) {
  testing::Gen g(31);
  StepConfig cfg{10};
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    Requirement r = testing::fuzz_requirement(g, d);
    Trace longer = testing::fuzz_trace(g, d);
    if (longer.length < 2) continue;
    Trace prefix = longer;
    prefix.length = 1 + g.below(longer.length - 1);
    for (TraceColumn& c : prefix.columns) c.values.resize(prefix.length);
    try {
      Verdict a = evaluate(r, prefix, d, cfg);
      Verdict b = evaluate(r, longer, d, cfg);
      ++checked;
      if (a.status == Status::Fail) EXPECT_EQ(b.status, Status::Fail) << testing::describe_case(r, longer);
      auto fa = anchors(a);
      auto fb = anchors(b);
      for (auto x : fa) EXPECT_NE(std::find(fb.begin(), fb.end(), x), fb.end());
    } catch (const EvalError&) {
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(Response, InvariantDegeneracy) {
  // A Globally invariant on e and the response "TRUE for 1 step, no delay, e for
  // 1 step" observe the same failures at steps >= 2; step 1 would need an
  // anchor at 0.
  testing::Gen g(41);
  StepConfig cfg{10};
  for (int i = 0; i < 500; ++i) {
    VariableDictionary d = testing::fuzz_dictionary(g);
    Expr e = testing::fuzz_bool_event(g, {});
    Trace t = testing::fuzz_trace(g, d);
    Requirement inv;
    inv.pattern = Invariant{e};
    Requirement resp;
    resp.pattern = Response{Expr::boolean(true), {1, TimeUnit::Steps, {}}, {0, TimeUnit::Steps, {}}, e,
                            {1, TimeUnit::Steps, {}}};
    try {
      Verdict a = evaluate(inv, t, d, cfg);
      Verdict b = evaluate(resp, t, d, cfg);
      std::vector<std::int64_t> from_inv;
      for (auto s : anchors(a)) {
        if (s >= 2) from_inv.push_back(s);
      }
      std::vector<std::int64_t> from_resp;
      for (const Violation& v : b.violations) from_resp.push_back(v.check_step);
      EXPECT_EQ(from_inv, from_resp) << testing::describe_case(inv, t);
    } catch (const EvalError&) {
    }
  }
}

TEST(Response, AgreesWithBruteForceOnPQ) {
  // Exhaustive over all bool traces of length <= 6 for a grid of durations.
  VariableDictionary d = pq_dict();
  for (std::int64_t tp = 1; tp <= 3; ++tp) {
    for (std::int64_t td = 0; td <= 2; ++td) {
      for (std::int64_t tq = 1; tq <= 2; ++tq) {
        for (std::size_t len = 1; len <= 6; ++len) {
          for (unsigned bits = 0; bits < (1u << (2 * len)); ++bits) {
            std::string p, q;
            for (std::size_t k = 0; k < len; ++k) {
              p += (bits >> k) & 1 ? 'T' : 'F';
              q += (bits >> (k + len)) & 1 ? 'T' : 'F';
            }
            Trace t = pq_trace(p, q);
            for (Scope s : {Scope::Globally, Scope::Initially}) {
              Verdict f = eval_response_future(s, nr(tp, td, tq), t, d);
              Verdict pst = eval_response_past(s, nr(tp, td, tq), t, d);
              testing::OracleVerdict o = testing::oracle_response(s, nr(tp, td, tq), t, d);
              auto fa = anchors(f);
              ASSERT_EQ(std::set<std::int64_t>(fa.begin(), fa.end()), o.failing) << p << " " << q;
              ASSERT_EQ(f.pending, o.pending) << p << " " << q;
              ASSERT_EQ(anchors(pst), fa) << p << " " << q;
              ASSERT_EQ(pst.pending, f.pending) << p << " " << q;
            }
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace reqc
