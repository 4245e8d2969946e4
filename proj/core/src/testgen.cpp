#include "reqc/testgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "reqc/semantics.hpp"

namespace reqc {

namespace {

bool decision_block(BlockKind k) {
  switch (k) {
    case BlockKind::Not:
    case BlockKind::And:
    case BlockKind::Or:
    case BlockKind::Implies:
    case BlockKind::Eq:
    case BlockKind::Lt:
    case BlockKind::Le:
    case BlockKind::Gt:
    case BlockKind::Ge:
    case BlockKind::ExtractBit:
      return true;
    default:
      return false;
  }
}

bool condition_block(BlockKind k) { return k == BlockKind::And || k == BlockKind::Or || k == BlockKind::Implies; }

bool timing_block(BlockKind k) {
  return k == BlockKind::DurationCheck || k == BlockKind::DelayLine || k == BlockKind::Detector;
}

Block objective(ObjectiveKind kind, std::vector<int> inputs, int observed, int port, unsigned targets) {
  Block b;
  b.kind = BlockKind::TestObjective;
  b.type = ScalarType::Bool;
  b.inputs = std::move(inputs);
  b.objective = kind;
  b.observed_block = observed;
  b.observed_port = port;
  b.targets = targets;
  b.role = "test";
  return b;
}

}  // namespace

BlockGraph annotate(BlockGraph g, const AnnotateOptions& opts) {
  const std::size_t n = g.blocks.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Block b = g.blocks[i];
    const int id = static_cast<int>(i);
    if (decision_block(b.kind)) {
      g.test_objectives.push_back(g.add(objective(ObjectiveKind::Decision, {id}, id, -1, 0b11)));
    }
    if (condition_block(b.kind)) {
      for (std::size_t p = 0; p < b.inputs.size(); ++p) {
        g.test_objectives.push_back(
            g.add(objective(ObjectiveKind::Condition, {b.inputs[p]}, id, static_cast<int>(p), 0b11)));
      }
      if (opts.combinations && b.inputs.size() == 2) {
        g.test_objectives.push_back(g.add(objective(ObjectiveKind::Combination, b.inputs, id, -1, 0b1111)));
      }
    }
    if (timing_block(b.kind)) {
      g.test_objectives.push_back(g.add(objective(ObjectiveKind::Timing, {id}, id, -1, 0b10)));
    }
  }
  return g;
}

Trace simulation_trace(const TestVector& v) {
  Trace t = v.trace;
  for (const auto& [name, value] : v.calibration) t.set(name, std::vector<Value>(t.length, value));
  return t;
}

std::string_view to_string(UnsatisfiedReason r) {
  return r == UnsatisfiedReason::StaticallyUnreachable ? "statically_unreachable" : "search_exhausted";
}

bool CoverageReport::complete() const {
  bool ok = decision.satisfied == decision.targets && condition.satisfied == condition.targets &&
            combination.satisfied == combination.targets;
  if (include_timing) ok = ok && timing.satisfied == timing.targets;
  return ok;
}

namespace {

unsigned observed_bit(const Block& o, const SimResult& sim, std::size_t t) {
  unsigned a = sim.at(t, o.inputs[0]).as_bool() ? 1u : 0u;
  if (o.objective == ObjectiveKind::Combination) return 2 * a + (sim.at(t, o.inputs[1]).as_bool() ? 1u : 0u);
  return a;
}

bool unreachable(const BlockGraph& g, const Block& o, unsigned bit) {
  auto fixed = [&](int src, unsigned want) {
    const Block& s = g.blocks[static_cast<std::size_t>(src)];
    return s.kind == BlockKind::Constant && s.value.as_bool() != (want != 0);
  };
  if (o.objective == ObjectiveKind::Combination) return fixed(o.inputs[0], bit >> 1) || fixed(o.inputs[1], bit & 1);
  return fixed(o.inputs[0], bit);
}

// Records first witnesses of `sim` (vector `vi`) into `status`; returns the
// last step at which a target was newly witnessed, or -1.
std::int64_t record(const BlockGraph& g, const SimResult& sim, std::size_t vi, std::vector<ObjectiveStatus>& status) {
  std::int64_t last = -1;
  for (ObjectiveStatus& os : status) {
    const Block& o = g.blocks[static_cast<std::size_t>(os.block)];
    for (TargetStatus& ts : os.targets) {
      if (ts.witness) continue;
      for (std::size_t t = 0; t < sim.steps; ++t) {
        if (observed_bit(o, sim, t) == ts.bit) {
          ts.witness = Witness{vi, static_cast<std::int64_t>(t)};
          last = std::max(last, static_cast<std::int64_t>(t));
          break;
        }
      }
    }
  }
  return last;
}

std::vector<ObjectiveStatus> initial_status(const BlockGraph& g) {
  std::vector<ObjectiveStatus> out;
  for (int id : g.test_objectives) {
    const Block& o = g.blocks[static_cast<std::size_t>(id)];
    ObjectiveStatus os;
    os.block = id;
    os.kind = o.objective;
    os.observed_block = o.observed_block;
    os.observed_port = o.observed_port;
    for (unsigned bit = 0; bit < 4; ++bit) {
      if (o.targets & (1u << bit)) os.targets.push_back(TargetStatus{bit, std::nullopt, UnsatisfiedReason::SearchExhausted});
    }
    out.push_back(std::move(os));
  }
  return out;
}

CoverageReport finish(const BlockGraph& g, std::vector<ObjectiveStatus> status, bool include_timing) {
  CoverageReport r;
  r.requirement_id = g.requirement_id;
  r.include_timing = include_timing;
  for (ObjectiveStatus& os : status) {
    const Block& o = g.blocks[static_cast<std::size_t>(os.block)];
    KindTotals& k = os.kind == ObjectiveKind::Decision    ? r.decision
                    : os.kind == ObjectiveKind::Condition ? r.condition
                    : os.kind == ObjectiveKind::Timing    ? r.timing
                                                          : r.combination;
    for (TargetStatus& ts : os.targets) {
      ++k.targets;
      if (ts.witness) {
        ++k.satisfied;
      } else if (unreachable(g, o, ts.bit)) {
        ts.reason = UnsatisfiedReason::StaticallyUnreachable;
      }
    }
  }
  r.objectives = std::move(status);
  std::size_t total = r.decision.targets + r.condition.targets + r.combination.targets;
  std::size_t sat = r.decision.satisfied + r.condition.satisfied + r.combination.satisfied;
  if (include_timing) {
    total += r.timing.targets;
    sat += r.timing.satisfied;
  }
  r.percentage = total == 0 ? 100.0 : 100.0 * static_cast<double>(sat) / static_cast<double>(total);
  return r;
}

// ---- search ----

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, n); n > 0. Rejection sampling keeps results identical
  // across standard libraries.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(gen_());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span + 1));
  }

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 gen_;
};

struct Domain {
  std::string name;
  ScalarType type = ScalarType::Bool;
  std::vector<Value> boundary;
  double lo = 0;
  double hi = 0;
};

std::vector<double> graph_constants(const BlockGraph& g) {
  std::vector<double> out;
  for (const Block& b : g.blocks) {
    if (b.kind == BlockKind::Constant && b.type != ScalarType::Bool) out.push_back(b.value.to_double());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Domain make_domain(const std::string& name, const VariableDictionary& dict, const std::vector<double>& constants) {
  Domain d;
  d.name = name;
  const VariableDecl* decl = dict.find(name);
  d.type = decl ? decl->data_type : ScalarType::Bool;
  if (d.type == ScalarType::Bool) {
    d.boundary = {Value::boolean(false), Value::boolean(true)};
    return d;
  }
  d.lo = decl->min ? decl->min->to_double() : -1000.0;
  d.hi = decl->max ? decl->max->to_double() : 1000.0;
  std::vector<double> pts;
  if (d.type == ScalarType::Int) {
    d.lo = std::ceil(d.lo);
    d.hi = std::floor(d.hi);
    pts = {d.lo, d.lo + 1, 0, d.hi - 1, d.hi};
    for (double c : constants) {
      for (double p : {std::floor(c) - 1, std::floor(c), std::ceil(c), std::ceil(c) + 1}) pts.push_back(p);
    }
  } else {
    pts = {d.lo, 0, d.hi};
    for (double c : constants) {
      for (double p : {c - 0.5, c, c + 0.5}) pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (double p : pts) {
    if (p < d.lo || p > d.hi) continue;
    d.boundary.push_back(d.type == ScalarType::Int ? Value::integer(static_cast<std::int64_t>(p)) : Value::real(p));
  }
  return d;
}

Value sample(const Domain& d, Rng& rng) {
  if (d.type == ScalarType::Bool || rng.chance(0.6)) return d.boundary[rng.below(d.boundary.size())];
  if (d.type == ScalarType::Int) {
    return Value::integer(rng.between(static_cast<std::int64_t>(d.lo), static_cast<std::int64_t>(d.hi)));
  }
  return Value::real(d.lo + (d.hi - d.lo) * rng.unit());
}

struct Candidate {
  std::vector<std::vector<Value>> signals;  // per signal domain, per step
  std::vector<Value> calibration;           // per calibration domain
};

std::int64_t max_run(const SimResult& sim, int block) {
  std::int64_t best = 0;
  std::int64_t run = 0;
  for (std::size_t t = 0; t < sim.steps; ++t) {
    run = sim.at(t, block).as_bool() ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

// Heuristic distance of `sim` from showing `bit` on objective `o`; 0 when shown.
double distance(const BlockGraph& g, const Block& o, unsigned bit, const SimResult& sim) {
  for (std::size_t t = 0; t < sim.steps; ++t) {
    if (observed_bit(o, sim, t) == bit) return 0;
  }
  if (o.objective == ObjectiveKind::Combination) return 1;
  int src = o.inputs[0];
  const Block& s = g.blocks[static_cast<std::size_t>(src)];
  bool want = bit != 0;
  switch (s.kind) {
    case BlockKind::Lt:
    case BlockKind::Le:
    case BlockKind::Gt:
    case BlockKind::Ge:
    case BlockKind::Eq: {
      if (g.blocks[static_cast<std::size_t>(s.inputs[0])].type == ScalarType::Bool) return 1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < sim.steps; ++t) {
        double a = sim.at(t, s.inputs[0]).to_double();
        double b = sim.at(t, s.inputs[1]).to_double();
        double d = 0;
        switch (s.kind) {
          case BlockKind::Lt: d = want ? a - b + 1 : b - a; break;
          case BlockKind::Le: d = want ? a - b : b - a + 1; break;
          case BlockKind::Gt: d = want ? b - a + 1 : a - b; break;
          case BlockKind::Ge: d = want ? b - a : a - b + 1; break;
          default: d = want ? std::fabs(a - b) : 1; break;
        }
        best = std::min(best, std::max(d, 0.0));
      }
      return 1 + best;
    }
    case BlockKind::DurationCheck:
    case BlockKind::Detector:
      if (!want) return 1;
      return 1 + static_cast<double>(s.n - std::min(s.n, max_run(sim, s.inputs[0])));
    default:
      return 1;
  }
}

class Search {
 public:
  Search(const BlockGraph& g, const VariableDictionary& dict, const GenerateOptions& opts)
      : g_(g), dict_(dict), opts_(opts), rng_(opts.seed), status_(initial_status(g)) {
    std::vector<double> constants = graph_constants(g);
    for (const auto& [name, id] : g.entries) {
      const Block& b = g.blocks[static_cast<std::size_t>(id)];
      if (b.kind == BlockKind::Inport) {
        signals_.push_back(make_domain(name, dict, constants));
      } else if (b.kind == BlockKind::Calibration && opts.search_calibrations) {
        calibs_.push_back(make_domain(name, dict, constants));
      }
    }
  }

  std::vector<TestVector> run() {
    bool complete = enumerate();
    if (!complete) random_search();
    return std::move(vectors_);
  }

 private:
  std::size_t horizon() const { return static_cast<std::size_t>(opts_.horizon); }

  bool all_done() const {
    for (const ObjectiveStatus& os : status_) {
      for (const TargetStatus& ts : os.targets) {
        if (!ts.witness) return false;
      }
    }
    return true;
  }

  // Simulates; nullopt when evaluation faults.
  std::optional<SimResult> simulate_candidate(const Candidate& c, std::size_t length) const {
    try {
      return simulate(g_, to_vector(c, length).trace, dict_);
    } catch (const EvalError&) {
      return std::nullopt;
    }
  }

  TestVector to_vector(const Candidate& c, std::size_t length) const {
    TestVector v;
    v.trace.step_ms = opts_.step_ms;
    v.trace.length = length;
    for (std::size_t i = 0; i < signals_.size(); ++i) {
      v.trace.columns.push_back(
          TraceColumn{signals_[i].name, std::vector<Value>(c.signals[i].begin(), c.signals[i].begin() + length)});
    }
    for (std::size_t i = 0; i < calibs_.size(); ++i) {
      v.calibration.emplace_back(calibs_[i].name, c.calibration[i]);
      v.trace.set(calibs_[i].name, std::vector<Value>(length, c.calibration[i]));
    }
    return v;
  }

  // Keeps the candidate when it witnesses something new.
  bool offer(const Candidate& c, const SimResult& sim) {
    std::int64_t last = record(g_, sim, vectors_.size(), status_);
    if (last < 0) return false;
    TestVector v = to_vector(c, static_cast<std::size_t>(last) + 1);
    for (const Domain& d : calibs_) {
      std::size_t k = 0;
      for (; k < v.trace.columns.size() && v.trace.columns[k].name != d.name; ++k) {}
      v.trace.columns.erase(v.trace.columns.begin() + static_cast<std::ptrdiff_t>(k));
    }
    v.id = "v" + std::to_string(vectors_.size() + 1);
    vectors_.push_back(std::move(v));
    return true;
  }

  // Returns true when the enumeration was exhaustive over complete domains.
  bool enumerate() {
    std::vector<const Domain*> digits;
    for (std::size_t s = 0; s < horizon(); ++s) {
      for (const Domain& d : signals_) digits.push_back(&d);
    }
    for (const Domain& d : calibs_) digits.push_back(&d);
    long double space = 1;
    for (const Domain* d : digits) space *= static_cast<long double>(d->boundary.size());
    if (space > static_cast<long double>(opts_.exhaustive_limit)) return false;
    bool complete = true;
    for (const Domain* d : digits) complete = complete && d->type == ScalarType::Bool;

    std::vector<std::size_t> idx(digits.size(), 0);
    Candidate c;
    c.signals.assign(signals_.size(), std::vector<Value>(horizon()));
    c.calibration.assign(calibs_.size(), Value());
    while (true) {
      std::size_t k = 0;
      for (std::size_t s = 0; s < horizon(); ++s) {
        for (std::size_t i = 0; i < signals_.size(); ++i, ++k) c.signals[i][s] = digits[k]->boundary[idx[k]];
      }
      for (std::size_t i = 0; i < calibs_.size(); ++i, ++k) c.calibration[i] = digits[k]->boundary[idx[k]];
      if (auto sim = simulate_candidate(c, horizon())) offer(c, *sim);
      if (all_done()) return true;
      // Odometer increment, last step's digits fastest.
      std::size_t pos = digits.size();
      while (pos > 0) {
        --pos;
        if (++idx[pos] < digits[pos]->boundary.size()) break;
        idx[pos] = 0;
        if (pos == 0) return complete;
      }
      if (digits.empty()) return complete;
    }
  }

  Candidate fresh() {
    Candidate c;
    for (const Domain& d : signals_) {
      std::vector<Value> col(horizon());
      std::size_t t = 0;
      while (t < horizon()) {
        std::size_t len = 1 + rng_.below(horizon() - t);
        if (rng_.chance(0.5)) len = std::min<std::size_t>(len, 1 + rng_.below(4));
        Value v = sample(d, rng_);
        for (std::size_t k = 0; k < len; ++k) col[t + k] = v;
        t += len;
      }
      c.signals.push_back(std::move(col));
    }
    for (const Domain& d : calibs_) c.calibration.push_back(sample(d, rng_));
    return c;
  }

  Candidate mutate(Candidate c) {
    const std::size_t h = horizon();
    switch (rng_.below(signals_.empty() ? 1 : 4)) {
      case 0:
        if (!calibs_.empty()) {
          std::size_t i = rng_.below(calibs_.size());
          c.calibration[i] = sample(calibs_[i], rng_);
          break;
        }
        [[fallthrough]];
      case 1: {
        if (signals_.empty()) break;
        std::size_t i = rng_.below(signals_.size());
        std::size_t from = rng_.below(h);
        std::size_t len = 1 + rng_.below(h - from);
        Value v = sample(signals_[i], rng_);
        for (std::size_t t = from; t < from + len; ++t) c.signals[i][t] = v;
        break;
      }
      case 2: {
        // Hold every signal at its value from one step for a stretch.
        std::size_t from = rng_.below(h);
        std::size_t len = 1 + rng_.below(h - from);
        for (auto& col : c.signals) {
          for (std::size_t t = from + 1; t < from + len; ++t) col[t] = col[from];
        }
        break;
      }
      default: {
        std::size_t i = rng_.below(signals_.size());
        std::size_t t = rng_.below(h);
        c.signals[i][t] = sample(signals_[i], rng_);
        break;
      }
    }
    return c;
  }

  // Next unsatisfied (objective, target) after the current focus, if any.
  bool advance_focus() {
    std::size_t total = 0;
    for (const ObjectiveStatus& os : status_) total += os.targets.size();
    for (std::size_t step = 1; step <= total; ++step) {
      std::size_t k = (focus_ + step) % total;
      std::size_t acc = 0;
      for (const ObjectiveStatus& os : status_) {
        if (k < acc + os.targets.size()) {
          if (!os.targets[k - acc].witness) {
            focus_ = k;
            best_.reset();
            return true;
          }
          break;
        }
        acc += os.targets.size();
      }
    }
    return false;
  }

  std::pair<const ObjectiveStatus*, unsigned> focus_target() const {
    std::size_t acc = 0;
    for (const ObjectiveStatus& os : status_) {
      if (focus_ < acc + os.targets.size()) return {&os, os.targets[focus_ - acc].bit};
      acc += os.targets.size();
    }
    return {nullptr, 0};
  }

  bool focus_satisfied() const {
    std::size_t acc = 0;
    for (const ObjectiveStatus& os : status_) {
      if (focus_ < acc + os.targets.size()) return os.targets[focus_ - acc].witness.has_value();
      acc += os.targets.size();
    }
    return true;
  }

  void random_search() {
    if (signals_.empty() && calibs_.empty()) return;
    focus_ = static_cast<std::size_t>(-1);
    if (!advance_focus()) return;
    std::int64_t stale = 0;
    for (std::int64_t attempt = 0; attempt < opts_.budget; ++attempt) {
      bool climb = best_ && rng_.chance(0.7);
      Candidate c = climb ? mutate(best_->first) : fresh();
      auto sim = simulate_candidate(c, horizon());
      if (!sim) continue;
      auto [os, bit] = focus_target();
      const Block& o = g_.blocks[static_cast<std::size_t>(os->block)];
      double d = distance(g_, o, bit, *sim);
      offer(c, *sim);
      if (all_done()) return;
      if (focus_satisfied()) {
        if (!advance_focus()) return;
        stale = 0;
        continue;
      }
      if (!best_ || d < best_->second) {
        best_ = std::make_pair(std::move(c), d);
        stale = 0;
      } else if (d == best_->second && climb) {
        best_->first = std::move(c);
        ++stale;
      } else {
        ++stale;
      }
      if (stale > 200) {
        advance_focus();
        stale = 0;
      }
    }
  }

  const BlockGraph& g_;
  const VariableDictionary& dict_;
  const GenerateOptions& opts_;
  Rng rng_;
  std::vector<ObjectiveStatus> status_;
  std::vector<Domain> signals_;
  std::vector<Domain> calibs_;
  std::vector<TestVector> vectors_;
  std::size_t focus_ = 0;
  std::optional<std::pair<Candidate, double>> best_;
};

}  // namespace

CoverageReport measure(const BlockGraph& g, const VariableDictionary& dict, const std::vector<TestVector>& vectors,
                       bool include_timing) {
  std::vector<ObjectiveStatus> status = initial_status(g);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    record(g, simulate(g, simulation_trace(vectors[i]), dict), i, status);
  }
  return finish(g, std::move(status), include_timing);
}

GenerateResult generate(const BlockGraph& g, const VariableDictionary& dict, const GenerateOptions& opts) {
  if (opts.horizon < 1) throw Error("horizon must be at least 1 step");
  if (!g.invariant && opts.horizon < g.shift + 1) {
    throw Error("horizon of " + std::to_string(opts.horizon) + " steps is too short: the response needs at least " +
                std::to_string(g.shift + 1) + " steps");
  }
  GenerateResult r;
  r.vectors = Search(g, dict, opts).run();
  r.report = measure(g, dict, r.vectors, opts.include_timing);
  return r;
}

std::string coverage_report_json(const CoverageReport& report, const std::vector<TestVector>& vectors) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["requirement"] = report.requirement_id;
  doc["include_timing"] = report.include_timing;
  doc["percentage"] = report.percentage;
  doc["complete"] = report.complete();
  auto totals = [](const KindTotals& k) { return ordered_json{{"targets", k.targets}, {"satisfied", k.satisfied}}; };
  doc["totals"] = ordered_json{{"decision", totals(report.decision)},
                               {"condition", totals(report.condition)},
                               {"timing", totals(report.timing)},
                               {"combination", totals(report.combination)}};
  ordered_json vecs = ordered_json::array();
  for (const TestVector& v : vectors) vecs.push_back(ordered_json{{"id", v.id}, {"length", v.trace.length}});
  doc["vectors"] = vecs;
  ordered_json objs = ordered_json::array();
  for (const ObjectiveStatus& os : report.objectives) {
    ordered_json j;
    j["id"] = block_id(os.block);
    j["kind"] = std::string(to_string(os.kind));
    j["block"] = block_id(os.observed_block);
    if (os.observed_port >= 0) j["port"] = os.observed_port;
    ordered_json targets = ordered_json::array();
    for (const TargetStatus& ts : os.targets) {
      ordered_json t;
      if (os.kind == ObjectiveKind::Combination) {
        t["value"] = ordered_json::array({(ts.bit >> 1) != 0, (ts.bit & 1) != 0});
      } else {
        t["value"] = ts.bit == 1;
      }
      if (ts.witness) {
        t["vector"] = ts.witness->vector < vectors.size() ? vectors[ts.witness->vector].id
                                                          : "v" + std::to_string(ts.witness->vector + 1);
        t["step"] = ts.witness->step;
      } else {
        t["reason"] = std::string(to_string(ts.reason));
      }
      targets.push_back(std::move(t));
    }
    j["targets"] = targets;
    objs.push_back(std::move(j));
  }
  doc["objectives"] = objs;
  return doc.dump(2) + "\n";
}

}  // namespace reqc
