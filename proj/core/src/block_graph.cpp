#include "reqc/block_graph.hpp"

#include <map>

#include "ops.hpp"
#include "reqc/semantics.hpp"

namespace reqc {

std::string_view to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Inport: return "Inport";
    case BlockKind::Constant: return "Constant";
    case BlockKind::Calibration: return "Calibration";
    case BlockKind::Not: return "Not";
    case BlockKind::And: return "And";
    case BlockKind::Or: return "Or";
    case BlockKind::Implies: return "Implies";
    case BlockKind::Add: return "Add";
    case BlockKind::Sub: return "Sub";
    case BlockKind::Mul: return "Mul";
    case BlockKind::Div: return "Div";
    case BlockKind::Neg: return "Neg";
    case BlockKind::Lt: return "Lt";
    case BlockKind::Le: return "Le";
    case BlockKind::Gt: return "Gt";
    case BlockKind::Ge: return "Ge";
    case BlockKind::Eq: return "Eq";
    case BlockKind::Min: return "Min";
    case BlockKind::Max: return "Max";
    case BlockKind::Abs: return "Abs";
    case BlockKind::ExtractBit: return "ExtractBit";
    case BlockKind::DelayN: return "DelayN";
    case BlockKind::DurationCheck: return "DurationCheck";
    case BlockKind::DelayLine: return "DelayLine";
    case BlockKind::Detector: return "Detector";
    case BlockKind::ScopeInitially: return "ScopeInitially";
    case BlockKind::ScopeGlobally: return "ScopeGlobally";
    case BlockKind::ProofObjective: return "ProofObjective";
    case BlockKind::TestObjective: return "TestObjective";
  }
  return "?";
}

std::string_view to_string(DetectorMode m) {
  return m == DetectorMode::Sliding ? "sliding" : "restart_after_pulse";
}

std::string_view to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::Decision: return "decision";
    case ObjectiveKind::Condition: return "condition";
    case ObjectiveKind::Timing: return "timing";
    case ObjectiveKind::Combination: return "combination";
  }
  return "?";
}

std::string block_id(int index) { return "b" + std::to_string(index); }

int BlockGraph::add(Block b) {
  blocks.push_back(std::move(b));
  return static_cast<int>(blocks.size()) - 1;
}

std::vector<Wire> BlockGraph::wires() const {
  std::vector<Wire> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t p = 0; p < blocks[i].inputs.size(); ++p) {
      out.push_back({blocks[i].inputs[p], static_cast<int>(i), static_cast<int>(p)});
    }
  }
  return out;
}

std::int64_t BlockGraph::anchor_of(std::int64_t step) const {
  return invariant ? step : step - shift + 1;
}

namespace {

BlockKind kind_of(Op op) {
  switch (op) {
    case Op::Not: return BlockKind::Not;
    case Op::And: return BlockKind::And;
    case Op::Or: return BlockKind::Or;
    case Op::Implies: return BlockKind::Implies;
    case Op::Eq: return BlockKind::Eq;
    case Op::Lt: return BlockKind::Lt;
    case Op::Le: return BlockKind::Le;
    case Op::Gt: return BlockKind::Gt;
    case Op::Ge: return BlockKind::Ge;
    case Op::Add: return BlockKind::Add;
    case Op::Sub: return BlockKind::Sub;
    case Op::Mul: return BlockKind::Mul;
    case Op::Div: return BlockKind::Div;
    case Op::Neg: return BlockKind::Neg;
    case Op::Abs: return BlockKind::Abs;
    case Op::Min: return BlockKind::Min;
    case Op::Max: return BlockKind::Max;
    case Op::ExtractBit: return BlockKind::ExtractBit;
    default: return BlockKind::Constant;
  }
}

Op op_of(BlockKind k) {
  switch (k) {
    case BlockKind::Not: return Op::Not;
    case BlockKind::And: return Op::And;
    case BlockKind::Or: return Op::Or;
    case BlockKind::Implies: return Op::Implies;
    case BlockKind::Eq: return Op::Eq;
    case BlockKind::Lt: return Op::Lt;
    case BlockKind::Le: return Op::Le;
    case BlockKind::Gt: return Op::Gt;
    case BlockKind::Ge: return Op::Ge;
    case BlockKind::Add: return Op::Add;
    case BlockKind::Sub: return Op::Sub;
    case BlockKind::Mul: return Op::Mul;
    case BlockKind::Div: return Op::Div;
    case BlockKind::Neg: return Op::Neg;
    case BlockKind::Abs: return Op::Abs;
    case BlockKind::Min: return Op::Min;
    case BlockKind::Max: return Op::Max;
    case BlockKind::ExtractBit: return Op::ExtractBit;
    default: return Op::BoolConst;
  }
}

bool is_operator(BlockKind k) { return op_of(k) != Op::BoolConst; }

ScalarType result_type(Op op, ScalarType a, ScalarType b) {
  switch (op) {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Eq:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::ExtractBit:
      return ScalarType::Bool;
    case Op::Neg:
    case Op::Abs:
      return a;
    default:
      return a == ScalarType::Int && b == ScalarType::Int ? ScalarType::Int : ScalarType::Float;
  }
}

class Builder {
 public:
  Builder(BlockGraph& g, const VariableDictionary& dict) : g_(g), dict_(dict) {}

  int event(const Expr& e, const std::string& role) {
    switch (e.op) {
      case Op::BoolConst:
      case Op::IntConst:
      case Op::FloatConst: {
        Block b;
        b.kind = BlockKind::Constant;
        b.value = e.literal;
        b.type = e.literal.type();
        b.role = role;
        return g_.add(std::move(b));
      }
      case Op::Var:
        return variable(e.name);
      case Op::Plus:
        return event(e.args[0], role);
      case Op::LastUnary:
      case Op::LastN: {
        int in = event(e.args[0], role);
        Block b;
        b.kind = BlockKind::DelayN;
        b.inputs = {in};
        b.n = e.op == Op::LastN ? e.steps : 1;
        b.type = g_.blocks[static_cast<std::size_t>(in)].type;
        try {
          b.value = eval_prehistory(e.args[0], Trace{}, dict_);
        } catch (const EvalError&) {
          b.value = Value::zero(b.type);
        }
        b.role = role;
        return g_.add(std::move(b));
      }
      default:
        break;
    }
    Block b;
    b.kind = kind_of(e.op);
    for (const Expr& a : e.args) b.inputs.push_back(event(a, role));
    ScalarType ta = g_.blocks[static_cast<std::size_t>(b.inputs[0])].type;
    ScalarType tb = b.inputs.size() > 1 ? g_.blocks[static_cast<std::size_t>(b.inputs[1])].type : ta;
    b.type = result_type(e.op, ta, tb);
    b.role = role;
    return g_.add(std::move(b));
  }

 private:
  int variable(const std::string& name) {
    if (auto it = seen_.find(name); it != seen_.end()) return it->second;
    const VariableDecl* d = dict_.find(name);
    Block b;
    b.name = name;
    b.type = d ? d->data_type : ScalarType::Bool;
    if (d && d->kind == VariableKind::Constant) {
      b.kind = BlockKind::Constant;
      b.value = d->default_value();
    } else if (d && d->kind == VariableKind::Calibratable) {
      b.kind = BlockKind::Calibration;
      b.value = d->default_value();
    } else {
      b.kind = BlockKind::Inport;
    }
    int id = g_.add(std::move(b));
    seen_.emplace(name, id);
    if (g_.blocks[static_cast<std::size_t>(id)].kind != BlockKind::Constant) g_.entries.emplace_back(name, id);
    return id;
  }

  BlockGraph& g_;
  const VariableDictionary& dict_;
  std::map<std::string, int> seen_;
};

Block make(BlockKind kind, std::vector<int> inputs, std::string role = "") {
  Block b;
  b.kind = kind;
  b.inputs = std::move(inputs);
  b.type = ScalarType::Bool;
  b.role = std::move(role);
  return b;
}

}  // namespace

BlockGraph build_graph(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                       const BuildOptions& opts) {
  BlockGraph g;
  g.requirement_id = req.id;
  g.scope = req.scope;
  g.invariant = req.is_invariant();
  Builder builder(g, dict);

  int pattern = -1;
  if (req.is_invariant()) {
    pattern = builder.event(req.invariant().event, "event");
  } else {
    NormalizedResponse nr = normalize(req.response(), cfg);
    g.shift = nr.shift();
    int p = builder.event(nr.trigger, "trigger");
    Block dcp = make(BlockKind::DurationCheck, {p}, "trigger");
    dcp.n = nr.t_p;
    int dcp_id = g.add(std::move(dcp));
    Block dl = make(BlockKind::DelayLine, {dcp_id}, "pattern");
    dl.n = nr.t_d + nr.t_q;
    dl.value = Value::boolean(false);
    int dl_id = g.add(std::move(dl));
    int q = builder.event(nr.response, "response");
    Block dcq = make(BlockKind::DurationCheck, {q}, "response");
    dcq.n = nr.t_q;
    int dcq_id = g.add(std::move(dcq));
    pattern = g.add(make(BlockKind::Implies, {dl_id, dcq_id}, "pattern"));
  }

  int scoped = -1;
  if (req.scope == Scope::Globally) {
    Block s = make(BlockKind::ScopeGlobally, {pattern}, "scope");
    s.n = g.invariant ? 1 : g.shift;
    scoped = g.add(std::move(s));
  } else {
    Block c = make(BlockKind::Constant, {}, "scope");
    c.value = Value::boolean(false);
    int c_id = g.add(std::move(c));
    Block delay = make(BlockKind::DelayN, {c_id}, "scope");
    delay.n = 1;
    delay.value = Value::boolean(true);
    delay.explicit_initial = true;
    int delay_id = g.add(std::move(delay));
    Block det = make(BlockKind::Detector, {delay_id}, "scope");
    det.n = 1;
    det.d = g.invariant ? 0 : g.shift - 1;
    det.o = 1;
    det.mode = opts.detector_mode;
    int det_id = g.add(std::move(det));
    int imp = g.add(make(BlockKind::Implies, {det_id, pattern}, "scope"));
    scoped = g.add(make(BlockKind::ScopeInitially, {imp}, "scope"));
  }
  g.proof_objectives.push_back(g.add(make(BlockKind::ProofObjective, {scoped}, "scope")));
  return g;
}

namespace {

struct DetectorState {
  std::int64_t run = 0;
  std::int64_t pulse_start = 0;
  std::int64_t busy_until = -1;
  std::vector<std::int64_t> detections;  // Sliding: prefix count of detection steps
};

class Simulator {
 public:
  Simulator(const BlockGraph& g, const Trace& trace, const VariableDictionary& dict)
      : g_(g), trace_(trace), dict_(dict), prepass_(g.blocks.size()), prepass_done_(g.blocks.size(), false) {}

  SimResult run() {
    SimResult r;
    r.steps = trace_.length;
    r.width = g_.blocks.size();
    r.outputs.resize(r.steps * r.width);
    bind();
    std::vector<std::int64_t> runs(g_.blocks.size(), 0);
    std::vector<DetectorState> detectors(g_.blocks.size());
    std::vector<Value> delay_init(g_.blocks.size());
    for (std::size_t i = 0; i < g_.blocks.size(); ++i) {
      const Block& b = g_.blocks[i];
      if (b.kind == BlockKind::DelayN) delay_init[i] = b.explicit_initial ? b.value : prehistory(b.inputs[0]);
      if (b.kind == BlockKind::Detector && b.mode == DetectorMode::Sliding) {
        detectors[i].detections.assign(r.steps + 1, 0);
      }
    }
    Value buf[2];
    for (std::size_t t = 0; t < r.steps; ++t) {
      Value* row = &r.outputs[t * r.width];
      const auto st = static_cast<std::int64_t>(t);
      for (std::size_t i = 0; i < g_.blocks.size(); ++i) {
        const Block& b = g_.blocks[i];
        auto in = [&](std::size_t p) -> const Value& { return row[b.inputs[p]]; };
        switch (b.kind) {
          case BlockKind::Inport:
          case BlockKind::Calibration:
            row[i] = columns_[i] ? (*columns_[i])[t] : b.value;
            break;
          case BlockKind::Constant:
            row[i] = b.value;
            break;
          case BlockKind::DelayN:
            row[i] = st >= b.n ? r.outputs[(t - static_cast<std::size_t>(b.n)) * r.width +
                                           static_cast<std::size_t>(b.inputs[0])]
                               : delay_init[i];
            break;
          case BlockKind::DelayLine:
            row[i] = st >= b.n ? r.outputs[(t - static_cast<std::size_t>(b.n)) * r.width +
                                           static_cast<std::size_t>(b.inputs[0])]
                               : Value::boolean(false);
            break;
          case BlockKind::DurationCheck: {
            std::int64_t& run = runs[i];
            run = in(0).as_bool() ? std::min(run + 1, b.n) : 0;
            row[i] = Value::boolean(run >= b.n);
            break;
          }
          case BlockKind::Detector:
            row[i] = Value::boolean(detector(b, detectors[i], in(0).as_bool(), st));
            break;
          case BlockKind::ScopeGlobally:
            row[i] = st < b.n ? Value::boolean(true) : in(0);
            break;
          case BlockKind::ScopeInitially:
          case BlockKind::ProofObjective:
          case BlockKind::TestObjective:
            row[i] = in(0);
            break;
          default:
            for (std::size_t p = 0; p < b.inputs.size(); ++p) buf[p] = in(p);
            row[i] = apply(i, buf, st);
            break;
        }
      }
    }
    return r;
  }

 private:
  void bind() {
    columns_.assign(g_.blocks.size(), nullptr);
    for (std::size_t i = 0; i < g_.blocks.size(); ++i) {
      const Block& b = g_.blocks[i];
      if (b.kind != BlockKind::Inport && b.kind != BlockKind::Calibration) continue;
      columns_[i] = trace_.find(b.name);
      if (!columns_[i] && b.kind == BlockKind::Inport) {
        throw EvalError(0, block_id(static_cast<int>(i)), "inport '" + b.name + "' is not bound to a trace column");
      }
    }
  }

  Value apply(std::size_t i, const Value* args, std::int64_t t) const {
    try {
      return ops::apply(op_of(g_.blocks[i].kind), args);
    } catch (const ops::Fault& f) {
      throw EvalError(t, block_id(static_cast<int>(i)) + " (" + std::string(to_string(g_.blocks[i].kind)) + ")",
                      f.what());
    }
  }

  // Output of block `i` in the environment before step 0.
  Value prehistory(int i) {
    auto idx = static_cast<std::size_t>(i);
    if (prepass_done_[idx]) return prepass_[idx];
    const Block& b = g_.blocks[idx];
    Value v;
    switch (b.kind) {
      case BlockKind::Inport: {
        const VariableDecl* d = dict_.find(b.name);
        v = d ? d->initial_value() : Value::zero(b.type);
        break;
      }
      case BlockKind::Calibration:
        v = columns_[idx] && !columns_[idx]->empty() ? columns_[idx]->front() : b.value;
        break;
      case BlockKind::Constant:
        v = b.value;
        break;
      case BlockKind::DelayN:
        v = b.explicit_initial ? b.value : prehistory(b.inputs[0]);
        break;
      default:
        if (is_operator(b.kind)) {
          Value buf[2];
          for (std::size_t p = 0; p < b.inputs.size(); ++p) buf[p] = prehistory(b.inputs[p]);
          v = apply(idx, buf, -1);
        } else {
          v = Value::boolean(false);
        }
        break;
    }
    prepass_[idx] = v;
    prepass_done_[idx] = true;
    return v;
  }

  static bool detector(const Block& b, DetectorState& s, bool input, std::int64_t t) {
    if (b.mode == DetectorMode::Sliding) {
      s.run = input ? std::min(s.run + 1, b.n) : 0;
      auto ut = static_cast<std::size_t>(t);
      s.detections[ut + 1] = s.detections[ut] + (s.run >= b.n ? 1 : 0);
      std::int64_t lo = std::max<std::int64_t>(t - b.d - b.o + 1, 0);
      std::int64_t hi = t - b.d;
      if (hi < lo) return false;
      return s.detections[static_cast<std::size_t>(hi + 1)] - s.detections[static_cast<std::size_t>(lo)] > 0;
    }
    if (t <= s.busy_until) {
      bool out = t >= s.pulse_start;
      if (t == s.busy_until) s.run = 0;
      return out;
    }
    s.run = input ? s.run + 1 : 0;
    if (s.run < b.n) return false;
    s.run = 0;
    s.pulse_start = t + b.d;
    s.busy_until = t + b.d + b.o - 1;
    return b.d == 0 && b.o >= 1;
  }

  const BlockGraph& g_;
  const Trace& trace_;
  const VariableDictionary& dict_;
  std::vector<const std::vector<Value>*> columns_;
  std::vector<Value> prepass_;
  std::vector<bool> prepass_done_;
};

}  // namespace

SimResult simulate(const BlockGraph& g, const Trace& trace, const VariableDictionary& dict) {
  return Simulator(g, trace, dict).run();
}

std::vector<std::int64_t> violations_of(const BlockGraph& g, const SimResult& sim) {
  std::vector<std::int64_t> out;
  for (std::size_t t = 0; t < sim.steps; ++t) {
    for (int po : g.proof_objectives) {
      if (!sim.at(t, po).as_bool()) {
        out.push_back(static_cast<std::int64_t>(t));
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> validate(const BlockGraph& g) {
  std::vector<std::string> out;
  auto problem = [&](std::size_t i, const std::string& msg) {
    out.push_back(block_id(static_cast<int>(i)) + " (" + std::string(to_string(g.blocks[i].kind)) + "): " + msg);
  };
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const Block& b = g.blocks[i];
    std::size_t want = 0;
    switch (b.kind) {
      case BlockKind::Inport:
      case BlockKind::Constant:
      case BlockKind::Calibration:
        want = 0;
        break;
      case BlockKind::Not:
      case BlockKind::Neg:
      case BlockKind::Abs:
      case BlockKind::DelayN:
      case BlockKind::DurationCheck:
      case BlockKind::DelayLine:
      case BlockKind::Detector:
      case BlockKind::ScopeInitially:
      case BlockKind::ScopeGlobally:
      case BlockKind::ProofObjective:
        want = 1;
        break;
      case BlockKind::TestObjective:
        want = b.objective == ObjectiveKind::Combination ? 2 : 1;
        break;
      default:
        want = 2;
        break;
    }
    if (b.inputs.size() != want) {
      problem(i, "has " + std::to_string(b.inputs.size()) + " inputs, expected " + std::to_string(want));
      continue;
    }
    std::vector<ScalarType> in;
    bool order_ok = true;
    for (int src : b.inputs) {
      if (src < 0 || static_cast<std::size_t>(src) >= i) {
        problem(i, "input from " + block_id(src) + " breaks topological order");
        order_ok = false;
        break;
      }
      const BlockKind sk = g.blocks[static_cast<std::size_t>(src)].kind;
      if (sk == BlockKind::ProofObjective || sk == BlockKind::TestObjective) {
        problem(i, "reads from a sink block");
        order_ok = false;
        break;
      }
      in.push_back(g.blocks[static_cast<std::size_t>(src)].type);
    }
    if (!order_ok) continue;
    auto all_bool = [&] {
      for (ScalarType t : in) {
        if (t != ScalarType::Bool) return false;
      }
      return true;
    };
    auto all_numeric = [&] {
      for (ScalarType t : in) {
        if (t == ScalarType::Bool) return false;
      }
      return true;
    };
    switch (b.kind) {
      case BlockKind::Not:
      case BlockKind::And:
      case BlockKind::Or:
      case BlockKind::Implies:
      case BlockKind::DurationCheck:
      case BlockKind::DelayLine:
      case BlockKind::Detector:
      case BlockKind::ScopeInitially:
      case BlockKind::ScopeGlobally:
      case BlockKind::ProofObjective:
      case BlockKind::TestObjective:
        if (!all_bool()) problem(i, "expects bool inputs");
        break;
      case BlockKind::Eq:
        if (!all_bool() && !all_numeric()) problem(i, "compares bool with number");
        break;
      case BlockKind::ExtractBit:
        if (in[0] != ScalarType::Int || in[1] != ScalarType::Int) problem(i, "expects int inputs");
        break;
      case BlockKind::DelayN:
        if (b.n < 1) problem(i, "delay must be at least 1");
        if (b.value.type() != b.type) problem(i, "initial condition has the wrong type");
        break;
      case BlockKind::Inport:
      case BlockKind::Constant:
      case BlockKind::Calibration:
        break;
      default:
        if (!all_numeric()) problem(i, "expects numeric inputs");
        break;
    }
    if (b.kind == BlockKind::DurationCheck && b.n < 1) problem(i, "duration must be at least 1");
    if (b.kind == BlockKind::DelayLine && b.n < 0) problem(i, "delay must not be negative");
    if (b.kind == BlockKind::Detector && (b.n < 1 || b.d < 0 || b.o < 0)) problem(i, "invalid detector parameters");
    if (b.kind == BlockKind::TestObjective && b.targets == 0) problem(i, "has no target values");
  }
  for (int po : g.proof_objectives) {
    if (po < 0 || static_cast<std::size_t>(po) >= g.blocks.size() ||
        g.blocks[static_cast<std::size_t>(po)].kind != BlockKind::ProofObjective) {
      out.push_back("proof objective list names a non-objective block");
    }
  }
  return out;
}

}  // namespace reqc
