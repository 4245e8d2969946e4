#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/semantics.hpp"
#include "reqc/timing.hpp"
#include "reqc/trace.hpp"
#include "reqc/value.hpp"

namespace reqc {

enum class BlockKind {
  Inport,
  Constant,
  Calibration,
  Not,
  And,
  Or,
  Implies,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Min,
  Max,
  Abs,
  ExtractBit,
  DelayN,
  DurationCheck,
  DelayLine,
  Detector,
  ScopeInitially,
  ScopeGlobally,
  ProofObjective,
  TestObjective,
};

std::string_view to_string(BlockKind k);

/// Detector behaviour when the input stays true while a pulse is scheduled.
enum class DetectorMode {
  RestartAfterPulse,  // input is ignored until the pulse ends, then counting restarts
  Sliding,            // every step completing a detection schedules its own pulse
};

std::string_view to_string(DetectorMode m);

enum class ObjectiveKind { Decision, Condition, Timing, Combination };

std::string_view to_string(ObjectiveKind k);

struct Block {
  BlockKind kind = BlockKind::Constant;
  std::vector<int> inputs;  // source block index per input port
  ScalarType type = ScalarType::Bool;

  std::string name;  // Inport / Calibration variable; Constant: dictionary constant or empty
  Value value;       // Constant value; DelayN initial condition
  /// DelayN only: `value` is used as given instead of being recomputed from
  /// the input's pre-history value at simulation time.
  bool explicit_initial = false;

  // DelayN: n; DurationCheck: n; DelayLine: n; ScopeGlobally: skipped steps;
  // Detector: n = detect_n, d = delay, o = output duration.
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t o = 0;
  DetectorMode mode = DetectorMode::RestartAfterPulse;

  // TestObjective only.
  ObjectiveKind objective = ObjectiveKind::Decision;
  int observed_block = -1;  // block whose output (port -1) or input port is watched
  int observed_port = -1;
  /// Target values as a bit set: bit 0 = false, bit 1 = true. Combination
  /// objectives use bit (2*a + b) for the pair of input values (a, b).
  unsigned targets = 0;

  std::string role;  // optional annotation, e.g. "trigger" or "scope"
};

struct Wire {
  int source = 0;
  int target = 0;
  int port = 0;
};

/// Verification subsystem of one requirement. Blocks are stored in
/// topological order and are addressed by index; the stable id of block i is
/// "b<i>".
struct BlockGraph {
  std::string requirement_id;
  Scope scope = Scope::Globally;
  bool invariant = true;
  std::int64_t shift = 0;  // t_p + t_d + t_q for responses, 0 for invariants

  std::vector<Block> blocks;
  std::vector<std::pair<std::string, int>> entries;  // variable -> Inport/Calibration block
  std::vector<int> proof_objectives;
  std::vector<int> test_objectives;

  std::vector<Wire> wires() const;
  int add(Block b);

  /// Anchor of the instance observed by a proof-objective failure at `step`.
  std::int64_t anchor_of(std::int64_t step) const;
};

std::string block_id(int index);

struct BuildOptions {
  DetectorMode detector_mode = DetectorMode::RestartAfterPulse;
};

/// Lowers a checked requirement. One operator block per AST node (unary plus
/// is a plain wire); one entry block per referenced variable. Throws
/// DurationError when durations cannot be normalized.
BlockGraph build_graph(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                       const BuildOptions& opts = {});

struct SimResult {
  std::size_t steps = 0;
  std::size_t width = 0;
  std::vector<Value> outputs;  // steps * width, row-major by step

  const Value& at(std::size_t step, int block) const { return outputs[step * width + static_cast<std::size_t>(block)]; }
};

/// Step-synchronous simulation over the whole trace. Sinks (proof and test
/// objectives) carry their first input as output. Throws EvalError on
/// arithmetic faults or unbound entries.
SimResult simulate(const BlockGraph& g, const Trace& trace, const VariableDictionary& dict);

/// Ascending steps at which some proof objective sees false.
std::vector<std::int64_t> violations_of(const BlockGraph& g, const SimResult& sim);

/// Checks the structural invariants (topological order, port counts, port
/// types, parameter ranges). Returns human-readable problems; empty when fine.
std::vector<std::string> validate(const BlockGraph& g);

}  // namespace reqc
