#include "reqc/exporters.hpp"

#include "json.hpp"
#include "reqc/checker.hpp"
#include "reqc/render.hpp"

namespace reqc {

std::string_view to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::Text: return "text";
    case ExportFormat::MatlabScript: return "matlab_script";
    case ExportFormat::SpecXml: return "spec_xml";
    case ExportFormat::CHarness: return "c_harness";
    case ExportFormat::BlockJson: return "block_json";
  }
  return "?";
}

std::string_view file_extension(ExportFormat f) {
  switch (f) {
    case ExportFormat::Text: return ".txt";
    case ExportFormat::MatlabScript: return ".m";
    case ExportFormat::SpecXml: return ".spec.xml";
    case ExportFormat::CHarness: return ".c";
    case ExportFormat::BlockJson: return ".blocks.json";
  }
  return "";
}

std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "text" || s == "txt") return ExportFormat::Text;
  if (s == "matlab" || s == "matlab_script" || s == "m") return ExportFormat::MatlabScript;
  if (s == "spec-xml" || s == "spec_xml" || s == "spec") return ExportFormat::SpecXml;
  if (s == "c" || s == "c_harness" || s == "c-harness") return ExportFormat::CHarness;
  if (s == "block-json" || s == "block_json" || s == "blocks") return ExportFormat::BlockJson;
  return std::nullopt;
}

namespace {

std::vector<Diagnostic> precheck(const Requirement& req, const VariableDictionary& dict,
                                 const std::optional<StepConfig>& cfg) {
  CheckOptions opts;
  opts.step = cfg;
  std::vector<Diagnostic> diags = check(req, dict, opts);
  for (const Diagnostic& d : diags) {
    if (d.severity == Severity::Error) {
      throw ExportError("requirement " + req.id + " does not check: " + d.message);
    }
  }
  return diags;
}

ExportBundle bundle(const Requirement& req, ExportFormat f, std::string payload, std::vector<Diagnostic> warnings) {
  ExportBundle b;
  b.requirement_id = req.id;
  b.format = f;
  b.payload = std::move(payload);
  b.warnings = std::move(warnings);
  return b;
}

// ---- block JSON ----

std::string type_name(ScalarType t) {
  switch (t) {
    case ScalarType::Bool: return "bool";
    case ScalarType::Int: return "int";
    case ScalarType::Float: return "float";
  }
  return "?";
}

nlohmann::ordered_json value_json(const Value& v) {
  switch (v.type()) {
    case ScalarType::Bool: return v.as_bool();
    case ScalarType::Int: return v.as_int();
    case ScalarType::Float: return v.as_float();
  }
  return nullptr;
}

// ---- matlab ----

std::string quote_m(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string m_value(const Value& v) {
  switch (v.type()) {
    case ScalarType::Bool: return v.as_bool() ? "true" : "false";
    case ScalarType::Int: return "int64(" + std::to_string(v.as_int()) + ")";
    case ScalarType::Float: return format_float(v.as_float());
  }
  return "0";
}

struct LibBlock {
  std::string path;
  std::vector<std::pair<std::string, std::string>> params;  // set_param name/value
  std::vector<std::pair<std::string, std::string>> mask;    // mask prompt/value
};

std::string targets_m(unsigned targets, bool combination) {
  std::string out = "{";
  bool first = true;
  for (unsigned bit = 0; bit < (combination ? 4u : 2u); ++bit) {
    if (!(targets & (1u << bit))) continue;
    if (!first) out += ", ";
    first = false;
    if (combination) {
      out += "[" + std::to_string(bit >> 1) + " " + std::to_string(bit & 1) + "]";
    } else {
      out += std::to_string(bit);
    }
  }
  return out + "}";
}

LibBlock library_block(const BlockGraph& g, const Block& b, int inport_number) {
  const std::string logic = "simulink/Logic and Bit Operations/";
  const std::string math = "simulink/Math Operations/";
  const std::string lib = "reqcSpecLib/";
  auto rel = [&](const char* op) {
    return LibBlock{logic + "Relational Operator", {{"Operator", op}}, {}};
  };
  switch (b.kind) {
    case BlockKind::Inport:
      return {"simulink/Sources/In1", {{"Port", std::to_string(inport_number)}}, {}};
    case BlockKind::Constant:
      return {"simulink/Sources/Constant", {{"Value", m_value(b.value)}}, {}};
    case BlockKind::Calibration:
      return {lib + "Events/Signals and Parameters/calibration parameter", {}, {{"Calibration parameter", b.name}}};
    case BlockKind::Not: return {logic + "Logical Operator", {{"Operator", "NOT"}}, {}};
    case BlockKind::And: return {logic + "Logical Operator", {{"Operator", "AND"}}, {}};
    case BlockKind::Or: return {logic + "Logical Operator", {{"Operator", "OR"}}, {}};
    case BlockKind::Implies: return {lib + "Events/Operators and Functions/Operators/implies", {}, {}};
    case BlockKind::Add: return {math + "Add", {{"Inputs", "++"}}, {}};
    case BlockKind::Sub: return {math + "Add", {{"Inputs", "+-"}}, {}};
    case BlockKind::Mul: return {math + "Product", {{"Inputs", "2"}, {"Multiplication", "Element-wise(.*)"}}, {}};
    case BlockKind::Div: return {math + "Product", {{"Inputs", "*/"}, {"Multiplication", "Element-wise(.*)"}}, {}};
    case BlockKind::Neg: return {math + "Unary Minus", {}, {}};
    case BlockKind::Lt: return rel("<");
    case BlockKind::Le: return rel("<=");
    case BlockKind::Gt: return rel(">");
    case BlockKind::Ge: return rel(">=");
    case BlockKind::Eq: return rel("==");
    case BlockKind::Min: return {math + "MinMax", {{"Function", "min"}, {"Inputs", "2"}}, {}};
    case BlockKind::Max: return {math + "MinMax", {{"Function", "max"}, {"Inputs", "2"}}, {}};
    case BlockKind::Abs: return {math + "Abs", {}, {}};
    case BlockKind::ExtractBit: return {lib + "Events/Operators and Functions/Functions/extractBit", {}, {}};
    case BlockKind::DelayN:
      return {"simulink/Discrete/Delay",
              {{"DelayLength", std::to_string(b.n)}, {"InitialCondition", m_value(b.value)}},
              {}};
    case BlockKind::DurationCheck:
      return {lib + "Patterns/Detector",
              {},
              {{"External reset", "No"},
               {"Time steps for input detection", std::to_string(b.n)},
               {"Time steps for delay (optional)", "0"},
               {"Time steps for output duration", "1"}}};
    case BlockKind::DelayLine:
      return {"simulink/Discrete/Delay", {{"DelayLength", std::to_string(b.n)}, {"InitialCondition", "false"}}, {}};
    case BlockKind::Detector:
      return {lib + "Patterns/Detector",
              {},
              {{"External reset", "No"},
               {"Time steps for input detection", std::to_string(b.n)},
               {"Time steps for delay (optional)", std::to_string(b.d)},
               {"Time steps for output duration", std::to_string(b.o)}}};
    case BlockKind::ScopeInitially: return {lib + "Scopes/initially", {}, {}};
    case BlockKind::ScopeGlobally:
      return {lib + "Scopes/globally", {}, {{"Time shift", std::to_string(b.n)}}};
    case BlockKind::ProofObjective: return {"sldvlib/Objectives and Constraints/Proof Objective", {}, {}};
    case BlockKind::TestObjective:
      return {"sldvlib/Objectives and Constraints/Test Objective",
              {{"outEnabled", "off"},
               {"intervals", targets_m(b.targets, b.objective == ObjectiveKind::Combination)}},
              {}};
  }
  (void)g;
  return {};
}

// ---- spec xml ----

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void xml_event(const Expr& e, int depth, std::string& out) {
  std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
  std::string tag(op_name(e.op));
  switch (e.op) {
    case Op::BoolConst:
      out += ind + "<bool value=\"" + (e.literal.as_bool() ? "true" : "false") + "\"/>\n";
      return;
    case Op::IntConst:
      out += ind + "<int value=\"" + std::to_string(e.literal.as_int()) + "\"/>\n";
      return;
    case Op::FloatConst:
      out += ind + "<float value=\"" + format_float(e.literal.as_float()) + "\"/>\n";
      return;
    case Op::Var:
      out += ind + "<var name=\"" + xml_escape(e.name) + "\"/>\n";
      return;
    case Op::LastN:
      out += ind + "<" + tag + " steps=\"" + std::to_string(e.steps) + "\">\n";
      break;
    default:
      out += ind + "<" + tag + ">\n";
      break;
  }
  for (const Expr& a : e.args) xml_event(a, depth + 1, out);
  out += ind + "</" + tag + ">\n";
}

void xml_duration(const char* tag, std::int64_t steps, const Duration& d, int depth, std::string& out) {
  std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
  out += ind + "<" + tag + " steps=\"" + std::to_string(steps) + "\" magnitude=\"" + std::to_string(d.magnitude) +
         "\" unit=\"" + std::string(to_string(d.unit)) + "\"/>\n";
}

}  // namespace

std::string block_graph_json(const BlockGraph& g) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["requirement"] = g.requirement_id;
  doc["scope"] = std::string(to_string(g.scope));
  doc["pattern"] = g.invariant ? "invariant" : "response";
  doc["shift"] = g.shift;
  ordered_json blocks = ordered_json::array();
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const Block& b = g.blocks[i];
    ordered_json j;
    j["id"] = block_id(static_cast<int>(i));
    j["kind"] = std::string(to_string(b.kind));
    j["type"] = type_name(b.type);
    ordered_json inputs = ordered_json::array();
    for (int in : b.inputs) inputs.push_back(block_id(in));
    j["inputs"] = inputs;
    if (!b.name.empty()) j["name"] = b.name;
    switch (b.kind) {
      case BlockKind::Constant:
      case BlockKind::Calibration:
        j["value"] = value_json(b.value);
        break;
      case BlockKind::DelayN:
        j["n"] = b.n;
        j["initial"] = value_json(b.value);
        if (!b.explicit_initial) j["initial_from_prehistory"] = true;
        break;
      case BlockKind::DurationCheck:
      case BlockKind::DelayLine:
      case BlockKind::ScopeGlobally:
        j["n"] = b.n;
        break;
      case BlockKind::Detector:
        j["n"] = b.n;
        j["d"] = b.d;
        j["o"] = b.o;
        j["mode"] = std::string(to_string(b.mode));
        break;
      case BlockKind::TestObjective: {
        j["objective"] = std::string(to_string(b.objective));
        j["observed_block"] = block_id(b.observed_block);
        if (b.observed_port >= 0) j["observed_port"] = b.observed_port;
        ordered_json targets = ordered_json::array();
        unsigned limit = b.objective == ObjectiveKind::Combination ? 4u : 2u;
        for (unsigned bit = 0; bit < limit; ++bit) {
          if (!(b.targets & (1u << bit))) continue;
          if (b.objective == ObjectiveKind::Combination) {
            targets.push_back(ordered_json::array({(bit >> 1) != 0, (bit & 1) != 0}));
          } else {
            targets.push_back(bit == 1);
          }
        }
        j["targets"] = targets;
        break;
      }
      default:
        break;
    }
    if (!b.role.empty()) j["role"] = b.role;
    blocks.push_back(std::move(j));
  }
  doc["blocks"] = blocks;
  ordered_json wires = ordered_json::array();
  for (const Wire& w : g.wires()) {
    wires.push_back(ordered_json{{"from", block_id(w.source)}, {"to", block_id(w.target)}, {"port", w.port}});
  }
  doc["wires"] = wires;
  ordered_json entries = ordered_json::array();
  for (const auto& [name, id] : g.entries) entries.push_back(ordered_json{{"variable", name}, {"block", block_id(id)}});
  doc["entries"] = entries;
  ordered_json po = ordered_json::array();
  for (int i : g.proof_objectives) po.push_back(block_id(i));
  doc["proof_objectives"] = po;
  ordered_json to = ordered_json::array();
  for (int i : g.test_objectives) to.push_back(block_id(i));
  doc["test_objectives"] = to;
  return doc.dump(2) + "\n";
}

std::string matlab_script(const BlockGraph& g, const Requirement& req) {
  std::string sub = g.requirement_id + "_verification";
  std::string out;
  out += "% Verification subsystem for requirement " + g.requirement_id + "\n";
  out += "% " + render_requirement(req, true) + "\n";
  out += "% Inserted into the current model; inputs are connected by addSubsystemConnection.\n\n";
  out += "model = bdroot;\n";
  out += "sys = [model '/' " + quote_m(sub) + "];\n";
  out += "add_block('built-in/Subsystem', sys);\n\n";

  int inport = 0;
  std::vector<std::string> signals;
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const Block& b = g.blocks[i];
    if (b.kind == BlockKind::Inport) {
      ++inport;
      signals.push_back(b.name);
    }
    LibBlock lb = library_block(g, b, inport);
    std::string path = "[sys '/" + block_id(static_cast<int>(i)) + "']";
    out += "add_block(" + quote_m(lb.path) + ", " + path;
    for (const auto& [k, v] : lb.params) out += ", " + quote_m(k) + ", " + quote_m(v);
    out += ");  % " + std::string(to_string(b.kind));
    if (!b.name.empty()) out += " " + b.name;
    out += "\n";
    for (const auto& [prompt, v] : lb.mask) {
      out += "reqc_set_mask(" + path + ", " + quote_m(prompt) + ", " + quote_m(v) + ");\n";
    }
  }
  out += "\n";
  for (const Wire& w : g.wires()) {
    out += "add_line(sys, '" + block_id(w.source) + "/1', '" + block_id(w.target) + "/" +
           std::to_string(w.port + 1) + "', 'autorouting', 'on');\n";
  }
  out += "\n";
  out += "addSubsystemConnection(model, " + quote_m(sub) + ", {";
  for (std::size_t i = 0; i < signals.size(); ++i) out += (i ? ", " : "") + quote_m(signals[i]);
  out += "});\n\n";
  out += "function reqc_set_mask(blk, prompt, value)\n";
  out += "  prompts = get_param(blk, 'MaskPrompts');\n";
  out += "  names = get_param(blk, 'MaskNames');\n";
  out += "  idx = find(strcmp(prompts, prompt), 1);\n";
  out += "  if isempty(idx)\n";
  out += "    error('reqc:mask', 'block %s has no mask prompt \"%s\"', blk, prompt);\n";
  out += "  end\n";
  out += "  set_param(blk, names{idx}, value);\n";
  out += "end\n";
  return out;
}

ExportBundle export_text(const Requirement& req, const VariableDictionary& dict) {
  auto warnings = precheck(req, dict, std::nullopt);
  return bundle(req, ExportFormat::Text, render_requirement(req, true) + "\n", std::move(warnings));
}

ExportBundle export_matlab_script(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                                  const BuildOptions& opts) {
  auto warnings = precheck(req, dict, cfg);
  BlockGraph g = build_graph(req, dict, cfg, opts);
  return bundle(req, ExportFormat::MatlabScript, matlab_script(g, req), std::move(warnings));
}

ExportBundle export_spec_xml(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg) {
  if (req.scope == Scope::Initially) {
    throw InitiallyNotSupported("requirement " + req.id +
                                ": initially-scoped requirements cannot be exported to spec-xml, the target "
                                "evaluates from the first computation step on");
  }
  auto warnings = precheck(req, dict, cfg);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- BTC-style requirement specification (reqc schema 1, not BTC-compatible) -->\n";
  out += "<specification schema=\"reqc-spec\" version=\"1\" step-ms=\"" + std::to_string(cfg.step_ms) + "\">\n";
  out += "  <requirement id=\"" + xml_escape(req.id) + "\">\n";
  out += "    <text>" + xml_escape(render_requirement(req, true)) + "</text>\n";
  out += "    <scope kind=\"globally\" first-evaluated-step=\"1\"/>\n";
  if (req.is_invariant()) {
    out += "    <pattern kind=\"invariant\">\n";
    out += "      <event>\n";
    xml_event(req.invariant().event, 4, out);
    out += "      </event>\n";
  } else {
    const Response& r = req.response();
    NormalizedResponse nr = normalize(r, cfg);
    out += "    <pattern kind=\"response\">\n";
    out += "      <trigger>\n";
    xml_event(r.trigger, 4, out);
    out += "      </trigger>\n";
    xml_duration("trigger-duration", nr.t_p, r.trigger_duration, 3, out);
    xml_duration("delay", nr.t_d, r.delay, 3, out);
    out += "      <response>\n";
    xml_event(r.response, 4, out);
    out += "      </response>\n";
    xml_duration("response-duration", nr.t_q, r.response_duration, 3, out);
  }
  out += "    </pattern>\n";
  out += "  </requirement>\n";
  out += "</specification>\n";
  return bundle(req, ExportFormat::SpecXml, std::move(out), std::move(warnings));
}

ExportBundle export_c_harness(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                              const CWidths& widths) {
  auto warnings = precheck(req, dict, cfg);
  return bundle(req, ExportFormat::CHarness, print_c_harness(build_c_monitor(req, dict, cfg), widths),
                std::move(warnings));
}

ExportBundle export_block_json(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                               const BuildOptions& opts) {
  auto warnings = precheck(req, dict, cfg);
  return bundle(req, ExportFormat::BlockJson, block_graph_json(build_graph(req, dict, cfg, opts)),
                std::move(warnings));
}

ExportBundle export_requirement(const Requirement& req, const VariableDictionary& dict, ExportFormat format,
                                const ExportOptions& opts) {
  switch (format) {
    case ExportFormat::Text: return export_text(req, dict);
    case ExportFormat::MatlabScript: return export_matlab_script(req, dict, opts.step, opts.build);
    case ExportFormat::SpecXml: return export_spec_xml(req, dict, opts.step);
    case ExportFormat::CHarness: return export_c_harness(req, dict, opts.step, opts.widths);
    case ExportFormat::BlockJson: return export_block_json(req, dict, opts.step, opts.build);
  }
  throw ExportError("unknown export format");
}

}  // namespace reqc
