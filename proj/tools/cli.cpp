#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reqc/block_graph.hpp"
#include "reqc/checker.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/exporters.hpp"
#include "reqc/parser.hpp"
#include "reqc/semantics.hpp"
#include "reqc/testgen.hpp"
#include "reqc/trace.hpp"

namespace reqc::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
}

bool has_suffix(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

DictFormat dict_format_of(const std::string& path) {
  return has_suffix(path, ".csv") ? DictFormat::Csv : DictFormat::Json;
}

// ---- shared options ----

struct Common {
  std::string requirements;
  std::string dictionary;
  std::int64_t step_ms = 10;
  CLI::Option* step_opt = nullptr;
  std::vector<std::string> ids;
  bool all = false;
};

void add_common(CLI::App* cmd, Common& c, bool selection) {
  cmd->add_option("requirements", c.requirements, "Requirements file")->required();
  cmd->add_option("-d,--dict", c.dictionary, "Variable dictionary (.json or .csv)")->required();
  c.step_opt = cmd->add_option("--step-ms", c.step_ms, "Controller step size in milliseconds (default 10)")
                   ->check(CLI::Range(std::int64_t{1}, std::numeric_limits<std::int64_t>::max()));
  if (selection) {
    auto* id = cmd->add_option("--id", c.ids, "Only the requirement(s) with this id");
    cmd->add_flag("--all", c.all, "All requirements (the default)")->excludes(id);
  }
}

struct Loaded {
  std::vector<Requirement> requirements;  // sorted by id, filtered by selection
  VariableDictionary dict;
  bool findings = false;
};

// Reads and parses both inputs, printing diagnostics. Returns nullopt when the
// dictionary is unusable.
std::optional<Loaded> load(const Common& c, std::ostream& err) {
  std::string req_text = read_file(c.requirements);
  std::string dict_text = read_file(c.dictionary);
  Loaded l;
  Parsed<VariableDictionary> dict = load_dictionary(dict_text, dict_format_of(c.dictionary));
  for (const Diagnostic& d : dict.diagnostics) err << format_diagnostic(c.dictionary, d) << "\n";
  if (!dict) return std::nullopt;
  l.dict = std::move(*dict.value);
  RequirementFile rf = parse_requirement_file(req_text);
  for (const Diagnostic& d : rf.diagnostics) err << format_diagnostic(c.requirements, d) << "\n";
  l.findings = has_errors(rf.diagnostics);
  l.requirements = std::move(rf.requirements);
  std::stable_sort(l.requirements.begin(), l.requirements.end(),
                   [](const Requirement& a, const Requirement& b) { return a.id < b.id; });
  if (!c.ids.empty()) {
    std::vector<Requirement> picked;
    for (const std::string& id : c.ids) {
      auto it = std::find_if(l.requirements.begin(), l.requirements.end(),
                             [&](const Requirement& r) { return r.id == id; });
      if (it == l.requirements.end()) throw UsageError("no requirement with id '" + id + "'");
      picked.push_back(*it);
    }
    std::stable_sort(picked.begin(), picked.end(),
                     [](const Requirement& a, const Requirement& b) { return a.id < b.id; });
    l.requirements = std::move(picked);
  }
  return l;
}

// Prints the check diagnostics of `r`; true when it may be processed further.
bool check_one(const Common& c, const Requirement& r, const VariableDictionary& dict, std::ostream& err) {
  CheckOptions opts;
  opts.step = StepConfig{c.step_ms};
  std::vector<Diagnostic> diags = check(r, dict, opts);
  for (const Diagnostic& d : diags) err << format_diagnostic(c.requirements, d) << "\n";
  return !has_errors(diags);
}

std::string join_steps(const std::vector<std::int64_t>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) out += (i ? ", " : "") + std::to_string(steps[i]);
  return out;
}

// ---- check ----

int cmd_check(const Common& c, std::ostream& err) {
  auto l = load(c, err);
  if (!l) return kFindings;
  bool findings = l->findings;
  for (const Requirement& r : l->requirements) findings = !check_one(c, r, l->dict, err) || findings;
  return findings ? kFindings : kOk;
}

// ---- export ----

struct ExportArgs {
  std::string format;
  std::string output = ".";
  bool strict = false;
  int int_bits = 32;
  std::string bool_type = "unsigned char";
  std::string float_type = "double";
  std::string detector_mode = "restart";
};

int cmd_export(const Common& c, const ExportArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<ExportFormat> format = parse_export_format(a.format);
  if (!format) throw UsageError("unknown export format '" + a.format + "'");
  auto l = load(c, err);
  if (!l) return kFindings;
  ExportOptions opts;
  opts.step = StepConfig{c.step_ms};
  opts.widths = CWidths{a.bool_type, a.int_bits, a.float_type};
  opts.build.detector_mode = a.detector_mode == "sliding" ? DetectorMode::Sliding : DetectorMode::RestartAfterPulse;
  bool findings = l->findings;
  for (const Requirement& r : l->requirements) {
    if (!check_one(c, r, l->dict, err)) {
      findings = true;
      continue;
    }
    try {
      ExportBundle b = export_requirement(r, l->dict, *format, opts);
      fs::path path = fs::path(a.output) / (r.id + std::string(file_extension(*format)));
      write_file(path, b.payload);
      out << path.string() << "\n";
    } catch (const InitiallyNotSupported& e) {
      err << format_diagnostic(c.requirements, make_warning("skipped: " + std::string(e.what()), r.loc)) << "\n";
      if (a.strict) findings = true;
    } catch (const Error& e) {
      err << format_diagnostic(c.requirements, make_error(e.what(), r.loc)) << "\n";
      findings = true;
    }
  }
  return findings ? kFindings : kOk;
}

// ---- eval ----

struct EvalArgs {
  std::string trace;
  std::string form = "future";
};

void print_verdict(const std::string& label, const Verdict& v, std::ostream& out) {
  out << label << ": " << to_string(v.status);
  if (v.pending > 0) out << " (" << v.pending << " pending)";
  out << "\n";
  for (const Violation& x : v.violations) {
    out << "  anchor " << x.anchor_step << ", step " << x.check_step;
    if (!x.explanation.empty()) out << ": " << x.explanation;
    out << "\n";
  }
}

bool same_instances(const Verdict& a, const Verdict& b) {
  if (a.status != b.status || a.pending != b.pending || a.violations.size() != b.violations.size()) return false;
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    if (a.violations[i].anchor_step != b.violations[i].anchor_step) return false;
  }
  return true;
}

int cmd_eval(Common c, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.form != "future" && a.form != "past" && a.form != "both" && a.form != "blocks") {
    throw UsageError("unknown form '" + a.form + "'");
  }
  auto l = load(c, err);
  if (!l) return kFindings;
  std::string text = read_file(a.trace);
  Parsed<Trace> trace = load_trace(text, has_suffix(a.trace, ".json") ? TraceFormat::Json : TraceFormat::Csv, l->dict);
  for (const Diagnostic& d : trace.diagnostics) err << format_diagnostic(a.trace, d) << "\n";
  if (!trace) throw UsageError("trace '" + a.trace + "' does not match the dictionary");
  if (trace.value->step_ms > 0) {
    if (c.step_opt->count() > 0 && c.step_ms != trace.value->step_ms) {
      throw UsageError("trace step of " + std::to_string(trace.value->step_ms) + " ms conflicts with --step-ms " +
                       std::to_string(c.step_ms));
    }
    c.step_ms = trace.value->step_ms;
  }
  const StepConfig cfg{c.step_ms};
  bool findings = l->findings;
  for (const Requirement& r : l->requirements) {
    if (!check_one(c, r, l->dict, err)) {
      findings = true;
      continue;
    }
    try {
      if (a.form == "blocks") {
        BlockGraph g = build_graph(r, l->dict, cfg);
        std::vector<std::int64_t> steps = violations_of(g, simulate(g, *trace.value, l->dict));
        out << r.id << ": " << (steps.empty() ? "pass" : "fail") << "\n";
        if (!steps.empty()) out << "  proof objective false at steps " << join_steps(steps) << "\n";
        findings = findings || !steps.empty();
        continue;
      }
      Verdict v = evaluate(r, *trace.value, l->dict, cfg, a.form == "past" ? Form::Past : Form::Future);
      print_verdict(r.id, v, out);
      findings = findings || v.status == Status::Fail;
      if (a.form == "both") {
        Verdict p = evaluate(r, *trace.value, l->dict, cfg, Form::Past);
        if (!same_instances(v, p)) {
          print_verdict(r.id + " (past form)", p, out);
          err << format_diagnostic(c.requirements,
                                   make_error("future and past forms disagree on requirement " + r.id, r.loc))
              << "\n";
          findings = true;
        }
      }
    } catch (const Error& e) {
      err << format_diagnostic(c.requirements, make_error(r.id + ": " + e.what(), r.loc)) << "\n";
      findings = true;
    }
  }
  return findings ? kFindings : kOk;
}

// ---- testgen ----

struct TestgenArgs {
  std::int64_t horizon = 20;
  std::uint64_t seed = 1;
  CLI::Option* seed_opt = nullptr;
  std::int64_t budget = 5000;
  std::string output = ".";
  bool allow_partial = false;
  bool include_timing = false;
  bool combinations = false;
  bool search_calibrations = false;
};

int cmd_testgen(const Common& c, TestgenArgs a, std::ostream& out, std::ostream& err) {
  if (a.seed_opt->count() == 0) {
    if (const char* env = std::getenv("REQC_SEED")) {
      try {
        std::size_t used = 0;
        a.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw UsageError("REQC_SEED must be an unsigned integer, got '" + std::string(env) + "'");
      }
    }
  }
  auto l = load(c, err);
  if (!l) return kFindings;
  const StepConfig cfg{c.step_ms};
  GenerateOptions go;
  go.horizon = a.horizon;
  go.budget = a.budget;
  go.seed = a.seed;
  go.include_timing = a.include_timing;
  go.search_calibrations = a.search_calibrations;
  go.step_ms = c.step_ms;
  AnnotateOptions ao;
  ao.combinations = a.combinations;
  bool findings = l->findings;
  bool usage = false;
  for (const Requirement& r : l->requirements) {
    if (!check_one(c, r, l->dict, err)) {
      findings = true;
      continue;
    }
    BlockGraph g = annotate(build_graph(r, l->dict, cfg), ao);
    GenerateResult res;
    try {
      res = generate(g, l->dict, go);
    } catch (const EvalError&) {
      throw;
    } catch (const Error& e) {
      err << format_diagnostic(c.requirements, make_error(r.id + ": " + e.what(), r.loc)) << "\n";
      usage = true;
      continue;
    }
    fs::path dir(a.output);
    for (const TestVector& v : res.vectors) {
      write_file(dir / (r.id + "." + v.id + ".csv"), serialize_trace(simulation_trace(v), TraceFormat::Csv));
    }
    write_file(dir / (r.id + ".coverage.json"), coverage_report_json(res.report, res.vectors));
    const CoverageReport& rep = res.report;
    std::size_t total = rep.decision.targets + rep.condition.targets + rep.combination.targets;
    std::size_t sat = rep.decision.satisfied + rep.condition.satisfied + rep.combination.satisfied;
    if (rep.include_timing) {
      total += rep.timing.targets;
      sat += rep.timing.satisfied;
    }
    std::ostringstream pct;
    pct.setf(std::ios::fixed);
    pct.precision(1);
    pct << rep.percentage;
    out << r.id << ": " << pct.str() << "% (" << sat << "/" << total << " targets, " << res.vectors.size()
        << (res.vectors.size() == 1 ? " vector)\n" : " vectors)\n");
    if (!rep.complete() && !a.allow_partial) findings = true;
  }
  if (usage) return kUsage;
  return findings ? kFindings : kOk;
}

// ---- dict ----

int cmd_dict_validate(const std::string& path, std::ostream& err) {
  Parsed<VariableDictionary> d = load_dictionary(read_file(path), dict_format_of(path));
  for (const Diagnostic& x : d.diagnostics) err << format_diagnostic(path, x) << "\n";
  return d ? kOk : kFindings;
}

int cmd_dict_convert(const std::string& path, const std::string& to, const std::string& output, std::ostream& out,
                     std::ostream& err) {
  Parsed<VariableDictionary> d = load_dictionary(read_file(path), dict_format_of(path));
  for (const Diagnostic& x : d.diagnostics) err << format_diagnostic(path, x) << "\n";
  if (!d) return kFindings;
  std::string text = serialize_dictionary(*d.value, to == "csv" ? DictFormat::Csv : DictFormat::Json);
  if (output.empty()) {
    out << text;
  } else {
    write_file(output, text);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"reqc: compile, check, evaluate, export and test pattern-based requirements", "reqc"};
  app.set_version_flag("--version", "reqc 0.1.0");
  app.set_config("--config", "reqc.toml", "Read option defaults from a TOML file");
  app.require_subcommand(1);

  Common check_c;
  auto* check_cmd = app.add_subcommand("check", "Parse and check requirements against a dictionary");
  add_common(check_cmd, check_c, true);

  Common export_c;
  ExportArgs export_a;
  auto* export_cmd = app.add_subcommand("export", "Export requirements to a downstream format");
  add_common(export_cmd, export_c, true);
  export_cmd->add_option("-f,--format", export_a.format, "text, matlab, spec-xml, c or block-json")->required();
  export_cmd->add_option("-o,--output", export_a.output, "Output directory");
  export_cmd->add_flag("--strict", export_a.strict, "Treat skipped requirements as findings");
  export_cmd->add_option("--int-bits", export_a.int_bits, "C width of int variables")
      ->check(CLI::IsMember({8, 16, 32, 64}));
  export_cmd->add_option("--bool-type", export_a.bool_type, "C type of bool variables")
      ->check(CLI::IsMember({"unsigned char", "_Bool", "int"}));
  export_cmd->add_option("--float-type", export_a.float_type, "C type of float variables")
      ->check(CLI::IsMember({"double", "float"}));
  export_cmd->add_option("--detector-mode", export_a.detector_mode, "restart or sliding")
      ->check(CLI::IsMember({"restart", "sliding"}));

  Common eval_c;
  EvalArgs eval_a;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate requirements on a trace");
  add_common(eval_cmd, eval_c, true);
  eval_cmd->add_option("-t,--trace", eval_a.trace, "Trace file (.csv or .json)")->required();
  eval_cmd->add_option("--form", eval_a.form, "future, past, both or blocks");

  Common tg_c;
  TestgenArgs tg_a;
  auto* tg_cmd = app.add_subcommand("testgen", "Generate test vectors for condition/decision coverage");
  add_common(tg_cmd, tg_c, true);
  tg_cmd->add_option("--horizon", tg_a.horizon, "Vector length bound in steps")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 20));
  tg_a.seed_opt = tg_cmd->add_option("--seed", tg_a.seed, "Search seed (falls back to REQC_SEED, then 1)");
  tg_cmd->add_option("--budget", tg_a.budget, "Random search attempts")
      ->check(CLI::Range(std::int64_t{0}, std::numeric_limits<std::int64_t>::max()));
  tg_cmd->add_option("-o,--output", tg_a.output, "Output directory");
  tg_cmd->add_flag("--allow-partial", tg_a.allow_partial, "Exit 0 even when coverage is incomplete");
  tg_cmd->add_flag("--include-timing", tg_a.include_timing, "Count timing objectives in the percentage");
  tg_cmd->add_flag("--combinations", tg_a.combinations, "Add all-combination objectives to logic blocks");
  tg_cmd->add_flag("--search-calibrations", tg_a.search_calibrations, "Search calibration values per vector");

  auto* dict_cmd = app.add_subcommand("dict", "Validate or convert a variable dictionary");
  dict_cmd->require_subcommand(1);
  std::string dict_path;
  auto* validate_cmd = dict_cmd->add_subcommand("validate", "Report dictionary problems");
  validate_cmd->add_option("file", dict_path, "Dictionary (.json or .csv)")->required();
  std::string convert_path, convert_to = "json", convert_out;
  auto* convert_cmd = dict_cmd->add_subcommand("convert", "Rewrite a dictionary in canonical form");
  convert_cmd->add_option("file", convert_path, "Dictionary (.json or .csv)")->required();
  convert_cmd->add_option("--to", convert_to, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  convert_cmd->add_option("-o,--output", convert_out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "reqc: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (check_cmd->parsed()) return cmd_check(check_c, err);
    if (export_cmd->parsed()) return cmd_export(export_c, export_a, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval_c, eval_a, out, err);
    if (tg_cmd->parsed()) return cmd_testgen(tg_c, tg_a, out, err);
    if (validate_cmd->parsed()) return cmd_dict_validate(dict_path, err);
    if (convert_cmd->parsed()) return cmd_dict_convert(convert_path, convert_to, convert_out, out, err);
  } catch (const UsageError& e) {
    err << "reqc: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "reqc: " << e.what() << "\n";
    return kFindings;
  }
  return kUsage;
}

}  // namespace reqc::cli
