#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/block_graph.hpp"
#include "reqc/c_monitor.hpp"
#include "reqc/diagnostic.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/export_error.hpp"
#include "reqc/timing.hpp"

namespace reqc {

enum class ExportFormat { Text, MatlabScript, SpecXml, CHarness, BlockJson };

/// "text", "matlab_script", "spec_xml", "c_harness", "block_json".
std::string_view to_string(ExportFormat f);

/// ".txt", ".m", ".spec.xml", ".c", ".blocks.json".
std::string_view file_extension(ExportFormat f);

/// Accepts the names above and the short command-line spellings
/// text, matlab, spec-xml, c, block-json.
std::optional<ExportFormat> parse_export_format(std::string_view s);

struct ExportBundle {
  std::string requirement_id;
  ExportFormat format = ExportFormat::Text;
  std::string payload;
  std::vector<Diagnostic> warnings;
};

struct ExportOptions {
  StepConfig step;
  CWidths widths;
  BuildOptions build;
};

// Every exporter re-checks the requirement and throws ExportError when the
// check reports errors; checker warnings are carried in the bundle.

ExportBundle export_text(const Requirement& req, const VariableDictionary& dict);

ExportBundle export_matlab_script(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                                  const BuildOptions& opts = {});

/// Throws InitiallyNotSupported for Initially-scoped requirements.
ExportBundle export_spec_xml(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg);

ExportBundle export_c_harness(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                              const CWidths& widths = {});

ExportBundle export_block_json(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg,
                               const BuildOptions& opts = {});

ExportBundle export_requirement(const Requirement& req, const VariableDictionary& dict, ExportFormat format,
                                const ExportOptions& opts = {});

/// Block graph as JSON (the .blocks.json payload).
std::string block_graph_json(const BlockGraph& g);

/// Block graph as a model-construction script (the .m payload).
std::string matlab_script(const BlockGraph& g, const Requirement& req);

}  // namespace reqc
