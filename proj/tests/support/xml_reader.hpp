#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reqc/ast.hpp"

namespace reqc::testing {

struct XmlError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Just enough XML for the files this project writes: declarations and
/// comments are skipped, no DTDs, no CDATA, the five predefined entities.
struct XmlNode {
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::vector<XmlNode> children;
  std::string text;

  const XmlNode& child(std::string_view tag) const;
  const std::string& attr(const std::string& name) const;
};

XmlNode parse_xml(std::string_view text);

/// Reads a spec-xml document back into a requirement (globally scoped).
Requirement import_spec_xml(std::string_view text);

}  // namespace reqc::testing
