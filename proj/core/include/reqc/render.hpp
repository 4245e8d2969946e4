#pragma once

#include <string>

#include "reqc/ast.hpp"

namespace reqc {

/// Textual rendering. With `parenthesize` every non-leaf subterm, the
/// outermost one included, is wrapped in parentheses; without it only the
/// parentheses needed to re-parse to the same tree are emitted. Either way the
/// output parses back to an equal AST.
///
/// Literal nodes are expected to hold non-negative values (as produced by the
/// parser); negative literals render with a leading '-' that reads back as a
/// negation node.
std::string render_event(const Expr& e, bool parenthesize = true);

/// "5 milliseconds", "1 step", "0 steps".
std::string render_duration(const Duration& d);

std::string render_requirement(const Requirement& r, bool parenthesize = true);

}  // namespace reqc
