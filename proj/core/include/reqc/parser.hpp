#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/diagnostic.hpp"

namespace reqc {

/// Parse one event expression.
///
/// Precedence, loosest first; every binary level folds left:
///
///   implies  =>            (left-associative: a => b => c is (a => b) => c)
///   or       |
///   and      &
///   =        boolean and relational equality share one level
///   < <= > >=              non-associative
///   not                    prefix, operand is a relational expression
///   + -
///   * /
///   unary + -
///   atoms, parentheses, function forms
///
/// Symbolic ('&') and textual ('and') spellings are interchangeable. Textual
/// prefix functions ("the absolute value of") take a whole additive
/// expression as operand. The step count of `last` must be an integer
/// literal. Never throws; failures come back as diagnostics.
Parsed<Expr> parse_event(std::string_view text, SourceLoc origin = {1, 1});

/// Parse one requirement sentence (scope followed by pattern).
Parsed<Requirement> parse_requirement(std::string_view text, SourceLoc origin = {1, 1});

struct RequirementFile {
  std::vector<Requirement> requirements;
  std::vector<Diagnostic> diagnostics;
};

/// Parse a requirements file: one requirement per blank-line separated
/// paragraph, an optional `#id: NAME` line binding the id (default `R<n>`,
/// counting paragraphs from 1) and whole-line `//` comments. Paragraphs that
/// fail to parse are reported and skipped.
RequirementFile parse_requirement_file(std::string_view text);

/// Requirement ids are limited to letters, digits, '_', '-' and '.'.
bool is_valid_requirement_id(std::string_view id);

}  // namespace reqc
