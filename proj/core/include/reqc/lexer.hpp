#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "reqc/diagnostic.hpp"

namespace reqc {

enum class TokenKind {
  Identifier,
  Integer,
  Float,
  True,
  False,
  Or,
  And,
  Not,
  Implies,
  Plus,
  Minus,
  Times,
  Div,
  Gt,
  Ge,
  Lt,
  Le,
  Eq,
  LPar,
  RPar,
  Comma,
  Of,
  Bit,           // "bit"
  ExtractBit,    // "extractBit"
  Abs,           // "abs"
  AbsText,       // "the absolute value of"
  Min,           // "min"
  MinText,       // "the minimum of"
  Max,           // "max"
  MaxText,       // "the maximum of"
  Last,          // "last"
  LastText,      // "the previous value of"
  ValueOfText,   // "the value of"
  StepsAgo,      // "steps ago"
  End,
};

/// Human-readable token class for "expected ..." lists, e.g. "'and'".
std::string describe(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  SourceLoc loc;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an End token
  std::vector<Diagnostic> diagnostics;
};

/// Tokenize event text. `origin` is the source position of text[0]; token
/// locations are reported relative to it so that events embedded in a larger
/// file carry file positions. Multi-word keywords ("is greater than") match
/// with any whitespace between their words.
LexResult lex_event(std::string_view text, SourceLoc origin = {1, 1});

/// IDENTIFIER rule: a letter, then letters, digits or '_'.
bool matches_identifier_rule(std::string_view s);

/// Words the lexer would not read back as an identifier: single-word keywords
/// plus the leading words of multi-word keywords.
bool is_reserved_word(std::string_view s);

/// matches_identifier_rule && !is_reserved_word.
bool is_valid_identifier(std::string_view s);

}  // namespace reqc
