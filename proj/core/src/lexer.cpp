#include "reqc/lexer.hpp"

#include <array>
#include <charconv>
#include <cstdint>

namespace reqc {

namespace {

struct Phrase {
  std::array<std::string_view, 5> words;
  TokenKind kind;
};

// Longer phrases sharing a first word come first so the first full match is
// the longest one.
constexpr Phrase kPhrases[] = {
    {{"is", "greater", "or", "equal", "to"}, TokenKind::Ge},
    {{"is", "greater", "than"}, TokenKind::Gt},
    {{"is", "less", "or", "equal", "to"}, TokenKind::Le},
    {{"is", "less", "than"}, TokenKind::Lt},
    {{"is", "equal", "to"}, TokenKind::Eq},
    {{"multiplied", "with"}, TokenKind::Times},
    {{"divided", "by"}, TokenKind::Div},
    {{"left", "parenthesis"}, TokenKind::LPar},
    {{"right", "parenthesis"}, TokenKind::RPar},
    {{"the", "absolute", "value", "of"}, TokenKind::AbsText},
    {{"the", "minimum", "of"}, TokenKind::MinText},
    {{"the", "maximum", "of"}, TokenKind::MaxText},
    {{"the", "previous", "value", "of"}, TokenKind::LastText},
    {{"the", "value", "of"}, TokenKind::ValueOfText},
    {{"steps", "ago"}, TokenKind::StepsAgo},
};

struct Keyword {
  std::string_view word;
  TokenKind kind;
};

constexpr Keyword kKeywords[] = {
    {"TRUE", TokenKind::True},   {"True", TokenKind::True},     {"true", TokenKind::True},
    {"FALSE", TokenKind::False}, {"False", TokenKind::False},   {"false", TokenKind::False},
    {"or", TokenKind::Or},       {"and", TokenKind::And},       {"not", TokenKind::Not},
    {"implies", TokenKind::Implies},
    {"plus", TokenKind::Plus},   {"minus", TokenKind::Minus},   {"of", TokenKind::Of},
    {"bit", TokenKind::Bit},     {"extractBit", TokenKind::ExtractBit},
    {"abs", TokenKind::Abs},     {"min", TokenKind::Min},       {"max", TokenKind::Max},
    {"last", TokenKind::Last},
};

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word_char(char c) { return is_letter(c) || is_digit(c) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::size_t word_count(const Phrase& p) {
  std::size_t n = 0;
  while (n < p.words.size() && !p.words[n].empty()) ++n;
  return n;
}

class Lexer {
 public:
  Lexer(std::string_view text, SourceLoc origin) : text_(text), line_(origin.line), col_(origin.column) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      SourceLoc loc = here();
      char c = text_[pos_];
      if (is_letter(c)) {
        out.tokens.push_back(word_token(loc));
      } else if (is_digit(c)) {
        number_token(loc, out);
      } else if (!symbol_token(loc, out)) {
        std::string msg = "unexpected character '";
        if (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f) {
          msg += c;
        } else {
          static constexpr char hex[] = "0123456789abcdef";
          msg += "\\x";
          msg += hex[(static_cast<unsigned char>(c) >> 4) & 0xf];
          msg += hex[static_cast<unsigned char>(c) & 0xf];
        }
        msg += "'";
        out.diagnostics.push_back(make_error(std::move(msg), loc));
        advance(1);
      }
    }
    out.tokens.push_back(Token{TokenKind::End, text_.substr(text_.size()), here()});
    return out;
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) advance(1);
  }

  std::size_t word_end(std::size_t from) const {
    std::size_t end = from;
    while (end < text_.size() && is_word_char(text_[end])) ++end;
    return end;
  }

  // Tries to match phrase `p` at pos_; returns the end offset or 0.
  std::size_t match_phrase(const Phrase& p) const {
    std::size_t at = pos_;
    std::size_t n = word_count(p);
    for (std::size_t w = 0; w < n; ++w) {
      if (w > 0) {
        std::size_t ws = at;
        while (ws < text_.size() && is_space(text_[ws])) ++ws;
        if (ws == at) return 0;
        at = ws;
      }
      std::size_t end = word_end(at);
      if (text_.substr(at, end - at) != p.words[w]) return 0;
      at = end;
    }
    return at;
  }

  Token word_token(SourceLoc loc) {
    std::size_t end = word_end(pos_);
    std::string_view word = text_.substr(pos_, end - pos_);
    for (const Phrase& p : kPhrases) {
      if (p.words[0] != word) continue;
      if (std::size_t pend = match_phrase(p)) {
        Token t{p.kind, text_.substr(pos_, pend - pos_), loc};
        advance(pend - pos_);
        return t;
      }
    }
    TokenKind kind = TokenKind::Identifier;
    for (const Keyword& k : kKeywords) {
      if (k.word == word) {
        kind = k.kind;
        break;
      }
    }
    advance(end - pos_);
    return Token{kind, word, loc};
  }

  void number_token(SourceLoc loc, LexResult& out) {
    std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    TokenKind kind = TokenKind::Integer;
    if (end + 1 < text_.size() && text_[end] == '.' && is_digit(text_[end + 1])) {
      end += 1;
      while (end < text_.size() && is_digit(text_[end])) ++end;
      kind = TokenKind::Float;
    }
    std::string_view lexeme = text_.substr(start, end - start);
    if (kind == TokenKind::Integer) {
      std::int64_t v = 0;
      auto res = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
      if (res.ec != std::errc{}) {
        out.diagnostics.push_back(make_error("integer literal '" + std::string(lexeme) + "' is out of range", loc));
      }
    }
    advance(end - start);
    out.tokens.push_back(Token{kind, lexeme, loc});
  }

  bool symbol_token(SourceLoc loc, LexResult& out) {
    auto two = text_.substr(pos_, 2);
    TokenKind kind;
    std::size_t len = 2;
    if (two == "=>") {
      kind = TokenKind::Implies;
    } else if (two == ">=") {
      kind = TokenKind::Ge;
    } else if (two == "<=") {
      kind = TokenKind::Le;
    } else {
      len = 1;
      switch (text_[pos_]) {
        case '|': kind = TokenKind::Or; break;
        case '&': kind = TokenKind::And; break;
        case '!': kind = TokenKind::Not; break;
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        case '*': kind = TokenKind::Times; break;
        case '/': kind = TokenKind::Div; break;
        case '>': kind = TokenKind::Gt; break;
        case '<': kind = TokenKind::Lt; break;
        case '=': kind = TokenKind::Eq; break;
        case '(': kind = TokenKind::LPar; break;
        case ')': kind = TokenKind::RPar; break;
        case ',': kind = TokenKind::Comma; break;
        default: return false;
      }
    }
    out.tokens.push_back(Token{kind, text_.substr(pos_, len), loc});
    advance(len);
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col_;
};

}  // namespace

std::string describe(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::Float: return "floating-point number";
    case TokenKind::True: return "'TRUE'";
    case TokenKind::False: return "'FALSE'";
    case TokenKind::Or: return "'or'";
    case TokenKind::And: return "'and'";
    case TokenKind::Not: return "'not'";
    case TokenKind::Implies: return "'implies'";
    case TokenKind::Plus: return "'plus'";
    case TokenKind::Minus: return "'minus'";
    case TokenKind::Times: return "'multiplied with'";
    case TokenKind::Div: return "'divided by'";
    case TokenKind::Gt: return "'is greater than'";
    case TokenKind::Ge: return "'is greater or equal to'";
    case TokenKind::Lt: return "'is less than'";
    case TokenKind::Le: return "'is less or equal to'";
    case TokenKind::Eq: return "'is equal to'";
    case TokenKind::LPar: return "'('";
    case TokenKind::RPar: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Of: return "'of'";
    case TokenKind::Bit: return "'bit'";
    case TokenKind::ExtractBit: return "'extractBit'";
    case TokenKind::Abs: return "'abs'";
    case TokenKind::AbsText: return "'the absolute value of'";
    case TokenKind::Min: return "'min'";
    case TokenKind::MinText: return "'the minimum of'";
    case TokenKind::Max: return "'max'";
    case TokenKind::MaxText: return "'the maximum of'";
    case TokenKind::Last: return "'last'";
    case TokenKind::LastText: return "'the previous value of'";
    case TokenKind::ValueOfText: return "'the value of'";
    case TokenKind::StepsAgo: return "'steps ago'";
    case TokenKind::End: return "end of event";
  }
  return "?";
}

LexResult lex_event(std::string_view text, SourceLoc origin) {
  if (origin.line <= 0) origin = {1, 1};
  return Lexer(text, origin).run();
}

bool matches_identifier_rule(std::string_view s) {
  if (s.empty() || !is_letter(s.front())) return false;
  for (char c : s) {
    if (!is_word_char(c)) return false;
  }
  return true;
}

bool is_reserved_word(std::string_view s) {
  for (const Keyword& k : kKeywords) {
    if (k.word == s) return true;
  }
  for (const Phrase& p : kPhrases) {
    if (p.words[0] == s) return true;
  }
  return false;
}

bool is_valid_identifier(std::string_view s) {
  return matches_identifier_rule(s) && !is_reserved_word(s);
}

}  // namespace reqc
