#include "reqc/parser.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "reqc/lexer.hpp"

namespace reqc {

namespace {

constexpr int kMaxDepth = 256;

struct ParseFailure {
  Diagnostic diagnostic;
};

class EventParser {
 public:
  explicit EventParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Expr parse_all() {
    Expr e = implies();
    if (peek().kind != TokenKind::End) {
      fail_expected({TokenKind::Implies, TokenKind::Or, TokenKind::And, TokenKind::Eq, TokenKind::End});
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(TokenKind k) const { return peek().kind == k; }

  bool accept(TokenKind k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail_expected(std::initializer_list<TokenKind> kinds) {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of event" : "'" + std::string(t.text) + "'";
    Diagnostic d = make_error("syntax error: unexpected " + found, t.loc);
    for (TokenKind k : kinds) d.expected.push_back(describe(k));
    throw ParseFailure{std::move(d)};
  }

  [[noreturn]] void fail_operand() {
    fail_expected({TokenKind::Identifier, TokenKind::Integer, TokenKind::Float, TokenKind::True,
                   TokenKind::False, TokenKind::LPar, TokenKind::Not, TokenKind::Minus});
  }

  void expect(TokenKind k) {
    if (!accept(k)) fail_expected({k});
  }

  struct DepthGuard {
    explicit DepthGuard(EventParser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) {
        throw ParseFailure{make_error("expression is nested too deeply", p_.peek().loc)};
      }
    }
    ~DepthGuard() { --p_.depth_; }
    EventParser& p_;
  };

  Expr implies() {
    DepthGuard g(*this);
    Expr lhs = disjunction();
    while (at(TokenKind::Implies)) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::Implies, std::move(lhs), disjunction(), loc);
    }
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(TokenKind::Or)) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::Or, std::move(lhs), conjunction(), loc);
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = equality();
    while (at(TokenKind::And)) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::And, std::move(lhs), equality(), loc);
    }
    return lhs;
  }

  Expr equality() {
    Expr lhs = relational();
    while (at(TokenKind::Eq)) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::Eq, std::move(lhs), relational(), loc);
    }
    return lhs;
  }

  Expr relational() {
    DepthGuard g(*this);
    if (at(TokenKind::Not)) {
      SourceLoc loc = take().loc;
      return Expr::unary(Op::Not, relational(), loc);
    }
    Expr lhs = additive();
    Op op;
    switch (peek().kind) {
      case TokenKind::Lt: op = Op::Lt; break;
      case TokenKind::Le: op = Op::Le; break;
      case TokenKind::Gt: op = Op::Gt; break;
      case TokenKind::Ge: op = Op::Ge; break;
      default: return lhs;
    }
    SourceLoc loc = take().loc;
    return Expr::binary(op, std::move(lhs), additive(), loc);
  }

  Expr additive() {
    DepthGuard g(*this);
    Expr lhs = multiplicative();
    while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
      const Token& t = take();
      Op op = t.kind == TokenKind::Plus ? Op::Add : Op::Sub;
      lhs = Expr::binary(op, std::move(lhs), multiplicative(), t.loc);
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (at(TokenKind::Times) || at(TokenKind::Div)) {
      const Token& t = take();
      Op op = t.kind == TokenKind::Times ? Op::Mul : Op::Div;
      lhs = Expr::binary(op, std::move(lhs), unary(), t.loc);
    }
    return lhs;
  }

  Expr unary() {
    DepthGuard g(*this);
    if (at(TokenKind::Plus) || at(TokenKind::Minus)) {
      const Token& t = take();
      Op op = t.kind == TokenKind::Plus ? Op::Plus : Op::Neg;
      return Expr::unary(op, unary(), t.loc);
    }
    return primary();
  }

  std::int64_t step_count() {
    SourceLoc loc = peek().loc;
    if (at(TokenKind::End) || at(TokenKind::StepsAgo) || at(TokenKind::RPar)) {
      fail_expected({TokenKind::Integer});
    }
    Expr e = unary();
    if (e.op != Op::IntConst) {
      throw ParseFailure{make_error("the step count of 'last' must be an integer literal", loc)};
    }
    return e.literal.as_int();
  }

  Expr primary() {
    DepthGuard g(*this);
    const Token& t = peek();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case TokenKind::Integer: {
        take();
        std::int64_t v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return Expr::integer(v, loc);
      }
      case TokenKind::Float: {
        take();
        double v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return Expr::real(v, loc);
      }
      case TokenKind::True: take(); return Expr::boolean(true, loc);
      case TokenKind::False: take(); return Expr::boolean(false, loc);
      case TokenKind::Identifier: take(); return Expr::var(std::string(t.text), loc);
      case TokenKind::LPar: {
        take();
        Expr e = implies();
        expect(TokenKind::RPar);
        return e;
      }
      case TokenKind::Abs: {
        take();
        expect(TokenKind::LPar);
        Expr a = additive();
        expect(TokenKind::RPar);
        return Expr::unary(Op::Abs, std::move(a), loc);
      }
      case TokenKind::AbsText: take(); return Expr::unary(Op::Abs, additive(), loc);
      case TokenKind::Min:
      case TokenKind::Max: {
        Op op = t.kind == TokenKind::Min ? Op::Min : Op::Max;
        take();
        expect(TokenKind::LPar);
        Expr a = additive();
        expect(TokenKind::Comma);
        Expr b = additive();
        expect(TokenKind::RPar);
        return Expr::binary(op, std::move(a), std::move(b), loc);
      }
      case TokenKind::MinText:
      case TokenKind::MaxText: {
        Op op = t.kind == TokenKind::MinText ? Op::Min : Op::Max;
        take();
        Expr a = additive();
        expect(TokenKind::And);
        Expr b = additive();
        return Expr::binary(op, std::move(a), std::move(b), loc);
      }
      case TokenKind::Last: {
        take();
        expect(TokenKind::LPar);
        Expr a = additive();
        if (accept(TokenKind::Comma)) {
          std::int64_t n = step_count();
          expect(TokenKind::RPar);
          return Expr::last(std::move(a), n, loc);
        }
        if (!at(TokenKind::RPar)) fail_expected({TokenKind::Comma, TokenKind::RPar});
        take();
        return Expr::unary(Op::LastUnary, std::move(a), loc);
      }
      case TokenKind::LastText: take(); return Expr::unary(Op::LastUnary, additive(), loc);
      case TokenKind::ValueOfText: {
        take();
        Expr a = additive();
        std::int64_t n = step_count();
        expect(TokenKind::StepsAgo);
        return Expr::last(std::move(a), n, loc);
      }
      case TokenKind::ExtractBit: {
        take();
        expect(TokenKind::LPar);
        Expr index = additive();
        expect(TokenKind::Comma);
        Expr value = additive();
        expect(TokenKind::RPar);
        return Expr::binary(Op::ExtractBit, std::move(index), std::move(value), loc);
      }
      case TokenKind::Bit: {
        take();
        Expr index = additive();
        expect(TokenKind::Of);
        Expr value = additive();
        return Expr::binary(Op::ExtractBit, std::move(index), std::move(value), loc);
      }
      default:
        fail_operand();
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Requirement frame
// ---------------------------------------------------------------------------

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

class FrameParser {
 public:
  FrameParser(std::string_view text, SourceLoc origin) : text_(text), line_(origin.line), col_(origin.column) {}

  Parsed<Requirement> run() {
    Parsed<Requirement> out;
    Requirement req;
    req.source_text = std::string(trim(text_));
    skip_space();
    req.loc = here();
    try {
      if (accept_words({"at", "system", "start"})) {
        req.scope = Scope::Initially;
      } else if (accept_words({"at", "each", "time", "step"})) {
        req.scope = Scope::Globally;
      } else {
        frame_error({"'At system start,'", "'At each time step,'"});
      }
      accept_char(',');
      if (accept_words({"if"})) {
        Response r;
        r.trigger = bracket_event();
        expect_words({"has", "been", "valid", "for"});
        r.trigger_duration = bracket_duration();
        accept_char(',');
        expect_words({"then", "in", "response"});
        accept_char(',');
        expect_words({"after", "a", "delay", "of"});
        r.delay = bracket_duration();
        accept_char(',');
        r.response = bracket_event();
        expect_words({"is", "valid", "for"});
        r.response_duration = bracket_duration();
        req.pattern = std::move(r);
      } else if (peek_char('[')) {
        Invariant inv;
        inv.event = bracket_event();
        expect_words({"holds"});
        req.pattern = std::move(inv);
      } else {
        frame_error({"'['", "'if'"});
      }
      expect_char('.');
      skip_space();
      if (pos_ < text_.size()) frame_error({"end of requirement"});
    } catch (const ParseFailure& f) {
      diags_.push_back(f.diagnostic);
    }
    out.diagnostics = std::move(diags_);
    if (!has_errors(out.diagnostics)) out.value = std::move(req);
    return out;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
  }

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

  [[noreturn]] void frame_error(std::vector<std::string> expected) {
    skip_space();
    std::string found;
    if (pos_ >= text_.size()) {
      found = "end of requirement";
    } else {
      std::size_t end = pos_;
      while (end < text_.size() && is_word_char(text_[end])) ++end;
      if (end == pos_) end = pos_ + 1;
      found = "'" + std::string(text_.substr(pos_, end - pos_)) + "'";
    }
    Diagnostic d = make_error("syntax error: unexpected " + found, here());
    d.expected = std::move(expected);
    throw ParseFailure{std::move(d)};
  }

  // Case-insensitive word sequence with arbitrary whitespace between words.
  bool accept_words(std::initializer_list<std::string_view> words) {
    std::size_t save_pos = pos_;
    int save_line = line_, save_col = col_;
    for (std::string_view w : words) {
      skip_space();
      std::size_t end = pos_;
      while (end < text_.size() && is_word_char(text_[end])) ++end;
      std::string_view got = text_.substr(pos_, end - pos_);
      bool same = got.size() == w.size();
      for (std::size_t i = 0; same && i < w.size(); ++i) same = lower(got[i]) == w[i];
      if (!same) {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
        return false;
      }
      advance(end - pos_);
    }
    return true;
  }

  void expect_words(std::initializer_list<std::string_view> words) {
    if (accept_words(words)) return;
    std::string phrase = "'";
    bool first = true;
    for (std::string_view w : words) {
      if (!first) phrase += ' ';
      phrase += w;
      first = false;
    }
    phrase += "'";
    frame_error({phrase});
  }

  bool peek_char(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept_char(char c) {
    if (!peek_char(c)) return false;
    advance(1);
    return true;
  }

  void expect_char(char c) {
    if (!accept_char(c)) frame_error({std::string("'") + c + "'"});
  }

  // Returns the text between '[' and the next ']' and the location of its
  // first character.
  std::pair<std::string_view, SourceLoc> bracket_content() {
    expect_char('[');
    SourceLoc origin = here();
    std::size_t start = pos_;
    std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos) {
      advance(text_.size() - pos_);
      frame_error({"']'"});
    }
    advance(close - pos_);
    std::string_view inner = text_.substr(start, close - start);
    advance(1);
    return {inner, origin};
  }

  Expr bracket_event() {
    auto [inner, origin] = bracket_content();
    Parsed<Expr> e = parse_event(inner, origin);
    diags_.insert(diags_.end(), e.diagnostics.begin(), e.diagnostics.end());
    return e.value ? std::move(*e.value) : Expr::boolean(true, origin);
  }

  Duration bracket_duration() {
    auto [inner, origin] = bracket_content();
    Duration d;
    d.loc = origin;
    std::size_t i = 0;
    int col = origin.column;
    int line = origin.line;
    auto step = [&](std::size_t n) {
      for (std::size_t k = 0; k < n && i < inner.size(); ++k, ++i) {
        if (inner[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    auto skip = [&] {
      while (i < inner.size() && is_space(inner[i])) step(1);
    };
    auto bad = [&](std::vector<std::string> expected) {
      Diagnostic diag = make_error("syntax error: malformed duration '" + std::string(trim(inner)) + "'",
                                   SourceLoc{line, col});
      diag.expected = std::move(expected);
      diags_.push_back(std::move(diag));
      return d;
    };
    skip();
    d.loc = {line, col};
    std::size_t digits_start = i;
    while (i < inner.size() && inner[i] >= '0' && inner[i] <= '9') step(1);
    std::string_view digits = inner.substr(digits_start, i - digits_start);
    if (digits.empty()) return bad({"unsigned integer"});
    if (digits.size() > 1 && digits.front() == '0') return bad({"unsigned integer without leading zeros"});
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), d.magnitude);
    if (res.ec != std::errc{}) return bad({"unsigned integer"});
    skip();
    std::vector<std::string_view> words;
    while (i < inner.size()) {
      std::size_t ws = i;
      while (i < inner.size() && is_word_char(inner[i])) step(1);
      if (ws == i) return bad({"time unit"});
      words.push_back(inner.substr(ws, i - ws));
      skip();
    }
    auto is = [&](std::initializer_list<std::string_view> w) {
      return words.size() == w.size() && std::equal(words.begin(), words.end(), w.begin());
    };
    if (is({"step"}) || is({"steps"}) || is({"simulation", "step"}) || is({"simulation", "steps"})) {
      d.unit = TimeUnit::Steps;
    } else if (is({"millisecond"}) || is({"milliseconds"})) {
      d.unit = TimeUnit::Milliseconds;
    } else if (is({"second"}) || is({"seconds"})) {
      d.unit = TimeUnit::Seconds;
    } else if (is({"minute"}) || is({"minutes"})) {
      d.unit = TimeUnit::Minutes;
    } else if (is({"hour"}) || is({"hours"})) {
      d.unit = TimeUnit::Hours;
    } else {
      return bad({"'simulation steps'", "'milliseconds'", "'seconds'", "'minutes'", "'hours'"});
    }
    return d;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

Parsed<Expr> parse_event(std::string_view text, SourceLoc origin) {
  Parsed<Expr> out;
  LexResult lexed = lex_event(text, origin);
  if (!lexed.diagnostics.empty()) {
    out.diagnostics = std::move(lexed.diagnostics);
    return out;
  }
  try {
    out.value = EventParser(std::move(lexed.tokens)).parse_all();
  } catch (const ParseFailure& f) {
    out.diagnostics.push_back(f.diagnostic);
  }
  return out;
}

Parsed<Requirement> parse_requirement(std::string_view text, SourceLoc origin) {
  if (origin.line <= 0) origin = {1, 1};
  return FrameParser(text, origin).run();
}

bool is_valid_requirement_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) { return is_word_char(c) || c == '-' || c == '.'; });
}

RequirementFile parse_requirement_file(std::string_view text) {
  RequirementFile out;

  struct Line {
    std::size_t begin, end;
  };
  std::vector<Line> lines;
  for (std::size_t b = 0; b <= text.size();) {
    std::size_t e = text.find('\n', b);
    if (e == std::string_view::npos) e = text.size();
    lines.push_back({b, e});
    if (e == text.size()) break;
    b = e + 1;
  }

  // Directive and comment lines are blanked so that paragraph text keeps its
  // original columns.
  std::string body(text);
  enum class Kind { Blank, Ignored, Content };
  std::vector<Kind> kinds(lines.size(), Kind::Blank);
  std::vector<std::string> ids(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view l = text.substr(lines[i].begin, lines[i].end - lines[i].begin);
    std::size_t first = 0;
    while (first < l.size() && is_space(l[first])) ++first;
    if (first == l.size()) continue;
    std::string_view rest = l.substr(first);
    SourceLoc loc{static_cast<int>(i) + 1, static_cast<int>(first) + 1};
    if (rest.substr(0, 2) == "//") {
      kinds[i] = Kind::Ignored;
    } else if (rest.front() == '#') {
      kinds[i] = Kind::Ignored;
      if (rest.substr(0, 4) == "#id:") {
        std::string_view id = rest.substr(4);
        while (!id.empty() && is_space(id.front())) id.remove_prefix(1);
        while (!id.empty() && is_space(id.back())) id.remove_suffix(1);
        if (!is_valid_requirement_id(id)) {
          out.diagnostics.push_back(make_error("invalid requirement id '" + std::string(id) + "'", loc));
        } else {
          ids[i] = std::string(id);
        }
      } else {
        out.diagnostics.push_back(make_warning("unknown directive ignored", loc));
      }
    } else {
      kinds[i] = Kind::Content;
      continue;
    }
    std::fill(body.begin() + static_cast<std::ptrdiff_t>(lines[i].begin),
              body.begin() + static_cast<std::ptrdiff_t>(lines[i].end), ' ');
  }

  std::size_t paragraph = 0;
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < lines.size();) {
    if (kinds[i] == Kind::Blank) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string id;
    SourceLoc id_loc{static_cast<int>(i) + 1, 1};
    bool has_content = false;
    std::size_t first_content = lines.size();
    while (j < lines.size() && kinds[j] != Kind::Blank) {
      if (!ids[j].empty()) {
        if (!id.empty()) {
          out.diagnostics.push_back(
              make_error("requirement already has id '" + id + "'", SourceLoc{static_cast<int>(j) + 1, 1}));
        }
        id = ids[j];
        id_loc = {static_cast<int>(j) + 1, 1};
      }
      if (kinds[j] == Kind::Content && !has_content) {
        has_content = true;
        first_content = j;
      }
      ++j;
    }
    if (has_content) {
      ++paragraph;
      std::size_t begin = lines[first_content].begin;
      std::size_t end = lines[j - 1].end;
      Parsed<Requirement> r =
          parse_requirement(std::string_view(body).substr(begin, end - begin),
                            SourceLoc{static_cast<int>(first_content) + 1, 1});
      out.diagnostics.insert(out.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
      if (id.empty()) {
        id = "R" + std::to_string(paragraph);
        id_loc = r.value ? r.value->loc : SourceLoc{static_cast<int>(first_content) + 1, 1};
      }
      if (std::find(seen.begin(), seen.end(), id) != seen.end()) {
        out.diagnostics.push_back(make_error("duplicate requirement id '" + id + "'", id_loc));
      } else if (r.value) {
        seen.push_back(id);
        r.value->id = id;
        out.requirements.push_back(std::move(*r.value));
      } else {
        seen.push_back(id);
      }
    } else if (!id.empty()) {
      out.diagnostics.push_back(make_warning("id '" + id + "' is not followed by a requirement", id_loc));
    }
    i = j;
  }
  return out;
}

}  // namespace reqc
