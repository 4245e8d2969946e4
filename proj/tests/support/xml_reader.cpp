#include "xml_reader.hpp"

#include <cctype>
#include <cstdlib>

namespace reqc::testing {

const XmlNode& XmlNode::child(std::string_view t) const {
  for (const XmlNode& c : children) {
    if (c.tag == t) return c;
  }
  throw XmlError("<" + tag + "> has no <" + std::string(t) + ">");
}

const std::string& XmlNode::attr(const std::string& name) const {
  auto it = attrs.find(name);
  if (it == attrs.end()) throw XmlError("<" + tag + "> has no attribute " + name);
  return it->second;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  XmlNode document() {
    skip_misc();
    XmlNode root = element();
    skip_misc();
    if (pos_ != s_.size()) fail("trailing content");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw XmlError(what + " at offset " + std::to_string(pos_));
  }

  bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\n' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  void skip_until(std::string_view end) {
    std::size_t at = s_.find(end, pos_);
    if (at == std::string_view::npos) fail("unterminated construct");
    pos_ = at + end.size();
  }

  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts("<?")) {
        skip_until("?>");
      } else if (starts("<!--")) {
        skip_until("-->");
      } else {
        return;
      }
    }
  }

  std::string name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '_' || s_[pos_] == ':')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  static std::string unescape(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) throw XmlError("bad entity");
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else throw XmlError("unknown entity &" + std::string(ent) + ";");
      i = semi;
    }
    return out;
  }

  XmlNode element() {
    if (!starts("<")) fail("expected '<'");
    ++pos_;
    XmlNode n;
    n.tag = name();
    for (;;) {
      skip_space();
      if (starts("/>")) {
        pos_ += 2;
        return n;
      }
      if (starts(">")) {
        ++pos_;
        break;
      }
      std::string key = name();
      skip_space();
      if (!starts("=")) fail("expected '='");
      ++pos_;
      skip_space();
      if (!starts("\"")) fail("expected '\"'");
      std::size_t end = s_.find('"', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated attribute");
      n.attrs[key] = unescape(s_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
    }
    for (;;) {
      if (starts("<!--")) {
        skip_until("-->");
      } else if (starts("</")) {
        pos_ += 2;
        if (name() != n.tag) fail("mismatched closing tag");
        skip_space();
        if (!starts(">")) fail("expected '>'");
        ++pos_;
        return n;
      } else if (starts("<")) {
        n.children.push_back(element());
      } else {
        std::size_t end = s_.find('<', pos_);
        if (end == std::string_view::npos) fail("unterminated element");
        n.text += unescape(s_.substr(pos_, end - pos_));
        pos_ = end;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

const Op kOps[] = {Op::Not, Op::And, Op::Or, Op::Implies, Op::Eq, Op::Lt, Op::Le, Op::Gt, Op::Ge,
                   Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Plus, Op::Neg, Op::Abs, Op::Min, Op::Max,
                   Op::LastUnary, Op::LastN, Op::ExtractBit};

Expr event(const XmlNode& n) {
  if (n.tag == "bool") return Expr::boolean(n.attr("value") == "true");
  if (n.tag == "int") return Expr::integer(std::strtoll(n.attr("value").c_str(), nullptr, 10));
  if (n.tag == "float") return Expr::real(std::strtod(n.attr("value").c_str(), nullptr));
  if (n.tag == "var") return Expr::var(n.attr("name"));
  for (Op op : kOps) {
    if (op_name(op) != n.tag) continue;
    if (static_cast<int>(n.children.size()) != arity(op)) throw XmlError("wrong operand count in <" + n.tag + ">");
    if (op == Op::LastN) return Expr::last(event(n.children[0]), std::strtoll(n.attr("steps").c_str(), nullptr, 10));
    if (arity(op) == 1) return Expr::unary(op, event(n.children[0]));
    return Expr::binary(op, event(n.children[0]), event(n.children[1]));
  }
  throw XmlError("unknown event element <" + n.tag + ">");
}

Expr only_event(const XmlNode& wrapper) {
  if (wrapper.children.size() != 1) throw XmlError("<" + wrapper.tag + "> must hold one event");
  return event(wrapper.children[0]);
}

Duration duration(const XmlNode& n) {
  static const TimeUnit units[] = {TimeUnit::Steps, TimeUnit::Milliseconds, TimeUnit::Seconds, TimeUnit::Minutes,
                                   TimeUnit::Hours};
  Duration d;
  d.magnitude = std::strtoull(n.attr("magnitude").c_str(), nullptr, 10);
  for (TimeUnit u : units) {
    if (to_string(u) == n.attr("unit")) {
      d.unit = u;
      return d;
    }
  }
  throw XmlError("unknown unit " + n.attr("unit"));
}

}  // namespace

XmlNode parse_xml(std::string_view text) { return Reader(text).document(); }

Requirement import_spec_xml(std::string_view text) {
  XmlNode root = parse_xml(text);
  if (root.tag != "specification") throw XmlError("root is not <specification>");
  const XmlNode& req = root.child("requirement");
  Requirement r;
  r.id = req.attr("id");
  r.scope = Scope::Globally;
  const XmlNode& pattern = req.child("pattern");
  if (pattern.attr("kind") == "invariant") {
    r.pattern = Invariant{only_event(pattern.child("event"))};
  } else {
    Response resp;
    resp.trigger = only_event(pattern.child("trigger"));
    resp.trigger_duration = duration(pattern.child("trigger-duration"));
    resp.delay = duration(pattern.child("delay"));
    resp.response = only_event(pattern.child("response"));
    resp.response_duration = duration(pattern.child("response-duration"));
    r.pattern = resp;
  }
  return r;
}

}  // namespace reqc::testing
