#include <cctype>
#include <optional>

#include "treecount/error.hpp"
#include "treecount/xpath.hpp"

namespace treecount {

namespace {
using XK = XPathExpr::Kind;
using QK = XQualifier::Kind;

struct AxisEntry {
  Axis axis;
  const char* name;
};
constexpr AxisEntry kAxes[] = {
    {Axis::Self, "self"},
    {Axis::Child, "child"},
    {Axis::Parent, "parent"},
    {Axis::Descendant, "descendant"},
    {Axis::Ancestor, "ancestor"},
    {Axis::FollowingSibling, "following-sibling"},
    {Axis::PrecedingSibling, "preceding-sibling"},
    {Axis::Following, "following"},
    {Axis::Preceding, "preceding"},
};

XPathPtr make(XPathExpr e) { return std::make_shared<const XPathExpr>(std::move(e)); }
XQualPtr make(XQualifier q) { return std::make_shared<const XQualifier>(std::move(q)); }
}  // namespace

std::string axis_name(Axis a) {
  for (const auto& e : kAxes)
    if (e.axis == a) return e.name;
  return "?";
}

Axis inverse(Axis a) {
  switch (a) {
    case Axis::Self: return Axis::Self;
    case Axis::Child: return Axis::Parent;
    case Axis::Parent: return Axis::Child;
    case Axis::Descendant: return Axis::Ancestor;
    case Axis::Ancestor: return Axis::Descendant;
    case Axis::FollowingSibling: return Axis::PrecedingSibling;
    case Axis::PrecedingSibling: return Axis::FollowingSibling;
    case Axis::Following: return Axis::Preceding;
    case Axis::Preceding: return Axis::Following;
  }
  return a;
}

std::string cmp_text(CountCmp c) {
  switch (c) {
    case CountCmp::Lt: return "<";
    case CountCmp::Le: return "<=";
    case CountCmp::Gt: return ">";
    case CountCmp::Ge: return ">=";
    case CountCmp::Eq: return "=";
  }
  return "?";
}

namespace xp {
XPathPtr step(Axis a, std::string test) {
  XPathExpr e;
  e.kind = XK::Step;
  e.axis = a;
  e.test = std::move(test);
  return make(std::move(e));
}
namespace {
XPathPtr binary(XK k, XPathPtr a, XPathPtr b) {
  XPathExpr e;
  e.kind = k;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}
XQualPtr qbinary(QK k, XQualPtr a, XQualPtr b) {
  XQualifier q;
  q.kind = k;
  q.lhs = std::move(a);
  q.rhs = std::move(b);
  return make(std::move(q));
}
}  // namespace
XPathPtr seq(XPathPtr a, XPathPtr b) { return binary(XK::Seq, std::move(a), std::move(b)); }
XPathPtr qualified(XPathPtr p, XQualPtr q) {
  XPathExpr e;
  e.kind = XK::Qualified;
  e.lhs = std::move(p);
  e.qual = std::move(q);
  return make(std::move(e));
}
XPathPtr position(XPathPtr p, std::uint64_t k) {
  XPathExpr e;
  e.kind = XK::Position;
  e.lhs = std::move(p);
  e.k = k;
  return make(std::move(e));
}
XPathPtr root(XPathPtr p) {
  XPathExpr e;
  e.kind = XK::Root;
  e.lhs = std::move(p);
  return make(std::move(e));
}
XPathPtr set_union(XPathPtr a, XPathPtr b) { return binary(XK::Union, std::move(a), std::move(b)); }
XPathPtr set_intersect(XPathPtr a, XPathPtr b) { return binary(XK::Intersect, std::move(a), std::move(b)); }
XPathPtr set_except(XPathPtr a, XPathPtr b) { return binary(XK::Except, std::move(a), std::move(b)); }
XQualPtr path(XPathPtr p) {
  XQualifier q;
  q.kind = QK::Path;
  q.path = std::move(p);
  return make(std::move(q));
}
XQualPtr count(XPathPtr p, CountCmp c, std::uint64_t k) {
  XQualifier q;
  q.kind = QK::Count;
  q.path = std::move(p);
  q.cmp = c;
  q.k = k;
  return make(std::move(q));
}
XQualPtr negate(XQualPtr a) {
  XQualifier q;
  q.kind = QK::Not;
  q.lhs = std::move(a);
  return make(std::move(q));
}
XQualPtr conj(XQualPtr a, XQualPtr b) { return qbinary(QK::And, std::move(a), std::move(b)); }
XQualPtr disj(XQualPtr a, XQualPtr b) { return qbinary(QK::Or, std::move(a), std::move(b)); }
XQualPtr nominal(std::string name) {
  XQualifier q;
  q.kind = QK::Nominal;
  q.name = std::move(name);
  return make(std::move(q));
}
}  // namespace xp

// ---- printing

namespace {
bool is_set_op(XK k) { return k == XK::Union || k == XK::Intersect || k == XK::Except; }

std::string print(const XPathExpr& e, bool top);

std::string print_qual(const XQualifier& q) {
  switch (q.kind) {
    case QK::Path: return print(*q.path, false);
    case QK::Count: return "count(" + print(*q.path, false) + ") " + cmp_text(q.cmp) + " " + std::to_string(q.k);
    case QK::Not: return "not(" + print_qual(*q.lhs) + ")";
    case QK::And:
    case QK::Or: {
      auto side = [&](const XQualifier& s) {
        std::string t = print_qual(s);
        return s.kind == QK::Or && q.kind == QK::And ? "(" + t + ")" : t;
      };
      return side(*q.lhs) + (q.kind == QK::And ? " and " : " or ") + side(*q.rhs);
    }
    case QK::Nominal: return "@" + q.name;
  }
  return "?";
}

std::string print(const XPathExpr& e, bool top) {
  switch (e.kind) {
    case XK::Step: return axis_name(e.axis) + "::" + e.test;
    case XK::Seq: return print(*e.lhs, false) + "/" + print(*e.rhs, false);
    case XK::Qualified: {
      std::string p = print(*e.lhs, false);
      if (e.lhs->kind == XK::Seq) p = "(" + p + ")";
      return p + "[" + print_qual(*e.qual) + "]";
    }
    case XK::Position: {
      std::string p = print(*e.lhs, false);
      if (e.lhs->kind == XK::Seq) p = "(" + p + ")";
      return p + "[position()=" + std::to_string(e.k) + "]";
    }
    case XK::Root: return "/" + print(*e.lhs, false);
    case XK::Union:
    case XK::Intersect:
    case XK::Except: {
      const char* op = e.kind == XK::Union ? " union " : e.kind == XK::Intersect ? " intersect " : " except ";
      // left-nested chains read naturally at the top
      std::string l = print(*e.lhs, top && is_set_op(e.lhs->kind));
      std::string s = l + op + print(*e.rhs, false);
      return top ? s : "(" + s + ")";
    }
  }
  return "?";
}
}  // namespace

std::string to_string(const XPathExpr& e) { return print(e, true); }
std::string to_string(const XQualifier& q) { return print_qual(q); }

namespace {
std::size_t qual_size(const XQualifier& q) {
  switch (q.kind) {
    case QK::Path:
    case QK::Count: return 1 + xpath_size(*q.path);
    case QK::Not: return 1 + qual_size(*q.lhs);
    case QK::And:
    case QK::Or: return 1 + qual_size(*q.lhs) + qual_size(*q.rhs);
    case QK::Nominal: return 1;
  }
  return 1;
}

bool qual_has_position(const XQualifier& q) {
  switch (q.kind) {
    case QK::Path:
    case QK::Count: return has_position(*q.path);
    case QK::Not: return qual_has_position(*q.lhs);
    case QK::And:
    case QK::Or: return qual_has_position(*q.lhs) || qual_has_position(*q.rhs);
    case QK::Nominal: return false;
  }
  return false;
}
}  // namespace

std::size_t xpath_size(const XPathExpr& e) {
  switch (e.kind) {
    case XK::Step: return 1;
    case XK::Qualified: return 1 + xpath_size(*e.lhs) + qual_size(*e.qual);
    case XK::Position:
    case XK::Root: return 1 + xpath_size(*e.lhs);
    default: return 1 + xpath_size(*e.lhs) + xpath_size(*e.rhs);
  }
}

bool has_position(const XPathExpr& e) {
  switch (e.kind) {
    case XK::Step: return false;
    case XK::Position: return true;
    case XK::Qualified: return has_position(*e.lhs) || qual_has_position(*e.qual);
    case XK::Root: return has_position(*e.lhs);
    default: return has_position(*e.lhs) || has_position(*e.rhs);
  }
}

// ---- parser

namespace {

struct Tok {
  enum Kind { End, Name, Number, Punct } kind = End;
  std::string text;
  int pos = 0;
};

class XPathParser {
 public:
  explicit XPathParser(std::string_view s) : src_(s) { lex(); }

  XPathPtr run() {
    XPathPtr e = operand();
    for (;;) {
      if (is_punct("|") || is_name("union")) {
        next();
        e = xp::set_union(e, operand());
      } else if (is_name("intersect")) {
        next();
        e = xp::set_intersect(e, operand());
      } else if (is_name("except")) {
        next();
        e = xp::set_except(e, operand());
      } else {
        break;
      }
    }
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  void lex() {
    std::size_t i = 0;
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Tok t;
      t.pos = static_cast<int>(i);
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' || src_[j] == '-'))
          ++j;
        t.kind = Tok::Name;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        t.kind = Tok::Number;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else {
        static const char* kTwo[] = {"::", "<=", ">=", "!=", "..", "//"};
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        for (const char* two : kTwo)
          if (src_.substr(i, 2) == two) t.text = two;
        if (t.text.size() == 1 && std::string_view("/[]()*@|.<>=,").find(c) == std::string_view::npos)
          throw SyntaxError(std::string("unexpected character '") + c + "'", 1, t.pos + 1);
        i += t.text.size();
      }
      toks_.push_back(std::move(t));
    }
    Tok end;
    end.pos = static_cast<int>(src_.size());
    toks_.push_back(end);
  }

  const Tok& peek(int ahead = 0) const {
    std::size_t i = std::min(at_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Tok next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
  bool is_punct(const char* p, int ahead = 0) const { return peek(ahead).kind == Tok::Punct && peek(ahead).text == p; }
  bool is_name(const char* n, int ahead = 0) const { return peek(ahead).kind == Tok::Name && peek(ahead).text == n; }
  [[noreturn]] void fail(const std::string& what, int pos = -1) const {
    throw SyntaxError(what, 1, (pos < 0 ? peek().pos : pos) + 1);
  }
  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }
  std::uint64_t number() {
    if (peek().kind != Tok::Number) fail("expected a number");
    Tok t = next();
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      fail("number out of range", t.pos);
    }
  }

  XPathPtr operand() {
    if (is_punct("//")) fail("'//' is not supported; write descendant::");
    if (is_punct("/")) {
      next();
      return xp::root(relpath());
    }
    return relpath();
  }

  XPathPtr relpath() {
    XPathPtr e = step();
    while (is_punct("/")) {
      next();
      e = xp::seq(e, step());
    }
    if (is_punct("//")) fail("'//' is not supported; write descendant::");
    return e;
  }

  std::string name_test() {
    if (is_punct("*")) {
      next();
      return "*";
    }
    if (peek().kind != Tok::Name) fail("expected a name test");
    Tok t = next();
    bool ok = std::islower(static_cast<unsigned char>(t.text[0]));
    for (char c : t.text) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ok) fail("name test '" + t.text + "' must match [a-z][a-zA-Z0-9_]*", t.pos);
    return t.text;
  }

  XPathPtr step() {
    XPathPtr e;
    if (is_punct("..")) {
      next();
      e = xp::step(Axis::Parent, "*");
    } else if (is_punct(".")) {
      next();
      e = xp::step(Axis::Self, "*");
    } else if (is_punct("@")) {
      fail("attributes are not supported");
    } else if (peek().kind == Tok::Name && is_punct("::", 1)) {
      Tok a = next();
      std::optional<Axis> axis;
      for (const auto& entry : kAxes)
        if (a.text == entry.name) axis = entry.axis;
      if (!axis) fail("unknown axis '" + a.text + "'", a.pos);
      next();
      e = xp::step(*axis, name_test());
    } else {
      e = xp::step(Axis::Child, name_test());
    }
    while (is_punct("[")) {
      next();
      if (is_name("position") && is_punct("(", 1)) {
        int at = peek().pos;
        next();
        next();
        expect(")");
        if (!is_punct("=")) fail("position() must be compared with '='");
        next();
        std::uint64_t k = number();
        if (k == 0) fail("positions start at 1", at);
        if (!is_punct("]")) fail("position()=k must be the whole predicate", at);
        e = xp::position(e, k);
      } else {
        e = xp::qualified(e, qual());
      }
      expect("]");
    }
    return e;
  }

  XQualPtr qual() {
    XQualPtr q = qand();
    while (is_name("or")) {
      next();
      q = xp::disj(q, qand());
    }
    return q;
  }

  XQualPtr qand() {
    XQualPtr q = qnot();
    while (is_name("and")) {
      next();
      q = xp::conj(q, qnot());
    }
    return q;
  }

  XQualPtr qnot() {
    if (is_name("not") && !is_punct("::", 1)) {
      next();
      return xp::negate(qnot());
    }
    return atom();
  }

  XQualPtr atom() {
    if (is_punct("(")) {
      next();
      XQualPtr q = qual();
      expect(")");
      return q;
    }
    if (is_punct("@")) {
      next();
      if (peek().kind != Tok::Name) fail("expected a nominal name");
      return xp::nominal(next().text);
    }
    if (is_name("position") && is_punct("(", 1)) fail("position() is only supported as a whole predicate [position()=k]");
    if (is_name("count") && is_punct("(", 1)) {
      if (in_count_) fail("count() inside a count() path is not allowed");
      next();
      next();
      in_count_ = true;
      XPathPtr p = relpath();
      in_count_ = false;
      expect(")");
      CountCmp c;
      if (is_punct("<")) c = CountCmp::Lt;
      else if (is_punct("<=")) c = CountCmp::Le;
      else if (is_punct(">")) c = CountCmp::Gt;
      else if (is_punct(">=")) c = CountCmp::Ge;
      else if (is_punct("=")) c = CountCmp::Eq;
      else fail("expected a comparison after count(...)");
      next();
      return xp::count(p, c, number());
    }
    if (is_punct("/") || is_punct("//")) fail("absolute paths are not allowed in predicates");
    return xp::path(relpath());
  }

  std::string_view src_;
  std::vector<Tok> toks_;
  std::size_t at_ = 0;
  bool in_count_ = false;
};

}  // namespace

XPathPtr parse_xpath(std::string_view text) { return XPathParser(text).run(); }

// ---- position desugaring

namespace {

XPathPtr follow_path() {
  static const XPathPtr p = [] {
    XPathPtr desc = xp::step(Axis::Descendant, "*");
    XPathPtr self = xp::step(Axis::Self, "*");
    XPathPtr aos = xp::set_union(xp::step(Axis::Ancestor, "*"), self);
    XPathPtr dos = xp::set_union(desc, self);
    return xp::set_union(desc, xp::seq(xp::seq(aos, xp::step(Axis::FollowingSibling, "*")), dos));
  }();
  return p;
}

XPathPtr first(const XPathPtr& p) { return xp::set_except(p, xp::seq(p, follow_path())); }

XPathPtr nth(const XPathPtr& p, std::uint64_t k) {
  XPathPtr e = first(p);
  for (std::uint64_t i = 1; i < k; ++i) e = first(xp::set_intersect(p, xp::seq(e, follow_path())));
  return e;
}

XQualPtr desugar_qual(const XQualPtr& q) {
  switch (q->kind) {
    case QK::Path: return xp::path(desugar_position(q->path));
    case QK::Count: return xp::count(desugar_position(q->path), q->cmp, q->k);
    case QK::Not: return xp::negate(desugar_qual(q->lhs));
    case QK::And: return xp::conj(desugar_qual(q->lhs), desugar_qual(q->rhs));
    case QK::Or: return xp::disj(desugar_qual(q->lhs), desugar_qual(q->rhs));
    case QK::Nominal: return q;
  }
  return q;
}

}  // namespace

XPathPtr desugar_position(const XPathPtr& e) {
  if (!has_position(*e)) return e;
  switch (e->kind) {
    case XK::Step: return e;
    case XK::Position: return nth(desugar_position(e->lhs), e->k);
    case XK::Qualified: return xp::qualified(desugar_position(e->lhs), desugar_qual(e->qual));
    case XK::Root: return xp::root(desugar_position(e->lhs));
    case XK::Seq: return xp::seq(desugar_position(e->lhs), desugar_position(e->rhs));
    case XK::Union: return xp::set_union(desugar_position(e->lhs), desugar_position(e->rhs));
    case XK::Intersect: return xp::set_intersect(desugar_position(e->lhs), desugar_position(e->rhs));
    case XK::Except: return xp::set_except(desugar_position(e->lhs), desugar_position(e->rhs));
  }
  return e;
}

}  // namespace treecount
