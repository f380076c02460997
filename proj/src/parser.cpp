#include "treecount/parser.hpp"

#include <cctype>
#include <set>

#include "treecount/error.hpp"

namespace treecount {

namespace {

enum class Tok { Ident, Number, LParen, RParen, Lt, Gt, Le, Eq, Tilde, Amp, Bar, Comma, Dot, Star, At, Minus, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      int l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::string id;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          id += advance();
        out.push_back({Tok::Ident, id, l, c});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::string num;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) num += advance();
        out.push_back({Tok::Number, num, l, c});
        continue;
      }
      advance();
      Tok k;
      switch (ch) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '<':
          if (pos_ < src_.size() && src_[pos_] == '=') {
            advance();
            k = Tok::Le;
          } else {
            k = Tok::Lt;
          }
          break;
        case '>': k = Tok::Gt; break;
        case '=': k = Tok::Eq; break;
        case '~': k = Tok::Tilde; break;
        case '!': k = Tok::Tilde; break;
        case '&': k = Tok::Amp; break;
        case '|': k = Tok::Bar; break;
        case ',': k = Tok::Comma; break;
        case '.': k = Tok::Dot; break;
        case '*': k = Tok::Star; break;
        case '@': k = Tok::At; break;
        case '-': k = Tok::Minus; break;
        default: throw SyntaxError(std::string("unexpected character '") + ch + "'", l, c);
      }
      out.push_back({k, std::string(1, ch), l, c});
    }
  }

 private:
  char advance() {
    char ch = src_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }
  void skip_space() {
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string> kReserved = {"T", "mu", "cnt", "glob", "implies"};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  SurfacePtr formula_eof() {
    SurfacePtr f = or_expr();
    expect(Tok::End, "end of input");
    return f;
  }

  Trail trail_eof() {
    Trail t = trail();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& what, const Token& t) const { throw SyntaxError(what, t.line, t.column); }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) {
      const Token& t = peek();
      fail(std::string("expected ") + what + (t.kind == Tok::End ? ", found end of input" : ", found '" + t.text + "'"),
           t);
    }
    return next();
  }

  template <class F>
  SurfacePtr located(const Token& t, F&& build) {
    auto p = std::const_pointer_cast<SurfaceFormula>(build());
    p->line = t.line;
    p->column = t.column;
    return p;
  }

  SurfacePtr or_expr() {
    SurfacePtr f = and_expr();
    while (at(Tok::Bar)) {
      const Token& op = next();
      SurfacePtr g = and_expr();
      f = located(op, [&] { return surface::disj(f, g); });
    }
    return f;
  }

  SurfacePtr and_expr() {
    SurfacePtr f = unary();
    while (at(Tok::Amp)) {
      const Token& op = next();
      SurfacePtr g = unary();
      f = located(op, [&] { return surface::conj(f, g); });
    }
    return f;
  }

  Modality modality_name() {
    const Token& t = expect(Tok::Ident, "modality");
    auto m = modality_from_keyword(t.text);
    if (!m) fail("unknown modality '" + t.text + "'", t);
    return *m;
  }

  SurfacePtr unary() {
    const Token& t = peek();
    if (at(Tok::Tilde)) {
      next();
      SurfacePtr g = unary();
      return located(t, [&] { return surface::negate(g); });
    }
    if (at(Tok::Lt)) {
      next();
      Modality m = modality_name();
      expect(Tok::Gt, "'>'");
      SurfacePtr g = unary();
      return located(t, [&] { return surface::modal(m, g); });
    }
    if (at(Tok::Ident) && t.text == "mu") {
      next();
      const Token& v = expect(Tok::Ident, "fixpoint variable");
      if (kReserved.count(v.text)) fail("reserved word '" + v.text + "' cannot be a variable", v);
      expect(Tok::Dot, "'.'");
      bound_.push_back(v.text);
      SurfacePtr g = or_expr();
      bound_.pop_back();
      return located(t, [&] { return surface::mu(v.text, g); });
    }
    return atom();
  }

  std::pair<Comparator, std::uint64_t> bound_spec() {
    const Token& t = peek();
    Comparator c;
    if (at(Tok::Le)) c = Comparator::Le;
    else if (at(Tok::Gt)) c = Comparator::Gt;
    else if (at(Tok::Eq)) c = Comparator::Eq;
    else fail("expected comparator '<=', '>' or '='", t);
    next();
    if (at(Tok::Minus)) fail("negative counting constant", peek());
    const Token& n = expect(Tok::Number, "counting constant");
    std::uint64_t k = 0;
    for (char d : n.text) {
      k = k * 10 + static_cast<std::uint64_t>(d - '0');
      if (k >= (std::uint64_t{1} << 32)) fail("counting constant too large (limit 2^32 - 1)", n);
    }
    return {c, k};
  }

  SurfacePtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        next();
        SurfacePtr f = or_expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::At: {
        next();
        const Token& n = expect(Tok::Ident, "nominal name");
        return located(t, [&] { return surface::nominal(n.text); });
      }
      case Tok::Ident: break;
      case Tok::End: fail("unexpected end of input", t);
      default: fail("unexpected '" + t.text + "'", t);
    }
    next();
    if (t.text == "T") return located(t, [] { return surface::top(); });
    if (t.text == "cnt") {
      expect(Tok::LParen, "'('");
      Trail tr = trail();
      expect(Tok::Comma, "','");
      auto [c, k] = bound_spec();
      expect(Tok::Comma, "','");
      SurfacePtr body = or_expr();
      expect(Tok::RParen, "')'");
      return located(t, [&] { return surface::count(tr, c, k, body); });
    }
    if (t.text == "glob") {
      expect(Tok::LParen, "'('");
      auto [c, k] = bound_spec();
      expect(Tok::Comma, "','");
      SurfacePtr body = or_expr();
      expect(Tok::RParen, "')'");
      return located(t, [&] { return surface::global_count(c, k, body); });
    }
    if (t.text == "implies") {
      expect(Tok::LParen, "'('");
      SurfacePtr guard = or_expr();
      expect(Tok::Comma, "','");
      auto [c, k] = bound_spec();
      expect(Tok::Comma, "','");
      SurfacePtr body = or_expr();
      expect(Tok::RParen, "')'");
      return located(t, [&] { return surface::implies(guard, c, k, body); });
    }
    if (t.text == "mu") fail("misplaced 'mu'", t);
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == t.text) return located(t, [&] { return surface::var(t.text); });
    if (!std::islower(static_cast<unsigned char>(t.text[0])))
      fail("proposition names must start with a lowercase letter: '" + t.text + "'", t);
    return located(t, [&] { return surface::prop(t.text); });
  }

  // trail ::= cat ('|' cat)* ; cat ::= post ((',')? post)* ; post ::= prim '*'*
  Trail trail() {
    Trail t = trail_cat();
    while (at(Tok::Bar)) {
      next();
      t = Trail::alt(t, trail_cat());
    }
    return t;
  }

  bool trail_start(std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::LParen || t.kind == Tok::Ident;
  }

  Trail trail_cat() {
    Trail t = trail_post();
    for (;;) {
      if (at(Tok::Comma) && trail_start(1)) {
        next();
      } else if (!trail_start(0)) {
        break;
      }
      t = Trail::concat(t, trail_post());
    }
    return t;
  }

  Trail trail_post() {
    Trail t = trail_prim();
    while (at(Tok::Star)) {
      next();
      t = Trail::star(t);
    }
    return t;
  }

  Trail trail_prim() {
    if (at(Tok::LParen)) {
      next();
      Trail t = trail();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::Ident)) return Trail::step(modality_name());
    const Token& t = peek();
    fail(t.kind == Tok::End ? "unexpected end of trail" : "unexpected '" + t.text + "' in trail", t);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

SurfacePtr parse_formula(std::string_view text) { return Parser(text).formula_eof(); }

Trail parse_trail(std::string_view text) { return Parser(text).trail_eof(); }

}  // namespace treecount
