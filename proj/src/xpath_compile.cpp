#include <set>

#include "treecount/error.hpp"
#include "treecount/normalize.hpp"
#include "treecount/xpath.hpp"

namespace treecount {

namespace {

using XK = XPathExpr::Kind;
using QK = XQualifier::Kind;
using S = SurfacePtr;
namespace sf = surface;

constexpr Modality kFc = Modality::FirstChild, kNs = Modality::NextSibling, kPa = Modality::Parent,
                   kPs = Modality::PrevSibling;

S top() { return sf::top(); }
S bottom() { return sf::negate(sf::top()); }
bool is_top(const S& f) { return f->kind == SurfaceFormula::Kind::True; }
S conj(S a, S b) {
  if (is_top(a)) return b;
  if (is_top(b)) return a;
  return sf::conj(std::move(a), std::move(b));
}
S disj(S a, S b) { return sf::disj(std::move(a), std::move(b)); }
S neg(S a) { return sf::negate(std::move(a)); }
S dia(Modality m, S f) { return sf::modal(m, std::move(f)); }
S none(Modality m) { return neg(dia(m, top())); }

// A count qualifier comparison as one of the logic's comparators, or a
// constant when every count passes or none does.
struct Cmp {
  enum { Never, Always, Count } kind = Count;
  Comparator c = Comparator::Gt;
  std::uint64_t k = 0;
};

Cmp lower(CountCmp c, std::uint64_t k) {
  switch (c) {
    case CountCmp::Lt:
      if (k == 0) return {Cmp::Never};
      return {Cmp::Count, Comparator::Le, k - 1};
    case CountCmp::Le: return {Cmp::Count, Comparator::Le, k};
    case CountCmp::Gt: return {Cmp::Count, Comparator::Gt, k};
    case CountCmp::Ge:
      if (k == 0) return {Cmp::Always};
      return {Cmp::Count, Comparator::Gt, k - 1};
    case CountCmp::Eq: return {Cmp::Count, Comparator::Eq, k};
  }
  return {};
}

bool passes(std::uint64_t n, const Cmp& c) {
  if (c.kind != Cmp::Count) return c.kind == Cmp::Always;
  switch (c.c) {
    case Comparator::Le: return n <= c.k;
    case Comparator::Gt: return n > c.k;
    case Comparator::Eq: return n == c.k;
  }
  return false;
}

void user_nominals(const XPathExpr& e, std::set<std::string>& out);
void user_nominals(const XQualifier& q, std::set<std::string>& out) {
  if (q.kind == QK::Nominal) out.insert("@" + q.name);
  if (q.path) user_nominals(*q.path, out);
  if (q.lhs) user_nominals(*q.lhs, out);
  if (q.rhs) user_nominals(*q.rhs, out);
}
void user_nominals(const XPathExpr& e, std::set<std::string>& out) {
  if (e.lhs) user_nominals(*e.lhs, out);
  if (e.rhs) user_nominals(*e.rhs, out);
  if (e.qual) user_nominals(*e.qual, out);
}

class Compiler {
 public:
  explicit Compiler(std::set<std::string> taken = {}, std::string prefix = "@n", S schema = nullptr)
      : taken_(std::move(taken)), prefix_(std::move(prefix)), schema_(std::move(schema)) {}

  struct Sel {
    S f;
    bool uniq;  // holds at one node at most
  };

  // Nodes y with some x |= g and x (a) y.
  S axis(Axis a, S g) {
    switch (a) {
      case Axis::Self: return g;
      case Axis::Child: return star(kPs, dia(kPa, g));
      case Axis::Parent: return dia(kFc, star(kNs, g));
      case Axis::Descendant: {
        std::string x = fresh_var();
        return sf::mu(x, disj(disj(dia(kPa, g), dia(kPa, sf::var(x))), dia(kPs, sf::var(x))));
      }
      case Axis::Ancestor: {
        std::string x = fresh_var();
        return dia(kFc, sf::mu(x, disj(disj(g, dia(kFc, sf::var(x))), dia(kNs, sf::var(x)))));
      }
      case Axis::FollowingSibling: return strict_star(kPs, g);
      case Axis::PrecedingSibling: return strict_star(kNs, g);
      case Axis::Following: return anc_or_self(strict_star(kPs, desc_or_self(g)));
      case Axis::Preceding: return anc_or_self(strict_star(kNs, desc_or_self(g)));
    }
    return g;
  }

  // `top`: the result is not put under a fixpoint, so counting may stay
  // where it is.
  Sel sel(const XPathExpr& e, S g, bool uniq, bool pos, bool top = false) {
    switch (e.kind) {
      case XK::Step: {
        S f = conj(test(e.test), axis(e.axis, g));
        return {f, uniq && (e.axis == Axis::Self || e.axis == Axis::Parent)};
      }
      case XK::Seq: {
        Sel a = sel(*e.lhs, g, uniq, pos);
        return sel(*e.rhs, a.f, a.uniq, pos, top);
      }
      case XK::Qualified: {
        Sel a = sel(*e.lhs, g, uniq, pos, top);
        bool saved = local_;
        local_ = top;
        S q = qual(*e.qual, pos);
        local_ = saved;
        return {conj(a.f, q), a.uniq};
      }
      case XK::Root: return sel(*e.lhs, root_context(), true, pos, top);
      case XK::Position: throw std::logic_error("position() must be desugared before compilation");
      case XK::Union: return {disj(sel(*e.lhs, g, uniq, pos, top).f, sel(*e.rhs, g, uniq, pos, top).f), false};
      case XK::Intersect:
      case XK::Except: {
        const bool except = e.kind == XK::Except;
        S ga = g, gb = g;
        if (!uniq) {
          // pin the context node so both sides start from the same one
          std::string m = pin(pos, "intersect/except below a context that is not a single node");
          hoisted_.push_back(at_most_one(m));
          ga = conj(g, sf::prop(m));
          gb = sf::prop(m);
        }
        Sel a = sel(*e.lhs, ga, true, pos, top);
        Sel b = sel(*e.rhs, gb, true, except ? !pos : pos, top);
        return {conj(a.f, except ? neg(b.f) : b.f), a.uniq};
      }
    }
    return {g, false};
  }

  // Nodes x having some y with (x, y) in e and y |= chi.
  S ex(const XPathExpr& e, S chi, bool pos) {
    bool saved = local_;
    local_ = false;
    S f = ex_(e, chi, pos);
    local_ = saved;
    return f;
  }

  S ex_(const XPathExpr& e, S chi, bool pos) {
    switch (e.kind) {
      case XK::Step: return axis(inverse(e.axis), conj(test(e.test), chi));
      case XK::Seq: return ex(*e.lhs, ex(*e.rhs, chi, pos), pos);
      case XK::Qualified: return ex(*e.lhs, conj(chi, qual(*e.qual, pos)), pos);
      case XK::Union: return disj(ex(*e.lhs, chi, pos), ex(*e.rhs, chi, pos));
      case XK::Intersect:
      case XK::Except: {
        const bool except = e.kind == XK::Except;
        std::string m = pin(pos, "intersect/except inside a qualifier");
        hoisted_.push_back(at_most_one(m));
        S a = ex(*e.lhs, conj(chi, sf::prop(m)), pos);
        S b = ex(*e.rhs, sf::prop(m), except ? !pos : pos);
        return conj(a, except ? neg(b) : b);
      }
      case XK::Root: throw UnsupportedError("absolute path inside a qualifier");
      case XK::Position: throw std::logic_error("position() must be desugared before compilation");
    }
    return chi;
  }

  S qual(const XQualifier& q, bool pos) {
    switch (q.kind) {
      case QK::Path: return ex(*q.path, top(), pos);
      case QK::Count: return count(q, pos);
      case QK::Not:
        if (q.lhs->kind == QK::Count) return complement(*q.lhs, pos);
        return neg(qual(*q.lhs, !pos));
      case QK::And: return conj(qual(*q.lhs, pos), qual(*q.rhs, pos));
      case QK::Or: return disj(qual(*q.lhs, pos), qual(*q.rhs, pos));
      case QK::Nominal: return sf::nominal(q.name);
    }
    return top();
  }

  S root_context() {
    S r = conj(conj(none(kPa), none(kPs)), none(kNs));
    return schema_ ? conj(r, schema_) : r;
  }
  S relative_context() { return schema_ ? schema_ : top(); }

  S any_context() {
    std::string x = fresh_var();
    return sf::mu(x, disj(disj(root_context(), dia(kPa, sf::var(x))), dia(kPs, sf::var(x))));
  }

  const std::vector<std::string>& nominals() const { return nominals_; }
  // Constraints on the fresh nominals, conjoined at the top.
  const std::vector<S>& hoisted() const { return hoisted_; }

 private:
  S test(const std::string& t) { return t == "*" ? top() : sf::prop(t); }

  // mu x. g | <m>x
  S star(Modality m, S g) {
    std::string x = fresh_var();
    return sf::mu(x, disj(g, dia(m, sf::var(x))));
  }
  // mu x. <m>(g | x)
  S strict_star(Modality m, S g) {
    std::string x = fresh_var();
    return sf::mu(x, dia(m, disj(g, sf::var(x))));
  }
  // mu x. g | <fc> mu y. x | <ns>y
  S desc_or_self(S g) {
    std::string x = fresh_var(), y = fresh_var();
    return sf::mu(x, disj(g, dia(kFc, sf::mu(y, disj(sf::var(x), dia(kNs, sf::var(y)))))));
  }
  // mu x. g | mu y. <pa>x | <ps>y
  S anc_or_self(S g) {
    std::string x = fresh_var(), y = fresh_var();
    return sf::mu(x, disj(g, sf::mu(y, disj(dia(kPa, sf::var(x)), dia(kPs, sf::var(y))))));
  }

  // not(count(P) op k) as counts with the opposite comparison
  S complement(const XQualifier& q, bool pos) {
    auto with = [&](CountCmp c) { return count(*xp::count(q.path, c, q.k), pos); };
    switch (q.cmp) {
      case CountCmp::Lt: return with(CountCmp::Ge);
      case CountCmp::Le: return with(CountCmp::Gt);
      case CountCmp::Gt: return with(CountCmp::Le);
      case CountCmp::Ge: return with(CountCmp::Lt);
      case CountCmp::Eq: return disj(with(CountCmp::Lt), with(CountCmp::Gt));
    }
    return top();
  }

  S count(const XQualifier& q, bool pos) {
    Cmp c = lower(q.cmp, q.k);
    if (c.kind == Cmp::Never) return bottom();
    if (c.kind == Cmp::Always) return top();
    if (!local_) {
      // Counting may not sit under a fixpoint. Only the nominal stays here;
      // the count moves to the top, and holds vacuously when the nominal is
      // placed nowhere.
      std::string m = pin(pos, "count() below a later step or inside a path qualifier");
      ++in_count_;
      S body = sel(*q.path, sf::prop(m), true, true).f;
      --in_count_;
      hoisted_.push_back(at_most_one(m));
      S g = sf::global_count(c.c, c.k, body);
      // with no nominal the count is 0, which only <= accepts
      hoisted_.push_back(c.c == Comparator::Le ? g : disj(nowhere(m), g));
      return sf::prop(m);
    }
    // peel the qualifiers of a single step
    const XPathExpr* p = q.path.get();
    std::vector<const XQualifier*> quals;
    while (p->kind == XK::Qualified) {
      quals.push_back(p->qual.get());
      p = p->lhs.get();
    }
    if (p->kind == XK::Step && p->axis != Axis::Following && p->axis != Axis::Preceding) {
      ++in_count_;
      S body = test(p->test);
      for (auto it = quals.rbegin(); it != quals.rend(); ++it) body = conj(body, qual(**it, true));
      --in_count_;
      return direct_count(p->axis, c, body);
    }
    // The counted nodes are found anywhere in the tree and must lead back to
    // the context node, which a fresh nominal marks.
    std::string m = pin(pos, "count() over this path under negation");
    hoisted_.push_back(at_most_one(m));
    ++in_count_;
    S body = sel(*q.path, sf::prop(m), true, true).f;
    --in_count_;
    return conj(sf::prop(m), sf::global_count(c.c, c.k, body));
  }

  S direct_count(Axis a, const Cmp& c, S body) {
    auto t = [](const char* s) { return parse_trail_text(s); };
    std::optional<Modality> first;
    Trail trail = Trail::empty();
    switch (a) {
      case Axis::Self: {
        bool one = passes(1, c), zero = passes(0, c);
        if (one && zero) return top();
        if (one) return body;
        if (zero) return neg(body);
        return bottom();
      }
      case Axis::Child: first = kFc, trail = t("ns*"); break;
      case Axis::Descendant: first = kFc, trail = t("(fc|ns)*"); break;
      case Axis::FollowingSibling: first = kNs, trail = t("ns*"); break;
      case Axis::PrecedingSibling: first = kPs, trail = t("ps*"); break;
      case Axis::Parent: trail = t("ps*, pa"); break;
      case Axis::Ancestor: trail = t("(ps|pa)*, pa"); break;
      default: throw std::logic_error("no direct count for " + axis_name(a));
    }
    S f = sf::count(trail, c.c, c.k, body);
    if (!first) return f;
    f = dia(*first, f);
    // no first step means a count of zero
    return passes(0, c) ? disj(none(*first), f) : f;
  }

  static Trail parse_trail_text(const char* s);

  std::string pin(bool pos, const char* what) {
    if (!pos) throw UnsupportedError(std::string(what) + " needs a fresh nominal under negation");
    if (in_count_) throw UnsupportedError(std::string(what) + " inside a count() path");
    std::string m;
    do m = prefix_ + std::to_string(++counter_);
    while (taken_.count(m));
    nominals_.push_back(m);
    return m;
  }

  // A fresh nominal only ever occurs positively next to what it marks, so a
  // formula that holds has it somewhere and "at most one" suffices.
  static S at_most_one(const std::string& m) { return sf::global_count(Comparator::Le, 1, sf::prop(m)); }

  // No node of the tree (or hedge) carries m; navigation only.
  static S nowhere(const std::string& m) {
    Formula d = helpers::desc_or_self(Formula::prop(m));
    return neg(sf::inject(helpers::anc_or_self(Formula::disj(d, helpers::siblings(d)))));
  }

  std::string fresh_var() { return "x" + std::to_string(++vars_); }

  std::set<std::string> taken_;
  std::string prefix_;
  S schema_;
  std::vector<std::string> nominals_;
  std::vector<S> hoisted_;
  bool local_ = false;
  int counter_ = 0;
  int vars_ = 0;
  int in_count_ = 0;
};

}  // namespace

}  // namespace treecount

#include "treecount/parser.hpp"

namespace treecount {

namespace {
Trail Compiler::parse_trail_text(const char* s) { return parse_trail(s); }
}  // namespace

Formula compile_step_axes(Axis a, Formula gamma) {
  Compiler c;
  return normalize(c.axis(a, sf::inject(gamma)));
}

CompiledXPath compile_xpath(const XPathPtr& e, XPathContext ctx) {
  XPathCompileOptions opt;
  opt.context = ctx;
  return compile_xpath(e, opt);
}

CompiledXPath compile_xpath(const XPathPtr& e, const XPathCompileOptions& opt) {
  const std::string& nominal_prefix = opt.nominal_prefix;
  if (nominal_prefix.size() < 2 || nominal_prefix[0] != '@')
    throw std::invalid_argument("nominal prefix must look like @name");
  XPathPtr d = desugar_position(e);
  std::set<std::string> taken;
  user_nominals(*d, taken);
  Compiler c(taken, nominal_prefix, opt.schema);
  S body;
  switch (opt.context) {
    case XPathContext::Root: body = c.sel(*d, c.root_context(), true, true, true).f; break;
    case XPathContext::Any: body = c.sel(*d, c.any_context(), false, true, true).f; break;
    case XPathContext::Relative: body = c.sel(*d, c.relative_context(), false, true, true).f; break;
  }
  for (const S& h : c.hoisted()) body = conj(body, h);
  CompiledXPath out;
  out.surface = body;
  out.formula = normalize(body);
  out.nominals = c.nominals();
  return out;
}

NodeSet compiled_selection(const CompiledXPath& c, const BinTree& t) {
  const int n = t.size();
  NodeSet out(n);
  if (c.nominals.empty()) return eval(c.formula, t);
  // place n means nowhere
  std::vector<int> place(c.nominals.size(), 0);
  if (n == 0) return out;
  for (;;) {
    BinTree marked = t;
    for (std::size_t i = 0; i < place.size(); ++i)
      if (place[i] < n) marked.set_mark(c.nominals[i], place[i]);
    NodeSet s = eval(c.formula, marked);
    for (int x = 0; x < n; ++x) out[x] = out[x] || s[x];
    std::size_t i = 0;
    while (i < place.size() && ++place[i] == n + 1) place[i++] = 0;
    if (i == place.size()) break;
  }
  return out;
}

}  // namespace treecount
