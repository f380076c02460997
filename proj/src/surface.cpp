#include "treecount/surface.hpp"

namespace treecount {

std::string comparator_text(Comparator c) {
  switch (c) {
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Eq: return "=";
  }
  return "?";
}

namespace surface {

namespace {
using K = SurfaceFormula::Kind;

std::shared_ptr<SurfaceFormula> make(K kind) {
  auto f = std::make_shared<SurfaceFormula>();
  f->kind = kind;
  return f;
}
}  // namespace

SurfacePtr top() { return make(K::True); }

SurfacePtr prop(std::string name) {
  auto f = make(K::Prop);
  f->name = std::move(name);
  return f;
}

SurfacePtr var(std::string name) {
  auto f = make(K::Var);
  f->name = std::move(name);
  return f;
}

SurfacePtr negate(SurfacePtr g) {
  auto f = make(K::Not);
  f->kids = {std::move(g)};
  return f;
}

SurfacePtr conj(SurfacePtr a, SurfacePtr b) {
  auto f = make(K::And);
  f->kids = {std::move(a), std::move(b)};
  return f;
}

SurfacePtr disj(SurfacePtr a, SurfacePtr b) {
  auto f = make(K::Or);
  f->kids = {std::move(a), std::move(b)};
  return f;
}

SurfacePtr modal(Modality m, SurfacePtr body) {
  auto f = make(K::Modal);
  f->modality = m;
  f->kids = {std::move(body)};
  return f;
}

SurfacePtr count(Trail t, Comparator c, std::uint64_t k, SurfacePtr body) {
  auto f = make(K::Count);
  f->trail = t;
  f->cmp = c;
  f->k = k;
  f->kids = {std::move(body)};
  return f;
}

SurfacePtr mu(std::string v, SurfacePtr body) {
  auto f = make(K::Mu);
  f->name = std::move(v);
  f->kids = {std::move(body)};
  return f;
}

SurfacePtr nominal(std::string name) {
  auto f = make(K::Nominal);
  f->name = std::move(name);
  return f;
}

SurfacePtr global_count(Comparator c, std::uint64_t k, SurfacePtr body) {
  auto f = make(K::GlobalCount);
  f->cmp = c;
  f->k = k;
  f->kids = {std::move(body)};
  return f;
}

SurfacePtr implies(SurfacePtr guard, Comparator c, std::uint64_t k, SurfacePtr body) {
  auto f = make(K::Implies);
  f->cmp = c;
  f->k = k;
  f->kids = {std::move(guard), std::move(body)};
  return f;
}

SurfacePtr inject(Formula g) {
  auto f = make(K::Formula);
  f->embedded = g;
  return f;
}

}  // namespace surface

namespace {

void print(const SurfaceFormula& f, int ctx, std::string& out, bool open_right = true) {
  using K = SurfaceFormula::Kind;
  switch (f.kind) {
    case K::True: out += "T"; return;
    case K::Prop:
    case K::Var: out += f.name; return;
    case K::Nominal: out += "@" + f.name; return;
    case K::Not:
      out += "~";
      print(*f.kids[0], 2, out);
      return;
    case K::Modal:
      out += "<" + std::string(keyword(f.modality)) + ">";
      print(*f.kids[0], 2, out);
      return;
    case K::And:
    case K::Or: {
      int level = f.kind == K::Or ? 0 : 1;
      bool paren = ctx > level;
      if (paren) out += '(';
      print(*f.kids[0], level, out, false);
      out += level == 0 ? " | " : " & ";
      print(*f.kids[1], f.kids[1]->kind == f.kind ? level + 1 : level, out, paren || open_right);
      if (paren) out += ')';
      return;
    }
    case K::Mu: {
      bool paren = ctx > 0 || !open_right;
      if (paren) out += '(';
      out += "mu " + f.name + " . ";
      print(*f.kids[0], 0, out);
      if (paren) out += ')';
      return;
    }
    case K::Count:
      out += "cnt(" + f.trail.to_string() + ", " + comparator_text(f.cmp) + std::to_string(f.k) + ", ";
      print(*f.kids[0], 0, out);
      out += ")";
      return;
    case K::GlobalCount:
      out += "glob(" + comparator_text(f.cmp) + std::to_string(f.k) + ", ";
      print(*f.kids[0], 0, out);
      out += ")";
      return;
    case K::Implies:
      out += "implies(";
      print(*f.kids[0], 0, out);
      out += ", " + comparator_text(f.cmp) + std::to_string(f.k) + ", ";
      print(*f.kids[1], 0, out);
      out += ")";
      return;
    case K::Formula:
      out += "(" + f.embedded->to_string() + ")";
      return;
  }
}

}  // namespace

std::string to_string(const SurfaceFormula& f) {
  std::string s;
  print(f, 0, s);
  return s;
}

}  // namespace treecount
