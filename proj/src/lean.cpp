#include "treecount/lean.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "treecount/normalize.hpp"
#include "treecount/semantics.hpp"

namespace treecount {

using Op = Formula::Op;

namespace {

// Star nesting depth picks the variable, so an inner star never captures the
// variable of an enclosing one.
Formula nav_trail(Trail t, Formula psi, int depth) {
  switch (t.kind()) {
    case Trail::Kind::Empty: return psi;
    case Trail::Kind::Step: return Formula::modal(t.modality(), psi);
    case Trail::Kind::Concat: return nav_trail(t.lhs(), nav_trail(t.rhs(), psi, depth), depth);
    case Trail::Kind::Union: return Formula::disj(nav_trail(t.lhs(), psi, depth), nav_trail(t.rhs(), psi, depth));
    case Trail::Kind::Star: {
      std::string x = "$x" + (depth ? std::to_string(depth) : std::string());
      return Formula::mu(x, Formula::disj(psi, nav_trail(t.lhs(), Formula::var(x), depth + 1)));
    }
  }
  return psi;
}

}  // namespace

Formula nav(Trail t, Formula psi) { return nav_trail(t, psi, 0); }

Formula nav(Formula f) {
  if (!f.has_counting()) return f;
  switch (f.op()) {
    case Op::And: return Formula::conj(nav(f.lhs()), nav(f.rhs()));
    case Op::Or: return Formula::disj(nav(f.lhs()), nav(f.rhs()));
    case Op::Modal: return Formula::modal(f.modality(), nav(f.body()));
    case Op::CountGt: {
      Formula psi = f.body();
      if (f.cprop() >= 0) psi = Formula::conj(psi, Formula::count_prop(f.cprop()));
      return nav(f.trail(), psi);
    }
    case Op::CountLe: {
      Formula psi = f.body();
      if (f.cprop() >= 0)
        psi = Formula::disj(Formula::conj(psi, Formula::count_prop(f.cprop())),
                            Formula::conj(negate(psi), Formula::not_count_prop(f.cprop())));
      return nav(f.trail(), psi);
    }
    default: throw std::logic_error("nav: counting below " + f.to_string());
  }
}

std::vector<Formula> fisher_ladner(Formula f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::deque<Formula> work;
  auto add = [&](Formula g) {
    if (seen.insert(g).second) {
      out.push_back(g);
      work.push_back(g);
    }
  };
  add(f);
  while (!work.empty()) {
    Formula g = work.front();
    work.pop_front();
    switch (g.op()) {
      case Op::And:
      case Op::Or:
        add(g.lhs());
        add(g.rhs());
        break;
      case Op::Modal: add(g.body()); break;
      case Op::Mu: add(g.unfold()); break;
      default: break;
    }
    if (g.has_counting()) add(nav(g));
  }
  return out;
}

Lean Lean::build(Formula f) {
  Lean l;
  l.phi_ = f;
  auto push = [&](Formula g) {
    if (l.index_.emplace(g, static_cast<int>(l.elems_.size())).second) l.elems_.push_back(g);
    return l.index_.at(g);
  };
  for (Modality m : kAllModalities) l.top_[index_of(m)] = push(Formula::modal(m, Formula::top()));

  std::set<int> cprops;
  std::set<std::string> props;
  for (Formula g : fisher_ladner(f)) {
    if (g.op() == Op::Modal && !g.has_counting() && g.body() != Formula::top()) {
      int i = push(g);
      if (static_cast<int>(l.elems_.size()) - 1 == i) l.modal_[index_of(g.modality())].push_back(i);
    }
    if (g.op() == Op::CountProp || g.op() == Op::NotCountProp) cprops.insert(g.cprop());
    if (g.op() == Op::Prop || g.op() == Op::NotProp) props.insert(g.name());
  }
  for (const auto& p : props) {
    int i = push(Formula::prop(p));
    l.prop_index_[p] = i;
    (is_marker_prop(p) ? l.free_ : l.labels_).push_back(i);
  }
  l.num_counting_ = cprops.empty() ? 0 : *cprops.rbegin() + 1;
  l.cprops_.assign(l.num_counting_, -1);
  for (int c : cprops) {
    int i = push(Formula::count_prop(c));
    l.cprops_[c] = i;
    l.free_.push_back(i);
  }
  l.labels_.push_back(push(Formula::prop(kOtherLabel)));
  l.prop_index_[kOtherLabel] = l.labels_.back();
  return l;
}

int Lean::find(Formula f) const {
  auto it = index_.find(f);
  return it == index_.end() ? -1 : it->second;
}

int Lean::find_prop(const std::string& name) const {
  auto it = prop_index_.find(name);
  return it == prop_index_.end() ? -1 : it->second;
}

int Lean::count_prop(int c) const { return c >= 0 && c < num_counting_ ? cprops_[c] : -1; }

std::string Lean::dump() const {
  std::string s;
  for (Formula f : elems_) s += f.to_string() + "\n";
  return s;
}

bool is_phi_node(const Lean& lean, const PhiNode& n) {
  int labels = 0;
  for (int i : lean.labels()) labels += n.test(i);
  if (labels != 1) return false;
  for (Modality m : kAllModalities)
    for (int i : lean.modal(m))
      if (n.test(i) && !n.test(lean.top(m))) return false;
  return !(n.test(lean.top(Modality::Parent)) && n.test(lean.top(Modality::PrevSibling)));
}

namespace {

struct NodeEnumerator {
  const Lean& lean;
  const std::function<bool(const PhiNode&)>& visit;
  std::vector<int> kind;  // 0 free, 1 label, 2+m modal member of modality m
  PhiNode n;
  int labels = 0;

  bool admissible(int i) const {
    int k = kind[i];
    if (k == 1) return labels == 0;
    if (k >= 2) return n.test(lean.top(static_cast<Modality>(k - 2)));
    if (i == lean.top(Modality::Parent)) return !n.test(lean.top(Modality::PrevSibling));
    if (i == lean.top(Modality::PrevSibling)) return !n.test(lean.top(Modality::Parent));
    return true;
  }

  bool go(int i) {
    if (i == lean.size()) return labels != 1 || visit(n);
    if (!go(i + 1)) return false;
    if (!admissible(i)) return true;
    n.set(i);
    labels += kind[i] == 1;
    bool more = go(i + 1);
    labels -= kind[i] == 1;
    n.set(i, false);
    return more;
  }
};

}  // namespace

void enumerate_phi_nodes(const Lean& lean, const std::function<bool(const PhiNode&)>& visit) {
  NodeEnumerator e{lean, visit, std::vector<int>(lean.size(), 0), PhiNode(lean.size())};
  for (int i : lean.labels()) e.kind[i] = 1;
  for (Modality m : kAllModalities)
    for (int i : lean.modal(m)) e.kind[i] = 2 + index_of(m);
  e.go(0);
}

bool LocalEntailment::operator()(Formula f) {
  auto bit = [&](Formula g) {
    int i = lean_.find(g);
    if (i < 0) throw std::logic_error("local entailment: " + g.to_string() + " is not in the lean");
    return n_.test(i);
  };
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Prop:
    case Op::NotProp: {
      int i = lean_.find_prop(f.name());
      return (i >= 0 && n_.test(i)) == (f.op() == Op::Prop);
    }
    case Op::CountProp:
    case Op::NotCountProp: {
      int i = lean_.count_prop(f.cprop());
      if (i < 0) throw std::logic_error("local entailment: " + f.to_string() + " is not in the lean");
      return n_.test(i) == (f.op() == Op::CountProp);
    }
    case Op::Modal: return bit(f);
    case Op::NoModal: return !n_.test(lean_.top(f.modality()));
    case Op::And:
    case Op::Or:
    case Op::Mu: {
      auto it = memo_.find(f);
      if (it != memo_.end()) return it->second;
      bool r;
      if (f.op() == Op::Mu) r = (*this)(f.unfold());
      else if (f.op() == Op::And) r = (*this)(f.lhs()) && (*this)(f.rhs());
      else r = (*this)(f.lhs()) || (*this)(f.rhs());
      memo_.emplace(f, r);
      return r;
    }
    default: throw std::logic_error("local entailment undefined for " + f.to_string());
  }
}

bool node_entails(const Lean& lean, const PhiNode& n, Formula f) { return LocalEntailment(lean, n)(f); }

std::vector<PhiNode> truthful_nodes(const Lean& lean, const BinTree& t) {
  std::vector<PhiNode> out(t.size(), PhiNode(lean.size()));
  for (int i = 0; i < lean.size(); ++i) {
    NodeSet s = eval(lean.element(i), t);
    for (int n = 0; n < t.size(); ++n) out[n].set(i, s[n]);
  }
  return out;
}

std::string node_to_string(const Lean& lean, const PhiNode& n) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < lean.size(); ++i) {
    if (!n.test(i)) continue;
    if (!first) s += ", ";
    first = false;
    s += lean.element(i).to_string();
  }
  return s + "}";
}

}  // namespace treecount
