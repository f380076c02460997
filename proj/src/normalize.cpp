#include "treecount/normalize.hpp"

#include <algorithm>
#include <unordered_map>

#include "treecount/error.hpp"

namespace treecount {

using Op = Formula::Op;

Trail everywhere_trail() {
  static const Trail t = Trail::concat(
      Trail::star(Trail::alt(Trail::step(Modality::Parent), Trail::step(Modality::PrevSibling))),
      Trail::star(Trail::alt(Trail::step(Modality::FirstChild), Trail::step(Modality::NextSibling))));
  return t;
}

namespace helpers {

namespace {
Formula M(Modality m, Formula f) { return Formula::modal(m, f); }
Formula V(const char* x) { return Formula::var(x); }
constexpr Modality kFc = Modality::FirstChild, kNs = Modality::NextSibling, kPa = Modality::Parent,
                   kPs = Modality::PrevSibling;
}  // namespace

Formula descendant(Formula psi) {
  return M(kFc, Formula::mu("x", Formula::disj(Formula::disj(psi, M(kFc, V("x"))), M(kNs, V("x")))));
}
Formula foll_sibling(Formula psi) { return Formula::mu("x", Formula::disj(M(kNs, psi), M(kNs, V("x")))); }
Formula prec_sibling(Formula psi) { return Formula::mu("x", Formula::disj(M(kPs, psi), M(kPs, V("x")))); }
Formula desc_or_self(Formula psi) {
  Formula inner = Formula::mu("y", Formula::disj(V("x"), M(kNs, V("y"))));
  return Formula::mu("x", Formula::disj(psi, M(kFc, inner)));
}
Formula ancestor(Formula psi) {
  return Formula::mu("x", Formula::disj(M(kPa, Formula::disj(psi, V("x"))), M(kPs, V("x"))));
}
Formula anc_or_self(Formula psi) {
  Formula inner = Formula::mu("y", Formula::disj(M(kPa, Formula::disj(V("y"), V("x"))), M(kPs, V("y"))));
  return Formula::mu("x", Formula::disj(psi, inner));
}
Formula siblings(Formula psi) { return Formula::disj(foll_sibling(psi), prec_sibling(psi)); }

}  // namespace helpers

Formula negate(Formula f) {
  switch (f.op()) {
    case Op::True: return Formula::bottom();
    case Op::False: return Formula::top();
    case Op::Prop: return Formula::not_prop(f.name());
    case Op::NotProp: return Formula::prop(f.name());
    case Op::CountProp: return Formula::not_count_prop(f.cprop());
    case Op::NotCountProp: return Formula::count_prop(f.cprop());
    case Op::Var: return f;
    case Op::And: return Formula::disj(negate(f.lhs()), negate(f.rhs()));
    case Op::Or: return Formula::conj(negate(f.lhs()), negate(f.rhs()));
    case Op::Modal: {
      Formula nb = negate(f.body());
      if (nb.op() == Op::False) return Formula::no_modal(f.modality());
      return Formula::disj(Formula::no_modal(f.modality()), Formula::modal(f.modality(), nb));
    }
    case Op::NoModal: return Formula::modal(f.modality(), Formula::top());
    case Op::CountLe: return Formula::count_gt(f.trail(), f.bound(), f.body());
    case Op::CountGt: return Formula::count_le(f.trail(), f.bound(), f.body());
    case Op::Mu: return Formula::mu(f.name(), negate(f.body()));
  }
  return f;
}

namespace {

Formula count_formula(Trail t, Comparator c, std::uint64_t k, Formula body) {
  switch (c) {
    case Comparator::Le: return Formula::count_le(t, k, body);
    case Comparator::Gt: return Formula::count_gt(t, k, body);
    case Comparator::Eq:
      if (k == 0) return Formula::count_le(t, 0, body);
      return Formula::conj(Formula::count_gt(t, k - 1, body), Formula::count_le(t, k, body));
  }
  return body;
}

std::string where(const SurfaceFormula& f) {
  if (f.line == 0) return {};
  return " at " + std::to_string(f.line) + ":" + std::to_string(f.column);
}

struct Binding {
  std::string name;
  bool positive;
};

class Normalizer {
 public:
  Formula run(const SurfaceFormula& f) { return go(f, true); }

 private:
  // Normal form of f when `positive`, of ~f otherwise.
  Formula go(const SurfaceFormula& f, bool positive) {
    using K = SurfaceFormula::Kind;
    switch (f.kind) {
      case K::True: return positive ? Formula::top() : Formula::bottom();
      case K::Prop: return positive ? Formula::prop(f.name) : Formula::not_prop(f.name);
      case K::Var: {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
          if (it->name != f.name) continue;
          if (it->positive != positive)
            throw WellFormednessError("variable " + f.name + " occurs under negation within its binder" + where(f));
          return Formula::var(f.name);
        }
        throw WellFormednessError("free variable " + f.name + where(f));
      }
      case K::Not: return go(*f.kids[0], !positive);
      case K::And:
      case K::Or: {
        Formula a = go(*f.kids[0], positive);
        Formula b = go(*f.kids[1], positive);
        return (f.kind == K::And) == positive ? Formula::conj(a, b) : Formula::disj(a, b);
      }
      case K::Modal: {
        Formula b = go(*f.kids[0], positive);
        if (positive) return Formula::modal(f.modality, b);
        if (b.op() == Formula::Op::False) return Formula::no_modal(f.modality);
        return Formula::disj(Formula::no_modal(f.modality), Formula::modal(f.modality, b));
      }
      case K::Mu: {
        ++mu_depth_;
        env_.push_back({f.name, positive});
        Formula b = go(*f.kids[0], positive);
        env_.pop_back();
        --mu_depth_;
        return Formula::mu(f.name, b);
      }
      case K::Count: return counting(f, f.trail, *f.kids[0], positive);
      case K::GlobalCount: return counting(f, everywhere_trail(), *f.kids[0], positive);
      case K::Implies: {
        Formula g = counting(f, everywhere_trail(), *f.kids[0], positive);
        Formula b = go(*f.kids[1], positive);
        return positive ? Formula::conj(g, b) : Formula::disj(g, b);
      }
      case K::Nominal: {
        Formula n = nominal("@" + f.name);
        return positive ? n : negate(n);
      }
      case K::Formula: {
        Formula e = *f.embedded;
        if (!e.closed()) throw WellFormednessError("embedded formula has free variables");
        return positive ? e : negate(e);
      }
    }
    return Formula::top();
  }

  Formula counting(const SurfaceFormula& f, Trail t, const SurfaceFormula& body, bool positive) {
    if (in_count_) throw WellFormednessError("counting formula nested in a counting formula" + where(f));
    if (mu_depth_ > 0) throw WellFormednessError("counting formula under a fixpoint" + where(f));
    if (auto v = trail_grammar_violation(t); !v.empty())
      throw WellFormednessError("malformed trail " + t.to_string() + ": " + v + where(f));
    if (auto v = trail_cycle_violation(t); !v.empty()) throw WellFormednessError(v + where(f));
    in_count_ = true;
    // Negation flips the comparator, never the counted formula.
    Formula b = go(body, true);
    in_count_ = false;
    if (positive) return count_formula(t, f.cmp, f.k, b);
    switch (f.cmp) {
      case Comparator::Le: return Formula::count_gt(t, f.k, b);
      case Comparator::Gt: return Formula::count_le(t, f.k, b);
      case Comparator::Eq:
        if (f.k == 0) return Formula::count_gt(t, 0, b);
        return Formula::disj(Formula::count_le(t, f.k - 1, b), Formula::count_gt(t, f.k, b));
    }
    return b;
  }

  Formula nominal(const std::string& name) {
    Formula n = Formula::prop(name);
    if (!in_count_ && mu_depth_ == 0) return Formula::conj(count_formula(everywhere_trail(), Comparator::Eq, 1, n), n);
    using namespace helpers;
    Formula elsewhere = Formula::disj(Formula::disj(descendant(n), ancestor(n)), anc_or_self(siblings(desc_or_self(n))));
    return Formula::conj(n, negate(elsewhere));
  }

  std::vector<Binding> env_;
  int mu_depth_ = 0;
  bool in_count_ = false;
};

// Modalities on the way from a binder of x to its occurrences, together with
// the loops of inner binders that those occurrences pass through.
class CycleChecker {
 public:
  std::vector<std::string> run(Formula f) {
    visit(f);
    return std::move(violations_);
  }

 private:
  struct Info {
    unsigned mask = 0;
    bool unguarded = false;
  };

  const Info& info(Formula mu) {
    if (auto it = memo_.find(mu); it != memo_.end()) return it->second;
    Info in;
    walk(mu.body(), mu.name(), 0, false, in);
    return memo_.emplace(mu, in).first->second;
  }

  void walk(Formula f, const std::string& x, unsigned path, bool guarded, Info& out) {
    switch (f.op()) {
      case Op::Var:
        if (f.name() == x) {
          out.mask |= path;
          if (!guarded) out.unguarded = true;
        }
        return;
      case Op::And:
      case Op::Or:
        walk(f.lhs(), x, path, guarded, out);
        walk(f.rhs(), x, path, guarded, out);
        return;
      case Op::Modal:
        walk(f.body(), x, path | 1u << index_of(f.modality()), true, out);
        return;
      case Op::Mu: {
        if (f.name() == x) return;
        const auto& fv = f.free_vars();
        if (!std::binary_search(fv.begin(), fv.end(), x)) return;
        out.mask |= info(f).mask;
        walk(f.body(), x, path, guarded, out);
        return;
      }
      case Op::CountLe:
      case Op::CountGt: walk(f.body(), x, path, guarded, out); return;
      default: return;
    }
  }

  void visit(Formula f) {
    if (!seen_.emplace(f, true).second) return;
    switch (f.op()) {
      case Op::And:
      case Op::Or:
        visit(f.lhs());
        visit(f.rhs());
        return;
      case Op::Modal: visit(f.body()); return;
      case Op::CountLe:
      case Op::CountGt:
        if (auto v = trail_cycle_violation(f.trail()); !v.empty()) violations_.push_back(v);
        visit(f.body());
        return;
      case Op::Mu: {
        const Info& in = info(f);
        if (in.unguarded) violations_.push_back("fixpoint variable " + f.name() + " occurs outside any modality");
        for (Modality m : {Modality::FirstChild, Modality::NextSibling}) {
          unsigned both = (1u << index_of(m)) | (1u << index_of(inverse(m)));
          if ((in.mask & both) == both)
            violations_.push_back("fixpoint variable " + f.name() + " recurses through both " +
                                  std::string(keyword(m)) + " and " + std::string(keyword(inverse(m))));
        }
        visit(f.body());
        return;
      }
      default: return;
    }
  }

  std::unordered_map<Formula, Info> memo_;
  std::unordered_map<Formula, bool> seen_;
  std::vector<std::string> violations_;
};

Formula annotate(Formula f, int& next) {
  switch (f.op()) {
    case Op::And: {
      Formula a = annotate(f.lhs(), next);
      return Formula::conj(a, annotate(f.rhs(), next));
    }
    case Op::Or: {
      Formula a = annotate(f.lhs(), next);
      return Formula::disj(a, annotate(f.rhs(), next));
    }
    case Op::Modal: return Formula::modal(f.modality(), annotate(f.body(), next));
    case Op::CountLe: return Formula::count_le(f.trail(), f.bound(), f.body(), next++);
    case Op::CountGt: return Formula::count_gt(f.trail(), f.bound(), f.body(), next++);
    default: return f;  // counting never occurs under mu
  }
}

int count_counting(Formula f) {
  switch (f.op()) {
    case Op::And:
    case Op::Or: return count_counting(f.lhs()) + count_counting(f.rhs());
    case Op::Modal:
    case Op::Mu: return count_counting(f.body());
    case Op::CountLe:
    case Op::CountGt: return 1 + count_counting(f.body());
    default: return 0;
  }
}

}  // namespace

Formula normalize(const SurfacePtr& f) {
  Formula out = Normalizer().run(*f);
  if (!out.closed()) throw WellFormednessError("formula has free variables");
  auto v = check_cycle_free(out);
  if (!v.empty()) {
    std::string msg = "formula is not cycle-free: " + v[0];
    for (std::size_t i = 1; i < v.size(); ++i) msg += "; " + v[i];
    throw WellFormednessError(msg);
  }
  return out;
}

std::vector<std::string> check_cycle_free(Formula f) { return CycleChecker().run(f); }

Formula annotate_counting(Formula f) {
  int next = 0;
  return annotate(f, next);
}

int counting_count(Formula f) { return count_counting(f); }

}  // namespace treecount
