#include <algorithm>
#include <deque>

#include "treecount/tableau.hpp"

namespace treecount {

using Op = Formula::Op;

PhiTree PhiTree::make(PhiNode n, PhiTree left, PhiTree right) {
  auto d = std::make_shared<Data>();
  d->size = 1 + left.size() + right.size();
  d->fp = "(" + n.to_string() + left.fingerprint() + right.fingerprint() + ")";
  d->profile = left.nmax_profile();
  for (const auto& [k, v] : right.nmax_profile()) {
    int& slot = d->profile[k];
    slot = std::max(slot, v);
  }
  d->profile[n] += 1;
  d->node = std::move(n);
  d->left = std::move(left);
  d->right = std::move(right);
  PhiTree t;
  t.d_ = std::move(d);
  return t;
}

const std::string& PhiTree::fingerprint() const {
  static const std::string kEmpty = "-";
  return d_ ? d_->fp : kEmpty;
}

const std::map<PhiNode, int>& PhiTree::nmax_profile() const {
  static const std::map<PhiNode, int> kNoProfile;
  return d_ ? d_->profile : kNoProfile;
}

std::uint64_t occurrence_bound(Formula f) {
  switch (f.op()) {
    case Op::And:
    case Op::Or: return occurrence_bound(f.lhs()) + occurrence_bound(f.rhs());
    case Op::Modal: return occurrence_bound(f.body());
    case Op::CountLe:
    case Op::CountGt: return f.bound() + 1;
    default: return 0;
  }
}

int nmax(const PhiNode& n, const PhiTree& t) {
  if (t.empty()) return 0;
  return (t.node() == n ? 1 : 0) + std::max(nmax(n, t.left()), nmax(n, t.right()));
}

bool consistent(const Lean& lean, const PhiNode& n1, Modality m, const PhiNode& n2) {
  LocalEntailment e1(lean, n1), e2(lean, n2);
  Modality back = inverse(m);
  if (!n1.test(lean.top(m)) || !n2.test(lean.top(back))) return false;
  for (int i : lean.modal(m))
    if (n1.test(i) != e2(lean.element(i).body())) return false;
  for (int i : lean.modal(back))
    if (n2.test(i) != e1(lean.element(i).body())) return false;
  return true;
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "eps";
  std::string s;
  for (Modality m : p) {
    if (!s.empty()) s += '.';
    s += keyword(m);
  }
  return s;
}

namespace {

// Preorder flattening with explicit links in all four directions.
struct Flat {
  std::vector<const PhiTree*> at;
  std::vector<std::array<int, 4>> adj;

  explicit Flat(const PhiTree& t) {
    if (!t.empty()) add(t, -1, Modality::FirstChild);
  }

  int add(const PhiTree& t, int from, Modality how) {
    int id = static_cast<int>(at.size());
    at.push_back(&t);
    adj.push_back({-1, -1, -1, -1});
    if (from >= 0) {
      adj[from][index_of(how)] = id;
      adj[id][index_of(inverse(how))] = from;
    }
    if (!t.left().empty()) add(t.left(), id, Modality::FirstChild);
    if (!t.right().empty()) add(t.right(), id, Modality::NextSibling);
    return id;
  }

  int follow(const Path& rho) const {
    if (at.empty()) return -1;
    int pos = 0;
    for (Modality m : rho) {
      pos = adj[pos][index_of(m)];
      if (pos < 0) return -1;
    }
    return pos;
  }
};

class GlobalEntailment {
 public:
  GlobalEntailment(const Lean& lean, const Flat& fl) : lean_(lean), fl_(fl) {}

  bool operator()(int pos, Formula f) {
    if (!f.has_counting()) return node_entails(lean_, fl_.at[pos]->node(), f);
    switch (f.op()) {
      case Op::And: return (*this)(pos, f.lhs()) && (*this)(pos, f.rhs());
      case Op::Or: return (*this)(pos, f.lhs()) || (*this)(pos, f.rhs());
      case Op::Modal: {
        int q = fl_.adj[pos][index_of(f.modality())];
        return q >= 0 && (*this)(q, f.body());
      }
      case Op::CountGt:
      case Op::CountLe: return count(pos, f);
      default: return false;
    }
  }

 private:
  bool count(int pos, Formula f) {
    TrailAutomaton a = TrailAutomaton::build(f.trail());
    std::vector<std::uint64_t> seen(fl_.at.size(), 0);
    std::vector<std::pair<int, std::uint64_t>> work{{pos, a.initial}};
    seen[pos] = a.initial;
    while (!work.empty()) {
      auto [u, states] = work.back();
      work.pop_back();
      for (Modality m : kAllModalities) {
        int v = fl_.adj[u][index_of(m)];
        if (v < 0) continue;
        std::uint64_t fresh = a.step(states, m) & ~seen[v];
        if (!fresh) continue;
        seen[v] |= fresh;
        work.emplace_back(v, fresh);
      }
    }
    std::uint64_t hits = 0;
    bool two_sided = true;
    for (std::size_t v = 0; v < seen.size(); ++v) {
      if (!(seen[v] & a.accepting)) continue;
      const PhiNode& n = fl_.at[v]->node();
      bool psi = node_entails(lean_, n, f.body());
      bool c = f.cprop() < 0 ? psi : n.test(lean_.count_prop(f.cprop()));
      hits += psi && c;
      two_sided = two_sided && psi == c;
    }
    if (f.op() == Op::CountGt) return hits > f.bound();
    return hits <= f.bound() && two_sided;
  }

  const Lean& lean_;
  const Flat& fl_;
};

}  // namespace

std::optional<PhiNode> navigate(const PhiTree& t, const Path& rho) {
  Flat fl(t);
  int pos = fl.follow(rho);
  if (pos < 0) return std::nullopt;
  return fl.at[pos]->node();
}

bool global_entails(const Lean& lean, const Path& rho, const PhiTree& t, Formula f) {
  Flat fl(t);
  int pos = fl.follow(rho);
  return pos >= 0 && GlobalEntailment(lean, fl)(pos, f);
}

std::optional<Path> tree_satisfies(const Lean& lean, const PhiTree& t, Formula f) {
  if (t.empty()) return std::nullopt;
  if (t.node().test(lean.top(Modality::Parent)) || t.node().test(lean.top(Modality::PrevSibling)))
    return std::nullopt;
  Flat fl(t);
  GlobalEntailment ge(lean, fl);
  std::deque<std::pair<int, Path>> queue{{0, {}}};
  while (!queue.empty()) {
    auto [pos, rho] = std::move(queue.front());
    queue.pop_front();
    if (ge(pos, f)) return rho;
    for (Modality m : {Modality::FirstChild, Modality::NextSibling}) {
      int q = fl.adj[pos][index_of(m)];
      if (q < 0) continue;
      Path next = rho;
      next.push_back(m);
      queue.emplace_back(q, std::move(next));
    }
  }
  return std::nullopt;
}

BinTree extract_model(const Lean& lean, const PhiTree& t) {
  Flat fl(t);
  const std::size_t n = fl.at.size();
  std::vector<int> fc(n, -1), ns(n, -1);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    fc[i] = fl.adj[i][index_of(Modality::FirstChild)];
    ns[i] = fl.adj[i][index_of(Modality::NextSibling)];
    for (int l : lean.labels())
      if (fl.at[i]->node().test(l)) labels[i] = lean.element(l).name();
  }
  BinTree out = BinTree::from_links(n ? 0 : -1, fc, ns, labels);
  // Flat is already preorder, so ids carry over.
  for (std::size_t i = 0; i < n; ++i)
    for (int b : lean.free_bits())
      if (fl.at[i]->node().test(b)) {
        Formula e = lean.element(b);
        out.set_mark(e.op() == Op::Prop ? e.name() : e.to_string(), static_cast<int>(i));
      }
  return out;
}

int model_node(const PhiTree& t, const Path& rho) { return Flat(t).follow(rho); }

}  // namespace treecount
