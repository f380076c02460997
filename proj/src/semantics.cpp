#include "treecount/semantics.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <unordered_map>

namespace treecount {

using Op = Formula::Op;

namespace {

const TrailAutomaton& automaton(Trail t) {
  thread_local std::unordered_map<Trail, TrailAutomaton> cache;
  auto it = cache.find(t);
  if (it == cache.end()) it = cache.emplace(t, TrailAutomaton::build(t)).first;
  return it->second;
}

std::string cprop_name(int id) { return "$c" + std::to_string(id); }

class Evaluator {
 public:
  Evaluator(const BinTree& t, const Valuation& v) : t_(t), env_(v), n_(t.size()) {}

  NodeSet run(Formula f) {
    // closed subformulas do not depend on the environment; without this,
    // nested fixpoints are recomputed on every outer iteration
    const bool cache = f.closed() && f.op() != Op::True && f.op() != Op::False;
    if (cache) {
      auto it = memo_.find(f);
      if (it != memo_.end()) return it->second;
      NodeSet s = compute(f);
      memo_.emplace(f, s);
      return s;
    }
    return compute(f);
  }

 private:
  NodeSet compute(Formula f) {
    switch (f.op()) {
      case Op::True: return NodeSet(n_, true);
      case Op::False: return NodeSet(n_, false);
      case Op::Prop:
      case Op::NotProp: {
        bool pos = f.op() == Op::Prop;
        NodeSet s(n_);
        for (int i = 0; i < n_; ++i) {
          bool in = is_marker_prop(f.name()) ? t_.marked(f.name(), i) : t_.label(i) == f.name();
          s[i] = in == pos;
        }
        return s;
      }
      case Op::CountProp:
      case Op::NotCountProp: {
        bool pos = f.op() == Op::CountProp;
        NodeSet s(n_);
        for (int i = 0; i < n_; ++i) s[i] = t_.marked(cprop_name(f.cprop()), i) == pos;
        return s;
      }
      case Op::Var: {
        auto it = env_.find(f.name());
        return it == env_.end() ? NodeSet(n_, false) : it->second;
      }
      case Op::And:
      case Op::Or: {
        NodeSet a = run(f.lhs()), b = run(f.rhs());
        for (int i = 0; i < n_; ++i) a[i] = f.op() == Op::And ? (a[i] && b[i]) : (a[i] || b[i]);
        return a;
      }
      case Op::Modal: {
        NodeSet b = run(f.body()), s(n_);
        for (int i = 0; i < n_; ++i) {
          int j = t_.step(i, f.modality());
          s[i] = j != BinTree::kNone && b[j];
        }
        return s;
      }
      case Op::NoModal: {
        NodeSet s(n_);
        for (int i = 0; i < n_; ++i) s[i] = t_.step(i, f.modality()) == BinTree::kNone;
        return s;
      }
      case Op::CountLe:
      case Op::CountGt: {
        NodeSet b = run(f.body()), s(n_);
        for (int i = 0; i < n_; ++i) {
          NodeSet r = trail_reach(t_, i, f.trail());
          std::uint64_t c = 0;
          for (int j = 0; j < n_; ++j) c += r[j] && b[j];
          s[i] = f.op() == Op::CountLe ? c <= f.bound() : c > f.bound();
        }
        return s;
      }
      case Op::Mu: {
        auto saved = env_.find(f.name()) != env_.end() ? std::optional<NodeSet>(env_[f.name()]) : std::nullopt;
        NodeSet x(n_, false);
        for (;;) {
          env_[f.name()] = x;
          NodeSet next = run(f.body());
          if (next == x) break;
          x = std::move(next);
        }
        if (saved) env_[f.name()] = *saved;
        else env_.erase(f.name());
        return x;
      }
    }
    return NodeSet(n_, false);
  }

  const BinTree& t_;
  Valuation env_;
  int n_;
  std::unordered_map<Formula, NodeSet> memo_;
};

}  // namespace

NodeSet eval(Formula f, const BinTree& t, const Valuation& v) { return Evaluator(t, v).run(f); }

bool holds_somewhere(Formula f, const BinTree& t) {
  NodeSet s = eval(f, t);
  return std::find(s.begin(), s.end(), true) != s.end();
}

NodeSet trail_reach(const BinTree& t, int n, Trail alpha) {
  const TrailAutomaton& a = automaton(alpha);
  std::vector<std::uint64_t> seen(t.size(), 0);
  std::vector<std::pair<int, std::uint64_t>> work{{n, a.initial}};
  seen[n] = a.initial;
  while (!work.empty()) {
    auto [u, states] = work.back();
    work.pop_back();
    for (Modality m : kAllModalities) {
      int v = t.step(u, m);
      if (v == BinTree::kNone) continue;
      std::uint64_t fresh = a.step(states, m) & ~seen[v];
      if (!fresh) continue;
      seen[v] |= fresh;
      work.emplace_back(v, fresh);
    }
  }
  NodeSet out(t.size());
  for (int i = 0; i < t.size(); ++i) out[i] = (seen[i] & a.accepting) != 0;
  return out;
}

namespace {

struct Shape {
  std::vector<int> fc, ns;  // preorder numbering
};

// Preorder codes: two characters per node ('1' when the first child / next
// sibling exists), node before its first-child subtree before its
// next-sibling subtree.
const std::vector<std::string>& shape_codes(int n) {
  static std::mutex mu;
  static std::vector<std::vector<std::string>> memo{{""}};
  std::lock_guard lock(mu);
  while (static_cast<int>(memo.size()) <= n) {
    int k = static_cast<int>(memo.size());
    std::vector<std::string> out;
    for (int left = 0; left < k; ++left) {
      int right = k - 1 - left;
      for (const auto& l : memo[left])
        for (const auto& r : memo[right]) out.push_back(std::string(left > 0 ? "1" : "0") + (right > 0 ? "1" : "0") + l + r);
    }
    std::sort(out.begin(), out.end());
    memo.push_back(std::move(out));
  }
  return memo[n];
}

Shape decode_shape(const std::string& code) {
  const int n = static_cast<int>(code.size() / 2);
  Shape s{std::vector<int>(n, -1), std::vector<int>(n, -1)};
  // pending[k] = (node, 0 for first child / 1 for next sibling) awaiting a target
  std::vector<std::pair<int, int>> pending;
  for (int i = 0; i < n; ++i) {
    if (!pending.empty()) {
      auto [p, which] = pending.back();
      pending.pop_back();
      (which == 0 ? s.fc : s.ns)[p] = i;
    }
    if (code[2 * i + 1] == '1') pending.emplace_back(i, 1);
    if (code[2 * i] == '1') pending.emplace_back(i, 0);
  }
  return s;
}

std::vector<Shape> shapes_of(int n) {
  std::vector<Shape> out;
  for (const auto& c : shape_codes(n)) out.push_back(decode_shape(c));
  return out;
}

}  // namespace

std::uint64_t shape_count(int n) {
  std::vector<std::uint64_t> c(n + 1, 0);
  c[0] = 1;
  for (int k = 1; k <= n; ++k)
    for (int i = 0; i < k; ++i) c[k] += c[i] * c[k - 1 - i];
  return c[n];
}

void for_each_tree(const std::vector<std::string>& alphabet, int max_nodes,
                   const std::function<bool(const BinTree&)>& visit) {
  if (alphabet.empty()) return;
  const int a = static_cast<int>(alphabet.size());
  for (int n = 1; n <= max_nodes; ++n) {
    for (const Shape& s : shapes_of(n)) {
      BinTree t = BinTree::from_links(0, s.fc, s.ns, std::vector<std::string>(n, alphabet[0]));
      // from_links renumbers into preorder; the shape already is, so node i
      // stays node i.
      std::vector<int> word(n, 0);
      for (;;) {
        for (int i = 0; i < n; ++i) t.set_label(i, alphabet[word[i]]);
        if (!visit(t)) return;
        int i = n - 1;
        while (i >= 0 && ++word[i] == a) word[i--] = 0;
        if (i < 0) break;
      }
    }
  }
}

std::vector<BinTree> enumerate_trees(const std::vector<std::string>& alphabet, int max_nodes) {
  std::vector<BinTree> out;
  for_each_tree(alphabet, max_nodes, [&](const BinTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

namespace {
void collect_markers(Formula f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Prop:
    case Op::NotProp:
      if (is_marker_prop(f.name())) out.insert(f.name());
      return;
    case Op::CountProp:
    case Op::NotCountProp: out.insert(cprop_name(f.cprop())); return;
    case Op::CountLe:
    case Op::CountGt: collect_markers(f.body(), out); return;
    case Op::And:
    case Op::Or:
      collect_markers(f.lhs(), out);
      collect_markers(f.rhs(), out);
      return;
    case Op::Modal:
    case Op::Mu: collect_markers(f.body(), out); return;
    default: return;
  }
}
}  // namespace

std::vector<std::string> marker_props(Formula f) {
  std::set<std::string> s;
  collect_markers(f, s);
  return {s.begin(), s.end()};
}

std::vector<std::string> oracle_alphabet(Formula f) {
  std::vector<std::string> out;
  for (const auto& p : propositions(f))
    if (!is_marker_prop(p)) out.push_back(p);
  out.push_back(kOtherLabel);
  return out;
}

void for_each_marking(Formula f, const BinTree& t, const std::function<bool(const BinTree&)>& visit) {
  std::vector<std::string> markers = marker_props(f);
  const int n = t.size();
  const std::size_t bits = markers.size() * static_cast<std::size_t>(n);
  if (bits >= 63) return;  // far outside oracle scale
  BinTree m = t;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    m.clear_marks();
    for (std::size_t k = 0; k < markers.size(); ++k)
      for (int i = 0; i < n; ++i)
        if (code >> (k * n + i) & 1) m.set_mark(markers[k], i);
    if (!visit(m)) return;
  }
}

std::optional<BinTree> sat_oracle(Formula f, const std::vector<std::string>& alphabet, int max_nodes) {
  std::optional<BinTree> found;
  for_each_tree(alphabet, max_nodes, [&](const BinTree& t) {
    for_each_marking(f, t, [&](const BinTree& m) {
      if (holds_somewhere(f, m)) found = m;
      return !found;
    });
    return !found;
  });
  return found;
}

}  // namespace treecount
