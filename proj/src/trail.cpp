#include "treecount/trail.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

#include "treecount/error.hpp"

namespace treecount {

struct TrailNode {
  Trail::Kind kind;
  Modality mod;
  const TrailNode* a;
  const TrailNode* b;
  std::uint32_t id;
  std::size_t hash;
  bool star_free;
  unsigned mask;
};

namespace {

struct Key {
  Trail::Kind kind;
  Modality mod;
  const TrailNode* a;
  const TrailNode* b;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.kind) * 31 + static_cast<std::size_t>(k.mod);
    h ^= std::hash<const void*>{}(k.a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>{}(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

struct TrailStore {
  std::mutex mu;
  std::deque<TrailNode> nodes;
  std::unordered_map<Key, const TrailNode*, KeyHash> table;

  static TrailStore& get() {
    static TrailStore s;
    return s;
  }

  Trail make(Trail::Kind kind, Modality mod, const TrailNode* a, const TrailNode* b) {
    Key key{kind, mod, a, b};
    std::lock_guard lock(mu);
    if (auto it = table.find(key); it != table.end()) return Trail(it->second);
    TrailNode n{kind, mod, a, b, static_cast<std::uint32_t>(nodes.size()), KeyHash{}(key), true, 0};
    switch (kind) {
      case Trail::Kind::Empty: break;
      case Trail::Kind::Step: n.mask = 1u << index_of(mod); break;
      case Trail::Kind::Concat:
      case Trail::Kind::Union:
        n.star_free = a->star_free && b->star_free;
        n.mask = a->mask | b->mask;
        break;
      case Trail::Kind::Star:
        n.star_free = false;
        n.mask = a->mask;
        break;
    }
    nodes.push_back(n);
    const TrailNode* p = &nodes.back();
    table.emplace(key, p);
    return Trail(p);
  }
};

Trail Trail::empty() { return TrailStore::get().make(Kind::Empty, Modality::FirstChild, nullptr, nullptr); }
Trail Trail::step(Modality m) { return TrailStore::get().make(Kind::Step, m, nullptr, nullptr); }
Trail Trail::concat(Trail a, Trail b) {
  if (a.kind() == Kind::Empty) return b;
  if (b.kind() == Kind::Empty) return a;
  // keep concatenations right-leaning
  if (a.kind() == Kind::Concat) return concat(a.lhs(), concat(a.rhs(), b));
  return TrailStore::get().make(Kind::Concat, Modality::FirstChild, a.node_, b.node_);
}
Trail Trail::alt(Trail a, Trail b) {
  return TrailStore::get().make(Kind::Union, Modality::FirstChild, a.node_, b.node_);
}
Trail Trail::star(Trail a) { return TrailStore::get().make(Kind::Star, Modality::FirstChild, a.node_, nullptr); }

Trail Trail::word(const std::vector<Modality>& mods) {
  Trail t = empty();
  for (auto it = mods.rbegin(); it != mods.rend(); ++it) t = concat(step(*it), t);
  return t;
}

Trail::Kind Trail::kind() const { return node_->kind; }
Modality Trail::modality() const { return node_->mod; }
Trail Trail::lhs() const { return Trail(node_->a); }
Trail Trail::rhs() const { return Trail(node_->b); }
std::uint32_t Trail::id() const { return node_->id; }
std::size_t Trail::hash() const { return node_->hash; }
bool Trail::star_free() const { return node_->star_free; }
unsigned Trail::modality_mask() const { return node_->mask; }

namespace {

// Precedence: union 0, concat 1, star/atom 2.
void print(Trail t, int ctx, std::string& out) {
  switch (t.kind()) {
    case Trail::Kind::Empty: out += "()"; return;
    case Trail::Kind::Step: out += keyword(t.modality()); return;
    case Trail::Kind::Star: {
      Trail body = t.lhs();
      bool paren = body.kind() != Trail::Kind::Step;
      if (paren) out += '(';
      print(body, 0, out);
      if (paren) out += ')';
      out += '*';
      return;
    }
    case Trail::Kind::Concat: {
      if (ctx > 1) out += '(';
      print(t.lhs(), 1, out);
      out += ", ";
      print(t.rhs(), 1, out);
      if (ctx > 1) out += ')';
      return;
    }
    case Trail::Kind::Union: {
      if (ctx > 0) out += '(';
      print(t.lhs(), 0, out);
      out += '|';
      print(t.rhs(), 0, out);
      if (ctx > 0) out += ')';
      return;
    }
  }
}

void factors(Trail t, std::vector<Trail>& out) {
  if (t.kind() == Trail::Kind::Concat) {
    factors(t.lhs(), out);
    factors(t.rhs(), out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

std::string Trail::to_string() const {
  std::string s;
  print(*this, 0, s);
  return s;
}

std::string trail_grammar_violation(Trail t) {
  if (t.kind() == Trail::Kind::Empty) return "empty trail";
  std::vector<Trail> fs;
  factors(t, fs);
  bool seen_star_free = false;
  for (Trail f : fs) {
    if (f.kind() == Trail::Kind::Empty) return "empty trail factor";
    if (f.kind() == Trail::Kind::Star) {
      if (!f.lhs().star_free()) return "nested repetition in " + f.to_string();
      if (seen_star_free) return "repetition " + f.to_string() + " follows a star-free factor";
    } else {
      if (!f.star_free()) return "repetition under union in " + f.to_string();
      seen_star_free = true;
    }
  }
  return {};
}

std::string trail_cycle_violation(Trail t) {
  switch (t.kind()) {
    case Trail::Kind::Empty:
    case Trail::Kind::Step: return {};
    case Trail::Kind::Concat:
    case Trail::Kind::Union: {
      auto v = trail_cycle_violation(t.lhs());
      return v.empty() ? trail_cycle_violation(t.rhs()) : v;
    }
    case Trail::Kind::Star: {
      unsigned m = t.lhs().modality_mask();
      for (Modality x : kAllModalities) {
        if ((m >> index_of(x) & 1) && (m >> index_of(inverse(x)) & 1))
          return "repetition " + t.to_string() + " mentions " + std::string(keyword(x)) + " and its converse";
      }
      return trail_cycle_violation(t.lhs());
    }
  }
  return {};
}

namespace {

struct Thompson {
  std::vector<std::vector<int>> eps;
  std::vector<std::array<std::vector<int>, 4>> moves;

  int fresh() {
    eps.emplace_back();
    moves.emplace_back();
    return static_cast<int>(eps.size()) - 1;
  }

  // Returns (entry, exit).
  std::pair<int, int> build(Trail t) {
    switch (t.kind()) {
      case Trail::Kind::Empty: {
        int s = fresh();
        return {s, s};
      }
      case Trail::Kind::Step: {
        int s = fresh(), e = fresh();
        moves[s][index_of(t.modality())].push_back(e);
        return {s, e};
      }
      case Trail::Kind::Concat: {
        auto [s1, e1] = build(t.lhs());
        auto [s2, e2] = build(t.rhs());
        eps[e1].push_back(s2);
        return {s1, e2};
      }
      case Trail::Kind::Union: {
        int s = fresh();
        auto [s1, e1] = build(t.lhs());
        auto [s2, e2] = build(t.rhs());
        int e = fresh();
        eps[s].push_back(s1);
        eps[s].push_back(s2);
        eps[e1].push_back(e);
        eps[e2].push_back(e);
        return {s, e};
      }
      case Trail::Kind::Star: {
        int s = fresh();
        auto [s1, e1] = build(t.lhs());
        eps[s].push_back(s1);
        eps[e1].push_back(s);
        return {s, s};
      }
    }
    return {0, 0};
  }
};

}  // namespace

TrailAutomaton TrailAutomaton::build(Trail t) {
  Thompson th;
  auto [start, final_state] = th.build(t);
  const int n = static_cast<int>(th.eps.size());

  std::vector<std::vector<bool>> closure(n, std::vector<bool>(n, false));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    closure[s][s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : th.eps[u])
        if (!closure[s][v]) {
          closure[s][v] = true;
          stack.push_back(v);
        }
    }
  }

  // Keep only states that are the start or the target of a move, plus the
  // final state; those are the ones an epsilon-free automaton needs.
  std::vector<int> keep_index(n, -1);
  std::vector<int> kept;
  auto keep = [&](int s) {
    if (keep_index[s] < 0) {
      keep_index[s] = static_cast<int>(kept.size());
      kept.push_back(s);
    }
  };
  keep(start);
  for (int s = 0; s < n; ++s)
    for (int m = 0; m < 4; ++m)
      for (int v : th.moves[s][m]) keep(v);
  if (kept.size() > 64) throw UnsupportedError("trail automaton exceeds 64 states: " + t.to_string());

  TrailAutomaton a;
  a.num_states = static_cast<int>(kept.size());
  a.next.assign(a.num_states, {0, 0, 0, 0});
  for (int i = 0; i < a.num_states; ++i) {
    int s = kept[i];
    for (int u = 0; u < n; ++u) {
      if (!closure[s][u]) continue;
      if (u == final_state) a.accepting |= std::uint64_t{1} << i;
      for (int m = 0; m < 4; ++m)
        for (int v : th.moves[u][m]) a.next[i][m] |= std::uint64_t{1} << keep_index[v];
    }
  }
  a.initial = std::uint64_t{1} << keep_index[start];
  return a;
}

bool TrailAutomaton::accepts(const std::vector<Modality>& word) const {
  std::uint64_t cur = initial;
  for (Modality m : word) cur = step(cur, m);
  return (cur & accepting) != 0;
}

}  // namespace treecount
