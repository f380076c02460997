#include "treecount/formula.hpp"

#include <algorithm>
#include <atomic>
#include <iterator>
#include <deque>
#include <mutex>
#include <set>
#include <unordered_map>

namespace treecount {

struct FormulaNode {
  Formula::Op op;
  Modality mod;
  std::string name;
  const FormulaNode* a;
  const FormulaNode* b;
  Trail trail_value;
  std::uint64_t k;
  int cprop;
  std::uint32_t id;
  std::size_t hash;
  bool counting;
  std::vector<std::string> free_vars;  // sorted
  mutable std::atomic<const FormulaNode*> unfolded{nullptr};

  FormulaNode(Formula::Op op_, Modality mod_, std::string name_, const FormulaNode* a_,
              const FormulaNode* b_, Trail t, std::uint64_t k_, int c_)
      : op(op_), mod(mod_), name(std::move(name_)), a(a_), b(b_),
        trail_value(t), k(k_), cprop(c_), id(0), hash(0), counting(false) {}
};

namespace {

struct Key {
  Formula::Op op;
  Modality mod;
  std::string name;
  const FormulaNode* a;
  const FormulaNode* b;
  std::uint32_t trail_id;
  std::uint64_t k;
  int cprop;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& key) const noexcept {
    std::size_t h = std::hash<std::string>{}(key.name);
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(static_cast<std::size_t>(key.op));
    mix(static_cast<std::size_t>(key.mod));
    mix(std::hash<const void*>{}(key.a));
    mix(std::hash<const void*>{}(key.b));
    mix(key.trail_id);
    mix(std::hash<std::uint64_t>{}(key.k));
    mix(static_cast<std::size_t>(key.cprop + 1));
    return h;
  }
};

std::vector<std::string> merge_vars(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  std::vector<std::string> out;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

}  // namespace

struct FormulaStore {
  std::mutex mu;
  std::deque<FormulaNode> nodes;
  std::unordered_map<Key, const FormulaNode*, KeyHash> table;

  static FormulaStore& get() {
    static FormulaStore s;
    return s;
  }

  Formula make(Formula::Op op, Modality mod, std::string name, const FormulaNode* a,
               const FormulaNode* b, std::optional<Trail> t, std::uint64_t k, int cprop) {
    Trail tv = t ? *t : Trail::empty();
    Key key{op, mod, name, a, b, t ? t->id() : 0xffffffffu, k, cprop};
    std::lock_guard lock(mu);
    if (auto it = table.find(key); it != table.end()) return Formula(it->second);
    FormulaNode& n = nodes.emplace_back(op, mod, std::move(name), a, b, tv, k, cprop);
    n.id = static_cast<std::uint32_t>(nodes.size() - 1);
    n.hash = KeyHash{}(key);
    using Op = Formula::Op;
    switch (op) {
      case Op::Var: n.free_vars = {n.name}; break;
      case Op::And:
      case Op::Or:
        n.counting = a->counting || b->counting;
        n.free_vars = merge_vars(a->free_vars, b->free_vars);
        break;
      case Op::Modal:
        n.counting = a->counting;
        n.free_vars = a->free_vars;
        break;
      case Op::CountLe:
      case Op::CountGt:
        n.counting = true;
        n.free_vars = a->free_vars;
        break;
      case Op::Mu:
        n.counting = a->counting;
        n.free_vars = a->free_vars;
        std::erase(n.free_vars, n.name);
        break;
      default: break;
    }
    table.emplace(std::move(key), &n);
    return Formula(&n);
  }
};

namespace {
FormulaStore& store() { return FormulaStore::get(); }
constexpr Modality kNoMod = Modality::FirstChild;
}  // namespace

Formula Formula::top() { return store().make(Op::True, kNoMod, {}, nullptr, nullptr, {}, 0, -1); }
Formula Formula::bottom() { return store().make(Op::False, kNoMod, {}, nullptr, nullptr, {}, 0, -1); }
Formula Formula::prop(const std::string& n) { return store().make(Op::Prop, kNoMod, n, nullptr, nullptr, {}, 0, -1); }
Formula Formula::not_prop(const std::string& n) {
  return store().make(Op::NotProp, kNoMod, n, nullptr, nullptr, {}, 0, -1);
}
Formula Formula::var(const std::string& n) { return store().make(Op::Var, kNoMod, n, nullptr, nullptr, {}, 0, -1); }
Formula Formula::conj(Formula a, Formula b) {
  return store().make(Op::And, kNoMod, {}, a.node_, b.node_, {}, 0, -1);
}
Formula Formula::disj(Formula a, Formula b) {
  return store().make(Op::Or, kNoMod, {}, a.node_, b.node_, {}, 0, -1);
}
Formula Formula::modal(Modality m, Formula body) {
  return store().make(Op::Modal, m, {}, body.node_, nullptr, {}, 0, -1);
}
Formula Formula::no_modal(Modality m) { return store().make(Op::NoModal, m, {}, nullptr, nullptr, {}, 0, -1); }
Formula Formula::count_le(Trail t, std::uint64_t k, Formula body, int cprop) {
  return store().make(Op::CountLe, kNoMod, {}, body.node_, nullptr, t, k, cprop);
}
Formula Formula::count_gt(Trail t, std::uint64_t k, Formula body, int cprop) {
  return store().make(Op::CountGt, kNoMod, {}, body.node_, nullptr, t, k, cprop);
}
Formula Formula::mu(const std::string& v, Formula body) {
  return store().make(Op::Mu, kNoMod, v, body.node_, nullptr, {}, 0, -1);
}
Formula Formula::count_prop(int id) { return store().make(Op::CountProp, kNoMod, {}, nullptr, nullptr, {}, 0, id); }
Formula Formula::not_count_prop(int id) {
  return store().make(Op::NotCountProp, kNoMod, {}, nullptr, nullptr, {}, 0, id);
}

Formula::Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
Modality Formula::modality() const { return node_->mod; }
Formula Formula::lhs() const { return Formula(node_->a); }
Formula Formula::rhs() const { return Formula(node_->b); }
Trail Formula::trail() const { return node_->trail_value; }
std::uint64_t Formula::bound() const { return node_->k; }
int Formula::cprop() const { return node_->cprop; }
bool Formula::has_counting() const { return node_->counting; }
bool Formula::closed() const { return node_->free_vars.empty(); }
std::uint32_t Formula::id() const { return node_->id; }
std::size_t Formula::hash() const { return node_->hash; }

Formula Formula::substitute(const std::string& x, Formula by) const {
  const auto& fv = node_->free_vars;
  if (!std::binary_search(fv.begin(), fv.end(), x)) return *this;
  switch (op()) {
    case Op::Var: return by;
    case Op::And: return conj(lhs().substitute(x, by), rhs().substitute(x, by));
    case Op::Or: return disj(lhs().substitute(x, by), rhs().substitute(x, by));
    case Op::Modal: return modal(modality(), lhs().substitute(x, by));
    case Op::CountLe: return count_le(trail(), bound(), lhs().substitute(x, by), cprop());
    case Op::CountGt: return count_gt(trail(), bound(), lhs().substitute(x, by), cprop());
    case Op::Mu:
      // `by` is always closed in our uses, so no capture can occur.
      return mu(name(), lhs().substitute(x, by));
    default: return *this;
  }
}

Formula Formula::unfold() const {
  if (op() != Op::Mu) return *this;
  if (const FormulaNode* cached = node_->unfolded.load(std::memory_order_acquire)) return Formula(cached);
  Formula u = lhs().substitute(name(), *this);
  node_->unfolded.store(u.node_, std::memory_order_release);
  return u;
}

std::size_t trail_size(Trail t) {
  switch (t.kind()) {
    case Trail::Kind::Empty:
    case Trail::Kind::Step: return 1;
    case Trail::Kind::Star: return 1 + trail_size(t.lhs());
    default: return 1 + trail_size(t.lhs()) + trail_size(t.rhs());
  }
}

namespace {
std::size_t binary_length(std::uint64_t k) {
  std::size_t n = 1;
  while (k > 1) {
    k >>= 1;
    ++n;
  }
  return n;
}
}  // namespace

std::size_t formula_size(Formula f) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::And:
    case Op::Or: return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
    case Op::Modal:
    case Op::Mu: return 1 + formula_size(f.lhs());
    case Op::CountLe:
    case Op::CountGt: return 1 + trail_size(f.trail()) + binary_length(f.bound()) + formula_size(f.lhs());
    default: return 1;
  }
}

namespace {

void collect_props(Formula f, std::set<std::string>& out) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::Prop:
    case Op::NotProp: out.insert(f.name()); return;
    case Op::And:
    case Op::Or:
      collect_props(f.lhs(), out);
      collect_props(f.rhs(), out);
      return;
    case Op::Modal:
    case Op::Mu:
    case Op::CountLe:
    case Op::CountGt: collect_props(f.lhs(), out); return;
    default: return;
  }
}

// Precedence levels: 0 or, 1 and, 2 unary. A mu body extends to the right,
// so a mu that is not at the right end of its context needs parentheses.
void print(Formula f, int ctx, std::string& out, bool open_right = true) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::True: out += "T"; return;
    case Op::False: out += "~T"; return;
    case Op::Prop:
    case Op::Var: out += f.name(); return;
    case Op::NotProp: out += "~" + f.name(); return;
    case Op::CountProp: out += "$c" + std::to_string(f.cprop()); return;
    case Op::NotCountProp: out += "~$c" + std::to_string(f.cprop()); return;
    case Op::NoModal: out += "~<" + std::string(keyword(f.modality())) + ">T"; return;
    case Op::Modal:
      out += "<" + std::string(keyword(f.modality())) + ">";
      print(f.lhs(), 2, out);
      return;
    case Op::And:
    case Op::Or: {
      int level = f.op() == Op::Or ? 0 : 1;
      bool paren = ctx > level;
      if (paren) out += '(';
      print(f.lhs(), level, out, false);
      out += level == 0 ? " | " : " & ";
      // binary connectives re-parse left-associatively
      print(f.rhs(), f.rhs().op() == f.op() ? level + 1 : level, out, paren || open_right);
      if (paren) out += ')';
      return;
    }
    case Op::Mu: {
      bool paren = ctx > 0 || !open_right;
      if (paren) out += '(';
      out += "mu " + f.name() + " . ";
      print(f.lhs(), 0, out);
      if (paren) out += ')';
      return;
    }
    case Op::CountLe:
    case Op::CountGt:
      out += "cnt(" + f.trail().to_string() + ", " + (f.op() == Op::CountLe ? "<=" : ">") +
             std::to_string(f.bound()) + ", ";
      print(f.lhs(), 0, out);
      out += ")";
      if (f.cprop() >= 0) out += "^$c" + std::to_string(f.cprop());
      return;
  }
}

}  // namespace

std::vector<std::string> propositions(Formula f) {
  std::set<std::string> s;
  collect_props(f, s);
  return {s.begin(), s.end()};
}

std::vector<std::string> free_variables(Formula f) { return f.free_vars(); }

const std::vector<std::string>& Formula::free_vars() const { return node_->free_vars; }

std::string Formula::to_string() const {
  std::string s;
  print(*this, 0, s);
  return s;
}

}  // namespace treecount
