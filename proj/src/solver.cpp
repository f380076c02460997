// Bottom-up saturation over phi-trees.
//
// Trees are not stored one by one. Two trees that agree on their root node and
// on how every counting walk of the formula behaves inside them can be swapped
// in any context without changing whether the whole tree satisfies the
// formula, so one representative per such class is kept. A walk is summarised
// per automaton state on entry from the parent: the states it can come back
// up with, the counting marks it reaches, and whether it meets a node that
// breaks the two-sided condition of a <= formula. A "start" flag records
// whether the path at which the formula is checked lies inside the tree.
//
// Marks are limited without loss: a counting proposition only needs to be set
// on nodes that satisfy its body, and on at most k+1 (for >k) or k (for <=k)
// nodes overall.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <stdexcept>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "treecount/normalize.hpp"
#include "treecount/semantics.hpp"
#include "treecount/tableau.hpp"

namespace treecount {

using Op = Formula::Op;

namespace {

constexpr Modality kFc = Modality::FirstChild, kNs = Modality::NextSibling, kPa = Modality::Parent,
                   kPs = Modality::PrevSibling;

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Atom {
  enum Kind { Exists, Gt, Le } kind = Exists;
  TrailAutomaton aut;
  int query = -1;   // target formula
  int counter = -1;  // counting proposition id
  std::uint64_t k = 0;
  bool local = false;  // Exists at the start node itself
  bool marks = false;  // reached marks are tracked as a bitset
  std::vector<int> entry[2];  // states after an fc / ns move
  std::vector<int> slot[2];   // state -> position in entry, or -1
};

struct Skel {
  enum Kind { Leaf, And, Or } kind;
  int atom = -1, l = -1, r = -1;
};

struct Entry {
  std::uint64_t cross = 0;  // states arriving at the parent
  std::uint64_t in = 0;     // marks reached (Gt) or target reached (Exists)
  bool bad = false;         // Le: a body node without its mark
};

struct NodeInfo {
  PhiNode bits;
  Bits q;
  int up = 0;  // 0 top level, 1 below fc, 2 below ns
  std::string fwd, back;  // forward bits seen by the parent, own backward bits
  std::string iface;
  std::string seen[2];  // bodies of the <pa> / <ps> members entailed here
  bool marks_ok = true;  // every counting mark sits on a node of its body
  std::vector<bool> mark;  // per counting proposition
};

struct Class {
  int node = -1, left = -1, right = -1;
  bool start_here = false, has_start = false;
  int size = 0;
  std::vector<std::uint16_t> marks;
  std::vector<Entry> entries;
  std::vector<Entry> start;
  std::vector<std::pair<int, std::uint16_t>> profile;
};

template <class T>
void put(std::string& s, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  s.append(buf, sizeof(T));
}

std::uint16_t profile_count(const std::vector<std::pair<int, std::uint16_t>>& p, int node) {
  auto it = std::lower_bound(p.begin(), p.end(), std::make_pair(node, std::uint16_t{0}));
  return it != p.end() && it->first == node ? it->second : 0;
}

class Solver {
 public:
  Solver(Formula phi, const SolveOptions& opt)
      : phi_(phi), opt_(opt), lean_(Lean::build(phi)), began_(std::chrono::steady_clock::now()) {
    bound_ = occurrence_bound(phi);
    cap_ = bound_ + 2;
    for (Modality m : kAllModalities)
      for (int i : lean_.modal(m)) body_q_[index_of(m)].push_back(query(lean_.element(i).body()));
    counter_cap_.assign(lean_.num_counting(), 0);
    counter_q_.assign(lean_.num_counting(), -1);
    root_ = skeleton(phi, {});
    int off[2] = {0, 0};
    for (Atom& a : atoms_) {
      for (int d = 0; d < 2; ++d) {
        std::uint64_t reach = 0;
        for (int s = 0; s < a.aut.num_states; ++s) reach |= a.aut.next[s][d];
        a.slot[d].assign(a.aut.num_states, -1);
        for (int s = 0; s < a.aut.num_states; ++s)
          if (reach >> s & 1) {
            a.slot[d][s] = static_cast<int>(a.entry[d].size());
            a.entry[d].push_back(s);
          }
      }
      offset_[0].push_back(off[0]);
      offset_[1].push_back(off[1]);
      off[0] += static_cast<int>(a.entry[0].size());
      off[1] += static_cast<int>(a.entry[1].size());
    }
    width_[0] = off[0];
    width_[1] = off[1];
  }

  SolverResult run() {
    SolverResult res;
    res.lean_size = lean_.size();
    res.bound = bound_;
    try {
      loop(res);
    } catch (const ResourceLimit& e) {
      res.verdict = Verdict::ResourceExhausted;
      res.reason = e.what();
    }
    res.classes = classes_.size() + finished_.size();
    return res;
  }

 private:
  // ---- setup

  int query(Formula f) {
    auto [it, fresh] = query_index_.emplace(f, static_cast<int>(queries_.size()));
    if (fresh) queries_.push_back(f);
    return it->second;
  }

  int add_atom(Atom a, Trail t) {
    a.aut = TrailAutomaton::build(t);
    atoms_.push_back(std::move(a));
    skel_.push_back({Skel::Leaf, static_cast<int>(atoms_.size()) - 1});
    return static_cast<int>(skel_.size()) - 1;
  }

  int exists(const Path& pi, Formula chi) {
    Atom a;
    a.kind = Atom::Exists;
    a.query = query(chi);
    a.local = pi.empty();
    return add_atom(std::move(a), Trail::word(pi));
  }

  int skeleton(Formula f, const Path& pi) {
    if (!f.has_counting()) return exists(pi, f);
    switch (f.op()) {
      case Op::And:
      case Op::Or: {
        int l = skeleton(f.lhs(), pi), r = skeleton(f.rhs(), pi);
        skel_.push_back({f.op() == Op::And ? Skel::And : Skel::Or, -1, l, r});
        return static_cast<int>(skel_.size()) - 1;
      }
      case Op::Modal: {
        Path longer = pi;
        longer.push_back(f.modality());
        return skeleton(f.body(), longer);
      }
      case Op::CountGt:
      case Op::CountLe: {
        Atom a;
        a.kind = f.op() == Op::CountGt ? Atom::Gt : Atom::Le;
        a.query = query(f.body());
        a.counter = f.cprop();
        a.k = f.bound();
        if (a.counter < 0) throw std::logic_error("solver needs an annotated formula");
        if (a.kind == Atom::Gt && a.k >= 64)
          throw ResourceLimit("counting constant " + std::to_string(a.k) + " exceeds the supported maximum of 63 for >k");
        if (a.kind == Atom::Le && a.k >= 65535)
          throw ResourceLimit("counting constant " + std::to_string(a.k) + " exceeds the supported maximum of 65534 for <=k");
        counter_cap_[a.counter] = a.kind == Atom::Gt ? a.k + 1 : a.k;
        a.marks = counter_cap_[a.counter] <= 64;
        counter_q_[a.counter] = a.query;
        int leaf = add_atom(std::move(a), Trail::concat(Trail::word(pi), f.trail()));
        if (f.op() == Op::CountLe && !pi.empty()) {
          int def = exists(pi, Formula::top());
          skel_.push_back({Skel::And, -1, leaf, def});
          return static_cast<int>(skel_.size()) - 1;
        }
        return leaf;
      }
      default: throw std::logic_error("unexpected counting position in " + f.to_string());
    }
  }

  // ---- nodes

  int intern(const PhiNode& n) {
    auto it = node_index_.find(n);
    if (it != node_index_.end()) return it->second;
    NodeInfo info;
    info.bits = n;
    info.q = Bits(static_cast<int>(queries_.size()));
    LocalEntailment e(lean_, n);
    for (std::size_t i = 0; i < queries_.size(); ++i) info.q.set(static_cast<int>(i), e(queries_[i]));
    info.up = n.test(lean_.top(kPa)) ? 1 : n.test(lean_.top(kPs)) ? 2 : 0;
    for (int side = 0; side < 2; ++side)
      for (int qi : body_q_[index_of(side == 0 ? kPa : kPs)]) info.seen[side].push_back(info.q.test(qi) ? '1' : '0');
    if (info.up) {
      Modality down = info.up == 1 ? kFc : kNs, back = info.up == 1 ? kPa : kPs;
      for (int qi : body_q_[index_of(down)]) info.fwd.push_back(info.q.test(qi) ? '1' : '0');
      for (int i : lean_.modal(back)) info.back.push_back(n.test(i) ? '1' : '0');
      info.iface = std::string(1, static_cast<char>('0' + info.up)) + info.fwd + "|" + info.back;
    }
    info.mark.resize(lean_.num_counting());
    for (int c = 0; c < lean_.num_counting(); ++c) {
      info.mark[c] = n.test(lean_.count_prop(c));
      if (info.mark[c] && (counter_cap_[c] == 0 || !info.q.test(counter_q_[c]))) info.marks_ok = false;
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(info));
    node_index_.emplace(n, id);
    return id;
  }

  // Parent candidates for a pair of children. The children fix the forward
  // bits; all nodes with those forward bits are built once and grouped by
  // what they entail for the children's backward formulas. Label, free bits,
  // the side the node hangs from and its own backward bits range freely.
  const std::vector<int>& parents(int c1, int c2) {
    const NodeInfo* k1 = c1 < 0 ? nullptr : &nodes_[classes_[c1].node];
    const NodeInfo* k2 = c2 < 0 ? nullptr : &nodes_[classes_[c2].node];
    std::string group = (k1 ? k1->back : kNoChild) + "#" + (k2 ? k2->back : kNoChild);
    std::string key = (k1 ? k1->fwd : kNoChild) + "#" + (k2 ? k2->fwd : kNoChild);
    auto it = bases_.find(key);
    if (it == bases_.end()) it = bases_.emplace(key, base(k1 ? std::optional(k1->fwd) : std::nullopt,
                                                          k2 ? std::optional(k2->fwd) : std::nullopt)).first;
    static const std::vector<int> kNothing;
    auto g = it->second.find(group);
    return g == it->second.end() ? kNothing : g->second;
  }

  std::unordered_map<std::string, std::vector<int>> base(const std::optional<std::string>& fwd1,
                                                         const std::optional<std::string>& fwd2) {
    PhiNode start(lean_.size());
    auto fix = [&](const std::optional<std::string>& fwd, Modality m) {
      if (!fwd) return;
      start.set(lean_.top(m));
      const auto& mods = lean_.modal(m);
      for (std::size_t j = 0; j < mods.size(); ++j) start.set(mods[j], (*fwd)[j] == '1');
    };
    fix(fwd1, kFc);
    fix(fwd2, kNs);
    const auto& free = lean_.free_bits();
    if (free.size() > 30) throw ResourceLimit("too many marker and counting propositions");
    std::unordered_map<std::string, std::vector<int>> out;
    for (int label : lean_.labels()) {
      for (std::uint64_t fm = 0; fm < (std::uint64_t{1} << free.size()); ++fm) {
        for (int up = 0; up < 3; ++up) {
          static const std::vector<int> kNone;
          const std::vector<int>& backs = up == 1 ? lean_.modal(kPa) : up == 2 ? lean_.modal(kPs) : kNone;
          if (backs.size() > 30) throw ResourceLimit("too many backward modal formulas");
          for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << backs.size()); ++bm) {
            tick();
            PhiNode n = start;
            n.set(label);
            for (std::size_t j = 0; j < free.size(); ++j) n.set(free[j], fm >> j & 1);
            if (up == 1) n.set(lean_.top(kPa));
            if (up == 2) n.set(lean_.top(kPs));
            for (std::size_t j = 0; j < backs.size(); ++j) n.set(backs[j], bm >> j & 1);
            int id = intern(n);
            const NodeInfo& v = nodes_[id];
            if (!v.marks_ok) continue;
            out[(fwd1 ? v.seen[0] : kNoChild) + "#" + (fwd2 ? v.seen[1] : kNoChild)].push_back(id);
          }
        }
      }
    }
    return out;
  }

  // ---- classes

  const Entry& entry_of(const Class& c, int a, int state) const {
    int side = nodes_[c.node].up - 1;
    return c.entries[offset_[side][a] + atoms_[a].slot[side][state]];
  }

  Entry closure(const Class& out, int a, std::uint64_t x, Entry acc, const Class* c1, const Class* c2,
                std::uint64_t off1, std::uint64_t off2) const {
    const Atom& at = atoms_[a];
    std::uint64_t y1 = 0, y2 = 0;
    for (;;) {
      y1 = c1 ? at.aut.step(x, kFc) : 0;
      y2 = c2 ? at.aut.step(x, kNs) : 0;
      std::uint64_t back = 0;
      for (std::uint64_t y = y1; y; y &= y - 1) back |= entry_of(*c1, a, std::countr_zero(y)).cross;
      for (std::uint64_t y = y2; y; y &= y - 1) back |= entry_of(*c2, a, std::countr_zero(y)).cross;
      if ((x | back) == x) break;
      x |= back;
    }
    const NodeInfo& v = nodes_[out.node];
    if (x & at.aut.accepting) {
      switch (at.kind) {
        case Atom::Exists: acc.in |= v.q.test(at.query); break;
        case Atom::Gt: acc.in |= v.mark[at.counter] ? 1 : 0; break;
        case Atom::Le:
          acc.bad |= v.q.test(at.query) && !v.mark[at.counter];
          if (at.marks) acc.in |= v.mark[at.counter] ? 1 : 0;
          break;
      }
    }
    auto absorb = [&](const Class& c, std::uint64_t y, std::uint64_t shift) {
      for (; y; y &= y - 1) {
        const Entry& e = entry_of(c, a, std::countr_zero(y));
        acc.in |= at.marks ? e.in << shift : e.in;
        acc.bad |= e.bad;
      }
    };
    if (y1) absorb(*c1, y1, off1);
    if (y2) absorb(*c2, y2, off2);
    acc.cross = v.up == 1 ? at.aut.step(x, kPa) : v.up == 2 ? at.aut.step(x, kPs) : 0;
    return acc;
  }

  // 0 false, 1 true, 2 unknown; only atoms decided at the start node count.
  int partial(int s, const NodeInfo& v) const {
    const Skel& k = skel_[s];
    if (k.kind == Skel::Leaf) {
      const Atom& a = atoms_[k.atom];
      return a.local ? (v.q.test(a.query) ? 1 : 0) : 2;
    }
    int l = partial(k.l, v), r = partial(k.r, v);
    if (k.kind == Skel::And) return l == 0 || r == 0 ? 0 : (l == 1 && r == 1 ? 1 : 2);
    return l == 1 || r == 1 ? 1 : (l == 0 && r == 0 ? 0 : 2);
  }

  bool holds(int s, const std::vector<Entry>& start) const {
    const Skel& k = skel_[s];
    if (k.kind == Skel::And) return holds(k.l, start) && holds(k.r, start);
    if (k.kind == Skel::Or) return holds(k.l, start) || holds(k.r, start);
    const Atom& a = atoms_[k.atom];
    const Entry& e = start[k.atom];
    switch (a.kind) {
      case Atom::Exists: return e.in != 0;
      case Atom::Gt: return static_cast<std::uint64_t>(std::popcount(e.in)) > a.k;
      case Atom::Le: return !e.bad;
    }
    return false;
  }

  void combine(int v, int c1, int c2, bool start_here) {
    tick();
    const NodeInfo& nv = nodes_[v];
    const Class* k1 = c1 < 0 ? nullptr : &classes_[c1];
    const Class* k2 = c2 < 0 ? nullptr : &classes_[c2];
    if (start_here && partial(root_, nv) == 0) return;

    std::uint16_t occ = 1 + std::max(k1 ? profile_count(k1->profile, v) : 0, k2 ? profile_count(k2->profile, v) : 0);
    if (occ > cap_) return;

    Class c;
    c.node = v;
    c.left = c1;
    c.right = c2;
    c.start_here = start_here;
    c.has_start = start_here || (k1 && k1->has_start) || (k2 && k2->has_start);
    c.size = 1 + (k1 ? k1->size : 0) + (k2 ? k2->size : 0);
    c.marks.resize(lean_.num_counting());
    for (int j = 0; j < lean_.num_counting(); ++j) {
      std::uint64_t total = nv.mark[j] + (k1 ? k1->marks[j] : 0) + (k2 ? k2->marks[j] : 0);
      if (total > counter_cap_[j]) return;
      c.marks[j] = static_cast<std::uint16_t>(total);
    }
    ++aux_;

    if (nv.up) c.entries.resize(width_[nv.up - 1]);
    if (c.has_start) c.start.resize(atoms_.size());
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      const Atom& at = atoms_[a];
      std::uint64_t off1 = 0, off2 = 0;
      if (at.marks) {
        off1 = nv.mark[at.counter] ? 1 : 0;
        off2 = off1 + (k1 ? k1->marks[at.counter] : 0);
      }
      int ia = static_cast<int>(a);
      if (nv.up) {
        int side = nv.up - 1;
        for (std::size_t e = 0; e < at.entry[side].size(); ++e)
          c.entries[offset_[side][a] + e] =
              closure(c, ia, std::uint64_t{1} << at.entry[side][e], Entry{}, k1, k2, off1, off2);
      }
      if (c.has_start) {
        Entry init;
        std::uint64_t x = 0;
        if (start_here) {
          x = at.aut.initial;
        } else {
          const Class& from = k1 && k1->has_start ? *k1 : *k2;
          const Entry& se = from.start[a];
          x = se.cross;
          init.bad = se.bad;
          init.in = at.marks ? se.in << (&from == k1 ? off1 : off2) : se.in;
        }
        c.start[a] = closure(c, ia, x, init, k1, k2, off1, off2);
      }
    }

    // A mark no walk can reach, from any context, may be cleared without
    // changing the outcome; trees carrying one are skipped.
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      const Atom& at = atoms_[a];
      if (!at.marks) continue;
      std::uint64_t live = c.has_start ? c.start[a].in : 0;
      if (nv.up) {
        int side = nv.up - 1;
        for (std::size_t e = 0; e < at.entry[side].size(); ++e) live |= c.entries[offset_[side][a] + e].in;
      }
      int m = c.marks[at.counter];
      if (live != (m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1)) return;
    }

    // The key leaves out the root node itself: a parent only sees it through
    // the interface bits.
    std::string key = nv.iface;
    key.push_back('#');
    put(key, c.has_start);
    for (auto m : c.marks) put(key, m);
    for (const Entry& e : c.entries) {
      put(key, e.cross);
      put(key, e.in);
      put(key, e.bad);
    }
    key.push_back('/');
    for (const Entry& e : c.start) {
      put(key, e.cross);
      put(key, e.in);
      put(key, e.bad);
    }

    if (!nv.up) {
      if (!finished_.insert(std::move(key)).second) return;
      if (c.has_start && holds(root_, c.start)) sat_.push_back(std::move(c));
      return;
    }
    if (class_index_.count(key)) return;

    // nmax profile of the representative
    auto merge = [](const std::vector<std::pair<int, std::uint16_t>>& a,
                    const std::vector<std::pair<int, std::uint16_t>>& b) {
      std::vector<std::pair<int, std::uint16_t>> out;
      std::size_t i = 0, j = 0;
      while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) out.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first) out.push_back(b[j++]);
        else {
          out.emplace_back(a[i].first, std::max(a[i].second, b[j].second));
          ++i;
          ++j;
        }
      }
      return out;
    };
    static const std::vector<std::pair<int, std::uint16_t>> kEmpty;
    c.profile = merge(k1 ? k1->profile : kEmpty, k2 ? k2->profile : kEmpty);
    auto it = std::lower_bound(c.profile.begin(), c.profile.end(), std::make_pair(v, std::uint16_t{0}));
    if (it != c.profile.end() && it->first == v) it->second = occ;
    else c.profile.insert(it, {v, occ});

    class_index_.emplace(std::move(key), static_cast<int>(classes_.size()) + static_cast<int>(fresh_.size()));
    fresh_.push_back(std::move(c));
  }

  void tick() {
    if (++ticks_ % 1024) return;
    if (classes_.size() + fresh_.size() + finished_.size() > opt_.max_st)
      throw ResourceLimit("state set exceeds " + std::to_string(opt_.max_st) + " trees");
    if (nodes_.size() > opt_.max_st)
      throw ResourceLimit("phi-node table exceeds " + std::to_string(opt_.max_st) + " nodes");
    if (opt_.timeout && std::chrono::steady_clock::now() - began_ > *opt_.timeout)
      throw ResourceLimit("timeout after " + std::to_string(opt_.timeout->count()) + " s");
  }

  void pair(int c1, int c2) {
    bool s1 = c1 >= 0 && classes_[c1].has_start, s2 = c2 >= 0 && classes_[c2].has_start;
    if (s1 && s2) return;
    const std::vector<int> vs = parents(c1, c2);
    for (int v : vs) {
      combine(v, c1, c2, false);
      if (!s1 && !s2) combine(v, c1, c2, true);
    }
  }

  void loop(SolverResult& res) {
    std::vector<int> pool[2];  // class ids hanging below fc / below ns
    int lo = 0;
    for (int round = 1;; ++round) {
      res.rounds = round;
      aux_ = 0;
      const int hi = static_cast<int>(classes_.size());
      if (round == 1) {
        pair(-1, -1);
      } else {
        auto is_new = [&](int c) { return c >= lo; };
        std::vector<int> all1{-1}, all2{-1};
        all1.insert(all1.end(), pool[0].begin(), pool[0].end());
        all2.insert(all2.end(), pool[1].begin(), pool[1].end());
        for (int c1 : all1)
          for (int c2 : all2)
            if ((c1 >= 0 && is_new(c1)) || (c2 >= 0 && is_new(c2))) pair(c1, c2);
      }
      for (Class& c : fresh_) {
        int id = static_cast<int>(classes_.size());
        pool[nodes_[c.node].up - 1].push_back(id);
        classes_.push_back(std::move(c));
      }
      const bool grew = !fresh_.empty();
      fresh_.clear();
      if (opt_.trace) opt_.trace({round, aux_, classes_.size() + finished_.size(), finished_.size()});
      if (!sat_.empty()) {
        witness(res);
        return;
      }
      if (!grew) {
        res.verdict = Verdict::Unsat;
        return;
      }
      lo = hi;
    }
  }

  // ---- witness

  PhiTree rep(int c) const {
    if (c < 0) return {};
    const Class& k = classes_[c];
    return PhiTree::make(nodes_[k.node].bits, rep(k.left), rep(k.right));
  }

  bool start_path(const Class& k, Path& p) const {
    if (!k.has_start) return false;
    if (k.start_here) return true;
    if (k.left >= 0 && classes_[k.left].has_start) {
      p.push_back(kFc);
      return start_path(classes_[k.left], p);
    }
    p.push_back(kNs);
    return start_path(classes_[k.right], p);
  }

  void witness(SolverResult& res) {
    const Class* best = &sat_.front();
    for (const Class& c : sat_)
      if (c.size < best->size) best = &c;
    res.verdict = Verdict::Sat;
    res.witness = PhiTree::make(nodes_[best->node].bits, rep(best->left), rep(best->right));
    res.path.clear();
    start_path(*best, res.path);
    res.model = extract_model(lean_, res.witness);
    res.node = model_node(res.witness, res.path);
    // Both checks are independent of the class summaries.
    if (!global_entails(lean_, res.path, res.witness, phi_))
      throw std::logic_error("witness fails global entailment at " + path_to_string(res.path));
    if (res.node < 0 || !eval(phi_, res.model)[res.node])
      throw std::logic_error("witness model does not satisfy the formula at " + res.model.path(res.node));
  }

  inline static const std::string kNoChild = "-";

  Formula phi_;
  SolveOptions opt_;
  Lean lean_;
  std::chrono::steady_clock::time_point began_;
  std::uint64_t bound_ = 0, cap_ = 0;

  std::vector<Formula> queries_;
  std::unordered_map<Formula, int> query_index_;
  std::vector<int> body_q_[4];
  std::vector<std::uint64_t> counter_cap_;
  std::vector<int> counter_q_;

  std::vector<Atom> atoms_;
  std::vector<Skel> skel_;
  int root_ = -1;
  std::vector<int> offset_[2];
  int width_[2] = {0, 0};

  std::vector<NodeInfo> nodes_;
  std::unordered_map<PhiNode, int> node_index_;
  std::unordered_map<std::string, std::unordered_map<std::string, std::vector<int>>> bases_;

  std::vector<Class> classes_;
  std::vector<Class> fresh_;
  std::unordered_map<std::string, int> class_index_;
  std::unordered_set<std::string> finished_;
  std::vector<Class> sat_;
  std::size_t aux_ = 0;
  std::uint64_t ticks_ = 0;
};

}  // namespace

SolverResult solve(Formula f, const SolveOptions& opt) {
  Formula phi = annotate_counting(f);
  try {
    return Solver(phi, opt).run();
  } catch (const ResourceLimit& e) {
    SolverResult r;
    r.verdict = Verdict::ResourceExhausted;
    r.reason = e.what();
    return r;
  }
}

SolverResult solve(const SurfacePtr& f, const SolveOptions& opt) { return solve(normalize(f), opt); }

Containment contains(Formula q, Formula p, const SolveOptions& opt) {
  Containment c;
  c.detail = solve(Formula::conj(q, negate(p)), opt);
  c.holds = c.detail.verdict == Verdict::Unsat;
  return c;
}

}  // namespace treecount
