#include <random>
#include <unordered_set>

#include "corpus.hpp"
#include "doctest.h"
#include "treecount/lean.hpp"
#include "treecount/normalize.hpp"
#include "treecount/parser.hpp"
#include "treecount/semantics.hpp"

using namespace treecount;

namespace {
Formula norm(const std::string& s) { return annotate_counting(normalize(parse_formula(s))); }
constexpr Modality kFc = Modality::FirstChild, kNs = Modality::NextSibling;

std::vector<std::string> printed(const Lean& l) {
  std::vector<std::string> out;
  for (Formula f : l.elements()) out.push_back(f.to_string());
  return out;
}

// Brute force over every bit vector of the lean.
int count_phi_nodes_brute(const Lean& l) {
  int n = 0;
  for (std::uint32_t code = 0; code < (1u << l.size()); ++code) {
    PhiNode p(l.size());
    for (int i = 0; i < l.size(); ++i) p.set(i, code >> i & 1);
    n += is_phi_node(l, p);
  }
  return n;
}
}  // namespace

TEST_CASE("nav of a starred count") {
  Formula f = norm("cnt(ns*, >2, p2)");
  Formula x = Formula::var("$x");
  Formula want = Formula::mu(
      "$x", Formula::disj(Formula::conj(Formula::prop("p2"), Formula::count_prop(0)), Formula::modal(kNs, x)));
  CHECK(nav(f) == want);
}

TEST_CASE("nav clauses") {
  Formula p = Formula::prop("p");
  CHECK(nav(Trail::empty(), p) == p);
  CHECK(nav(Trail::step(kFc), p) == Formula::modal(kFc, p));
  CHECK(nav(Trail::concat(Trail::step(kFc), Trail::step(kNs)), p) == Formula::modal(kFc, Formula::modal(kNs, p)));
  CHECK(nav(Trail::alt(Trail::step(kFc), Trail::step(kNs)), p) ==
        Formula::disj(Formula::modal(kFc, p), Formula::modal(kNs, p)));
  // counting-free formulas are untouched
  Formula g = norm("<fc>(p & mu x . q | <ns>x)");
  CHECK(nav(g) == g);
  // <= uses the two-sided body
  Formula le = norm("cnt(fc, <=1, p)");
  Formula body = Formula::disj(Formula::conj(p, Formula::count_prop(0)),
                               Formula::conj(Formula::not_prop("p"), Formula::not_count_prop(0)));
  CHECK(nav(le) == Formula::modal(kFc, body));
}

TEST_CASE("nested stars use distinct variables") {
  Trail inner = Trail::star(Trail::step(kNs));
  Trail t = Trail::star(Trail::concat(Trail::step(kFc), inner));
  Formula f = nav(t, Formula::prop("p"));
  CHECK(f.closed());
  CHECK(f.to_string().find("$x1") != std::string::npos);
}

TEST_CASE("golden lean") {
  Lean l = Lean::build(norm("p1 & <fc>cnt(ns*, >2, p2)"));
  REQUIRE(l.size() == 10);
  auto s = printed(l);
  CHECK(s[0] == "<fc>T");
  CHECK(s[1] == "<ns>T");
  CHECK(s[2] == "<pa>T");
  CHECK(s[3] == "<ps>T");
  Formula psi = nav(norm("cnt(ns*, >2, p2)"));
  CHECK(l.element(4) == Formula::modal(kFc, psi));
  CHECK(l.element(5) == Formula::modal(kNs, psi));
  CHECK(s[6] == "p1");
  CHECK(s[7] == "p2");
  CHECK(s[8] == "$c0");
  CHECK(s[9] == "_other");
  CHECK(l.labels() == std::vector<int>{6, 7, 9});
  CHECK(l.free_bits() == std::vector<int>{8});
  CHECK(l.count_prop(0) == 8);
  CHECK(l.modal(kFc) == std::vector<int>{4});
  CHECK(l.modal(kNs) == std::vector<int>{5});
  CHECK(l.dump() == "<fc>T\n<ns>T\n<pa>T\n<ps>T\n" + l.element(4).to_string() + "\n" + l.element(5).to_string() +
                        "\np1\np2\n$c0\n_other\n");
}

TEST_CASE("phi-nodes of a single proposition") {
  Lean l = Lean::build(norm("p"));
  REQUIRE(l.size() == 6);
  std::vector<PhiNode> all;
  enumerate_phi_nodes(l, [&](const PhiNode& n) {
    all.push_back(n);
    return true;
  });
  CHECK(all.size() == 24);
  CHECK(count_phi_nodes_brute(l) == 24);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(is_phi_node(l, all[i]));
    if (i) CHECK(all[i - 1] != all[i]);
  }
  // deterministic
  std::vector<PhiNode> again;
  enumerate_phi_nodes(l, [&](const PhiNode& n) {
    again.push_back(n);
    return true;
  });
  CHECK(all == again);
}

TEST_CASE("phi-node enumeration matches brute force") {
  for (const char* s : {"<fc>p & <pa>q", "p & <ns>~q | <ps>p", "cnt(fc, >0, p)", "mu x . p | <fc>x"}) {
    Lean l = Lean::build(norm(s));
    CAPTURE(s);
    REQUIRE(l.size() <= 16);
    int n = 0;
    enumerate_phi_nodes(l, [&](const PhiNode& p) {
      CHECK(is_phi_node(l, p));
      ++n;
      return true;
    });
    CHECK(n == count_phi_nodes_brute(l));
  }
}

TEST_CASE("local entailment examples") {
  Lean l = Lean::build(norm("p1 & <fc>cnt(ns*, >2, p2)"));
  PhiNode n(l.size());
  n.set(7);  // p2
  n.set(8);  // c
  n.set(1);  // <ns>T
  n.set(5);  // <ns>psi
  Formula psi = nav(norm("cnt(ns*, >2, p2)"));
  CHECK(node_entails(l, n, psi));
  CHECK(node_entails(l, n, Formula::prop("p2")));
  CHECK_FALSE(node_entails(l, n, Formula::prop("p1")));
  CHECK(node_entails(l, n, Formula::not_prop("p1")));
  CHECK(node_entails(l, n, Formula::no_modal(kFc)));
  n.set(5, false);
  n.set(8, false);
  CHECK_FALSE(node_entails(l, n, psi));
  CHECK_THROWS(node_entails(l, n, Formula::modal(kFc, Formula::prop("zz"))));
}

TEST_CASE("property: closure is closed under its rules") {
  corpus::FormulaGen gen(11);
  for (int i = 0; i < 150; ++i) {
    Formula f = norm(gen.formula(3));
    auto fl = fisher_ladner(f);
    std::unordered_set<Formula> set(fl.begin(), fl.end());
    CHECK(fl.front() == f);
    for (Formula g : fl) {
      switch (g.op()) {
        case Formula::Op::And:
        case Formula::Op::Or:
          CHECK(set.count(g.lhs()));
          CHECK(set.count(g.rhs()));
          break;
        case Formula::Op::Modal: CHECK(set.count(g.body())); break;
        case Formula::Op::Mu: CHECK(set.count(g.unfold())); break;
        default: break;
      }
      if (g.has_counting()) CHECK(set.count(nav(g)));
    }
    // lean members are the counting-free modal formulas plus atoms
    Lean l = Lean::build(f);
    for (Formula g : l.elements()) CHECK_FALSE(g.has_counting());
  }
}

TEST_CASE("property: lean size is linear in formula size") {
  corpus::FormulaGen gen(12);
  for (int i = 0; i < 300; ++i) {
    Formula f = norm(gen.formula(3));
    CHECK(static_cast<std::size_t>(Lean::build(f).size()) <= 12 * formula_size(f) + 8);
  }
}

// On any marked tree, the nodes built from the true lean members are
// phi-nodes, and local entailment agrees with evaluation on every
// counting-free closure member.
TEST_CASE("property: local entailment agrees with evaluation") {
  corpus::FormulaGen gen(13);
  std::mt19937 rng(99);
  int checked = 0;
  for (int i = 0; i < 120; ++i) {
    Formula f = norm(gen.formula(3));
    Lean l = Lean::build(f);
    std::vector<Formula> queries;
    for (Formula g : fisher_ladner(f))
      if (!g.has_counting() && g.closed()) queries.push_back(g);
    auto alphabet = oracle_alphabet(f);
    auto markers = marker_props(f);
    auto trees = enumerate_trees(alphabet, 4);
    for (int s = 0; s < 12; ++s) {
      BinTree t = trees[rng() % trees.size()];
      for (const auto& m : markers)
        for (int n = 0; n < t.size(); ++n)
          if (rng() & 1) t.set_mark(m, n);
      auto nodes = truthful_nodes(l, t);
      for (Formula g : queries) {
        NodeSet truth = eval(g, t);
        for (int n = 0; n < t.size(); ++n) {
          CHECK(is_phi_node(l, nodes[n]));
          CHECK(node_entails(l, nodes[n], g) == static_cast<bool>(truth[n]));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 10000);
}
