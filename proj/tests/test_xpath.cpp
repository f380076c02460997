#include <algorithm>

#include "doctest.h"
#include "treecount/error.hpp"
#include "treecount/normalize.hpp"
#include "treecount/parser.hpp"
#include "treecount/semantics.hpp"
#include "treecount/tableau.hpp"
#include "treecount/xpath.hpp"
#include "xpath_corpus.hpp"

using namespace treecount;

namespace {

using XK = XPathExpr::Kind;

std::vector<BinTree> unranked_trees(const std::vector<std::string>& labels, int max_nodes) {
  std::vector<BinTree> out;
  for_each_tree(labels, max_nodes, [&](const BinTree& t) {
    if (!t.has_next_sibling_root()) out.push_back(t);
    return true;
  });
  return out;
}

const std::vector<BinTree>& small_trees() {
  static const std::vector<BinTree> v = unranked_trees({"a", "b", "c"}, 5);
  return v;
}

bool same_relation(const XPathExpr& a, const XPathExpr& b, const BinTree& t) { return eval_xpath(a, t) == eval_xpath(b, t); }

NodeSet set_of(int n, std::initializer_list<int> ids) {
  NodeSet s(n);
  for (int i : ids) s[i] = true;
  return s;
}

}  // namespace

TEST_CASE("parse examples") {
  XPathPtr e = parse_xpath("child::a");
  CHECK(e->kind == XK::Step);
  CHECK(e->axis == Axis::Child);
  CHECK(e->test == "a");

  e = parse_xpath("child::a[count(descendant::b[parent::c])>5]");
  REQUIRE(e->kind == XK::Qualified);
  CHECK(e->lhs->kind == XK::Step);
  CHECK(e->lhs->test == "a");
  REQUIRE(e->qual->kind == XQualifier::Kind::Count);
  CHECK(e->qual->cmp == CountCmp::Gt);
  CHECK(e->qual->k == 5);
  CHECK(to_string(*e->qual->path) == "descendant::b[parent::c]");

  CHECK_THROWS_AS(parse_xpath("self::*[count(child::a[count(child::b)>1])>0]"), SyntaxError);
  CHECK_THROWS_AS(parse_xpath("sideways::a"), SyntaxError);
  CHECK_THROWS_AS(parse_xpath("child::a["), SyntaxError);
  CHECK_THROWS_AS(parse_xpath("child::a[position()>1]"), SyntaxError);
  CHECK_THROWS_AS(parse_xpath("child::*[child::a union child::b]"), SyntaxError);

  // shorthands
  CHECK(to_string(*parse_xpath("a/../.")) == "child::a/parent::*/self::*");
  CHECK(parse_xpath("a | b")->kind == XK::Union);
  CHECK(parse_xpath("/a")->kind == XK::Root);
}

TEST_CASE("printing round-trips over the corpus") {
  for (const std::string& s : corpus::xpath_exprs()) {
    XPathPtr e = parse_xpath(s);
    std::string once = to_string(*e);
    CHECK_MESSAGE(to_string(*parse_xpath(once)) == once, s);
  }
}

TEST_CASE("desugar examples") {
  XPathPtr plain = parse_xpath("child::a/descendant::b[child::c]");
  CHECK(desugar_position(plain) == plain);

  XPathPtr first = desugar_position(parse_xpath("child::a[position()=1]"));
  REQUIRE(first->kind == XK::Except);
  CHECK(to_string(*first->lhs) == "child::a");
  REQUIRE(first->rhs->kind == XK::Seq);
  CHECK(to_string(*first->rhs->lhs) == "child::a");
  CHECK(!has_position(*first));

  XPathPtr second = desugar_position(parse_xpath("child::a[position()=2]"));
  // (P intersect P[1]/follow)[1]
  REQUIRE(second->kind == XK::Except);
  REQUIRE(second->lhs->kind == XK::Intersect);
  CHECK(to_string(*second->lhs->lhs) == "child::a");
  CHECK(second->lhs->rhs->kind == XK::Seq);
  CHECK(second->lhs->rhs->lhs->kind == XK::Except);
  CHECK(!has_position(*second));
}

TEST_CASE("desugar preserves evaluation") {
  const char* exprs[] = {"child::*[position()=1]",   "child::*[position()=2]",
                         "descendant::a[position()=2]", "descendant::*[position()=1]/child::b",
                         "child::*/following::*[position()=2]", "descendant::*[child::*[position()=2]]"};
  for (const char* s : exprs) {
    XPathPtr e = parse_xpath(s), d = desugar_position(e);
    for (const BinTree& t : small_trees()) REQUIRE_MESSAGE(same_relation(*e, *d, t), s, " on ", to_term(t));
  }
}

TEST_CASE("eval examples") {
  BinTree t = parse_tree("r(a(b, c), b)");
  auto rows = eval_xpath(*parse_xpath("self::*"), t);
  for (int x = 0; x < t.size(); ++x) CHECK(rows[x] == set_of(t.size(), {x}));

  // the root clause keeps only pairs starting at the root
  BinTree ab = parse_tree("a(b)");
  rows = eval_xpath(*parse_xpath("/child::a"), ab);
  CHECK(rows[0] == set_of(2, {}));
  CHECK(rows[1] == set_of(2, {}));
  rows = eval_xpath(*parse_xpath("/child::b"), ab);
  CHECK(rows[0] == set_of(2, {1}));
  CHECK(rows[1] == set_of(2, {}));

  // one b child is not more than one
  BinTree one = parse_tree("r(a(b))");
  rows = eval_xpath(*parse_xpath("child::a[count(child::b)>1]"), one);
  for (const NodeSet& r : rows) CHECK(r == set_of(3, {}));
  rows = eval_xpath(*parse_xpath("child::a[count(child::b)>=1]"), one);
  CHECK(rows[0] == set_of(3, {1}));

  // ids are document order: r=0 a=1 b=2 c=3 b=4
  CHECK(select_from_root(*parse_xpath("descendant::*"), t) == set_of(5, {1, 2, 3, 4}));
  CHECK(eval_xpath(*parse_xpath("following::*"), t)[2] == set_of(5, {3, 4}));
  CHECK(eval_xpath(*parse_xpath("preceding::*"), t)[4] == set_of(5, {1, 2, 3}));
  CHECK(eval_xpath(*parse_xpath("preceding-sibling::*"), t)[3] == set_of(5, {2}));
  CHECK(select_from_root(*parse_xpath("descendant::b[position()=2]"), t) == set_of(5, {4}));
  CHECK(select_from_root(*parse_xpath("descendant::*[count(child::*)=2]"), t) == set_of(5, {1}));

  // under a document node: r=0 company=1 personnel=2 employee=3 name=4 employee=5
  BinTree doc = parse_tree("r(company(personnel(employee(name), employee(name), manager), site(employee)))");
  CHECK(select_from_root(*parse_xpath("/company/personnel/employee"), doc) == set_of(doc.size(), {3, 5}));
  CHECK(select_from_root(*parse_xpath("/company/personnel/employee"), parse_tree("company(personnel(employee))")) ==
        set_of(3, {}));
}

TEST_CASE("step axes") {
  Formula g = Formula::prop("g");
  CHECK(compile_step_axes(Axis::Self, g) == g);
  CHECK(compile_step_axes(Axis::Parent, g) == normalize(parse_formula("<fc>(mu x1 . g | <ns>x1)")));
  CHECK(compile_step_axes(Axis::Child, g) == normalize(parse_formula("mu x1 . <pa>g | <ps>x1")));

  // each axis against the unranked relation, from every g-labelled node
  const Axis all[] = {Axis::Self,      Axis::Child,            Axis::Parent,           Axis::Descendant, Axis::Ancestor,
                      Axis::FollowingSibling, Axis::PrecedingSibling, Axis::Following, Axis::Preceding};
  auto trees = unranked_trees({"g", "h"}, 6);
  for (Axis a : all) {
    Formula f = compile_step_axes(a, g);
    XPathPtr step = xp::step(a, "*");
    for (const BinTree& t : trees) {
      auto rows = eval_xpath(*step, t);
      NodeSet want(t.size());
      for (int x = 0; x < t.size(); ++x)
        if (t.label(x) == "g")
          for (int y = 0; y < t.size(); ++y) want[y] = want[y] || rows[x][y];
      REQUIRE_MESSAGE(eval(f, t) == want, axis_name(a), " on ", to_term(t));
    }
  }
}

TEST_CASE("inverse axes") {
  CHECK(inverse(Axis::Child) == Axis::Parent);
  CHECK(inverse(Axis::Descendant) == Axis::Ancestor);
  CHECK(inverse(Axis::FollowingSibling) == Axis::PrecedingSibling);
  CHECK(inverse(Axis::Following) == Axis::Preceding);
  CHECK(inverse(Axis::Self) == Axis::Self);
  auto trees = unranked_trees({"a"}, 5);
  for (Axis a : {Axis::Child, Axis::Descendant, Axis::FollowingSibling, Axis::Following})
    for (const BinTree& t : trees) {
      auto f = eval_xpath(*xp::step(a, "*"), t), b = eval_xpath(*xp::step(inverse(a), "*"), t);
      for (int x = 0; x < t.size(); ++x)
        for (int y = 0; y < t.size(); ++y) REQUIRE(f[x][y] == b[y][x]);
    }
}

TEST_CASE("compile examples") {
  auto rel = [](const char* s) { return compile_xpath(parse_xpath(s), XPathContext::Relative); };

  CompiledXPath c = rel("child::a");
  CHECK(c.formula.to_string() == "a & (mu x1 . <pa>T | <ps>x1)");

  c = rel("child::a[count(descendant::b[parent::c])>5]");
  CHECK(c.nominals.empty());
  CHECK(c.formula.to_string() ==
        "a & (mu x1 . <pa>T | <ps>x1) & <fc>cnt((fc|ns)*, >5, b & (mu x2 . <pa>c | <ps>x2))");

  c = rel("child::a/child::b[count(child::e/descendant::h)>3]");
  REQUIRE(c.nominals == std::vector<std::string>{"@n1"});
  CHECK(to_string(*c.surface) ==
        "b & (mu x2 . <pa>(a & (mu x1 . <pa>T | <ps>x1)) | <ps>x2) & "
        "(@n1 & glob(>3, h & (mu x4 . <pa>(e & (mu x3 . <pa>@n1 | <ps>x3)) | <pa>x4 | <ps>x4))) & "
        "glob(<=1, @n1)");

  c = compile_xpath(parse_xpath("child::a"));
  CHECK(c.formula.to_string() == "a & (mu x1 . <pa>(~<pa>T & ~<ps>T & ~<ns>T) | <ps>x1)");

  // fresh nominals skip names the expression already uses
  c = rel("child::*[@n1]/child::b[count(child::*/child::*)>0]");
  CHECK(c.nominals == std::vector<std::string>{"@n2"});
}

TEST_CASE("nominals under negation are rejected") {
  CHECK_THROWS_AS(compile_xpath(parse_xpath("descendant::*[not(child::*[count(child::*)>1])]")), UnsupportedError);
  // a negated count flips its comparison instead
  CHECK_NOTHROW(compile_xpath(parse_xpath("descendant::*[not(count(child::*/child::*)>1)]")));
  CHECK_THROWS_AS(compile_xpath(parse_xpath("descendant::*[not(child::*[position()=2])]")), UnsupportedError);
  CHECK_THROWS_AS(compile_xpath(parse_xpath("descendant::*[count(child::*[child::*[position()=1]])>1]")),
                  UnsupportedError);
  CHECK_NOTHROW(compile_xpath(parse_xpath("descendant::*[not(count(child::*)>1)]")));
}

TEST_CASE("compiled formulas agree with evaluation") {
  for (const std::string& s : corpus::xpath_exprs()) {
    XPathPtr e = parse_xpath(s);
    CompiledXPath c = compile_xpath(e);
    for (const BinTree& t : small_trees())
      REQUIRE_MESSAGE(compiled_selection(c, t) == select_from_root(*e, t), s, " on ", to_term(t));
  }
}

TEST_CASE("any context") {
  for (const char* s : {"child::a", "descendant::b[count(child::*)>1]", "descendant::* except child::*",
                        "parent::a[following-sibling::*]"}) {
    XPathPtr e = parse_xpath(s);
    CompiledXPath c = compile_xpath(e, XPathContext::Any);
    for (const BinTree& t : small_trees()) {
      auto rows = eval_xpath(*e, t);
      NodeSet want(t.size());
      for (const NodeSet& r : rows)
        for (int y = 0; y < t.size(); ++y) want[y] = want[y] || r[y];
      REQUIRE_MESSAGE(compiled_selection(c, t) == want, s, " on ", to_term(t));
    }
  }
}

TEST_CASE("compiled size is linear") {
  constexpr double kC = 32;
  double worst = 0;
  for (const std::string& s : corpus::xpath_exprs()) {
    XPathPtr e = parse_xpath(s);
    if (has_position(*e)) continue;
    double r = double(formula_size(compile_xpath(e).formula)) / double(xpath_size(*e));
    worst = std::max(worst, r);
    CHECK_MESSAGE(r <= kC, s);
  }
  MESSAGE("worst size ratio " << worst);

  // a chain of n steps stays linear in n
  std::string chain = "child::a";
  std::vector<std::size_t> sizes{formula_size(compile_xpath(parse_xpath(chain)).formula)};
  for (int i = 0; i < 20; ++i) {
    chain += "/descendant::b[count(child::c)>2]";
    sizes.push_back(formula_size(compile_xpath(parse_xpath(chain)).formula));
  }
  // the last count stays in place, earlier ones move to the top
  for (std::size_t i = 3; i < sizes.size(); ++i) CHECK(sizes[i] - sizes[i - 1] == sizes[2] - sizes[1]);
}

TEST_CASE("decision problems") {
  auto root = [](const char* s) { return compile_xpath(parse_xpath(s)).formula; };
  CHECK(solve(root("child::a/child::b except child::a/child::b")).verdict == Verdict::Unsat);
  CHECK(solve(root("descendant::a[child::b] except descendant::a[child::b]")).verdict == Verdict::Unsat);
  CHECK(solve(root("child::a[count(child::b)>2]")).verdict == Verdict::Sat);
  CHECK(solve(root("child::a[count(child::b)>2][count(child::*)<3]")).verdict == Verdict::Unsat);

  CHECK(contains(root("child::a"), root("child::*")).holds);
  Containment no = contains(root("child::*"), root("child::a"));
  REQUIRE(!no.holds);
  REQUIRE(no.detail.verdict == Verdict::Sat);
  const BinTree& m = no.detail.model;
  int n = no.detail.node;
  CHECK(m.label(n) == kOtherLabel);
  // the counterexample node is selected by one side only
  CHECK(select_from_root(*parse_xpath("child::*"), m)[n]);
  CHECK(!select_from_root(*parse_xpath("child::a"), m)[n]);

  // containment verdicts are consistent with the small trees
  const char* pairs[][2] = {{"child::a/child::b", "descendant::b"},
                            {"descendant::b[parent::a]", "descendant::a/child::*"},
                            {"child::*[count(child::*)>1]", "child::*/child::*/parent::*"},
                            {"descendant::b", "child::b"}};
  for (auto& p : pairs) {
    XPathPtr q = parse_xpath(p[0]), r = parse_xpath(p[1]);
    bool solver = contains(compile_xpath(q).formula, compile_xpath(r).formula).holds;
    bool trees = std::all_of(small_trees().begin(), small_trees().end(), [&](const BinTree& t) {
      NodeSet a = select_from_root(*q, t), b = select_from_root(*r, t);
      for (int i = 0; i < t.size(); ++i)
        if (a[i] && !b[i]) return false;
      return true;
    });
    if (solver) CHECK_MESSAGE(trees, p[0], " in ", p[1]);
    if (!trees) CHECK_MESSAGE(!solver, p[0], " in ", p[1]);
  }
  CHECK(contains(root("child::*/descendant::b[parent::a]"), root("descendant::a/child::*")).holds);
  // the parent may be the root, which is no descendant
  CHECK(!contains(root("descendant::b[parent::a]"), root("descendant::a/child::*")).holds);
  CHECK(!contains(root("descendant::b"), root("child::b")).holds);
}
