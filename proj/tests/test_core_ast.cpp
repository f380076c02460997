#include <bit>

#include "corpus.hpp"
#include "doctest.h"
#include "treecount/error.hpp"
#include "treecount/normalize.hpp"
#include "treecount/parser.hpp"

using namespace treecount;
using K = SurfaceFormula::Kind;
using Op = Formula::Op;

namespace {
Formula norm(const std::string& s) { return normalize(parse_formula(s)); }
Formula P(const char* n) { return Formula::prop(n); }
constexpr Modality kFc = Modality::FirstChild, kNs = Modality::NextSibling, kPa = Modality::Parent,
                   kPs = Modality::PrevSibling;
}  // namespace

TEST_CASE("modality inverses") {
  for (Modality m : kAllModalities) {
    CHECK(inverse(inverse(m)) == m);
    CHECK(inverse(m) != m);
  }
  CHECK(inverse(kFc) == kPa);
  CHECK(inverse(kNs) == kPs);
}

TEST_CASE("parse: constants and the counting example") {
  CHECK(parse_formula("T")->kind == K::True);

  auto f = parse_formula("p1 & <fc> cnt(ns*, >2, p2)");
  REQUIRE(f->kind == K::And);
  CHECK(f->kids[0]->kind == K::Prop);
  CHECK(f->kids[0]->name == "p1");
  auto m = f->kids[1];
  REQUIRE(m->kind == K::Modal);
  CHECK(m->modality == kFc);
  auto c = m->kids[0];
  REQUIRE(c->kind == K::Count);
  CHECK(c->trail == Trail::star(Trail::step(kNs)));
  CHECK(c->cmp == Comparator::Gt);
  CHECK(c->k == 2);
  CHECK(c->kids[0]->name == "p2");

  auto e = parse_formula("cnt(fc, =0, p)");
  REQUIRE(e->kind == K::Count);
  CHECK(e->cmp == Comparator::Eq);
  CHECK(e->k == 0);
  CHECK(e->trail == Trail::step(kFc));
}

TEST_CASE("parse: precedence and binding") {
  auto f = parse_formula("a | b & c");
  REQUIRE(f->kind == K::Or);
  CHECK(f->kids[1]->kind == K::And);

  auto g = parse_formula("~<fc>a & b");
  REQUIRE(g->kind == K::And);
  CHECK(g->kids[0]->kind == K::Not);

  auto h = parse_formula("mu x . a | <fc>x");
  REQUIRE(h->kind == K::Mu);
  CHECK(h->kids[0]->kind == K::Or);
  CHECK(h->kids[0]->kids[1]->kids[0]->kind == K::Var);

  // x is a proposition when not bound
  CHECK(parse_formula("x")->kind == K::Prop);
  CHECK(parse_formula("@n")->kind == K::Nominal);
  CHECK(parse_formula("glob(<=3, a)")->kind == K::GlobalCount);
  CHECK(parse_formula("implies(a, =1, b)")->kind == K::Implies);
}

TEST_CASE("parse: trails") {
  Trail t = parse_trail("fc ns* (pa|ps)");
  CHECK(t == Trail::concat(Trail::step(kFc), Trail::concat(Trail::star(Trail::step(kNs)),
                                                           Trail::alt(Trail::step(kPa), Trail::step(kPs)))));
  CHECK(parse_trail("fc, ns") == parse_trail("fc ns"));
  CHECK(parse_trail("(pa|ps)*, (fc|ns)*") == everywhere_trail());
  CHECK(everywhere_trail().to_string() == "(pa|ps)*, (fc|ns)*");
}

TEST_CASE("parse: errors carry positions") {
  auto fails_at = [](const char* text, int line, int col) {
    try {
      parse_formula(text);
    } catch (const SyntaxError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == col);
      return;
    }
    FAIL("no error for " << text);
  };
  fails_at("a &", 1, 4);
  fails_at("<xx>a", 1, 2);
  fails_at("a &\n  cnt(fc, >-1, p)", 2, 12);
  fails_at("cnt(fc, >4294967296, p)", 1, 10);
  fails_at("cnt(fc zz, >1, p)", 1, 8);
  fails_at("Abc", 1, 1);
  fails_at("a $ b", 1, 3);
  CHECK_NOTHROW(parse_formula("cnt(fc, >4294967295, p)"));
}

TEST_CASE("normalize: negation rules") {
  CHECK(norm("~<fc>p") == Formula::disj(Formula::no_modal(kFc), Formula::modal(kFc, Formula::not_prop("p"))));
  CHECK(norm("~<fc>T") == Formula::no_modal(kFc));
  Trail a = parse_trail("ns*, fc");
  CHECK(norm("~cnt(ns* fc, <=3, p)") == Formula::count_gt(a, 3, P("p")));
  CHECK(norm("~cnt(ns* fc, >3, p)") == Formula::count_le(a, 3, P("p")));
  CHECK(norm("cnt(ns* fc, =2, p)") == Formula::conj(Formula::count_gt(a, 1, P("p")), Formula::count_le(a, 2, P("p"))));
  CHECK(norm("cnt(ns* fc, =0, p)") == Formula::count_le(a, 0, P("p")));
  CHECK(norm("~cnt(ns* fc, =0, p)") == Formula::count_gt(a, 0, P("p")));
  CHECK(norm("~~p") == P("p"));
  CHECK(norm("~(p & ~q)") == Formula::disj(Formula::not_prop("p"), P("q")));
  // not mu x. p | <fc>x  ==  mu x. ~p & (~<fc>T | <fc>x)
  Formula x = Formula::var("x");
  CHECK(norm("~(mu x . p | <fc>x)") ==
        Formula::mu("x", Formula::conj(Formula::not_prop("p"),
                                       Formula::disj(Formula::no_modal(kFc), Formula::modal(kFc, x)))));
}

TEST_CASE("normalize: sugar") {
  Trail g = everywhere_trail();
  Formula n = P("@n");
  CHECK(norm("@n") == Formula::conj(Formula::conj(Formula::count_gt(g, 0, n), Formula::count_le(g, 1, n)), n));
  CHECK(norm("glob(>3, a)") == Formula::count_gt(g, 3, P("a")));
  CHECK(norm("implies(a, <=0, b)") == Formula::conj(Formula::count_le(g, 0, P("a")), P("b")));

  // inside a counting body the navigational encoding is used
  Formula inner = norm("cnt(fc, >0, @n)").body();
  REQUIRE(inner.op() == Op::And);
  CHECK(inner.lhs() == n);
  CHECK(!inner.has_counting());
  CHECK(inner.to_string().find("mu") != std::string::npos);
}

TEST_CASE("normalize: helper formulas have the expected shape") {
  Formula psi = P("a");
  CHECK(helpers::descendant(psi).to_string() == "<fc>(mu x . a | <fc>x | <ns>x)");
  CHECK(helpers::foll_sibling(psi).to_string() == "mu x . <ns>a | <ns>x");
  CHECK(helpers::prec_sibling(psi).to_string() == "mu x . <ps>a | <ps>x");
  CHECK(helpers::desc_or_self(psi).to_string() == "mu x . a | <fc>(mu y . x | <ns>y)");
  CHECK(helpers::ancestor(psi).to_string() == "mu x . <pa>(a | x) | <ps>x");
  CHECK(helpers::anc_or_self(psi).to_string() == "mu x . a | mu y . <pa>(y | x) | <ps>y");
}

TEST_CASE("normalize: well-formedness errors") {
  CHECK_THROWS_AS(norm("cnt(fc, >1, cnt(ns, >1, p))"), WellFormednessError);
  CHECK_THROWS_AS(norm("mu x . cnt(fc, >1, p) | <fc>x"), WellFormednessError);
  CHECK_THROWS_AS(norm("mu x . <fc>x | <pa>x"), WellFormednessError);
  CHECK_THROWS_AS(norm("mu x . ~<fc>x"), WellFormednessError);
  CHECK_THROWS_AS(norm("mu x . p | x"), WellFormednessError);
  CHECK_THROWS_AS(norm("cnt(fc ns*, >1, p)"), WellFormednessError);     // star after star-free
  CHECK_THROWS_AS(norm("cnt((fc|pa)*, >1, p)"), WellFormednessError);   // cyclic trail
  CHECK_THROWS_AS(norm("cnt((fc ns*)*, >1, p)"), WellFormednessError);  // nested star
  CHECK_THROWS_AS(normalize(surface::var("x")), WellFormednessError);
  CHECK_NOTHROW(norm("<fc>cnt(ns*, >1, p)"));
  CHECK_NOTHROW(norm("mu x . ~~<fc>x | p"));
}

TEST_CASE("check_cycle_free") {
  Formula x = Formula::var("x");
  Formula bad = Formula::mu("x", Formula::disj(Formula::modal(kFc, x), Formula::modal(kPa, x)));
  auto v = check_cycle_free(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("x") != std::string::npos);

  CHECK(check_cycle_free(Formula::mu("x", Formula::disj(Formula::modal(kNs, x), P("p")))).empty());
  CHECK(trail_cycle_violation(everywhere_trail()).empty());
  CHECK(check_cycle_free(Formula::count_gt(everywhere_trail(), 0, P("p"))).empty());

  // an inner loop through ps combined with an outer step through ns
  Formula y = Formula::var("y");
  Formula mixed = Formula::mu("x", Formula::disj(Formula::modal(kNs, x),
                                                 Formula::mu("y", Formula::disj(Formula::modal(kPs, y), Formula::modal(kFc, x)))));
  CHECK(check_cycle_free(mixed).size() == 1);

  Formula cyclic_trail = Formula::count_gt(Trail::star(Trail::alt(Trail::step(kNs), Trail::step(kPs))), 0, P("p"));
  CHECK(check_cycle_free(cyclic_trail).size() == 1);

  // the nominal helpers are cycle-free
  using namespace helpers;
  Formula n = P("n");
  CHECK(check_cycle_free(anc_or_self(siblings(desc_or_self(n)))).empty());
  CHECK(check_cycle_free(descendant(n)).empty());
  CHECK(check_cycle_free(ancestor(n)).empty());
}

TEST_CASE("annotate_counting numbers in preorder") {
  Formula f = norm("p1 & <fc> cnt(ns*, >2, p2)");
  Formula a = annotate_counting(f);
  REQUIRE(a.op() == Op::And);
  Formula c = a.rhs().body();
  CHECK(c.op() == Op::CountGt);
  CHECK(c.cprop() == 0);
  CHECK(counting_count(a) == 1);

  Formula two = annotate_counting(norm("cnt(fc, >1, a) | <ns>cnt(ns*, <=0, b)"));
  CHECK(two.lhs().cprop() == 0);
  CHECK(two.rhs().body().cprop() == 1);

  Formula none = norm("a & <fc>b");
  CHECK(annotate_counting(none) == none);
  CHECK(annotate_counting(two) == annotate_counting(two));
}

TEST_CASE("formula_size") {
  CHECK(formula_size(Formula::top()) == 1);
  CHECK(formula_size(Formula::conj(P("p"), P("q"))) == 3);
  // nodes: count, trail step, body; k = 8 has binary length 4
  const std::size_t nodes = 3;
  const std::size_t bits = std::bit_width(std::uint64_t{8});
  CHECK(formula_size(Formula::count_gt(Trail::step(kFc), 8, P("p"))) == nodes + bits);
  CHECK(formula_size(Formula::count_gt(Trail::step(kFc), 0, P("p"))) == 3 + 1);
  CHECK(formula_size(Formula::count_gt(Trail::step(kFc), 1, P("p"))) == 3 + 1);
}

TEST_CASE("trail grammar: accepted trails conform, rejected ones report one violation") {
  const char* good[] = {"fc", "fc ns", "ns*", "ns*, fc", "(pa|ps)*, (fc|ns)*", "fc*, ns*, pa", "(fc|ns ns)"};
  const char* bad_grammar[] = {"fc ns*", "(fc ns*)*", "(fc*|ns)", "fc**"};
  for (auto s : good) {
    Trail t = parse_trail(s);
    CHECK_MESSAGE(trail_grammar_violation(t).empty(), s);
    CHECK(trail_cycle_violation(t).empty());
  }
  for (auto s : bad_grammar) {
    Trail t = parse_trail(s);
    CHECK_MESSAGE(!trail_grammar_violation(t).empty(), s);
    CHECK_THROWS_AS(normalize(surface::count(t, Comparator::Gt, 0, surface::top())), WellFormednessError);
  }
  Trail cyc = parse_trail("(ns|ps)*");
  CHECK(trail_grammar_violation(cyc).empty());
  CHECK(!trail_cycle_violation(cyc).empty());
}

TEST_CASE("property: normalize is idempotent and negation is an involution") {
  corpus::FormulaGen gen(1234);
  for (int i = 0; i < 400; ++i) {
    std::string text = gen.formula(4);
    Formula f = norm(text);
    CHECK_MESSAGE(normalize(surface::inject(f)) == f, text);
    CHECK_MESSAGE(normalize(surface::negate(surface::negate(parse_formula(text)))) == f, text);
    CHECK(f.closed());
    CHECK(check_cycle_free(f).empty());
    // printed normal forms of counting-free formulas re-parse to themselves
    if (!f.has_counting()) {
      CHECK_MESSAGE(norm(f.to_string()) == f, f.to_string());
    }
  }
}
