#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "treecount/formula.hpp"
#include "treecount/semantics.hpp"
#include "treecount/surface.hpp"
#include "treecount/tree.hpp"

namespace treecount {

enum class Axis : std::uint8_t {
  Self,
  Child,
  Parent,
  Descendant,
  Ancestor,
  FollowingSibling,
  PrecedingSibling,
  Following,
  Preceding,
};

std::string axis_name(Axis a);
// child <-> parent, descendant <-> ancestor, and so on; self is its own.
Axis inverse(Axis a);

enum class CountCmp : std::uint8_t { Lt, Le, Gt, Ge, Eq };

std::string cmp_text(CountCmp c);

struct XPathExpr;
struct XQualifier;
using XPathPtr = std::shared_ptr<const XPathExpr>;
using XQualPtr = std::shared_ptr<const XQualifier>;

// Union/Intersect/Except come out of the parser only at the top; position
// desugaring can put them anywhere inside a path.
struct XPathExpr {
  enum class Kind : std::uint8_t { Step, Seq, Qualified, Position, Root, Union, Intersect, Except };
  Kind kind = Kind::Step;
  Axis axis = Axis::Child;
  std::string test = "*";  // Step: "*" or a name
  XPathPtr lhs, rhs;       // Seq and set operations; Qualified/Position/Root use lhs
  XQualPtr qual;           // Qualified
  std::uint64_t k = 0;     // Position
};

struct XQualifier {
  enum class Kind : std::uint8_t { Path, Count, Not, And, Or, Nominal };
  Kind kind = Kind::Path;
  XPathPtr path;  // Path, Count
  CountCmp cmp = CountCmp::Gt;
  std::uint64_t k = 0;
  XQualPtr lhs, rhs;
  std::string name;  // Nominal
};

namespace xp {
XPathPtr step(Axis a, std::string test);
XPathPtr seq(XPathPtr a, XPathPtr b);
XPathPtr qualified(XPathPtr p, XQualPtr q);
XPathPtr position(XPathPtr p, std::uint64_t k);
XPathPtr root(XPathPtr p);
XPathPtr set_union(XPathPtr a, XPathPtr b);
XPathPtr set_intersect(XPathPtr a, XPathPtr b);
XPathPtr set_except(XPathPtr a, XPathPtr b);
XQualPtr path(XPathPtr p);
XQualPtr count(XPathPtr p, CountCmp c, std::uint64_t k);
XQualPtr negate(XQualPtr q);
XQualPtr conj(XQualPtr a, XQualPtr b);
XQualPtr disj(XQualPtr a, XQualPtr b);
XQualPtr nominal(std::string name);
}  // namespace xp

// Unabbreviated steps axis::test plus the usual shorthands: a bare name test
// is a child step, "." is self::*, ".." is parent::*, "|" is union.
// Predicates bind to the step they follow. [position()=k] must be a whole
// predicate. Throws SyntaxError, also for count() inside a count() path.
XPathPtr parse_xpath(std::string_view text);
std::string to_string(const XPathExpr& e);
std::string to_string(const XQualifier& q);
// Number of AST nodes.
std::size_t xpath_size(const XPathExpr& e);
bool has_position(const XPathExpr& e);

// Removes every [position()=k] using document order:
//   P[1]   = P except P/follow
//   P[k+1] = (P intersect P[k]/follow)[1]
// where follow = descendant::* union (ancestor::* union self::*)/
// following-sibling::*/(descendant::* union self::*). Set operations are left
// where they arise.
XPathPtr desugar_position(const XPathPtr& e);

// rows[x] is the set of nodes y with (x, y) in the relation. Node ids are
// document order. Nominal qualifiers @n read the mark "@n".
std::vector<NodeSet> eval_xpath(const XPathExpr& e, const BinTree& t);
std::vector<NodeSet> eval_xpath(const XPathExpr& e, const NaryTree& t);
// Nodes selected from the root.
NodeSet select_from_root(const XPathExpr& e, const BinTree& t);

// Nodes y having some x with x (axis) y and x |= gamma.
Formula compile_step_axes(Axis a, Formula gamma);

enum class XPathContext : std::uint8_t { Root, Any, Relative };

struct CompiledXPath {
  Formula formula = Formula::top();  // normalized
  SurfacePtr surface;
  // Fresh nominals introduced by the translation ("@n1", ...), as marker
  // propositions. Top-level conjuncts allow each on one node at most; most
  // require exactly one.
  std::vector<std::string> nominals;
};

// Root: evaluation starts at the root of a single tree. Any: at any node of a
// single tree. Relative: at any node of any binary tree (context formula T),
// the relational reading. Position predicates are desugared first. Throws
// UnsupportedError when a construct would need a fresh nominal under
// negation.
CompiledXPath compile_xpath(const XPathPtr& e, XPathContext ctx = XPathContext::Root);

struct XPathCompileOptions {
  XPathContext context = XPathContext::Root;
  // Fresh nominals are named prefix1, prefix2, ...; another prefix keeps two
  // compiled expressions apart.
  std::string nominal_prefix = "@n";
  // Conjoined with the root (with T under Relative). It ends up under
  // fixpoints, so it must be counting-free unless the context is Relative.
  SurfacePtr schema;
};
CompiledXPath compile_xpath(const XPathPtr& e, const XPathCompileOptions& opt);

// Nodes where the compiled formula holds for some placement of its fresh
// nominals (one node each, or none).
NodeSet compiled_selection(const CompiledXPath& c, const BinTree& t);

}  // namespace treecount
