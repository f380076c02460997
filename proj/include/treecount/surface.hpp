#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "treecount/formula.hpp"

namespace treecount {

enum class Comparator : std::uint8_t { Le, Gt, Eq };

std::string comparator_text(Comparator c);

// Formula as written by the user: free negation plus the sugar forms
// (equality counting, nominals, global counting, guarded implication).
struct SurfaceFormula {
  enum class Kind : std::uint8_t {
    True,
    Prop,
    Var,
    Not,
    And,
    Or,
    Modal,       // <m> f
    Count,       // cnt(trail, OP k, f)
    Mu,
    Nominal,     // @name
    GlobalCount, // glob(OP k, f): f holds at OP k nodes of the whole tree
    Implies,     // implies(f1, OP k, f2): f2, provided f1 holds at OP k nodes
    Formula,     // an already normalized formula spliced in
  };

  Kind kind = Kind::True;
  std::string name;  // Prop/Var/Mu/Nominal
  Modality modality = Modality::FirstChild;
  Trail trail = Trail::empty();
  Comparator cmp = Comparator::Gt;
  std::uint64_t k = 0;
  std::vector<std::shared_ptr<const SurfaceFormula>> kids;
  std::optional<treecount::Formula> embedded;
  int line = 0;
  int column = 0;
};

using SurfacePtr = std::shared_ptr<const SurfaceFormula>;

namespace surface {
SurfacePtr top();
SurfacePtr prop(std::string name);
SurfacePtr var(std::string name);
SurfacePtr negate(SurfacePtr f);
SurfacePtr conj(SurfacePtr a, SurfacePtr b);
SurfacePtr disj(SurfacePtr a, SurfacePtr b);
SurfacePtr modal(Modality m, SurfacePtr body);
SurfacePtr count(Trail t, Comparator c, std::uint64_t k, SurfacePtr body);
SurfacePtr mu(std::string var, SurfacePtr body);
SurfacePtr nominal(std::string name);
SurfacePtr global_count(Comparator c, std::uint64_t k, SurfacePtr body);
SurfacePtr implies(SurfacePtr guard, Comparator c, std::uint64_t k, SurfacePtr body);
// Wraps a normalized formula so it can be re-fed to normalize().
SurfacePtr inject(Formula f);
}  // namespace surface

std::string to_string(const SurfaceFormula& f);

}  // namespace treecount
