#pragma once

#include <string>
#include <vector>

#include "treecount/formula.hpp"
#include "treecount/surface.hpp"

namespace treecount {

// Negation normal form of a closed surface formula. Sugar is expanded here:
// '=' counting, glob/implies (counting along the everywhere trail) and
// nominals. A nominal outside counting bodies and fixpoints becomes the
// global "exactly one" formula; elsewhere it uses the navigational encoding
// that needs no counting.
// Throws WellFormednessError on free variables, variables used with the wrong
// polarity, counting under counting or under mu, malformed trails and cycle
// violations.
Formula normalize(const SurfacePtr& f);

// NNF negation of an NNF formula (the complement on every tree). Counting
// annotations are dropped.
Formula negate(Formula f);

// One message per violating fixpoint binder or repeated trail; empty when f
// is cycle-free.
std::vector<std::string> check_cycle_free(Formula f);

// Gives every counting subformula a fresh counting proposition, numbered
// 0, 1, ... in preorder.
Formula annotate_counting(Formula f);
int counting_count(Formula f);

// (pa|ps)*, (fc|ns)*: reaches every node from any node.
Trail everywhere_trail();

// Navigation helpers over an arbitrary closed formula.
namespace helpers {
Formula descendant(Formula psi);
Formula foll_sibling(Formula psi);
Formula prec_sibling(Formula psi);
Formula desc_or_self(Formula psi);
Formula ancestor(Formula psi);
Formula anc_or_self(Formula psi);
Formula siblings(Formula psi);
}  // namespace helpers

}  // namespace treecount
