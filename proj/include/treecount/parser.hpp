#pragma once

#include <string_view>

#include "treecount/surface.hpp"

namespace treecount {

// Concrete syntax:
//   f ::= T | p | x | ~f | f & f | f | f | <fc>f | <ns>f | <pa>f | <ps>f
//       | mu x . f | cnt(TRAIL, OP k, f) | @name
//       | glob(OP k, f) | implies(f, OP k, f) | ( f )
//   OP ::= <= | > | =         TRAIL: fc ns pa ps, juxtaposition or ',' for
//   concatenation, '|' union, '*' repetition, parentheses.
// Precedence: ~ binds tighter than modalities, then &, then |; mu extends as
// far right as possible. Identifiers bound by an enclosing mu are variables.
// Throws SyntaxError.
SurfacePtr parse_formula(std::string_view text);
Trail parse_trail(std::string_view text);

}  // namespace treecount
