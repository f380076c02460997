#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "treecount/modality.hpp"

namespace treecount {

struct TrailNode;

// Regular expression over modalities. Values are hash-consed: two trails are
// structurally equal iff they compare equal, and copies are pointer-cheap.
class Trail {
 public:
  enum class Kind : std::uint8_t { Empty, Step, Concat, Union, Star };

  static Trail empty();  // internal only: never produced by the parser
  static Trail step(Modality m);
  static Trail concat(Trail a, Trail b);
  static Trail alt(Trail a, Trail b);
  static Trail star(Trail a);
  // Word m1,m2,...,mk as a right-leaning concatenation; empty() for k = 0.
  static Trail word(const std::vector<Modality>& mods);

  Kind kind() const;
  Modality modality() const;  // Step only
  Trail lhs() const;          // Concat/Union/Star (Star body)
  Trail rhs() const;          // Concat/Union
  std::uint32_t id() const;
  std::size_t hash() const;

  bool star_free() const;
  // Set of modalities occurring anywhere in the trail, as a 4-bit mask.
  unsigned modality_mask() const;

  std::string to_string() const;

  friend bool operator==(Trail a, Trail b) { return a.node_ == b.node_; }
  friend bool operator!=(Trail a, Trail b) { return a.node_ != b.node_; }

 private:
  explicit Trail(const TrailNode* n) : node_(n) {}
  const TrailNode* node_;
  friend struct TrailStore;
};

// Grammar alpha ::= a0 | a0* | a0*, alpha with a0 star-free. Returns an empty
// string when the trail conforms, otherwise a description of the violation.
std::string trail_grammar_violation(Trail t);
// Non-empty iff some starred subtrail mentions both m and inverse(m).
std::string trail_cycle_violation(Trail t);

// Epsilon-free NFA recognising the language of a trail, at most 64 states.
struct TrailAutomaton {
  int num_states = 0;
  std::uint64_t initial = 0;
  std::uint64_t accepting = 0;
  std::vector<std::array<std::uint64_t, 4>> next;  // next[state][modality]

  static TrailAutomaton build(Trail t);

  std::uint64_t step(std::uint64_t states, Modality m) const {
    std::uint64_t out = 0;
    for (int s = 0; s < num_states; ++s)
      if (states >> s & 1) out |= next[s][index_of(m)];
    return out;
  }
  bool accepts(const std::vector<Modality>& word) const;
};

}  // namespace treecount

template <>
struct std::hash<treecount::Trail> {
  std::size_t operator()(treecount::Trail t) const noexcept { return t.hash(); }
};
