#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treecount/modality.hpp"
#include "treecount/trail.hpp"

namespace treecount {

struct FormulaNode;

// Negation-normal-form formula of the counting tree logic. Hash-consed and
// immutable: structural equality is pointer equality, so formulas can be used
// directly as map keys and shared freely across threads.
class Formula {
 public:
  enum class Op : std::uint8_t {
    True,
    False,          // ~T
    Prop,
    NotProp,
    Var,
    And,
    Or,
    Modal,          // <m> f
    NoModal,        // ~<m>T
    CountLe,        // <trail> <=k f
    CountGt,        // <trail> >k f
    Mu,
    CountProp,      // counting proposition c_i (added by annotation)
    NotCountProp,
  };

  static Formula top();
  static Formula bottom();
  static Formula prop(const std::string& name);
  static Formula not_prop(const std::string& name);
  static Formula var(const std::string& name);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula modal(Modality m, Formula body);
  static Formula no_modal(Modality m);
  static Formula count_le(Trail t, std::uint64_t k, Formula body, int cprop = -1);
  static Formula count_gt(Trail t, std::uint64_t k, Formula body, int cprop = -1);
  static Formula mu(const std::string& var, Formula body);
  static Formula count_prop(int id);
  static Formula not_count_prop(int id);

  Op op() const;
  const std::string& name() const;  // Prop, NotProp, Var, Mu binder
  Modality modality() const;        // Modal, NoModal
  Formula lhs() const;              // And/Or left, Modal/Mu/Count body
  Formula rhs() const;              // And/Or right
  Formula body() const { return lhs(); }
  Trail trail() const;              // Count*
  std::uint64_t bound() const;      // Count*: k
  int cprop() const;                // Count*: annotation id or -1; CountProp: id

  bool is_counting() const { return op() == Op::CountLe || op() == Op::CountGt; }
  // True iff some Count* node occurs in the formula.
  bool has_counting() const;
  bool closed() const;
  const std::vector<std::string>& free_vars() const;  // sorted
  std::uint32_t id() const;
  std::size_t hash() const;

  // Replaces free occurrences of variable `x` by `by`.
  Formula substitute(const std::string& x, Formula by) const;
  // mu x. psi  ->  psi{mu x. psi / x}; cached per binder.
  Formula unfold() const;

  std::string to_string() const;

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }

 private:
  explicit Formula(const FormulaNode* n) : node_(n) {}
  const FormulaNode* node_;
  friend struct FormulaStore;
};

// Node count, where a counting constant k contributes floor(log2 k) + 1 extra
// units (its binary length; k = 0 contributes 1) and each trail contributes its
// own node count.
std::size_t formula_size(Formula f);
std::size_t trail_size(Trail t);

// Propositions (label and marker) occurring in f, sorted.
std::vector<std::string> propositions(Formula f);
// Free variables of f, sorted.
std::vector<std::string> free_variables(Formula f);

// Reserved namespaces: nominal markers start with '@', the fresh "any other
// label" proposition is kOtherLabel. Neither can be written as a user
// proposition in the concrete syntax.
inline const std::string kOtherLabel = "_other";
inline bool is_marker_prop(const std::string& name) { return !name.empty() && name[0] == '@'; }

}  // namespace treecount

template <>
struct std::hash<treecount::Formula> {
  std::size_t operator()(treecount::Formula f) const noexcept { return f.hash(); }
};
