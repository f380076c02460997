#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treecount/bits.hpp"
#include "treecount/formula.hpp"
#include "treecount/tree.hpp"

namespace treecount {

// Counting-free navigation formula of a counting formula; other constructors
// are traversed. Starred trails become fixpoints over the variable "$x".
Formula nav(Formula f);
Formula nav(Trail t, Formula psi);

// Fisher-Ladner closure, in discovery order. Besides the usual rules, any
// member that contains counting also contributes its nav image, which is how
// modal formulas such as <fc>nav(...) enter the closure.
std::vector<Formula> fisher_ladner(Formula f);

using PhiNode = Bits;

class Lean {
 public:
  // f must be normalized and annotated.
  static Lean build(Formula f);

  Formula formula() const { return phi_; }
  int size() const { return static_cast<int>(elems_.size()); }
  Formula element(int i) const { return elems_[i]; }
  const std::vector<Formula>& elements() const { return elems_; }
  int find(Formula f) const;
  int find_prop(const std::string& name) const;  // -1 when absent

  int top(Modality m) const { return top_[index_of(m)]; }
  // <m>psi members other than <m>T.
  const std::vector<int>& modal(Modality m) const { return modal_[index_of(m)]; }
  // The label propositions: P_phi without markers, then the "other" label.
  const std::vector<int>& labels() const { return labels_; }
  int other_label() const { return labels_.back(); }
  // Marker propositions and counting propositions; any subset may be set.
  const std::vector<int>& free_bits() const { return free_; }
  int count_prop(int c) const;  // position of counting proposition c
  int num_counting() const { return num_counting_; }

  // One element per line.
  std::string dump() const;

 private:
  Formula phi_ = Formula::top();
  std::vector<Formula> elems_;
  std::unordered_map<Formula, int> index_;
  std::unordered_map<std::string, int> prop_index_;
  int top_[4] = {-1, -1, -1, -1};
  std::vector<int> modal_[4];
  std::vector<int> labels_;
  std::vector<int> free_;
  std::vector<int> cprops_;
  int num_counting_ = 0;
};

// Checks the three node constraints: one label, <m>psi implies <m>T, not both
// <pa>T and <ps>T.
bool is_phi_node(const Lean& lean, const PhiNode& n);

// Every phi-node of the lean in increasing bit-vector order; stops when the
// callback returns false. Exponential in the lean size.
void enumerate_phi_nodes(const Lean& lean, const std::function<bool(const PhiNode&)>& visit);

// Local entailment n |- f for a counting-free f built from lean members.
bool node_entails(const Lean& lean, const PhiNode& n, Formula f);

// Memoizing variant for repeated queries on one node.
class LocalEntailment {
 public:
  LocalEntailment(const Lean& lean, const PhiNode& n) : lean_(lean), n_(n) {}
  bool operator()(Formula f);

 private:
  const Lean& lean_;
  const PhiNode& n_;
  std::unordered_map<Formula, bool> memo_;
};

// The phi-node of every tree node: the lean members that hold there. Counting
// propositions are read from the marks "$c0", "$c1", ...
std::vector<PhiNode> truthful_nodes(const Lean& lean, const BinTree& t);

// Human-readable set notation of a node, e.g. {p1, <fc>T}.
std::string node_to_string(const Lean& lean, const PhiNode& n);

}  // namespace treecount
