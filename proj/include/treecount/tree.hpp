#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "treecount/modality.hpp"

namespace treecount {

// Unranked tree: a label and its ordered children.
struct NaryTree {
  std::string label;
  std::vector<NaryTree> children;

  friend bool operator==(const NaryTree&, const NaryTree&) = default;
};

// Finite binary tree under the first-child / next-sibling encoding. Node ids
// are 0..size()-1 in preorder (node, first-child subtree, next-sibling
// subtree), which is document order of the unranked tree. Node 0 is the root;
// it may have next siblings, in which case the tree encodes a hedge.
class BinTree {
 public:
  static constexpr int kNone = -1;

  BinTree() = default;

  int size() const { return static_cast<int>(label_.size()); }
  int root() const { return 0; }
  // R(n, m), or kNone.
  int step(int n, Modality m) const { return adj_[n][index_of(m)]; }
  const std::string& label(int n) const { return label_[n]; }
  void set_label(int n, std::string l) { label_[n] = std::move(l); }

  // Marker propositions (nominals, counting propositions) are free bits on
  // nodes, independent of the label.
  bool marked(const std::string& prop, int n) const;
  void set_mark(const std::string& prop, int n, bool on = true);
  const std::map<std::string, std::vector<bool>>& marks() const { return marks_; }
  void clear_marks() { marks_.clear(); }

  bool has_next_sibling_root() const { return size() > 0 && step(0, Modality::NextSibling) != kNone; }

  // Builds a tree from first-child/next-sibling links of nodes given in any
  // numbering; nodes are renumbered into preorder. `top` is the root.
  static BinTree from_links(int top, const std::vector<int>& fc, const std::vector<int>& ns,
                            const std::vector<std::string>& labels);

  // Child position path of n in the unranked reading, e.g. "/1/3": the third
  // child of the first top-level node.
  std::string path(int n) const;

  friend bool operator==(const BinTree&, const BinTree&) = default;

 private:
  std::vector<std::array<int, 4>> adj_;
  std::vector<std::string> label_;
  std::map<std::string, std::vector<bool>> marks_;
};

BinTree nary_to_binary(const NaryTree& t);
BinTree forest_to_binary(const std::vector<NaryTree>& forest);
// Throws Error when the binary root has a next sibling.
NaryTree binary_to_nary(const BinTree& t);
std::vector<NaryTree> binary_to_forest(const BinTree& t);

// Term syntax "a(b, c(d))"; a hedge prints as "a(b), c".
std::string to_term(const BinTree& t);
std::string to_term(const NaryTree& t);
// "<a><b/><c><d/></c></a>"
std::string to_xml(const BinTree& t);
// Accepts either notation (XML when the text starts with '<'). Throws
// SyntaxError.
BinTree parse_tree(std::string_view text);
NaryTree parse_nary(std::string_view text);

}  // namespace treecount
