#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treecount/formula.hpp"
#include "treecount/tree.hpp"

namespace treecount {

using NodeSet = std::vector<bool>;
using Valuation = std::map<std::string, NodeSet>;

// Denotation of f on t: the set of nodes where f holds. Fixpoints are computed
// by iteration from the empty set; counting counts distinct nodes.
NodeSet eval(Formula f, const BinTree& t, const Valuation& v = {});
bool holds_somewhere(Formula f, const BinTree& t);

// Nodes reachable from n along a path in the language of the trail.
NodeSet trail_reach(const BinTree& t, int n, Trail alpha);

// Every labelled binary tree with 1..max_nodes nodes, each once, ordered by
// node count, then shape (preorder bit encoding), then label word. The
// callback returns false to stop early.
void for_each_tree(const std::vector<std::string>& alphabet, int max_nodes,
                   const std::function<bool(const BinTree&)>& visit);
std::vector<BinTree> enumerate_trees(const std::vector<std::string>& alphabet, int max_nodes);
// Number of tree shapes with exactly n nodes.
std::uint64_t shape_count(int n);

// Label alphabet used for a formula: its non-marker propositions plus the
// fresh kOtherLabel.
std::vector<std::string> oracle_alphabet(Formula f);

// Marker propositions of f (nominals and counting propositions), sorted.
std::vector<std::string> marker_props(Formula f);

// Calls visit for every assignment of f's marker propositions to node sets of
// t (nothing to enumerate when f has none). Stops when visit returns false.
void for_each_marking(Formula f, const BinTree& t, const std::function<bool(const BinTree&)>& visit);

// First enumerated tree (and marking) on which f holds at some node.
std::optional<BinTree> sat_oracle(Formula f, const std::vector<std::string>& alphabet, int max_nodes);

}  // namespace treecount
