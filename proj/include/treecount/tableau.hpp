#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treecount/lean.hpp"
#include "treecount/surface.hpp"
#include "treecount/tree.hpp"

namespace treecount {

// Either empty or (node, left, right); left hangs below a first-child edge,
// right below a next-sibling edge. Immutable and shared.
class PhiTree {
 public:
  PhiTree() = default;
  static PhiTree make(PhiNode n, PhiTree left, PhiTree right);

  bool empty() const { return !d_; }
  const PhiNode& node() const;
  const PhiTree& left() const;
  const PhiTree& right() const;
  int size() const;
  // Canonical text; equal iff the trees are structurally equal.
  const std::string& fingerprint() const;
  // node -> max occurrences on a root-to-leaf path
  const std::map<PhiNode, int>& nmax_profile() const;

  friend bool operator==(const PhiTree& a, const PhiTree& b) { return a.fingerprint() == b.fingerprint(); }

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

struct PhiTree::Data {
  PhiNode node;
  PhiTree left, right;
  int size;
  std::string fp;
  std::map<PhiNode, int> profile;
};

inline const PhiNode& PhiTree::node() const { return d_->node; }
inline const PhiTree& PhiTree::left() const { return d_->left; }
inline const PhiTree& PhiTree::right() const { return d_->right; }
inline int PhiTree::size() const { return d_ ? d_->size : 0; }

std::uint64_t occurrence_bound(Formula f);
int nmax(const PhiNode& n, const PhiTree& t);

// R^phi for m in {fc, ns}: n2 sits below n1 along m.
bool consistent(const Lean& lean, const PhiNode& n1, Modality m, const PhiNode& n2);

using Path = std::vector<Modality>;
std::string path_to_string(const Path& p);  // "fc.ns", "eps" when empty

std::optional<PhiNode> navigate(const PhiTree& t, const Path& rho);
bool global_entails(const Lean& lean, const Path& rho, const PhiTree& t, Formula f);
std::optional<Path> tree_satisfies(const Lean& lean, const PhiTree& t, Formula f);
// Labels come from the label bit; marker and counting bits become marks
// ("@n", "$c0", ...).
BinTree extract_model(const Lean& lean, const PhiTree& t);
// Preorder id of the node addressed by a forward path, as numbered by
// extract_model.
int model_node(const PhiTree& t, const Path& rho);

struct RoundStats {
  int round = 0;
  std::size_t aux = 0;
  std::size_t st = 0;
  std::size_t finished = 0;
};

struct SolveOptions {
  std::size_t max_st = std::size_t{1} << 22;
  std::optional<std::chrono::duration<double>> timeout;
  std::function<void(const RoundStats&)> trace;
};

enum class Verdict { Sat, Unsat, ResourceExhausted };

struct SolverResult {
  Verdict verdict = Verdict::Unsat;
  PhiTree witness;
  Path path;
  BinTree model;
  int node = -1;  // model node selected at `path`
  std::string reason;  // why resources ran out
  int rounds = 0;
  std::size_t classes = 0;
  int lean_size = 0;
  std::uint64_t bound = 0;  // K
};

// Runs normalize, annotation and the lean construction, then the bottom-up
// saturation. Throws the normalizer's errors.
SolverResult solve(const SurfacePtr& f, const SolveOptions& opt = {});
// f in negation normal form; annotation happens here.
SolverResult solve(Formula f, const SolveOptions& opt = {});

struct Containment {
  bool holds = false;
  SolverResult detail;  // counterexample on !holds
};

// q => p on every tree, via unsatisfiability of q & ~p.
Containment contains(Formula q, Formula p, const SolveOptions& opt = {});

}  // namespace treecount
