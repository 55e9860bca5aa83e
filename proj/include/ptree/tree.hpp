#pragma once

#include "ptree/node_path.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ptree {

inline constexpr std::size_t kDefaultDepthBudget = 32;

struct Arity {
  bool omega = false;
  std::uint64_t count = 0;

  static Arity finite(std::uint64_t n) { return {false, n}; }
  static Arity infinite() { return {true, 0}; }
  friend bool operator==(const Arity&, const Arity&) = default;
};

// The set of last indices of a node's successors. Either a finite sorted list
// or the symbolic "all of 0, 1, 2, ..." used for countably infinite arity.
class ChildSet {
public:
  ChildSet() = default;
  static ChildSet finite(std::vector<std::uint64_t> indices);
  static ChildSet range(std::uint64_t n);
  static ChildSet omega();
  static ChildSet of(Arity a) { return a.omega ? omega() : range(a.count); }

  bool is_omega() const noexcept { return omega_; }
  bool empty() const noexcept { return !omega_ && indices_.empty(); }
  // Throws InfiniteLevel for omega.
  std::size_t size() const;
  const std::vector<std::uint64_t>& indices() const&;
  std::vector<std::uint64_t> indices() &&;
  bool contains(std::uint64_t k) const;
  // Successors are exactly 0..n-1 (omega counts as canonical).
  bool canonical() const;
  Arity arity() const;

  friend bool operator==(const ChildSet&, const ChildSet&) = default;

private:
  bool omega_ = false;
  std::vector<std::uint64_t> indices_;
};

class TreeSource {
public:
  virtual ~TreeSource() = default;
  // Successors of a node already known to belong to the tree.
  virtual ChildSet children(const NodePath& t) const = 0;
};

// A tree of sequences. Explicit trees hold their finite node set; lazy trees
// (generators, trees derived from families) answer successor queries on
// demand and always carry a depth budget.
class TreeShape {
public:
  TreeShape();  // the root-only tree

  static TreeShape from_nodes(const std::set<NodePath>& nodes);
  static TreeShape generated(std::function<Arity(const NodePath&)> arity, std::size_t depth_budget,
                             bool homogeneous = false);
  static TreeShape lazy(std::shared_ptr<const TreeSource> source, std::size_t depth_budget,
                        bool homogeneous = false);

  bool is_explicit() const noexcept { return explicit_ != nullptr; }
  // Throws RequiresExplicitFiniteTree for lazy trees.
  const std::set<NodePath>& nodes() const;
  std::optional<std::size_t> depth_budget() const noexcept { return budget_; }
  TreeShape with_depth_budget(std::size_t budget) const;
  // Every node has the same arity (declared by the generator).
  bool homogeneous() const noexcept { return homogeneous_; }

  bool contains(const NodePath& t) const;
  ChildSet children(const NodePath& t) const;
  bool is_maximal(const NodePath& t) const { return children(t).empty(); }
  // Throws DepthBudgetExceeded when n is beyond the budget.
  void check_depth(std::size_t n) const;

  // Explicit trees only. height() is the least n with an empty level, so the
  // root-only tree has height 1 and max_depth 0.
  std::size_t height() const;
  std::size_t max_depth() const;

private:
  struct Raw {};
  explicit TreeShape(Raw) {}

  struct ExplicitData;
  std::shared_ptr<const ExplicitData> explicit_;
  std::shared_ptr<const TreeSource> source_;
  std::optional<std::size_t> budget_;
  bool homogeneous_ = false;
};

// Visits every node t with |t| <= max_len in lexicographic preorder. Throws
// InfiniteLevel if a node shorter than max_len has infinitely many successors.
void for_each_node(const TreeShape& tree, std::size_t max_len,
                   const std::function<void(const NodePath&, const ChildSet&)>& visit);
void for_each_node_below(const TreeShape& tree, const NodePath& start, std::size_t max_len,
                         const std::function<void(const NodePath&, const ChildSet&)>& visit);

// Same nodes up to length depth.
bool same_tree_up_to(const TreeShape& a, const TreeShape& b, std::size_t depth);

struct Front {
  std::vector<NodePath> nodes;  // sorted
  std::optional<std::size_t> level;
};

std::vector<NodePath> level(const TreeShape& tree, std::size_t n);
// Lv_n together with the maximal nodes shorter than n.
Front enumerate_front(const TreeShape& tree, std::size_t n);
bool is_front(const TreeShape& tree, const std::vector<NodePath>& nodes);

struct Flag {
  bool value = false;
  bool exact = true;  // false: value only holds up to Classification::examined_depth
};

struct Classification {
  Flag well_pruned;
  Flag finitely_branching;
  Flag perfect;
  std::optional<std::size_t> height;  // known when the tree was fully explored
  std::size_t examined_depth = 0;
};

Classification classify(const TreeShape& tree);

struct LabeledNode {
  std::string label;
  std::optional<std::string> parent;
};

struct CanonicalTree {
  TreeShape tree;
  std::map<std::string, NodePath> paths;
};

// Successors are numbered in input order.
CanonicalTree canonicalize(const std::vector<LabeledNode>& nodes);

// A finite union of cylinders [t] with t drawn from Fr_n, or its complement.
struct ClopenExpr {
  std::size_t front_level = 0;
  std::vector<NodePath> selected;
  bool complemented = false;
};

// Empty when well formed, otherwise a description of the defect.
std::optional<std::string> clopen_defect(const TreeShape& tree, const ClopenExpr& c);
ClopenExpr cylinder(const NodePath& t);
// The same set written as an uncomplemented selection from Fr_level.
ClopenExpr clopen_refine(const TreeShape& tree, const ClopenExpr& c, std::size_t level);
ClopenExpr clopen_complement(const ClopenExpr& c);
ClopenExpr clopen_union(const TreeShape& tree, const ClopenExpr& a, const ClopenExpr& b);
ClopenExpr clopen_intersection(const TreeShape& tree, const ClopenExpr& a, const ClopenExpr& b);

}  // namespace ptree
