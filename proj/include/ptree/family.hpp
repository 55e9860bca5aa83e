#pragma once

#include "ptree/distribution.hpp"
#include "ptree/rational.hpp"
#include "ptree/tree.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ptree {

struct GeneratorInfo {
  // "uniform_binary", "geometric_omega", "dirac(k)", or a free-form label.
  std::string name;
  // The distribution used at every node, for homogeneous generators.
  std::optional<Distribution> uniform;
};

class FamilySource {
public:
  virtual ~FamilySource() = default;
  // Distribution over the successors of a node of the tree, or null when
  // the node is maximal.
  virtual std::shared_ptr<const Distribution> at(const NodePath& t) const = 0;
};

// A probability tree: a tree together with a distribution over the
// successors of each non-maximal node.
class EdgeFamily {
public:
  using Table = std::map<NodePath, std::shared_ptr<const Distribution>>;

  // Explicit finite family. Nodes are the root plus every successor named by
  // some distribution; nodes without a distribution are maximal.
  static EdgeFamily from_table(const std::map<NodePath, Distribution>& dists);
  static EdgeFamily homogeneous(Distribution d, std::size_t depth_budget, std::string name);
  static EdgeFamily uniform_binary(std::size_t depth_budget = kDefaultDepthBudget);
  // Successor k of every node has mass (1 - r) r^k; r = 1/2 gives 2^-(k+1).
  static EdgeFamily geometric_omega(std::size_t depth_budget = kDefaultDepthBudget, Rational ratio = Rational(1, 2));
  // Every node has successors 0, 1, 2, ... and all mass sits on successor k.
  static EdgeFamily dirac_omega(std::uint64_t k, std::size_t depth_budget = kDefaultDepthBudget);
  static EdgeFamily generated(std::function<std::optional<Distribution>(const NodePath&)> fn,
                              std::size_t depth_budget, std::optional<GeneratorInfo> info = {});
  static EdgeFamily from_source(std::shared_ptr<const FamilySource> source, std::size_t depth_budget);

  const TreeShape& tree() const noexcept { return tree_; }
  std::optional<std::size_t> depth_budget() const noexcept { return tree_.depth_budget(); }
  bool is_explicit() const noexcept { return table_ != nullptr; }
  // Throws RequiresExplicitFiniteTree for lazy families.
  const Table& table() const;
  const std::optional<GeneratorInfo>& generator() const noexcept { return info_; }

  // Throws UnknownNode when t is not a node; null for maximal nodes.
  std::shared_ptr<const Distribution> at(const NodePath& t) const;
  // Same without the membership check; t must be a node.
  std::shared_ptr<const Distribution> at_member(const NodePath& t) const { return source_->at(t); }

private:
  std::shared_ptr<const FamilySource> source_;
  std::shared_ptr<const Table> table_;
  TreeShape tree_;
  std::optional<GeneratorInfo> info_;
};

struct FamilyViolation {
  NodePath node;
  std::string reason;
};

struct ValidationReport {
  std::vector<FamilyViolation> violations;
  bool complete = true;  // false: only nodes shorter than `depth` were checked
  std::size_t depth = 0;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_edge_family(const EdgeFamily& family, std::optional<std::size_t> depth = {});

// Product of the edge probabilities along the path to t.
Rational xi(const EdgeFamily& family, const NodePath& t);

// Default exploration depth: the deepest node of an explicit tree, otherwise
// the depth budget.
std::size_t default_depth(const TreeShape& tree);

// Same successors and distributions at every node shorter than depth. Throws
// InfiniteLevel when that would mean visiting infinitely many nodes.
bool same_family_up_to(const EdgeFamily& a, const EdgeFamily& b, std::size_t depth);

}  // namespace ptree
