#pragma once

#include "ptree/measure.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ptree {

// Order embedding h of a tree into the binary tree. A node with one
// successor passes its image on unchanged; successor k of a node with
// a > 1 successors gets 1^k 0 appended, except the last one, which gets
// 1^(a-1); with infinitely many successors, successor k always gets 1^k 0.
class BinaryEncoding {
public:
  BinaryEncoding(TreeShape source, std::size_t depth);

  const TreeShape& source() const noexcept { return source_; }
  std::size_t depth() const noexcept { return depth_; }

  NodePath h(const NodePath& t) const;

  struct Location {
    NodePath node;           // the deepest t with h(t) ⊆ s
    bool in_range = false;   // s = h(node)
    std::uint64_t ones = 0;  // otherwise s = h(node) followed by this many 1s
  };
  // nullopt when s is not below the image of a node of length <= depth.
  std::optional<Location> locate(const NodePath& s) const;

  // Images of all nodes up to depth and the prefix closure S of those images.
  // Throw InfiniteLevel unless the tree is finitely branching up to depth.
  const std::map<NodePath, NodePath>& images() const;
  const std::set<NodePath>& image_tree() const;
  // Images of non-maximal nodes at the cutoff depth; S continues above them.
  const std::set<NodePath>& cutoff_images() const;
  std::size_t binary_depth() const;

private:
  void require_materialized() const;

  TreeShape source_;
  std::size_t depth_;
  bool materialized_ = false;
  std::map<NodePath, NodePath> images_;
  std::set<NodePath> image_tree_;
  std::set<NodePath> cutoff_;
  std::size_t binary_depth_ = 0;
};

BinaryEncoding encode(const TreeShape& tree, std::size_t n);

// Mass of s: the mass of t when s = h(t), otherwise the mass of the
// successors of t whose images extend s.
Rational xi_star_at(const EdgeFamily& family, const BinaryEncoding& enc, const NodePath& s);
InductiveMeasure xi_star(const EdgeFamily& family, const BinaryEncoding& enc);

NodePath embed_branch(const BinaryEncoding& enc, const NodePath& x);

struct EncodingReport {
  bool inductive = true;
  bool intervals_match = true;
  bool order_laws = true;
  bool split_or_maximal = true;
  std::size_t nodes_checked = 0;
  std::size_t pairs_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return inductive && intervals_match && order_laws && split_or_maximal; }
};

EncodingReport verify_encoding(const EdgeFamily& family, std::size_t n);

}  // namespace ptree
