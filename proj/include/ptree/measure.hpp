#pragma once

#include "ptree/family.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ptree {

// Node masses with root mass 1 where every non-maximal node's mass equals the
// total mass of its successors. Masses are stored for nodes up to `depth`;
// nodes below a zero-mass node, and successors of an infinitely branching
// node that are not stored, have mass 0.
class InductiveMeasure {
public:
  InductiveMeasure() = default;
  // Throws ValidationError when the masses break the inductive law.
  InductiveMeasure(TreeShape tree, std::map<NodePath, Rational> masses, std::size_t depth);
  static InductiveMeasure unchecked(TreeShape tree, std::map<NodePath, Rational> masses, std::size_t depth);

  const TreeShape& tree() const noexcept { return tree_; }
  std::size_t depth() const noexcept { return depth_; }
  const std::map<NodePath, Rational>& stored() const noexcept { return masses_; }

  Rational mass(const NodePath& t) const;
  std::vector<std::string> violations() const;

  friend bool operator==(const InductiveMeasure& a, const InductiveMeasure& b);

private:
  TreeShape tree_;
  std::map<NodePath, Rational> masses_;
  std::size_t depth_ = 0;
};

// Masses of all nodes up to depth (default: default_depth of the tree).
InductiveMeasure pi(const EdgeFamily& family, std::optional<std::size_t> depth = {});

Rational front_mass(const InductiveMeasure& xi, const Front& front);
// Mass of the front members extending t.
Rational below_mass(const InductiveMeasure& xi, const NodePath& t, const Front& front);

struct PositivePart {
  EdgeFamily family;  // restricted to the positive-mass subtree
  std::size_t depth = 0;
  // Enumerations up to depth, present when they are finite and small.
  std::optional<std::vector<NodePath>> positive_nodes;
  std::optional<std::vector<NodePath>> null_nodes;
};

PositivePart positive_part(const EdgeFamily& family, std::optional<std::size_t> depth = {});

// A measure split into its positive part and free choices of successor
// distributions ("fillers") at the non-maximal zero-mass nodes.
struct GeneralPair {
  TreeShape tree;
  InductiveMeasure positive;  // lives on the positive subtree only
  std::map<NodePath, Distribution> fillers;
  // Consulted for zero-mass nodes missing from `fillers`; used when there
  // are too many of them to list.
  std::optional<EdgeFamily> filler_source;
  std::size_t depth = 0;

  std::vector<std::string> violations() const;
  std::optional<Distribution> filler(const NodePath& t) const;

  // Splits xi; fillers come from `choose` at every non-maximal zero-mass node
  // shorter than xi.depth().
  static GeneralPair from_measure(const InductiveMeasure& xi,
                                  const std::function<Distribution(const NodePath&, const ChildSet&)>& choose);

  friend bool operator==(const GeneralPair& a, const GeneralPair& b);
};

EdgeFamily delta(const GeneralPair& pair);
GeneralPair delta_inverse(const EdgeFamily& family, std::optional<std::size_t> depth = {});
// The inductive measure a pair stands for: positive masses, zero elsewhere.
InductiveMeasure induced_measure(const GeneralPair& pair);

// Same positive part up to depth.
bool equivalent(const EdgeFamily& a, const EdgeFamily& b, std::optional<std::size_t> depth = {});
bool equivalent_ip(const InductiveMeasure& a, const InductiveMeasure& b);

}  // namespace ptree
