#pragma once

#include "ptree/family.hpp"

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace ptree {

struct Interval {
  Rational lower;
  Rational upper;

  Rational length() const { return upper - lower; }
  bool contains(const Rational& y) const { return lower <= y && y <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string format_interval(const Interval& i);

// I_t: [0,1] at the root, split among the successors in index order with
// lengths proportional to the edge probabilities.
Interval interval(const EdgeFamily& family, const NodePath& t);
std::vector<std::pair<std::uint64_t, Interval>> child_intervals(const EdgeFamily& family, const NodePath& t);

// Nested intervals along a branch prefix.
struct BranchWindow {
  NodePath prefix;
  std::vector<Rational> lowers;  // a at lengths 0..|prefix|
  std::vector<Rational> uppers;
  Rational lower() const { return lowers.back(); }
  Rational upper() const { return uppers.back(); }
  Rational width() const { return upper() - lower(); }
  bool monotone() const;
};

// x must be at least n long, or a maximal node.
BranchWindow branch_window(const EdgeFamily& family, const NodePath& x, std::size_t n);

// Node of length <= n whose interval contains y, found by descending through
// the successor cells. Throws QPointError when y is an endpoint of one of the
// intervals met on the way.
NodePath g_map(const EdgeFamily& family, const Rational& y, std::size_t n);

// All interval endpoints of an explicit family.
std::set<Rational> endpoint_set(const EdgeFamily& family);

Rational lambda_clopen(const EdgeFamily& family, const ClopenExpr& c);

struct SubtreeMass {
  std::vector<Rational> front_masses;  // mass of Fr_l(S) for l = 0..n
  bool nonincreasing = true;
  Rational upper_bound() const { return front_masses.back(); }
};

// S must be a subtree of the family's tree whose maximal nodes are maximal
// in the tree as well.
SubtreeMass lambda_subtree(const EdgeFamily& family, const TreeShape& subtree, std::size_t n);

struct PointMass {
  Rational upper_bound;
  bool exact_zero = false;
  std::optional<std::size_t> zero_from;  // length of the first zero-mass prefix
  bool exact = false;                    // the bound is the point's mass
};

PointMass point_mass(const EdgeFamily& family, const NodePath& x, std::size_t n);

enum class Verdict { free_certified, atom_found, inconclusive };

struct FreenessReport {
  std::size_t depth = 0;
  Rational max_level_mass;
  Verdict verdict = Verdict::inconclusive;
  std::optional<NodePath> witness;
  Rational epsilon;
};

std::string_view verdict_name(Verdict v);

FreenessReport freeness_report(const EdgeFamily& family, std::size_t n, const Rational& epsilon);

// Interiors of the intervals of the positive-mass maximal nodes, in order.
std::vector<Interval> atom_gaps(const EdgeFamily& family);

}  // namespace ptree
