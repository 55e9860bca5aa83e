#pragma once

#include "ptree/measure.hpp"

#include <functional>
#include <map>
#include <vector>

namespace ptree {

// A rational-valued random variable on the nodes of a front.
struct FrontVariable {
  Front front;
  std::map<NodePath, Rational> values;

  static FrontVariable from_function(Front front, const std::function<Rational(const NodePath&)>& f);
  const Rational& operator()(const NodePath& s) const;
};

FrontVariable linear_combination(const Rational& a, const FrontVariable& x, const Rational& b, const FrontVariable& y);

Rational expect(const InductiveMeasure& xi, const FrontVariable& x);

// Expectation of x over the front members extending t, weighted by the
// family's edge probabilities from t downward. x must live on Fr_n (its
// front carries the level n) and no maximal node above t may be shorter
// than n.
Rational relative_expect(const EdgeFamily& family, const FrontVariable& x, const NodePath& t);
// The same for an arbitrary front; t must lie below some member.
Rational relative_expect_front(const EdgeFamily& family, const FrontVariable& x, const NodePath& t);

struct TowerRow {
  NodePath node;
  Rational lhs;
  Rational rhs;
  bool equal = false;
};

struct TowerReport {
  std::vector<TowerRow> rows;
  bool equal = true;
};

// For every t in Lv_m: conditioning x (on Fr_k) at t directly versus first
// conditioning at each level-n node above t and averaging those.
TowerReport tower_check(const EdgeFamily& family, const FrontVariable& x, std::size_t m, std::size_t n,
                        std::size_t k);
// Nested fronts: `inner` lies at or below the members of x's front and t
// lies below `inner`.
TowerReport tower_check_fronts(const EdgeFamily& family, const FrontVariable& x, const Front& inner,
                               const NodePath& t);

}  // namespace ptree
