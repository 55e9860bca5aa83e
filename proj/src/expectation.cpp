#include "ptree/expectation.hpp"

#include "ptree/error.hpp"

namespace ptree {

namespace {

// Probability of reaching s from t under the family (t ⊆ s).
Rational inherited_weight(const EdgeFamily& family, const NodePath& t, const NodePath& s) {
  Rational w = 1;
  for (std::size_t j = t.size(); j < s.size() && w != 0; ++j) {
    auto d = family.at_member(s.prefix(j));
    if (!d) throw Error(Errc::unknown_node, "path passes a maximal node", s);
    w *= d->mass(s[j]);
  }
  return w;
}

void require_front(const TreeShape& tree, const Front& front) {
  if (!is_front(tree, front.nodes)) throw Error(Errc::not_a_front, "variable does not live on a front");
}

}  // namespace

FrontVariable FrontVariable::from_function(Front front, const std::function<Rational(const NodePath&)>& f) {
  FrontVariable x;
  for (const auto& s : front.nodes) x.values.emplace(s, f(s));
  x.front = std::move(front);
  return x;
}

const Rational& FrontVariable::operator()(const NodePath& s) const {
  auto it = values.find(s);
  if (it == values.end()) throw Error(Errc::invalid_argument, "variable has no value", s);
  return it->second;
}

FrontVariable linear_combination(const Rational& a, const FrontVariable& x, const Rational& b, const FrontVariable& y) {
  if (x.front.nodes != y.front.nodes) throw Error(Errc::invalid_argument, "variables live on different fronts");
  return FrontVariable::from_function(x.front, [&](const NodePath& s) { return a * x(s) + b * y(s); });
}

Rational expect(const InductiveMeasure& xi, const FrontVariable& x) {
  require_front(xi.tree(), x.front);
  Rational sum = 0;
  for (const auto& s : x.front.nodes) sum += x(s) * xi.mass(s);
  return sum;
}

Rational relative_expect(const EdgeFamily& family, const FrontVariable& x, const NodePath& t) {
  if (!x.front.level) throw Error(Errc::invalid_argument, "variable's front has no level");
  std::size_t n = *x.front.level;
  if (!family.tree().contains(t)) throw Error(Errc::unknown_node, "not a node of the tree", t);
  if (t.size() > n) throw Error(Errc::node_not_below_front, "node lies beyond level " + std::to_string(n), t);
  Rational sum = 0;
  for_each_node_below(family.tree(), t, n, [&](const NodePath& s, const ChildSet& kids) {
    if (s.size() < n && kids.empty())
      throw Error(Errc::precondition_front_mismatch,
                  "maximal node " + s.display() + " above the node is shorter than level " + std::to_string(n), t);
    if (s.size() == n) sum += x(s) * inherited_weight(family, t, s);
  });
  return sum;
}

Rational relative_expect_front(const EdgeFamily& family, const FrontVariable& x, const NodePath& t) {
  require_front(family.tree(), x.front);
  if (!family.tree().contains(t)) throw Error(Errc::unknown_node, "not a node of the tree", t);
  Rational sum = 0;
  bool below = false;
  for (const auto& s : x.front.nodes) {
    if (!t.is_prefix_of(s)) continue;
    below = true;
    sum += x(s) * inherited_weight(family, t, s);
  }
  if (!below) throw Error(Errc::node_not_below_front, "no front member extends the node", t);
  return sum;
}

TowerReport tower_check(const EdgeFamily& family, const FrontVariable& x, std::size_t m, std::size_t n,
                        std::size_t k) {
  if (!(m <= n && n <= k)) throw Error(Errc::invalid_argument, "levels must satisfy m <= n <= k");
  if (x.front.level != k) throw Error(Errc::invalid_argument, "variable must live on the level-k front");
  TowerReport report;
  for (const auto& t : level(family.tree(), m)) {
    TowerRow row;
    row.node = t;
    row.lhs = relative_expect(family, x, t);
    row.rhs = 0;
    for_each_node_below(family.tree(), t, n, [&](const NodePath& s, const ChildSet&) {
      if (s.size() == n) row.rhs += relative_expect(family, x, s) * inherited_weight(family, t, s);
    });
    row.equal = row.lhs == row.rhs;
    report.equal = report.equal && row.equal;
    report.rows.push_back(std::move(row));
  }
  return report;
}

TowerReport tower_check_fronts(const EdgeFamily& family, const FrontVariable& x, const Front& inner,
                               const NodePath& t) {
  require_front(family.tree(), x.front);
  require_front(family.tree(), inner);
  for (const auto& s : x.front.nodes) {
    bool nested = false;
    for (const auto& a : inner.nodes)
      if (a.is_prefix_of(s)) nested = true;
    if (!nested) throw Error(Errc::invalid_argument, "outer front member is not above the inner front", s);
  }
  TowerRow row;
  row.node = t;
  row.lhs = relative_expect_front(family, x, t);
  row.rhs = 0;
  bool below = false;
  for (const auto& a : inner.nodes) {
    if (!t.is_prefix_of(a)) continue;
    below = true;
    row.rhs += relative_expect_front(family, x, a) * inherited_weight(family, t, a);
  }
  if (!below) throw Error(Errc::node_not_below_front, "no inner front member extends the node", t);
  row.equal = row.lhs == row.rhs;
  TowerReport report;
  report.equal = row.equal;
  report.rows.push_back(std::move(row));
  return report;
}

}  // namespace ptree
