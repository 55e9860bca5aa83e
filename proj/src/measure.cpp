#include "ptree/measure.hpp"

#include "ptree/error.hpp"

namespace ptree {

namespace {

constexpr std::size_t kEnumerationCap = 1u << 16;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out;
}

// Non-maximal zero-mass nodes shorter than depth, with their successor
// sets. nullopt when there are infinitely many or more than the cap.
std::optional<std::vector<std::pair<NodePath, ChildSet>>> null_interior(const EdgeFamily& family, std::size_t depth) {
  std::vector<std::pair<NodePath, ChildSet>> out;
  std::vector<std::pair<NodePath, Rational>> stack{{NodePath{}, Rational(1)}};
  std::size_t visited = 0;
  while (!stack.empty()) {
    auto [t, m] = std::move(stack.back());
    stack.pop_back();
    if (++visited > kEnumerationCap) return std::nullopt;
    if (t.size() >= depth) continue;
    auto d = family.at_member(t);
    if (!d) continue;
    ChildSet kids = d->children();
    if (m == 0) out.emplace_back(t, kids);
    if (kids.is_omega()) return std::nullopt;
    for (auto k : kids.indices()) stack.emplace_back(t.child(k), m == 0 ? Rational(0) : Rational(m * d->mass(k)));
  }
  return out;
}

class RestrictedSource : public FamilySource {
public:
  explicit RestrictedSource(EdgeFamily base) : base_(std::move(base)) {}
  std::shared_ptr<const Distribution> at(const NodePath& t) const override {
    auto d = base_.at_member(t);
    if (!d) return nullptr;
    return std::make_shared<const Distribution>(d->restrict_positive());
  }

private:
  EdgeFamily base_;
};

Distribution pair_distribution(const GeneralPair& pair, const NodePath& t, const ChildSet& kids) {
  if (t.size() >= pair.depth)
    throw Error(Errc::depth_budget_exceeded, "pair only describes nodes shorter than " + std::to_string(pair.depth), t);
  const TreeShape& pos = pair.positive.tree();
  if (pos.contains(t)) {
    Rational m = pair.positive.mass(t);
    std::vector<Distribution::Entry> entries;
    if (kids.is_omega()) {
      for (auto k : pos.children(t).indices()) entries.emplace_back(k, pair.positive.mass(t.child(k)) / m);
      return Distribution::sparse_omega(std::move(entries));
    }
    for (auto k : kids.indices()) {
      NodePath c = t.child(k);
      entries.emplace_back(k, pos.contains(c) ? Rational(pair.positive.mass(c) / m) : Rational(0));
    }
    return Distribution::table(std::move(entries));
  }
  if (auto f = pair.filler(t)) return *f;
  throw Error(Errc::malformed_pair, "zero-mass node has no filler", t);
}

class DeltaSource : public FamilySource {
public:
  explicit DeltaSource(GeneralPair pair) : pair_(std::move(pair)) {}
  std::shared_ptr<const Distribution> at(const NodePath& t) const override {
    ChildSet kids = pair_.tree.children(t);
    if (kids.empty()) return nullptr;
    return std::make_shared<const Distribution>(pair_distribution(pair_, t, kids));
  }

private:
  GeneralPair pair_;
};

}  // namespace

// ---- InductiveMeasure -------------------------------------------------------

InductiveMeasure::InductiveMeasure(TreeShape tree, std::map<NodePath, Rational> masses, std::size_t depth)
    : tree_(std::move(tree)), masses_(std::move(masses)), depth_(depth) {
  if (auto v = violations(); !v.empty()) throw Error(Errc::validation_error, "not an inductive measure: " + join(v));
}

InductiveMeasure InductiveMeasure::unchecked(TreeShape tree, std::map<NodePath, Rational> masses, std::size_t depth) {
  InductiveMeasure m;
  m.tree_ = std::move(tree);
  m.masses_ = std::move(masses);
  m.depth_ = depth;
  return m;
}

Rational InductiveMeasure::mass(const NodePath& t) const {
  if (t.size() > depth_)
    throw Error(Errc::depth_budget_exceeded, "masses are stored to depth " + std::to_string(depth_), t);
  if (auto it = masses_.find(t); it != masses_.end()) return it->second;
  if (!tree_.contains(t)) throw Error(Errc::unknown_node, "not a node of the tree", t);
  for (std::size_t n = t.size(); n-- > 0;) {
    NodePath p = t.prefix(n);
    auto it = masses_.find(p);
    if (it == masses_.end()) continue;
    if (it->second == 0 || tree_.children(p).is_omega()) return 0;
    break;
  }
  throw Error(Errc::unknown_node, "no mass stored", t);
}

std::vector<std::string> InductiveMeasure::violations() const {
  std::vector<std::string> out;
  auto root = masses_.find(NodePath{});
  if (root == masses_.end() || root->second != 1) out.push_back("root mass is not 1");
  std::map<NodePath, std::pair<Rational, std::size_t>> below;
  for (const auto& [t, m] : masses_) {
    if (!tree_.contains(t)) {
      out.push_back(t.display() + " is not a node");
      continue;
    }
    if (t.size() > depth_) out.push_back(t.display() + " lies beyond depth " + std::to_string(depth_));
    if (m < 0 || m > 1) out.push_back("mass of " + t.display() + " is outside [0,1]");
    if (!t.is_root()) {
      auto& [sum, count] = below[t.parent()];
      sum += m;
      ++count;
    }
  }
  for (const auto& [t, m] : masses_) {
    if (t.size() >= depth_ || !tree_.contains(t)) continue;
    ChildSet kids = tree_.children(t);
    if (kids.empty()) continue;
    auto it = below.find(t);
    Rational sum = it == below.end() ? Rational(0) : it->second.first;
    std::size_t count = it == below.end() ? 0 : it->second.second;
    if (m != 0 && !kids.is_omega() && count != kids.size()) {
      out.push_back("successors of " + t.display() + " lack stored masses");
      continue;
    }
    if (sum != m && (m != 0 || count > 0))
      out.push_back("successors of " + t.display() + " sum to " + format_rational(sum) + ", not " + format_rational(m));
  }
  return out;
}

bool operator==(const InductiveMeasure& a, const InductiveMeasure& b) {
  if (a.depth_ != b.depth_) return false;
  try {
    for (const auto& [t, m] : a.masses_)
      if (b.mass(t) != m) return false;
    for (const auto& [t, m] : b.masses_)
      if (a.mass(t) != m) return false;
  } catch (const Error&) {
    return false;
  }
  return true;
}

InductiveMeasure pi(const EdgeFamily& family, std::optional<std::size_t> depth) {
  std::size_t d = depth.value_or(default_depth(family.tree()));
  family.tree().check_depth(d);
  std::map<NodePath, Rational> masses;
  std::vector<std::pair<NodePath, Rational>> stack{{NodePath{}, Rational(1)}};
  while (!stack.empty()) {
    auto [t, m] = std::move(stack.back());
    stack.pop_back();
    if (t.size() < d) {
      if (auto dist = family.at_member(t)) {
        ChildSet kids = dist->children();
        if (kids.is_omega()) {
          if (m != 0) {
            auto support = dist->positive_support();
            if (!support) throw Error(Errc::infinite_level, "infinitely many successors carry mass", t);
            for (auto k : *support) stack.emplace_back(t.child(k), m * dist->mass(k));
          }
        } else {
          for (auto k : kids.indices())
            stack.emplace_back(t.child(k), m == 0 ? Rational(0) : Rational(m * dist->mass(k)));
        }
      }
    }
    masses.emplace(std::move(t), std::move(m));
  }
  return InductiveMeasure::unchecked(family.tree(), std::move(masses), d);
}

Rational front_mass(const InductiveMeasure& xi, const Front& front) {
  if (!is_front(xi.tree(), front.nodes)) throw Error(Errc::not_a_front, "node set is not a front");
  Rational sum = 0;
  for (const auto& s : front.nodes) sum += xi.mass(s);
  return sum;
}

Rational below_mass(const InductiveMeasure& xi, const NodePath& t, const Front& front) {
  if (!is_front(xi.tree(), front.nodes)) throw Error(Errc::not_a_front, "node set is not a front");
  Rational sum = 0;
  bool below = false;
  for (const auto& s : front.nodes)
    if (t.is_prefix_of(s)) {
      below = true;
      sum += xi.mass(s);
    }
  if (!below) throw Error(Errc::node_not_below_front, "no front member extends the node", t);
  return sum;
}

// ---- positive part ----------------------------------------------------------

PositivePart positive_part(const EdgeFamily& family, std::optional<std::size_t> depth) {
  PositivePart out;
  out.depth = depth.value_or(default_depth(family.tree()));
  family.tree().check_depth(out.depth);
  if (family.is_explicit()) {
    std::map<NodePath, Distribution> table;
    std::vector<NodePath> positive;
    std::vector<NodePath> stack{NodePath{}};
    while (!stack.empty()) {
      NodePath t = std::move(stack.back());
      stack.pop_back();
      positive.push_back(t);
      auto d = family.at_member(t);
      if (!d) continue;
      Distribution r = d->restrict_positive();
      for (const auto& [k, m] : r.entries()) stack.push_back(t.child(k));
      table.emplace(t, std::move(r));
    }
    std::sort(positive.begin(), positive.end());
    out.family = EdgeFamily::from_table(table);
    std::vector<NodePath> null;
    for (const auto& t : family.tree().nodes())
      if (!std::binary_search(positive.begin(), positive.end(), t)) null.push_back(t);
    out.positive_nodes = std::move(positive);
    out.null_nodes = std::move(null);
    return out;
  }

  out.family = EdgeFamily::from_source(std::make_shared<RestrictedSource>(family), out.depth);
  std::vector<NodePath> positive;
  std::size_t visited = 0;
  bool finite = true;
  std::vector<NodePath> stack{NodePath{}};
  while (!stack.empty() && finite) {
    NodePath t = std::move(stack.back());
    stack.pop_back();
    if (++visited > kEnumerationCap) finite = false;
    positive.push_back(t);
    if (t.size() >= out.depth) continue;
    auto d = out.family.at_member(t);
    if (!d) continue;
    auto support = d->positive_support();
    if (!support) finite = false;
    else
      for (auto k : *support) stack.push_back(t.child(k));
  }
  if (finite) {
    std::sort(positive.begin(), positive.end());
    out.positive_nodes = std::move(positive);
  }
  std::vector<NodePath> null;
  std::size_t listed = 0;
  try {
    for_each_node(family.tree(), out.depth, [&](const NodePath& t, const ChildSet&) {
      if (++listed > kEnumerationCap) throw Error(Errc::infinite_level, "too many nodes to list");
      if (xi(family, t) == 0) null.push_back(t);
    });
    std::sort(null.begin(), null.end());
    out.null_nodes = std::move(null);
  } catch (const Error& e) {
    if (e.code() != Errc::infinite_level) throw;
  }
  return out;
}

// ---- general pairs ----------------------------------------------------------

std::optional<Distribution> GeneralPair::filler(const NodePath& t) const {
  if (auto it = fillers.find(t); it != fillers.end()) return it->second;
  if (filler_source) {
    if (auto d = filler_source->at(t)) return *d;
  }
  return std::nullopt;
}

std::vector<std::string> GeneralPair::violations() const {
  std::vector<std::string> out;
  for (auto& v : positive.violations()) out.push_back("positive part: " + v);
  if (positive.depth() != depth) out.push_back("positive part is stored to a different depth");
  const TreeShape& pos = positive.tree();
  for (const auto& [t, m] : positive.stored()) {
    if (!tree.contains(t)) {
      out.push_back("positive node " + t.display() + " is not in the tree");
      continue;
    }
    if (m <= 0) out.push_back("positive part has non-positive mass at " + t.display());
    if (t.size() < depth && pos.is_maximal(t) && !tree.is_maximal(t))
      out.push_back("positive node " + t.display() + " has no positive successor");
  }
  for (const auto& [t, d] : fillers) {
    if (!tree.contains(t)) {
      out.push_back("filler at " + t.display() + " is not at a node");
      continue;
    }
    if (pos.contains(t)) out.push_back("filler at positive node " + t.display());
    if (t.size() >= depth) out.push_back("filler at " + t.display() + " lies beyond depth");
    ChildSet kids = tree.children(t);
    if (kids.empty()) out.push_back("filler at maximal node " + t.display());
    else if (!(d.children() == kids)) out.push_back("filler at " + t.display() + " has the wrong successors");
    for (auto& v : d.violations()) out.push_back("filler at " + t.display() + ": " + v);
  }
  if (!filler_source && depth > 0) {
    // Every zero-mass interior node needs a filler; only checkable when
    // those nodes can be listed.
    std::vector<NodePath> stack{NodePath{}};
    std::size_t visited = 0;
    while (!stack.empty() && visited++ < kEnumerationCap) {
      NodePath t = std::move(stack.back());
      stack.pop_back();
      if (t.size() >= depth) continue;
      ChildSet kids = tree.children(t);
      if (kids.empty()) continue;
      bool positive_node = pos.contains(t);
      if (!positive_node && !fillers.count(t)) out.push_back("zero-mass node " + t.display() + " has no filler");
      if (kids.is_omega()) {
        out.push_back("infinitely many zero-mass nodes below " + t.display() + " need a filler source");
        break;
      }
      for (auto k : kids.indices()) stack.push_back(t.child(k));
    }
  }
  return out;
}

GeneralPair GeneralPair::from_measure(const InductiveMeasure& xi,
                                      const std::function<Distribution(const NodePath&, const ChildSet&)>& choose) {
  GeneralPair pair;
  pair.tree = xi.tree();
  pair.depth = xi.depth();
  std::map<NodePath, Rational> positive;
  std::set<NodePath> keys;
  for (const auto& [t, m] : xi.stored())
    if (m > 0) {
      positive.emplace(t, m);
      keys.insert(t);
    }
  pair.positive = InductiveMeasure(TreeShape::from_nodes(keys), std::move(positive), xi.depth());
  std::vector<NodePath> stack{NodePath{}};
  while (!stack.empty()) {
    NodePath t = std::move(stack.back());
    stack.pop_back();
    if (t.size() >= xi.depth()) continue;
    ChildSet kids = xi.tree().children(t);
    if (kids.empty()) continue;
    bool positive_node = keys.count(t) > 0;
    if (!positive_node) pair.fillers.emplace(t, choose(t, kids));
    if (kids.is_omega()) throw Error(Errc::infinite_level, "infinitely many zero-mass nodes need fillers", t);
    for (auto k : kids.indices()) stack.push_back(t.child(k));
  }
  return pair;
}

bool operator==(const GeneralPair& a, const GeneralPair& b) {
  return a.depth == b.depth && a.positive == b.positive && a.fillers == b.fillers &&
         a.filler_source.has_value() == b.filler_source.has_value();
}

EdgeFamily delta(const GeneralPair& pair) {
  if (auto v = pair.violations(); !v.empty()) throw Error(Errc::malformed_pair, join(v));
  if (pair.tree.is_explicit() && !pair.filler_source) {
    std::map<NodePath, Distribution> table;
    for (const auto& t : pair.tree.nodes()) {
      if (t.size() >= pair.depth) continue;
      ChildSet kids = pair.tree.children(t);
      if (!kids.empty()) table.emplace(t, pair_distribution(pair, t, kids));
    }
    return EdgeFamily::from_table(table);
  }
  return EdgeFamily::from_source(std::make_shared<DeltaSource>(pair), pair.depth);
}

GeneralPair delta_inverse(const EdgeFamily& family, std::optional<std::size_t> depth) {
  GeneralPair pair;
  pair.tree = family.tree();
  pair.depth = depth.value_or(default_depth(family.tree()));
  InductiveMeasure full = pi(family, pair.depth);
  std::map<NodePath, Rational> positive;
  std::set<NodePath> keys;
  for (const auto& [t, m] : full.stored())
    if (m > 0) {
      positive.emplace(t, m);
      keys.insert(t);
    }
  pair.positive = InductiveMeasure(TreeShape::from_nodes(keys), std::move(positive), pair.depth);
  if (auto null = null_interior(family, pair.depth)) {
    for (const auto& [t, kids] : *null) pair.fillers.emplace(t, *family.at_member(t));
  } else {
    pair.filler_source = family;
  }
  return pair;
}

InductiveMeasure induced_measure(const GeneralPair& pair) {
  std::map<NodePath, Rational> masses = pair.positive.stored();
  const TreeShape& pos = pair.positive.tree();
  for (const auto& [t, m] : pair.positive.stored()) {
    if (t.size() >= pair.depth) continue;
    ChildSet kids = pair.tree.children(t);
    if (kids.is_omega()) continue;
    for (auto k : kids.indices())
      if (!pos.contains(t.child(k))) masses.emplace(t.child(k), Rational(0));
  }
  return InductiveMeasure(pair.tree, std::move(masses), pair.depth);
}

// ---- equivalence ------------------------------------------------------------

bool equivalent(const EdgeFamily& a, const EdgeFamily& b, std::optional<std::size_t> depth) {
  std::size_t d = depth.value_or(std::min(default_depth(a.tree()), default_depth(b.tree())));
  std::vector<NodePath> stack{NodePath{}};
  while (!stack.empty()) {
    NodePath t = std::move(stack.back());
    stack.pop_back();
    if (t.size() >= d) continue;
    auto da = a.at_member(t);
    auto db = b.at_member(t);
    if (bool(da) != bool(db)) return false;
    if (!da) continue;
    Distribution ra = da->restrict_positive();
    Distribution rb = db->restrict_positive();
    if (!(ra == rb)) return false;
    auto support = ra.positive_support();
    if (!support) throw Error(Errc::infinite_level, "infinitely many successors carry mass", t);
    for (auto k : *support) stack.push_back(t.child(k));
  }
  return true;
}

bool equivalent_ip(const InductiveMeasure& a, const InductiveMeasure& b) {
  std::size_t d = std::min(a.depth(), b.depth());
  auto covers = [d](const InductiveMeasure& x, const InductiveMeasure& y) {
    for (const auto& [t, m] : x.stored()) {
      if (m == 0 || t.size() > d) continue;
      try {
        if (y.mass(t) != m) return false;
      } catch (const Error&) {
        return false;
      }
    }
    return true;
  };
  return covers(a, b) && covers(b, a);
}

}  // namespace ptree
