#include "ptree/family.hpp"

#include "ptree/error.hpp"

#include <mutex>

namespace ptree {

namespace {

class TableSource : public FamilySource {
public:
  explicit TableSource(std::shared_ptr<const EdgeFamily::Table> table) : table_(std::move(table)) {}
  std::shared_ptr<const Distribution> at(const NodePath& t) const override {
    auto it = table_->find(t);
    return it == table_->end() ? nullptr : it->second;
  }

private:
  std::shared_ptr<const EdgeFamily::Table> table_;
};

class HomogeneousSource : public FamilySource {
public:
  explicit HomogeneousSource(Distribution d) : dist_(std::make_shared<const Distribution>(std::move(d))) {}
  std::shared_ptr<const Distribution> at(const NodePath&) const override { return dist_; }

private:
  std::shared_ptr<const Distribution> dist_;
};

class FunctionSource : public FamilySource {
public:
  explicit FunctionSource(std::function<std::optional<Distribution>(const NodePath&)> fn) : fn_(std::move(fn)) {}
  std::shared_ptr<const Distribution> at(const NodePath& t) const override {
    auto d = fn_(t);
    if (!d) return nullptr;
    return std::make_shared<const Distribution>(std::move(*d));
  }

private:
  std::function<std::optional<Distribution>(const NodePath&)> fn_;
};

// The tree underlying a family: successors are the domain of the
// distribution at each node.
class FamilyTreeSource : public TreeSource {
public:
  explicit FamilyTreeSource(std::shared_ptr<const FamilySource> family) : family_(std::move(family)) {}
  ChildSet children(const NodePath& t) const override {
    auto d = family_->at(t);
    return d ? d->children() : ChildSet{};
  }

private:
  std::shared_ptr<const FamilySource> family_;
};

}  // namespace

EdgeFamily EdgeFamily::from_table(const std::map<NodePath, Distribution>& dists) {
  auto table = std::make_shared<Table>();
  std::set<NodePath> nodes{NodePath{}};
  for (const auto& [t, d] : dists) {
    if (d.kind() != Distribution::Kind::table)
      throw Error(Errc::validation_error, "explicit families need finitely many successors", t);
    table->emplace(t, std::make_shared<const Distribution>(d));
    for (const auto& [k, m] : d.entries()) nodes.insert(t.child(k));
  }
  for (const auto& [t, d] : dists)
    if (!nodes.count(t)) throw Error(Errc::validation_error, "distribution given for a node outside the tree", t);
  EdgeFamily f;
  f.tree_ = TreeShape::from_nodes(nodes);
  f.table_ = table;
  f.source_ = std::make_shared<TableSource>(table);
  return f;
}

EdgeFamily EdgeFamily::homogeneous(Distribution d, std::size_t depth_budget, std::string name) {
  EdgeFamily f;
  f.info_ = GeneratorInfo{std::move(name), d};
  f.source_ = std::make_shared<HomogeneousSource>(std::move(d));
  f.tree_ = TreeShape::lazy(std::make_shared<FamilyTreeSource>(f.source_), depth_budget, true);
  return f;
}

EdgeFamily EdgeFamily::uniform_binary(std::size_t depth_budget) {
  return homogeneous(Distribution::table({Rational(1, 2), Rational(1, 2)}), depth_budget, "uniform_binary");
}

EdgeFamily EdgeFamily::geometric_omega(std::size_t depth_budget, Rational ratio) {
  return homogeneous(Distribution::geometric(ratio), depth_budget, "geometric_omega");
}

EdgeFamily EdgeFamily::dirac_omega(std::uint64_t k, std::size_t depth_budget) {
  return homogeneous(Distribution::dirac_omega(k), depth_budget, "dirac(" + std::to_string(k) + ")");
}

EdgeFamily EdgeFamily::generated(std::function<std::optional<Distribution>(const NodePath&)> fn,
                                 std::size_t depth_budget, std::optional<GeneratorInfo> info) {
  EdgeFamily f = from_source(std::make_shared<FunctionSource>(std::move(fn)), depth_budget);
  f.info_ = std::move(info);
  return f;
}

EdgeFamily EdgeFamily::from_source(std::shared_ptr<const FamilySource> source, std::size_t depth_budget) {
  EdgeFamily f;
  f.source_ = std::move(source);
  f.tree_ = TreeShape::lazy(std::make_shared<FamilyTreeSource>(f.source_), depth_budget);
  return f;
}

const EdgeFamily::Table& EdgeFamily::table() const {
  if (!table_) throw Error(Errc::requires_explicit_finite_tree, "family is not explicit");
  return *table_;
}

std::shared_ptr<const Distribution> EdgeFamily::at(const NodePath& t) const {
  if (!tree_.contains(t)) throw Error(Errc::unknown_node, "not a node of the tree", t);
  return source_->at(t);
}

std::size_t default_depth(const TreeShape& tree) {
  if (tree.is_explicit()) return tree.max_depth();
  return tree.depth_budget().value_or(kDefaultDepthBudget);
}

ValidationReport validate_edge_family(const EdgeFamily& family, std::optional<std::size_t> depth) {
  ValidationReport report;
  auto note = [&](const NodePath& t, const Distribution& d) {
    for (auto& why : d.violations()) report.violations.push_back({t, why});
  };
  if (family.is_explicit()) {
    report.depth = family.tree().max_depth();
    for (const auto& [t, d] : family.table()) note(t, *d);
    return report;
  }
  if (family.generator() && family.generator()->uniform) {
    report.depth = family.depth_budget().value_or(0);
    note(NodePath{}, *family.generator()->uniform);
    return report;
  }
  report.depth = depth.value_or(default_depth(family.tree()));
  report.complete = false;
  std::vector<NodePath> stack{NodePath{}};
  while (!stack.empty()) {
    NodePath t = std::move(stack.back());
    stack.pop_back();
    if (t.size() >= report.depth) continue;
    auto d = family.at_member(t);
    if (!d) continue;
    note(t, *d);
    ChildSet kids = d->children();
    if (kids.is_omega()) continue;
    for (auto k : kids.indices()) stack.push_back(t.child(k));
  }
  return report;
}

Rational xi(const EdgeFamily& family, const NodePath& t) {
  family.tree().check_depth(t.size());
  Rational product = 1;
  NodePath cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto d = family.at_member(cur);
    if (!d || !d->has_child(t[i])) throw Error(Errc::unknown_node, "not a node of the tree", t);
    if (product != 0) product *= d->mass(t[i]);
    cur = cur.child(t[i]);
  }
  return product;
}

bool same_family_up_to(const EdgeFamily& a, const EdgeFamily& b, std::size_t depth) {
  if (!same_tree_up_to(a.tree(), b.tree(), depth)) return false;
  if (depth == 0) return true;
  bool same = true;
  // Distributions at nodes shorter than depth decide the family up to depth.
  for_each_node(a.tree(), depth - 1, [&](const NodePath& t, const ChildSet&) {
    if (!same) return;
    auto da = a.at_member(t);
    auto db = b.at(t);
    if (bool(da) != bool(db) || (da && !(*da == *db))) same = false;
  });
  return same;
}

}  // namespace ptree
