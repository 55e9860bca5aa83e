#include "ptree/tree.hpp"

#include "ptree/error.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace ptree {

// ---- ChildSet ---------------------------------------------------------------

ChildSet ChildSet::finite(std::vector<std::uint64_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  ChildSet c;
  c.indices_ = std::move(indices);
  return c;
}

ChildSet ChildSet::range(std::uint64_t n) {
  ChildSet c;
  c.indices_.resize(n);
  for (std::uint64_t k = 0; k < n; ++k) c.indices_[k] = k;
  return c;
}

ChildSet ChildSet::omega() {
  ChildSet c;
  c.omega_ = true;
  return c;
}

std::size_t ChildSet::size() const {
  if (omega_) throw Error(Errc::infinite_level, "node has infinitely many successors");
  return indices_.size();
}

const std::vector<std::uint64_t>& ChildSet::indices() const& {
  if (omega_) throw Error(Errc::infinite_level, "node has infinitely many successors");
  return indices_;
}

std::vector<std::uint64_t> ChildSet::indices() && {
  if (omega_) throw Error(Errc::infinite_level, "node has infinitely many successors");
  return std::move(indices_);
}

bool ChildSet::contains(std::uint64_t k) const {
  return omega_ || std::binary_search(indices_.begin(), indices_.end(), k);
}

bool ChildSet::canonical() const {
  if (omega_) return true;
  for (std::size_t i = 0; i < indices_.size(); ++i)
    if (indices_[i] != i) return false;
  return true;
}

Arity ChildSet::arity() const { return omega_ ? Arity::infinite() : Arity::finite(indices_.size()); }

// ---- TreeShape --------------------------------------------------------------

struct TreeShape::ExplicitData {
  std::set<NodePath> nodes;
  std::map<NodePath, ChildSet> children;
  std::size_t max_depth = 0;
};

namespace {

class GeneratedSource : public TreeSource {
public:
  GeneratedSource(std::function<Arity(const NodePath&)> fn, bool homogeneous)
      : fn_(std::move(fn)), homogeneous_(homogeneous) {}

  ChildSet children(const NodePath& t) const override {
    if (homogeneous_) {
      std::call_once(once_, [&] { uniform_ = fn_(NodePath{}); });
      return ChildSet::of(uniform_);
    }
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(t); it != cache_.end()) return ChildSet::of(it->second);
    }
    Arity a = fn_(t);
    std::lock_guard lock(mu_);
    if (cache_.size() > (1u << 16)) cache_.clear();
    cache_.emplace(t, a);
    return ChildSet::of(a);
  }

private:
  std::function<Arity(const NodePath&)> fn_;
  bool homogeneous_;
  mutable std::once_flag once_;
  mutable Arity uniform_;
  mutable std::mutex mu_;
  mutable std::unordered_map<NodePath, Arity, NodePathHash> cache_;
};

}  // namespace

TreeShape::TreeShape() : TreeShape(from_nodes({NodePath{}})) {}

TreeShape TreeShape::from_nodes(const std::set<NodePath>& nodes) {
  auto data = std::make_shared<ExplicitData>();
  if (!nodes.count(NodePath{})) throw Error(Errc::validation_error, "tree has no root");
  std::map<NodePath, std::vector<std::uint64_t>> kids;
  for (const auto& t : nodes) {
    kids[t];
    if (t.is_root()) continue;
    NodePath p = t.parent();
    if (!nodes.count(p)) throw Error(Errc::validation_error, "node set is not prefix closed", t);
    kids[p].push_back(t.back());
    data->max_depth = std::max(data->max_depth, t.size());
  }
  data->nodes = nodes;
  for (auto& [t, v] : kids) data->children.emplace(t, ChildSet::finite(std::move(v)));
  TreeShape shape{Raw{}};
  shape.explicit_ = std::move(data);
  return shape;
}

TreeShape TreeShape::generated(std::function<Arity(const NodePath&)> arity, std::size_t depth_budget,
                               bool homogeneous) {
  return lazy(std::make_shared<GeneratedSource>(std::move(arity), homogeneous), depth_budget, homogeneous);
}

TreeShape TreeShape::lazy(std::shared_ptr<const TreeSource> source, std::size_t depth_budget,
                          bool homogeneous) {
  TreeShape shape{Raw{}};
  shape.source_ = std::move(source);
  shape.budget_ = depth_budget;
  shape.homogeneous_ = homogeneous;
  return shape;
}

const std::set<NodePath>& TreeShape::nodes() const {
  if (!explicit_) throw Error(Errc::requires_explicit_finite_tree, "tree is not explicit");
  return explicit_->nodes;
}

TreeShape TreeShape::with_depth_budget(std::size_t budget) const {
  TreeShape copy = *this;
  copy.budget_ = budget;
  return copy;
}

bool TreeShape::contains(const NodePath& t) const {
  if (explicit_) return explicit_->nodes.count(t) > 0;
  NodePath cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!source_->children(cur).contains(t[i])) return false;
    cur = cur.child(t[i]);
  }
  return true;
}

ChildSet TreeShape::children(const NodePath& t) const {
  if (explicit_) {
    auto it = explicit_->children.find(t);
    if (it == explicit_->children.end()) throw Error(Errc::unknown_node, "not a node of the tree", t);
    return it->second;
  }
  if (!contains(t)) throw Error(Errc::unknown_node, "not a node of the tree", t);
  return source_->children(t);
}

void TreeShape::check_depth(std::size_t n) const {
  if (budget_ && n > *budget_)
    throw Error(Errc::depth_budget_exceeded,
                "depth " + std::to_string(n) + " exceeds budget " + std::to_string(*budget_));
}

std::size_t TreeShape::height() const {
  if (!explicit_) throw Error(Errc::requires_explicit_finite_tree, "height of a lazy tree is not known");
  return explicit_->max_depth + 1;
}

std::size_t TreeShape::max_depth() const {
  if (!explicit_) throw Error(Errc::requires_explicit_finite_tree, "depth of a lazy tree is not known");
  return explicit_->max_depth;
}

// ---- traversal --------------------------------------------------------------

void for_each_node_below(const TreeShape& tree, const NodePath& start, std::size_t max_len,
                         const std::function<void(const NodePath&, const ChildSet&)>& visit) {
  std::vector<std::pair<NodePath, ChildSet>> stack;
  stack.emplace_back(start, tree.children(start));
  while (!stack.empty()) {
    auto [t, kids] = std::move(stack.back());
    stack.pop_back();
    visit(t, kids);
    if (t.size() >= max_len || kids.empty()) continue;
    if (kids.is_omega()) throw Error(Errc::infinite_level, "infinitely many successors", t);
    const auto& idx = kids.indices();
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      NodePath c = t.child(*it);
      ChildSet ck = tree.children(c);
      stack.emplace_back(std::move(c), std::move(ck));
    }
  }
}

void for_each_node(const TreeShape& tree, std::size_t max_len,
                   const std::function<void(const NodePath&, const ChildSet&)>& visit) {
  for_each_node_below(tree, NodePath{}, max_len, visit);
}

bool same_tree_up_to(const TreeShape& a, const TreeShape& b, std::size_t depth) {
  if (depth == 0) return true;
  bool same = true;
  try {
    for_each_node(a, depth - 1, [&](const NodePath& t, const ChildSet& kids) {
      if (!same) return;
      if (!(b.children(t) == kids)) same = false;
    });
  } catch (const Error& e) {
    if (e.code() == Errc::unknown_node) return false;
    throw;
  }
  return same;
}

namespace {

// Levels 0..n of a tree, each level sorted; maximal nodes shorter than n are
// collected separately.
void walk_levels(const TreeShape& tree, std::size_t n, std::vector<NodePath>& last,
                 std::vector<NodePath>* short_maximal) {
  tree.check_depth(n);
  std::vector<NodePath> current{NodePath{}};
  for (std::size_t d = 0; d < n && !current.empty(); ++d) {
    std::vector<NodePath> next;
    for (const auto& t : current) {
      ChildSet kids = tree.children(t);
      if (kids.is_omega()) throw Error(Errc::infinite_level, "level has infinitely many nodes", t);
      if (kids.empty()) {
        if (short_maximal) short_maximal->push_back(t);
        continue;
      }
      for (auto k : kids.indices()) next.push_back(t.child(k));
    }
    current = std::move(next);
  }
  last = std::move(current);
}

}  // namespace

std::vector<NodePath> level(const TreeShape& tree, std::size_t n) {
  tree.check_depth(n);
  if (tree.is_explicit()) {
    std::vector<NodePath> out;
    for (const auto& t : tree.nodes())
      if (t.size() == n) out.push_back(t);
    return out;
  }
  std::vector<NodePath> out;
  walk_levels(tree, n, out, nullptr);
  return out;
}

Front enumerate_front(const TreeShape& tree, std::size_t n) {
  Front f;
  f.level = n;
  if (tree.is_explicit()) {
    tree.check_depth(n);
    for (const auto& t : tree.nodes())
      if (t.size() == n || (t.size() < n && tree.is_maximal(t))) f.nodes.push_back(t);
    return f;
  }
  std::vector<NodePath> shorter;
  walk_levels(tree, n, f.nodes, &shorter);
  f.nodes.insert(f.nodes.end(), shorter.begin(), shorter.end());
  std::sort(f.nodes.begin(), f.nodes.end());
  return f;
}

bool is_front(const TreeShape& tree, const std::vector<NodePath>& nodes) {
  std::size_t longest = 0;
  for (const auto& t : nodes) {
    if (!tree.contains(t)) throw Error(Errc::unknown_node, "front member is not a node", t);
    longest = std::max(longest, t.size());
  }
  tree.check_depth(longest);
  std::vector<NodePath> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i].is_prefix_of(sorted[i + 1])) return false;
  std::set<NodePath> members(sorted.begin(), sorted.end());
  // Every maximal branch must pass through a member; a node not covered by
  // a member at or above it needs all of its successors covered.
  std::vector<NodePath> stack{NodePath{}};
  while (!stack.empty()) {
    NodePath t = std::move(stack.back());
    stack.pop_back();
    if (members.count(t)) continue;
    if (t.size() >= longest) return false;
    ChildSet kids = tree.children(t);
    if (kids.empty() || kids.is_omega()) return false;
    for (auto k : kids.indices()) stack.push_back(t.child(k));
  }
  return true;
}

// ---- classification ---------------------------------------------------------

namespace {

constexpr std::size_t kClassifyNodeCap = 1u << 18;

Classification classify_levels(const std::vector<std::vector<std::pair<NodePath, ChildSet>>>& levels,
                               bool complete, bool saw_omega) {
  Classification c;
  c.examined_depth = levels.size() - 1;
  bool maximal_found = false;
  std::size_t deepest = levels.size() - 1;
  bool shallow_maximal = false;
  for (std::size_t d = 0; d < levels.size(); ++d)
    for (const auto& [t, kids] : levels[d])
      if (kids.empty()) {
        maximal_found = true;
        if (d < deepest) shallow_maximal = true;
      }

  c.finitely_branching = saw_omega ? Flag{false, true} : Flag{true, complete};
  if (complete) {
    c.height = levels.size();
    c.well_pruned = Flag{!shallow_maximal, true};
  } else {
    c.well_pruned = maximal_found ? Flag{false, true} : Flag{true, false};
  }

  if (maximal_found) {
    c.perfect = Flag{false, true};
  } else {
    // has_split[t]: some splitting node at or above t inside the examined part
    std::map<NodePath, bool> has_split;
    for (std::size_t d = levels.size(); d-- > 0;) {
      for (const auto& [t, kids] : levels[d]) {
        bool split = kids.is_omega() || kids.size() >= 2;
        if (!split && d + 1 < levels.size() && !kids.is_omega())
          for (auto k : kids.indices())
            if (has_split[t.child(k)]) split = true;
        has_split[t] = split;
      }
    }
    bool all = std::all_of(has_split.begin(), has_split.end(), [](const auto& kv) { return kv.second; });
    c.perfect = Flag{all, false};
  }
  return c;
}

}  // namespace

Classification classify(const TreeShape& tree) {
  if (tree.homogeneous()) {
    Arity a = tree.children(NodePath{}).arity();
    Classification c;
    c.examined_depth = tree.depth_budget().value_or(0);
    c.finitely_branching = Flag{!a.omega, true};
    c.well_pruned = Flag{true, true};
    if (!a.omega && a.count == 0) {
      c.height = 1;
      c.examined_depth = 0;
      c.perfect = Flag{false, true};
    } else {
      c.perfect = Flag{a.omega || a.count >= 2, true};
    }
    return c;
  }

  std::vector<std::vector<std::pair<NodePath, ChildSet>>> levels;
  std::vector<NodePath> current{NodePath{}};
  std::size_t total = 0;
  bool complete = false;
  bool saw_omega = false;
  std::size_t budget = tree.depth_budget().value_or(static_cast<std::size_t>(-1));
  for (std::size_t d = 0;; ++d) {
    std::vector<std::pair<NodePath, ChildSet>> row;
    std::vector<NodePath> next;
    for (const auto& t : current) {
      ChildSet kids = tree.children(t);
      if (kids.is_omega()) saw_omega = true;
      else
        for (auto k : kids.indices()) next.push_back(t.child(k));
      row.emplace_back(t, std::move(kids));
    }
    levels.push_back(std::move(row));
    total += current.size();
    if (saw_omega) break;
    if (next.empty()) {
      complete = true;
      break;
    }
    if (d >= budget || total + next.size() > kClassifyNodeCap) break;
    current = std::move(next);
  }
  if (tree.is_explicit()) complete = true;
  return classify_levels(levels, complete, saw_omega);
}

// ---- canonical form ---------------------------------------------------------

CanonicalTree canonicalize(const std::vector<LabeledNode>& nodes) {
  if (nodes.empty()) throw Error(Errc::validation_error, "empty tree description");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!index.emplace(nodes[i].label, i).second)
      throw Error(Errc::validation_error, "duplicate label '" + nodes[i].label + "'");

  std::vector<std::vector<std::size_t>> kids(nodes.size());
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].parent) {
      roots.push_back(i);
      continue;
    }
    auto it = index.find(*nodes[i].parent);
    if (it == index.end())
      throw Error(Errc::unknown_node, "label '" + nodes[i].label + "' has unknown parent '" + *nodes[i].parent + "'");
    kids[it->second].push_back(i);
  }
  if (roots.size() > 1) throw Error(Errc::multiple_roots, std::to_string(roots.size()) + " nodes have no parent");
  if (roots.empty()) throw Error(Errc::cyclic_input, "every node has a parent");

  CanonicalTree out;
  std::set<NodePath> paths;
  std::vector<std::pair<std::size_t, NodePath>> stack{{roots[0], NodePath{}}};
  while (!stack.empty()) {
    auto [i, path] = std::move(stack.back());
    stack.pop_back();
    paths.insert(path);
    out.paths.emplace(nodes[i].label, path);
    for (std::size_t k = 0; k < kids[i].size(); ++k) stack.emplace_back(kids[i][k], path.child(k));
  }
  if (out.paths.size() != nodes.size())
    throw Error(Errc::cyclic_input, "some nodes are unreachable from the root through a parent cycle");
  out.tree = TreeShape::from_nodes(paths);
  return out;
}

}  // namespace ptree
