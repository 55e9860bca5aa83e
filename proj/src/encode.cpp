#include "ptree/encode.hpp"

#include "ptree/error.hpp"
#include "ptree/interval.hpp"

#include <algorithm>

namespace ptree {

namespace {

void append_ones(std::vector<std::uint64_t>& v, std::uint64_t k) { v.insert(v.end(), k, 1); }

// Image of t⌢k given the image of t.
NodePath extend_image(const NodePath& image, const ChildSet& kids, std::uint64_t k, const NodePath& at) {
  std::vector<std::uint64_t> v = image.indices();
  if (kids.is_omega()) {
    append_ones(v, k);
    v.push_back(0);
    return NodePath(std::move(v));
  }
  if (!kids.canonical()) throw Error(Errc::invalid_argument, "encoding needs successors numbered 0..a-1", at);
  std::uint64_t a = kids.size();
  if (a == 1) return image;
  if (k + 1 < a) {
    append_ones(v, k);
    v.push_back(0);
  } else {
    append_ones(v, a - 1);
  }
  return NodePath(std::move(v));
}

}  // namespace

BinaryEncoding::BinaryEncoding(TreeShape source, std::size_t depth) : source_(std::move(source)), depth_(depth) {
  source_.check_depth(depth);
  try {
    for_each_node(source_, depth_, [&](const NodePath& t, const ChildSet& kids) {
      NodePath img = t.is_root() ? NodePath{} : extend_image(images_.at(t.parent()), source_.children(t.parent()),
                                                             t.back(), t);
      binary_depth_ = std::max(binary_depth_, img.size());
      for (std::size_t i = 0; i <= img.size(); ++i) image_tree_.insert(img.prefix(i));
      if (t.size() == depth_ && !kids.empty()) cutoff_.insert(img);
      images_.emplace(t, std::move(img));
    });
    materialized_ = true;
  } catch (const Error& e) {
    if (e.code() != Errc::infinite_level) throw;
    images_.clear();
    image_tree_.clear();
    cutoff_.clear();
  }
}

void BinaryEncoding::require_materialized() const {
  if (!materialized_) throw Error(Errc::infinite_level, "tree is not finitely branching up to the encoding depth");
}

const std::map<NodePath, NodePath>& BinaryEncoding::images() const {
  require_materialized();
  return images_;
}

const std::set<NodePath>& BinaryEncoding::image_tree() const {
  require_materialized();
  return image_tree_;
}

const std::set<NodePath>& BinaryEncoding::cutoff_images() const {
  require_materialized();
  return cutoff_;
}

std::size_t BinaryEncoding::binary_depth() const {
  require_materialized();
  return binary_depth_;
}

NodePath BinaryEncoding::h(const NodePath& t) const {
  if (t.size() > depth_) throw Error(Errc::depth_budget_exceeded, "node lies beyond the encoding depth", t);
  if (materialized_) {
    auto it = images_.find(t);
    if (it == images_.end()) throw Error(Errc::unknown_node, "not a node of the tree", t);
    return it->second;
  }
  NodePath img;
  NodePath cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ChildSet kids = source_.children(cur);
    if (!kids.contains(t[i])) throw Error(Errc::unknown_node, "not a node of the tree", t);
    img = extend_image(img, kids, t[i], t);
    cur = cur.child(t[i]);
  }
  return img;
}

std::optional<BinaryEncoding::Location> BinaryEncoding::locate(const NodePath& s) const {
  NodePath t;
  std::size_t pos = 0;
  while (true) {
    while (t.size() < depth_) {
      ChildSet kids = source_.children(t);
      if (kids.is_omega() || kids.size() != 1) break;
      t = t.child(kids.indices()[0]);
    }
    if (pos == s.size()) return Location{t, true, 0};
    if (t.size() >= depth_) return std::nullopt;
    ChildSet kids = source_.children(t);
    if (kids.empty()) return std::nullopt;
    std::uint64_t limit = kids.is_omega() ? static_cast<std::uint64_t>(-1) : kids.size() - 1;
    std::uint64_t j = 0;
    while (j < limit && pos + j < s.size() && s[pos + j] == 1) ++j;
    if (j == limit) {
      t = t.child(j);
      pos += j;
      continue;
    }
    if (pos + j == s.size()) return Location{t, false, j};
    if (s[pos + j] != 0) return std::nullopt;
    t = t.child(j);
    pos += j + 1;
  }
}

BinaryEncoding encode(const TreeShape& tree, std::size_t n) { return BinaryEncoding(tree, n); }

Rational xi_star_at(const EdgeFamily& family, const BinaryEncoding& enc, const NodePath& s) {
  auto loc = enc.locate(s);
  if (!loc) throw Error(Errc::unknown_node, "not in the image tree", s);
  Rational base = xi(family, loc->node);
  if (loc->in_range) return base;
  auto d = family.at_member(loc->node);
  if (d->children().is_omega()) return base * (1 - d->mass_before(loc->ones));
  Rational tail = 0;
  for (auto k : d->children().indices())
    if (k >= loc->ones) tail += d->mass(k);
  return base * tail;
}

InductiveMeasure xi_star(const EdgeFamily& family, const BinaryEncoding& enc) {
  if (!same_tree_up_to(enc.source(), family.tree(), enc.depth()))
    throw Error(Errc::encoding_mismatch, "encoding was built from a different tree");
  std::map<NodePath, Rational> masses;
  for (const auto& s : enc.image_tree()) masses.emplace(s, xi_star_at(family, enc, s));
  return InductiveMeasure::unchecked(TreeShape::from_nodes(enc.image_tree()), std::move(masses), enc.binary_depth());
}

NodePath embed_branch(const BinaryEncoding& enc, const NodePath& x) { return enc.h(x); }

EncodingReport verify_encoding(const EdgeFamily& family, std::size_t n) {
  EncodingReport r;
  BinaryEncoding enc = encode(family.tree(), n);
  const auto& images = enc.images();
  const auto& S = enc.image_tree();
  const auto& cutoff = enc.cutoff_images();
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    if (r.failures.size() < 20) r.failures.push_back(std::move(why));
  };

  InductiveMeasure star = xi_star(family, enc);
  for (auto& v : star.violations()) fail(r.inductive, "inductive law: " + v);

  // Every node of S is maximal or splitting; leaves not at the cutoff are
  // images of maximal nodes.
  std::set<NodePath> maximal_images;
  for (const auto& [t, img] : images)
    if (family.tree().is_maximal(t)) maximal_images.insert(img);
  for (const auto& s : S) {
    if (cutoff.count(s)) continue;
    bool zero = S.count(s.child(0)) > 0;
    bool one = S.count(s.child(1)) > 0;
    if (zero != one) fail(r.split_or_maximal, s.display() + " has exactly one successor in S");
    if (!zero && !one && !maximal_images.count(s))
      fail(r.split_or_maximal, "leaf " + s.display() + " of S is not the image of a maximal node");
  }

  if (r.inductive) {
    GeneralPair pair = GeneralPair::from_measure(
        star, [](const NodePath&, const ChildSet& kids) { return Distribution::uniform(kids); });
    EdgeFamily nu = delta(pair);
    for (const auto& [t, img] : images) {
      ++r.nodes_checked;
      Interval a = interval(nu, img);
      Interval b = interval(family, t);
      if (!(a == b))
        fail(r.intervals_match, "interval of " + img.display() + " is " + format_interval(a) + " but " +
                                    t.display() + " has " + format_interval(b));
    }
  } else {
    r.intervals_match = false;
  }

  std::vector<std::pair<NodePath, NodePath>> list(images.begin(), images.end());
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = 0; j < list.size(); ++j) {
      const auto& [s, hs] = list[i];
      const auto& [t, ht] = list[j];
      ++r.pairs_checked;
      if (s.is_prefix_of(t) && !hs.is_prefix_of(ht))
        fail(r.order_laws, "h does not preserve " + s.display() + " below " + t.display());
      bool incompatible = !s.compatible_with(t);
      if (incompatible != !hs.compatible_with(ht))
        fail(r.order_laws, "h changes the compatibility of " + s.display() + " and " + t.display());
      if (incompatible && (order_relation(s, t) == Relation::lex_less) != (order_relation(hs, ht) == Relation::lex_less))
        fail(r.order_laws, "h changes the lexicographic order of " + s.display() + " and " + t.display());
    }
  }
  return r;
}

}  // namespace ptree
