#include "ptree/error.hpp"
#include "ptree/tree.hpp"

#include <algorithm>

namespace ptree {

std::optional<std::string> clopen_defect(const TreeShape& tree, const ClopenExpr& c) {
  std::set<NodePath> seen;
  for (const auto& t : c.selected) {
    if (!tree.contains(t)) return "selected " + t.display() + " is not a node";
    if (t.size() > c.front_level) return "selected " + t.display() + " lies beyond the front level";
    if (t.size() < c.front_level && !tree.is_maximal(t))
      return "selected " + t.display() + " is short but not maximal, so it is not in the front";
    if (!seen.insert(t).second) return "selected " + t.display() + " appears twice";
  }
  return std::nullopt;
}

ClopenExpr cylinder(const NodePath& t) { return ClopenExpr{t.size(), {t}, false}; }

ClopenExpr clopen_refine(const TreeShape& tree, const ClopenExpr& c, std::size_t level) {
  if (auto defect = clopen_defect(tree, c)) throw Error(Errc::malformed_clopen, *defect);
  if (level < c.front_level) throw Error(Errc::invalid_argument, "cannot refine to a coarser front");
  std::set<NodePath> picked;
  for (const auto& t : c.selected) {
    for_each_node_below(tree, t, level, [&](const NodePath& s, const ChildSet& kids) {
      if (s.size() == level || kids.empty()) picked.insert(s);
    });
  }
  ClopenExpr out{level, {}, false};
  if (c.complemented) {
    for (const auto& s : enumerate_front(tree, level).nodes)
      if (!picked.count(s)) out.selected.push_back(s);
  } else {
    out.selected.assign(picked.begin(), picked.end());
  }
  return out;
}

ClopenExpr clopen_complement(const ClopenExpr& c) {
  ClopenExpr out = c;
  out.complemented = !c.complemented;
  return out;
}

ClopenExpr clopen_union(const TreeShape& tree, const ClopenExpr& a, const ClopenExpr& b) {
  std::size_t level = std::max(a.front_level, b.front_level);
  ClopenExpr ra = clopen_refine(tree, a, level);
  ClopenExpr rb = clopen_refine(tree, b, level);
  ClopenExpr out{level, {}, false};
  std::set_union(ra.selected.begin(), ra.selected.end(), rb.selected.begin(), rb.selected.end(),
                 std::back_inserter(out.selected));
  return out;
}

ClopenExpr clopen_intersection(const TreeShape& tree, const ClopenExpr& a, const ClopenExpr& b) {
  std::size_t level = std::max(a.front_level, b.front_level);
  ClopenExpr ra = clopen_refine(tree, a, level);
  ClopenExpr rb = clopen_refine(tree, b, level);
  ClopenExpr out{level, {}, false};
  std::set_intersection(ra.selected.begin(), ra.selected.end(), rb.selected.begin(), rb.selected.end(),
                        std::back_inserter(out.selected));
  return out;
}

}  // namespace ptree
