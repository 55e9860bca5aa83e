#include "ptree/interval.hpp"

#include "ptree/error.hpp"

#include <algorithm>

namespace ptree {

namespace {

// Calls visit(k, mass) for the positive-mass successors in index order until
// it returns true.
template <typename Visit>
void for_each_positive_child(const Distribution& d, Visit visit) {
  if (d.kind() == Distribution::Kind::geometric) {
    const Rational& r = d.ratio();
    Rational m = 1 - r;
    for (std::uint64_t k = 0; m > 0; ++k) {
      if (visit(k, m)) return;
      if (r == 0) return;
      m *= r;
    }
    return;
  }
  for (const auto& [k, m] : d.entries())
    if (m > 0 && visit(k, m)) return;
}

}  // namespace

std::string format_interval(const Interval& i) {
  return "[" + format_rational(i.lower) + ", " + format_rational(i.upper) + "]";
}

Interval interval(const EdgeFamily& family, const NodePath& t) {
  family.tree().check_depth(t.size());
  Rational a = 0;
  Rational len = 1;
  NodePath cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto d = family.at_member(cur);
    if (!d || !d->has_child(t[i])) throw Error(Errc::unknown_node, "not a node of the tree", t);
    if (len != 0) {
      a += len * d->mass_before(t[i]);
      len *= d->mass(t[i]);
    }
    cur = cur.child(t[i]);
  }
  return {a, a + len};
}

std::vector<std::pair<std::uint64_t, Interval>> child_intervals(const EdgeFamily& family, const NodePath& t) {
  Interval parent = interval(family, t);
  std::vector<std::pair<std::uint64_t, Interval>> out;
  auto d = family.at_member(t);
  if (!d) return out;
  Rational a = parent.lower;
  for (auto k : d->children().indices()) {
    Rational b = a + parent.length() * d->mass(k);
    out.emplace_back(k, Interval{a, b});
    a = b;
  }
  return out;
}

bool BranchWindow::monotone() const {
  for (std::size_t i = 0; i + 1 < lowers.size(); ++i)
    if (lowers[i + 1] < lowers[i] || uppers[i + 1] > uppers[i]) return false;
  return true;
}

BranchWindow branch_window(const EdgeFamily& family, const NodePath& x, std::size_t n) {
  family.tree().check_depth(n);
  std::size_t len = n;
  if (x.size() < n) {
    if (!family.tree().contains(x) || !family.tree().is_maximal(x))
      throw Error(Errc::invalid_argument, "branch prefix is shorter than the depth", x);
    len = x.size();
  }
  BranchWindow w;
  w.prefix = x.prefix(len);
  for (std::size_t i = 0; i <= len; ++i) {
    Interval iv = interval(family, x.prefix(i));
    w.lowers.push_back(iv.lower);
    w.uppers.push_back(iv.upper);
  }
  return w;
}

NodePath g_map(const EdgeFamily& family, const Rational& y, std::size_t n) {
  family.tree().check_depth(n);
  if (y < 0 || y > 1) throw Error(Errc::invalid_argument, "point outside [0,1]");
  if (y == 0 || y == 1) throw Error(Errc::q_point, "point " + format_rational(y) + " is an endpoint of the root interval");
  NodePath t;
  Rational a = 0;
  Rational len = 1;
  while (t.size() < n) {
    auto d = family.at_member(t);
    if (!d) break;
    Rational cum = a;
    bool found = false;
    for_each_positive_child(*d, [&](std::uint64_t k, const Rational& m) {
      Rational hi = cum + len * m;
      if (y == cum)
        throw Error(Errc::q_point, "point " + format_rational(y) + " is a shared endpoint", t.child(k));
      if (y < hi) {
        a = cum;
        len *= m;
        t = t.child(k);
        found = true;
        return true;
      }
      cum = hi;
      return false;
    });
    if (!found) throw Error(Errc::internal_inconsistency, "no successor cell contains the point", t);
  }
  return t;
}

std::set<Rational> endpoint_set(const EdgeFamily& family) {
  std::set<Rational> out;
  for (const auto& t : family.tree().nodes()) {
    Interval iv = interval(family, t);
    out.insert(iv.lower);
    out.insert(iv.upper);
  }
  return out;
}

Rational lambda_clopen(const EdgeFamily& family, const ClopenExpr& c) {
  if (auto defect = clopen_defect(family.tree(), c)) throw Error(Errc::malformed_clopen, *defect);
  Rational sum = 0;
  for (const auto& t : c.selected) sum += xi(family, t);
  return c.complemented ? Rational(1 - sum) : sum;
}

SubtreeMass lambda_subtree(const EdgeFamily& family, const TreeShape& subtree, std::size_t n) {
  family.tree().check_depth(n);
  SubtreeMass out;
  std::vector<std::pair<NodePath, Rational>> current{{NodePath{}, Rational(1)}};
  Rational settled = 0;  // mass of maximal nodes of S already passed
  for (std::size_t l = 0;; ++l) {
    Rational level_mass = 0;
    for (const auto& [s, m] : current) level_mass += m;
    out.front_masses.push_back(settled + level_mass);
    if (l == n) break;
    std::vector<std::pair<NodePath, Rational>> next;
    for (const auto& [s, m] : current) {
      if (!family.tree().contains(s)) throw Error(Errc::not_a_subtree, "subtree node is not in the tree", s);
      ChildSet kids = subtree.children(s);
      auto d = family.at_member(s);
      if (kids.empty()) {
        if (d) throw Error(Errc::not_a_subtree, "maximal node of the subtree is not maximal in the tree", s);
        settled += m;
        continue;
      }
      if (kids.is_omega()) throw Error(Errc::infinite_level, "subtree node has infinitely many successors", s);
      if (!d) throw Error(Errc::not_a_subtree, "subtree extends a maximal node of the tree", s);
      for (auto k : kids.indices()) {
        if (!d->has_child(k)) throw Error(Errc::not_a_subtree, "subtree node is not in the tree", s.child(k));
        next.emplace_back(s.child(k), m == 0 ? Rational(0) : Rational(m * d->mass(k)));
      }
    }
    current = std::move(next);
  }
  for (std::size_t i = 0; i + 1 < out.front_masses.size(); ++i)
    if (out.front_masses[i + 1] > out.front_masses[i]) out.nonincreasing = false;
  return out;
}

PointMass point_mass(const EdgeFamily& family, const NodePath& x, std::size_t n) {
  family.tree().check_depth(n);
  bool maximal_end = false;
  std::size_t len = n;
  if (x.size() <= n && family.tree().contains(x) && family.tree().is_maximal(x)) {
    maximal_end = true;
    len = x.size();
  } else if (x.size() < n) {
    throw Error(Errc::invalid_argument, "branch prefix is shorter than the depth", x);
  }
  PointMass out;
  Rational m = 1;
  for (std::size_t i = 0; i < len; ++i) {
    auto d = family.at_member(x.prefix(i));
    if (!d || !d->has_child(x[i])) throw Error(Errc::unknown_node, "not a node of the tree", x.prefix(i + 1));
    m *= d->mass(x[i]);
    if (m == 0 && !out.zero_from) out.zero_from = i + 1;
  }
  out.upper_bound = m;
  out.exact_zero = m == 0;
  out.exact = out.exact_zero || maximal_end;
  return out;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::free_certified: return "free_certified";
    case Verdict::atom_found: return "atom_found";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

FreenessReport freeness_report(const EdgeFamily& family, std::size_t n, const Rational& epsilon) {
  family.tree().check_depth(n);
  FreenessReport r;
  r.depth = n;
  r.epsilon = epsilon;

  if (family.generator() && family.generator()->uniform) {
    // The same distribution everywhere: the heaviest node of every level
    // follows the heaviest successor each time.
    const Distribution& d = *family.generator()->uniform;
    Rational c = d.max_mass();
    r.max_level_mass = rational_pow(c, n);
    if (c == 1) {
      std::uint64_t heavy = 0;
      for_each_positive_child(d, [&](std::uint64_t k, const Rational&) {
        heavy = k;
        return true;
      });
      r.verdict = Verdict::atom_found;
      r.witness = NodePath(std::vector<std::uint64_t>(n, heavy));
    } else if (!d.children().empty() && r.max_level_mass <= epsilon) {
      r.verdict = Verdict::free_certified;
    }
    return r;
  }

  // Heaviest level-n node, and the first positive-mass maximal node met.
  r.max_level_mass = 0;
  std::optional<NodePath> atom;
  std::vector<std::pair<NodePath, Rational>> stack{{NodePath{}, Rational(1)}};
  while (!stack.empty()) {
    auto [t, m] = std::move(stack.back());
    stack.pop_back();
    if (t.size() == n) r.max_level_mass = std::max(r.max_level_mass, m);
    auto d = family.at_member(t);
    if (!d) {
      if (!atom) atom = t;
      continue;
    }
    if (t.size() >= n && !family.is_explicit()) continue;
    auto support = d->positive_support();
    if (!support) throw Error(Errc::infinite_level, "infinitely many successors carry mass", t);
    for (auto it = support->rbegin(); it != support->rend(); ++it) stack.emplace_back(t.child(*it), m * d->mass(*it));
  }
  if (atom) {
    r.verdict = Verdict::atom_found;
    r.witness = atom;
  }
  return r;
}

std::vector<Interval> atom_gaps(const EdgeFamily& family) {
  if (!family.is_explicit()) throw Error(Errc::requires_explicit_finite_tree, "atoms are listed for explicit trees only");
  std::vector<Interval> out;
  for (const auto& t : family.tree().nodes()) {
    if (!family.tree().is_maximal(t)) continue;
    Interval iv = interval(family, t);
    if (iv.length() > 0) out.push_back(iv);
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lower < b.lower; });
  return out;
}

}  // namespace ptree
