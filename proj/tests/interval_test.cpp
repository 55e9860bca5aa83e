#include "ptree/interval.hpp"
#include "ptree/sampler.hpp"

#include "support/check.hpp"
#include "support/oracle.hpp"

using namespace ptree;

namespace {

Rational R(long long p, long long q = 1) { return Rational(p, q); }

EdgeFamily table_family(const std::map<std::string, std::vector<Rational>>& rows) {
  std::map<NodePath, Distribution> d;
  for (const auto& [k, v] : rows) d.emplace(P(k.c_str()), Distribution::table(v));
  return EdgeFamily::from_table(d);
}

}  // namespace

TEST_CASE("intervals") {
  auto ub = EdgeFamily::uniform_binary(12);
  CHECK(interval(ub, P("1.0.1")) == Interval{R(5, 8), R(3, 4)});
  CHECK(interval(ub, P("")) == Interval{0, 1});
  CHECK(format_interval(interval(ub, P("0.1"))) == "[1/4, 1/2]");
  auto dirac = EdgeFamily::dirac_omega(5, 10);
  CHECK(interval(dirac, P("5.5")) == Interval{0, 1});
  CHECK(interval(dirac, P("3")) == Interval{0, 0});
  CHECK(interval(dirac, P("7.2")) == Interval{1, 1});
  auto geo = EdgeFamily::geometric_omega(10);
  CHECK(interval(geo, P("2")) == Interval{R(3, 4), R(7, 8)});
  CHECK(interval(geo, P("1.0")) == Interval{R(1, 2), R(5, 8)});
  CHECK_ERRC(interval(ub, P("2")), Errc::unknown_node);
}

TEST_CASE("branch windows") {
  auto ub = EdgeFamily::uniform_binary(12);
  auto w = branch_window(ub, P("0.1.0.1.0.1"), 4);
  CHECK(w.width() == R(1, 16));
  CHECK(w.monotone());
  CHECK(w.prefix == P("0.1.0.1"));
  auto d = branch_window(EdgeFamily::dirac_omega(5, 10), P("5.5.5.5"), 4);
  CHECK(d.lower() == 0);
  CHECK(d.upper() == 1);
  auto g = branch_window(EdgeFamily::geometric_omega(10), P("0.0.0"), 3);
  CHECK(g.width() == R(1, 8));
  CHECK(g.lowers == std::vector<Rational>(4, Rational(0)));
  CHECK_ERRC(branch_window(ub, P("0"), 13), Errc::depth_budget_exceeded);
}

TEST_CASE("g_map") {
  auto ub = EdgeFamily::uniform_binary(12);
  CHECK(g_map(ub, R(5, 8) + R(1, 32), 3) == P("1.0.1"));
  CHECK(g_map(ub, R(1, 3), 2) == P("0.1"));
  CHECK_ERRC(g_map(ub, R(1, 2), 3), Errc::q_point);
  CHECK_ERRC(g_map(ub, R(3, 8), 3), Errc::q_point);
  CHECK(g_map(ub, R(3, 8), 2) == P("0.1"));
  CHECK_ERRC(g_map(ub, 0, 3), Errc::q_point);
  CHECK_ERRC(g_map(ub, 1, 3), Errc::q_point);
  CHECK_ERRC(g_map(ub, R(1, 3), 13), Errc::depth_budget_exceeded);
  // Zero-length cells are skipped.
  auto dirac = EdgeFamily::dirac_omega(5, 10);
  CHECK(g_map(dirac, R(1, 3), 4) == P("5.5.5.5"));
  auto geo = EdgeFamily::geometric_omega(10);
  CHECK(g_map(geo, R(13, 16), 1) == P("2"));
  // A maximal node stops the descent early.
  auto shallow = table_family({{"", {R(1, 2), R(1, 2)}}, {"1", {R(1, 2), R(1, 2)}}});
  CHECK(g_map(shallow, R(1, 5), 3) == P("0"));
}

TEST_CASE("lambda on clopen sets") {
  auto ub = EdgeFamily::uniform_binary(12);
  CHECK(lambda_clopen(ub, cylinder(P("0.1"))) == R(1, 4));
  ClopenExpr all{3, level(ub.tree(), 3), false};
  CHECK(lambda_clopen(ub, all) == 1);
  CHECK(lambda_clopen(ub, clopen_complement(cylinder(P("0")))) == R(1, 2));
  CHECK(lambda_clopen(ub, ClopenExpr{0, {}, true}) == 1);
  CHECK_ERRC(lambda_clopen(ub, ClopenExpr{1, {P("0.1")}, false}), Errc::malformed_clopen);
}

TEST_CASE("subtree masses") {
  auto ub = EdgeFamily::uniform_binary(12);
  auto whole = lambda_subtree(ub, ub.tree(), 6);
  for (const auto& m : whole.front_masses) CHECK(m == 1);

  TreeShape zero_path = TreeShape::generated([](const NodePath&) { return Arity::finite(1); }, 12, true);
  auto zp = lambda_subtree(ub, zero_path, 5);
  CHECK(zp.upper_bound() == R(1, 32));
  CHECK(zp.nonincreasing);
  CHECK(zp.front_masses[3] == R(1, 8));

  // Closure of the nodes comparable with <0>.
  TreeShape below0 = TreeShape::generated(
      [](const NodePath& t) { return t.is_root() ? Arity::finite(1) : Arity::finite(2); }, 12);
  auto b = lambda_subtree(ub, below0, 6);
  for (std::size_t l = 1; l < b.front_masses.size(); ++l) CHECK(b.front_masses[l] == R(1, 2));

  auto shallow = table_family({{"", {R(1, 2), R(1, 2)}}, {"1", {R(1, 2), R(1, 2)}}});
  TreeShape stops_early = TreeShape::from_nodes({P(""), P("1")});
  CHECK_ERRC(lambda_subtree(shallow, stops_early, 2), Errc::not_a_subtree);
  TreeShape outside = TreeShape::from_nodes({P(""), P("0"), P("0.0")});
  CHECK_ERRC(lambda_subtree(shallow, outside, 2), Errc::not_a_subtree);
}

TEST_CASE("point masses") {
  auto ub = EdgeFamily::uniform_binary(12);
  auto p = point_mass(ub, P("0.1.1.0.1.0.0.1.1.1"), 10);
  CHECK(p.upper_bound == R(1, 1024));
  CHECK_FALSE(p.exact_zero);
  CHECK_FALSE(p.exact);
  auto dirac = EdgeFamily::dirac_omega(5, 10);
  for (std::size_t n = 0; n <= 6; ++n)
    CHECK(point_mass(dirac, NodePath(std::vector<std::uint64_t>(6, 5)), n).upper_bound == 1);
  auto z = point_mass(dirac, P("5.5.2.5.5"), 5);
  CHECK(z.exact_zero);
  CHECK(z.zero_from == std::optional<std::size_t>(3));
  auto leafy = table_family({{"", {R(1, 3), R(2, 3)}}});
  auto leaf = point_mass(leafy, P("1"), 4);
  CHECK(leaf.exact);
  CHECK(leaf.upper_bound == R(2, 3));
  CHECK_ERRC(point_mass(ub, P("0"), 13), Errc::depth_budget_exceeded);
}

TEST_CASE("freeness reports") {
  auto ub = EdgeFamily::uniform_binary(32);
  auto r = freeness_report(ub, 20, R(1, 1024));
  CHECK(r.verdict == Verdict::free_certified);
  CHECK(r.max_level_mass == rational_pow(R(1, 2), 20));

  auto too_strict = freeness_report(ub, 5, R(1, 1024));
  CHECK(too_strict.verdict == Verdict::inconclusive);

  auto dirac = freeness_report(EdgeFamily::dirac_omega(5, 32), 5, R(1, 1024));
  CHECK(dirac.verdict == Verdict::atom_found);
  CHECK(dirac.witness == P("5.5.5.5.5"));
  CHECK(dirac.max_level_mass == 1);

  auto geo = freeness_report(EdgeFamily::geometric_omega(32), 12, R(1, 1024));
  CHECK(geo.verdict == Verdict::free_certified);

  // A certain first step, then fair coins: nothing can be certified.
  auto mixed = EdgeFamily::generated(
      [](const NodePath& t) -> std::optional<Distribution> {
        if (t.is_root()) return Distribution::table({Rational(1), Rational(0)});
        return Distribution::table({R(1, 2), R(1, 2)});
      },
      12);
  auto m = freeness_report(mixed, 12, R(1, 1024));
  CHECK(m.verdict == Verdict::inconclusive);
  CHECK(m.max_level_mass == R(1, 2048));

  auto finite = table_family({{"", {R(1, 2), R(1, 2)}}, {"1", {R(0), R(1)}}});
  auto f = freeness_report(finite, 2, R(1, 2));
  CHECK(f.verdict == Verdict::atom_found);
  CHECK(f.witness == P("0"));
}

TEST_CASE("atom gaps") {
  auto fig = table_family({{"", {R(1, 2), R(1, 2)}}, {"0", {R(1, 2), R(1, 2)}}, {"1", {R(1, 2), R(1, 2)}}});
  auto gaps = atom_gaps(fig);
  REQUIRE(gaps.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(gaps[i] == Interval{R(i, 4), R(i + 1, 4)});
  auto zero_leaf = table_family({{"", {R(1), R(0)}}});
  CHECK(atom_gaps(zero_leaf).size() == 1);
  auto root_only = EdgeFamily::from_table({});
  REQUIRE(atom_gaps(root_only).size() == 1);
  CHECK(atom_gaps(root_only)[0] == Interval{0, 1});
  CHECK_ERRC(atom_gaps(EdgeFamily::uniform_binary(5)), Errc::requires_explicit_finite_tree);
}

TEST_CASE("sampling") {
  auto ub = EdgeFamily::uniform_binary(12);
  auto a = sample_branch(ub, 42, 200, 3);
  auto b = sample_branch(ub, 42, 200, 3);
  CHECK(a == b);
  CHECK(sample_branch(ub, 43, 200, 3) != a);
  for (const auto& s : a) CHECK(s.size() == 3);

  auto dirac = sample_branch(EdgeFamily::dirac_omega(5, 10), 1, 50, 4);
  for (const auto& s : dirac) CHECK(s == P("5.5.5.5"));

  auto skew = table_family({{"", {R(3, 4), R(1, 4)}}});
  auto draws = sample_branch(skew, 9, 20000, 1);
  std::size_t zeros = 0;
  for (const auto& s : draws) zeros += s == P("0");
  double freq = static_cast<double>(zeros) / 20000.0;
  CHECK(freq == doctest::Approx(0.75).epsilon(0.02));

  auto geo = sample_branch(EdgeFamily::geometric_omega(10), 5, 4000, 2);
  std::size_t first = 0;
  for (const auto& s : geo) first += s[0] == 0;
  CHECK(static_cast<double>(first) / 4000.0 == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("interval properties on random explicit families") {
  std::mt19937_64 rng(77);
  for (const auto& m : oracle::corpus(51, 150)) {
    EdgeFamily f = m.family();
    const auto& nodes = f.tree().nodes();
    std::set<Rational> lowers;
    for (const auto& t : nodes) {
      Interval iv = interval(f, t);
      auto [a, b] = m.cell(t.indices());
      CHECK(iv.lower == a);
      CHECK(iv.upper == b);
      CHECK(iv.length() == xi(f, t));
      lowers.insert(iv.lower);
      // Successor cells tile the parent cell.
      auto kids = child_intervals(f, t);
      if (!kids.empty()) {
        CHECK(kids.front().second.lower == iv.lower);
        CHECK(kids.back().second.upper == iv.upper);
        for (std::size_t i = 0; i + 1 < kids.size(); ++i) CHECK(kids[i].second.upper == kids[i + 1].second.lower);
        for (const auto& [k, c] : kids) CHECK(c == interval(f, t.child(k)));
      }
      // a_t = 0 iff every node lexicographically before t has mass 0.
      bool before_null = true;
      for (const auto& s : nodes)
        if (order_relation(s, t) == Relation::lex_less && xi(f, s) != 0) before_null = false;
      CHECK((iv.lower == 0) == before_null);
      bool after_null = true;
      for (const auto& s : nodes)
        if (order_relation(s, t) == Relation::lex_greater && xi(f, s) != 0) after_null = false;
      CHECK((iv.upper == 1) == after_null);
    }
    // Incompatible nodes share at most an endpoint.
    for (const auto& s : nodes)
      for (const auto& t : nodes)
        if (order_relation(s, t) == Relation::lex_less) CHECK(interval(f, s).upper <= interval(f, t).lower);
    // Endpoints are the lower ends plus 1.
    lowers.insert(1);
    CHECK(endpoint_set(f) == lowers);

    // g_map lands in a cell containing the point; midpoints of positive cells
    // lead back to their node.
    for (int i = 0; i < 20; ++i) {
      Rational y(std::uniform_int_distribution<long long>(1, 9999)(rng), 10000);
      try {
        NodePath t = g_map(f, y, m.max_len());
        CHECK(interval(f, t).contains(y));
        CHECK((t.size() == m.max_len() || f.tree().is_maximal(t)));
      } catch (const Error& e) {
        CHECK(e.code() == Errc::q_point);
        CHECK(endpoint_set(f).count(y) == 1);
      }
    }
    for (const auto& t : nodes) {
      Interval iv = interval(f, t);
      if (iv.length() == 0) continue;
      CHECK(g_map(f, (iv.lower + iv.upper) / 2, t.size()) == t);
    }

    // lambda: full selections have mass 1; disjoint unions add up.
    std::size_t h = m.max_len();
    Front fr = enumerate_front(f.tree(), h);
    CHECK(lambda_clopen(f, ClopenExpr{h, fr.nodes, false}) == 1);
    std::vector<NodePath> left, right;
    for (const auto& s : fr.nodes) (std::bernoulli_distribution(0.5)(rng) ? left : right).push_back(s);
    ClopenExpr cl{h, left, false}, cr{h, right, false};
    CHECK(lambda_clopen(f, cl) + lambda_clopen(f, cr) == 1);
    CHECK(lambda_clopen(f, clopen_complement(cl)) == lambda_clopen(f, cr));
    for (const auto& t : nodes) {
      CHECK(lambda_clopen(f, cylinder(t)) == xi(f, t));
      ClopenExpr fine = clopen_refine(f.tree(), cylinder(t), h);
      CHECK(lambda_clopen(f, fine) == xi(f, t));
    }
    // Gaps of positive atoms: disjoint with total length 1 on a finite tree.
    Rational total = 0;
    auto gaps = atom_gaps(f);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      total += gaps[i].length();
      if (i + 1 < gaps.size()) CHECK(gaps[i].upper <= gaps[i + 1].lower);
    }
    CHECK(total == 1);
  }
}
