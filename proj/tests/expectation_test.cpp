#include "ptree/expectation.hpp"

#include "support/check.hpp"
#include "support/oracle.hpp"

#include <algorithm>

using namespace ptree;

namespace {

Rational ones(const NodePath& s) {
  return Rational(static_cast<long long>(std::count(s.indices().begin(), s.indices().end(), 1)));
}

// Reference conditional expectation: direct sum over level-k nodes below t
// of X times the product of edge probabilities from t.
Rational direct(const oracle::Model& m, const std::function<Rational(const oracle::Path&)>& x, const oracle::Path& t,
                std::size_t k) {
  Rational sum = 0;
  for (const auto& s : m.nodes) {
    if (s.size() != k || !std::equal(t.begin(), t.end(), s.begin())) continue;
    Rational w = 1;
    oracle::Path cur = t;
    for (std::size_t j = t.size(); j < k; ++j) {
      w *= m.probs.at(cur).at(s[j]);
      cur.push_back(s[j]);
    }
    sum += x(s) * w;
  }
  return sum;
}

}  // namespace

TEST_CASE("expect") {
  auto ub = EdgeFamily::uniform_binary(10);
  auto m2 = pi(ub, 2);
  auto x = FrontVariable::from_function(enumerate_front(ub.tree(), 2), ones);
  CHECK(expect(m2, x) == 1);
  auto c = FrontVariable::from_function(enumerate_front(ub.tree(), 3), [](const NodePath&) { return Rational(7, 3); });
  CHECK(expect(pi(ub, 3), c) == Rational(7, 3));
  auto ind = FrontVariable::from_function(enumerate_front(ub.tree(), 3),
                                          [](const NodePath& s) { return Rational(P("0").is_prefix_of(s) ? 1 : 0); });
  CHECK(expect(pi(ub, 3), ind) == Rational(1, 2));
  FrontVariable partial{Front{{P("0")}, std::nullopt}, {{P("0"), Rational(1)}}};
  CHECK_ERRC(expect(m2, partial), Errc::not_a_front);
}

TEST_CASE("relative_expect") {
  auto ub = EdgeFamily::uniform_binary(10);
  auto x = FrontVariable::from_function(enumerate_front(ub.tree(), 2), ones);
  CHECK(relative_expect(ub, x, P("1")) == Rational(3, 2));
  CHECK(relative_expect(ub, x, P("0")) == Rational(1, 2));
  CHECK(relative_expect(ub, x, P("")) == expect(pi(ub, 2), x));
  CHECK(relative_expect(ub, x, P("1.0")) == 1);
  auto c = FrontVariable::from_function(enumerate_front(ub.tree(), 4), [](const NodePath&) { return Rational(-2); });
  for (const char* t : {"", "0", "1.1", "0.1.0", "1.1.1.1"}) CHECK(relative_expect(ub, c, P(t)) == -2);
  CHECK_ERRC(relative_expect(ub, x, P("0.0.0")), Errc::node_not_below_front);

  // A maximal node at depth 1 below the root breaks the level-2 precondition.
  std::map<NodePath, Distribution> d{{P(""), Distribution::table({Rational(1, 2), Rational(1, 2)})},
                                     {P("1"), Distribution::table({Rational(1, 2), Rational(1, 2)})}};
  auto lop = EdgeFamily::from_table(d);
  auto y = FrontVariable::from_function(enumerate_front(lop.tree(), 2), ones);
  CHECK_ERRC(relative_expect(lop, y, P("")), Errc::precondition_front_mismatch);
  CHECK(relative_expect(lop, y, P("1")) == Rational(3, 2));
  CHECK(relative_expect_front(lop, y, P("")) == Rational(3, 4));
  CHECK_ERRC(relative_expect_front(lop, y, P("0.0")), Errc::unknown_node);
}

TEST_CASE("relative expectation under a zero-mass node uses the inherited family") {
  std::map<NodePath, Distribution> d{{P(""), Distribution::table({Rational(1), Rational(0)})},
                                     {P("0"), Distribution::table({Rational(1, 2), Rational(1, 2)})},
                                     {P("1"), Distribution::table({Rational(1, 4), Rational(3, 4)})}};
  auto f = EdgeFamily::from_table(d);
  auto x = FrontVariable::from_function(enumerate_front(f.tree(), 2), ones);
  CHECK(relative_expect(f, x, P("1")) == Rational(1) + Rational(3, 4));
}

TEST_CASE("tower_check") {
  auto ub = EdgeFamily::uniform_binary(10);
  auto x = FrontVariable::from_function(enumerate_front(ub.tree(), 2), ones);
  auto r = tower_check(ub, x, 0, 1, 2);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].lhs == 1);
  CHECK(r.rows[0].rhs == 1);
  CHECK(r.equal);
  auto same = tower_check(ub, x, 2, 2, 2);
  CHECK(same.equal);
  for (const auto& row : same.rows) CHECK(row.lhs == x(row.node));
  CHECK_ERRC(tower_check(ub, x, 2, 1, 2), Errc::invalid_argument);
  CHECK_ERRC(tower_check(ub, x, 0, 1, 3), Errc::invalid_argument);

  Front inner{{P("0"), P("1.0"), P("1.1")}, std::nullopt};
  auto fr = tower_check_fronts(ub, x, inner, P(""));
  CHECK(fr.equal);
  CHECK(fr.rows[0].lhs == 1);
}

TEST_CASE("expectation properties on random well-pruned trees") {
  std::mt19937_64 rng(3);
  oracle::CorpusOptions opt;
  opt.max_depth = 5;
  opt.well_pruned = true;
  opt.node_cap = 300;
  for (const auto& m : oracle::corpus(41, 80, opt)) {
    EdgeFamily f = m.family();
    std::size_t h = m.max_len();
    std::map<oracle::Path, Rational> xv, yv;
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    for (const auto& s : m.nodes) {
      xv[s] = Rational(num(rng), den(rng));
      yv[s] = Rational(num(rng), den(rng));
    }
    auto xf = [&](const oracle::Path& s) { return xv.at(s); };
    for (std::size_t k = 0; k <= h; ++k) {
      Front fk = enumerate_front(f.tree(), k);
      auto X = FrontVariable::from_function(fk, [&](const NodePath& s) { return xv.at(s.indices()); });
      auto Y = FrontVariable::from_function(fk, [&](const NodePath& s) { return yv.at(s.indices()); });
      Rational a(3, 5), b(-2);
      auto Z = linear_combination(a, X, b, Y);
      for (std::size_t mm = 0; mm <= k; ++mm)
        for (const auto& t : level(f.tree(), mm)) {
          Rational rx = relative_expect(f, X, t);
          CHECK(rx == direct(m, xf, t.indices(), k));
          CHECK(relative_expect(f, Z, t) == a * rx + b * relative_expect(f, Y, t));
          // Mass decomposition: xi(s) = (inherited mass of s from t) xi(t).
          for (const auto& s : level(f.tree(), k)) {
            if (!t.is_prefix_of(s)) continue;
            auto ind = FrontVariable::from_function(fk, [&](const NodePath& u) { return Rational(u == s ? 1 : 0); });
            CHECK(xi(f, s) == relative_expect(f, ind, t) * xi(f, t));
          }
        }
      CHECK(expect(pi(f), X) == relative_expect(f, X, P("")));
      for (std::size_t n = 0; n <= k; ++n) {
        auto full = tower_check(f, X, 0, n, k);
        CHECK(full.equal);
        CHECK(full.rows[0].lhs == expect(pi(f), X));
      }
    }
  }
}

TEST_CASE("front-generalized tower identity on random trees") {
  std::mt19937_64 rng(8);
  for (const auto& m : oracle::corpus(42, 80)) {
    EdgeFamily f = m.family();
    std::size_t h = m.max_len();
    for (std::size_t k = 0; k <= h; ++k) {
      Front outer = enumerate_front(f.tree(), k);
      auto X = FrontVariable::from_function(outer, [&](const NodePath& s) {
        return Rational(static_cast<long long>(s.size() * 3 + (s.is_root() ? 0 : s.back())), 7);
      });
      for (std::size_t n = 0; n <= k; ++n) {
        Front inner = enumerate_front(f.tree(), n);
        auto r = tower_check_fronts(f, X, inner, P(""));
        CHECK(r.equal);
        CHECK(r.rows[0].lhs == expect(pi(f), X));
        for (const auto& t : inner.nodes) CHECK(tower_check_fronts(f, X, inner, t).equal);
      }
    }
  }
}
