#include "ptree/encode.hpp"
#include "ptree/interval.hpp"

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

EdgeFamily ternary_root() { return table_family({{"", {R(1, 2), R(1, 3), R(1, 6)}}}); }

EdgeFamily chain3() { return table_family({{"", {R(1)}}, {"0", {R(1)}}, {"0.0", {R(1)}}}); }

}  // namespace

TEST_CASE("h on binary, ternary and chain trees") {
  auto ub = EdgeFamily::uniform_binary(10);
  auto enc = encode(ub.tree(), 4);
  for (const auto& [t, img] : enc.images()) CHECK(t == img);
  CHECK(enc.image_tree().size() == 31);

  auto tern = encode(ternary_root().tree(), 1);
  CHECK(tern.h(P("0")) == P("0"));
  CHECK(tern.h(P("1")) == P("1.0"));
  CHECK(tern.h(P("2")) == P("1.1"));
  CHECK(tern.image_tree() == std::set<NodePath>{P(""), P("0"), P("1"), P("1.0"), P("1.1")});

  auto chain = encode(chain3().tree(), 3);
  for (const char* t : {"", "0", "0.0", "0.0.0"}) CHECK(chain.h(P(t)).is_root());
  CHECK(chain.image_tree() == std::set<NodePath>{P("")});

  auto geo = encode(EdgeFamily::geometric_omega(10).tree(), 3);
  CHECK(geo.h(P("2")) == P("1.1.0"));
  CHECK(geo.h(P("0.1")) == P("0.1.0"));
  CHECK_ERRC(geo.images(), Errc::infinite_level);

  CHECK_ERRC(enc.h(P("0.0.0.0.0")), Errc::depth_budget_exceeded);
  CHECK_ERRC(enc.h(P("2")), Errc::unknown_node);
  CHECK_ERRC(encode(ub.tree(), 11), Errc::depth_budget_exceeded);
  TreeShape sparse = TreeShape::from_nodes({P(""), P("3"), P("4")});
  CHECK_ERRC(encode(sparse, 1).h(P("3")), Errc::invalid_argument);
}

TEST_CASE("locate finds the deepest node whose image lies below s") {
  auto tern = encode(ternary_root().tree(), 1);
  auto l = tern.locate(P("1"));
  REQUIRE(l);
  CHECK(l->node == P(""));
  CHECK_FALSE(l->in_range);
  CHECK(l->ones == 1);
  auto m = tern.locate(P("1.1"));
  REQUIRE(m);
  CHECK(m->node == P("2"));
  CHECK(m->in_range);
  CHECK_FALSE(tern.locate(P("0.0")).has_value());
  auto geo = encode(EdgeFamily::geometric_omega(10).tree(), 3);
  auto g = geo.locate(P("0.1.1"));
  REQUIRE(g);
  CHECK(g->node == P("0"));
  CHECK(g->ones == 2);
}

TEST_CASE("xi_star") {
  auto ub = EdgeFamily::uniform_binary(10);
  auto enc = encode(ub.tree(), 3);
  auto star = xi_star(ub, enc);
  CHECK(star == pi(ub, 3));

  auto tf = ternary_root();
  auto te = encode(tf.tree(), 1);
  CHECK(xi_star_at(tf, te, P("1")) == R(1, 2));
  CHECK(xi_star_at(tf, te, P("1.0")) == R(1, 3));
  CHECK(xi_star_at(tf, te, P("1.1")) == R(1, 6));
  CHECK(xi_star(tf, te).violations().empty());

  auto cf = chain3();
  auto ce = encode(cf.tree(), 3);
  auto cs = xi_star(cf, ce);
  CHECK(cs.mass(P("")) == 1);
  CHECK(cs.tree().nodes().size() == 1);

  auto geo = EdgeFamily::geometric_omega(10);
  auto ge = encode(geo.tree(), 3);
  CHECK(xi_star_at(geo, ge, P("1.1")) == R(1, 4));
  CHECK(xi_star_at(geo, ge, P("1.1.0")) == R(1, 8));
  CHECK(xi_star_at(geo, ge, P("0.1.1.1")) == R(1, 16));

  CHECK_ERRC(xi_star(ub, te), Errc::encoding_mismatch);
  CHECK_ERRC(xi_star_at(tf, te, P("0.0")), Errc::unknown_node);
}

TEST_CASE("embed_branch") {
  auto ub = EdgeFamily::uniform_binary(10);
  auto enc = encode(ub.tree(), 5);
  CHECK(embed_branch(enc, P("0.1.1.0")) == P("0.1.1.0"));
  auto tern = encode(TreeShape::generated([](const NodePath&) { return Arity::finite(3); }, 10, true), 4);
  CHECK(embed_branch(tern, P("2")) == P("1.1"));
  CHECK(embed_branch(tern, P("2.0.1")) == P("1.1.0.1.0"));
  auto chain = encode(chain3().tree(), 3);
  for (const char* t : {"", "0", "0.0", "0.0.0"}) CHECK(embed_branch(chain, P(t)).is_root());
}

TEST_CASE("verify_encoding") {
  auto ub = verify_encoding(EdgeFamily::uniform_binary(10), 4);
  CHECK(ub.ok());
  CHECK(ub.nodes_checked == 31);
  auto tf = ternary_root();
  auto r = verify_encoding(tf, 1);
  CHECK(r.ok());
  // The image cell of <1> spans the cells of successors 1 and 2.
  auto enc = encode(tf.tree(), 1);
  auto nu = delta(GeneralPair::from_measure(xi_star(tf, enc), [](const NodePath&, const ChildSet& k) {
    return Distribution::uniform(k);
  }));
  CHECK(interval(nu, P("1")) == Interval{R(1, 2), 1});
  CHECK(interval(tf, P("1")).lower == R(1, 2));
  CHECK(interval(tf, P("2")).upper == 1);
  CHECK(verify_encoding(chain3(), 3).ok());
  CHECK_ERRC(verify_encoding(EdgeFamily::geometric_omega(10), 2), Errc::infinite_level);
}

TEST_CASE("encoding properties on random trees") {
  oracle::CorpusOptions opt;
  opt.max_depth = 5;
  opt.node_cap = 200;
  for (const auto& m : oracle::corpus(61, 100, opt)) {
    EdgeFamily f = m.family();
    std::size_t n = m.max_len();
    auto report = verify_encoding(f, n);
    CHECK(report.ok());
    for (const auto& why : report.failures) MESSAGE(why);
    CHECK(report.nodes_checked == m.nodes.size());

    // Maximal nodes of S are images; xi_star on images equals xi.
    auto enc = encode(f.tree(), n);
    for (const auto& [t, img] : enc.images()) CHECK(xi_star_at(f, enc, img) == xi(f, t));
    for (const auto& s : enc.image_tree()) {
      auto loc = enc.locate(s);
      REQUIRE(loc);
      if (loc->in_range) CHECK(enc.h(loc->node) == s);
    }
  }
}

TEST_CASE("perfect trees encode onto the full binary tree") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 40; ++round) {
    std::size_t depth = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    std::map<NodePath, Distribution> d;
    std::vector<NodePath> layer{P("")};
    for (std::size_t l = 0; l < depth; ++l) {
      std::vector<NodePath> next;
      for (const auto& t : layer) {
        std::size_t a = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
        d.emplace(t, Distribution::table(oracle::random_probs(rng, a, 0.0)));
        for (std::size_t k = 0; k < a; ++k) next.push_back(t.child(k));
      }
      layer = std::move(next);
    }
    auto f = EdgeFamily::from_table(d);
    auto enc = encode(f.tree(), depth);
    for (std::size_t len = 0; len <= depth; ++len)
      for (std::uint64_t bits = 0; bits < (1u << len); ++bits) {
        std::vector<std::uint64_t> v(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = (bits >> i) & 1;
        CHECK(enc.image_tree().count(NodePath(v)) == 1);
      }
    CHECK(verify_encoding(f, depth).ok());
  }
}
