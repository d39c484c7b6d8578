#include "rpnkit/order.hpp"

#include <doctest.h>

#include <chrono>

#include "fixtures.hpp"
#include "gen.hpp"

using namespace rpn;

TEST_CASE("embed fixture: embedding exists and anchors at the 2p1 vertex") {
  Document doc = test::loadFixture("embed.rpn");
  const NamedState& s = doc.state("s");
  const NamedState& sp = doc.state("sprime");
  auto f = leq(s.state, sp.state);
  REQUIRE(f.has_value());
  CHECK(embedding_valid(s.state, sp.state, *f));
  CHECK(f->map.at(s.vertexByName("a")) == sp.vertexByName("x"));
  CHECK(f->map.at(s.vertexByName("b")) == sp.vertexByName("y"));
}

TEST_CASE("embed fixture: no rooted embedding (the root of sprime is too small)") {
  Document doc = test::loadFixture("embed.rpn");
  CHECK_FALSE(leq_rooted(doc.state("s").state, doc.state("sprime").state).has_value());
}

TEST_CASE("the empty state embeds into everything, rootedly only into itself") {
  Document doc = test::loadFixture("embed.rpn");
  TreeState empty;
  auto f = leq(empty, doc.state("s").state);
  REQUIRE(f.has_value());
  CHECK(f->map.empty());
  CHECK_FALSE(leq_rooted(empty, doc.state("s").state).has_value());
  CHECK(leq_rooted(empty, TreeState{}).has_value());
}

TEST_CASE("chains antichain: all ordered pairs are incomparable") {
  Document doc = test::loadFixture("chains.rpn");
  std::vector<std::string> names{"s1", "s2", "s3", "s4", "s5", "s6"};
  for (const auto& a : names)
    for (const auto& b : names) {
      if (a == b) continue;
      CHECK_FALSE(leq(doc.state(a).state, doc.state(b).state).has_value());
    }
}

TEST_CASE("equivalent: vertex renaming and sibling permutation") {
  Document doc = test::loadFixture("workers.rpn");
  const NamedState& sTree = doc.state("sTree");
  TreeState renamed;
  renamed.addRoot(Marking{});  // id 0
  VertexId u = renamed.addChild(renamed.root(),
                                Marking::single(doc.net.placeId("p_fin").value()), Marking{});
  renamed.addChild(u, Marking::single(doc.net.placeId("p_b2").value()),
                   Marking::single(doc.net.placeId("p_end").value()));
  CHECK(equivalent(renamed, sTree.state));

  Document d5 = test::loadFixture("chains.rpn");
  CHECK_FALSE(equivalent(d5.state("s1").state, d5.state("s2").state));
}

TEST_CASE("leq_rooted success implies leq success; reflexivity is the identity") {
  Document doc = test::loadFixture("chains.rpn");
  const TreeState& s2 = doc.state("s2").state;
  auto f = leq_rooted(s2, s2);
  REQUIRE(f.has_value());
  for (const auto& [u, v] : f->map) CHECK(u == v);
  CHECK(leq(s2, s2).has_value());
}

TEST_CASE("property: quasi-order laws (reflexivity and transitivity)") {
  gen::Rng rng(424242);
  int done = 0;
  while (done < 200) {
    RpnDef def = gen::randomNet(rng);
    TreeState s = gen::randomState(rng, def);
    auto refl = leq(s, s);
    REQUIRE(refl.has_value());
    CHECK(embedding_valid(s, s, *refl));
    TreeState s2 = gen::inflate(rng, def, s);
    TreeState s3 = gen::inflate(rng, def, s2);
    auto f12 = leq(s, s2);
    auto f23 = leq(s2, s3);
    REQUIRE(f12.has_value());
    REQUIRE(f23.has_value());
    auto f13 = leq(s, s3);
    CHECK(f13.has_value());
    if (f13) CHECK(embedding_valid(s, s3, *f13));
    auto r12 = leq_rooted(s, s2);
    REQUIRE(r12.has_value());
    CHECK(embedding_valid(s, s2, *r12));
    CHECK(leq_rooted(s2, s3).has_value());
    CHECK(leq_rooted(s, s3).has_value());
    ++done;
  }
}

TEST_CASE("property: strong compatibility of leq and leq_rooted") {
  gen::Rng rng(31337);
  int done = 0;
  while (done < 200) {
    RpnDef def = gen::randomNet(rng);
    TreeState s = gen::randomState(rng, def);
    TreeState sp = gen::inflate(rng, def, s);
    for (bool rooted : {false, true}) {
      auto f = rooted ? leq_rooted(s, sp) : leq(s, sp);
      REQUIRE(f.has_value());
      Sequence walk = gen::randomWalk(rng, def, s, 1);
      if (walk.empty()) continue;
      FiringEvent ev = walk[0];
      // The same transition fires at the image vertex and preserves the order.
      FiringEvent evp{f->map.at(ev.vertex), ev.transition};
      CHECK(enabled(def, sp, evp));
      TreeState s1 = fire(def, s, ev).state;
      TreeState sp1 = fire(def, sp, evp).state;
      auto f1 = rooted ? leq_rooted(s1, sp1) : leq(s1, sp1);
      CHECK(f1.has_value());
      ++done;
    }
  }
}

TEST_CASE("property: returned embeddings always satisfy the witness invariants") {
  gen::Rng rng(86753);
  int done = 0;
  while (done < 200) {
    RpnDef def = gen::randomNet(rng);
    TreeState a = gen::randomState(rng, def);
    TreeState b = gen::randomState(rng, def, 6);
    if (auto f = leq(a, b)) {
      CHECK(embedding_valid(a, b, *f));
      ++done;
    }
    TreeState c = gen::inflate(rng, def, a);
    auto g = leq(a, c);
    REQUIRE(g.has_value());
    CHECK(embedding_valid(a, c, *g));
    ++done;
  }
}

TEST_CASE("comparison of 200-vertex chains stays polynomial-sized") {
  RpnDef def;
  def.addPlace("p");
  Transition t;
  t.name = "t";
  t.kind = TransKind::Abstract;
  t.pre = Marking::single(0);
  t.post = Marking::single(0);
  t.start = Marking::single(0);
  def.addTransition(std::move(t));

  auto chain = [&](std::size_t n) {
    TreeState s = TreeState::single(Marking::single(0));
    VertexId at = s.root();
    for (std::size_t i = 1; i < n; ++i) at = s.addChild(at, Marking::single(0), Marking::single(0));
    return s;
  };
  TreeState a = chain(200), b = chain(200);
  OrderStats stats;
  auto t0 = std::chrono::steady_clock::now();
  auto f = leq(a, b, &stats);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  REQUIRE(f.has_value());
  // One memoized evaluation per vertex pair at most.
  CHECK(stats.embedCalls <= 200 * 200);
  CHECK(ms < 2000);
}
