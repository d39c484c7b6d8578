#include "rpnkit/explore.hpp"

#include <doctest.h>

#include "rpnkit/reduce.hpp"

#include "fixtures.hpp"
#include "gen.hpp"

using namespace rpn;

namespace {

std::set<std::string> wordSet(const SampleResult& r) {
  std::set<std::string> out;
  for (const auto& w : r.words) {
    std::string joined;
    for (const auto& l : w) joined += l;
    out.insert(joined);
  }
  return out;
}

// Independent enumeration of { a^m b^n c^p | m >= n >= p, m+n+p <= maxLen }.
std::set<std::string> l1UpTo(std::size_t maxLen) {
  std::set<std::string> out;
  for (std::size_t m = 0; m <= maxLen; ++m)
    for (std::size_t n = 0; n <= m; ++n)
      for (std::size_t p = 0; p <= n; ++p) {
        if (m + n + p > maxLen) continue;
        out.insert(std::string(m, 'a') + std::string(n, 'b') + std::string(p, 'c'));
      }
  return out;
}

std::vector<std::string> letters(const std::string& w) {
  std::vector<std::string> out;
  for (char c : w) out.emplace_back(1, c);
  return out;
}

}  // namespace

TEST_CASE("explore from the empty state is just the empty state") {
  Document doc = test::loadFixture("workers.rpn");
  ExploreResult r = explore(doc.net, TreeState{}, 10, 10);
  CHECK(r.exhausted);
  CHECK(r.states.size() == 1);
  CHECK(r.states[0].empty);
}

TEST_CASE("explore from s[r, p_beg] reaches the empty state and growing chains") {
  Document doc = test::loadFixture("workers.rpn");
  ExploreResult r = explore(doc.net, doc.state("sBeg").state, 10, 1000);
  CHECK(r.index.count("E") == 1);  // the empty state
  // Hand enumeration to depth 2: t_a1 then t_a2 leaves the root empty with a
  // fresh child marked p_beg behind an edge labeled p_a2.
  TreeState chain = TreeState::single(Marking{});
  chain.addChild(chain.root(), Marking::single(doc.net.placeId("p_a2").value()),
                 Marking::single(doc.net.placeId("p_beg").value()));
  CHECK(r.index.count(abstraction(chain).serialize()) == 1);
}

TEST_CASE("explore on the antichain net passes through every s_n below the cap") {
  Document d = test::loadFixture("chains.rpn");
  ExploreResult r = explore(d.net, d.state("sInit").state, 14, 4000);
  for (const char* sn : {"s1", "s2", "s3", "s4"})
    CHECK(r.index.count(abstraction(d.state(sn).state).serialize()) == 1);
  CHECK_FALSE(r.exhausted);  // the chain family grows forever
}

TEST_CASE("exhausted exploration is a fixed point") {
  // The workers tree state has no way to spawn, so its reach set is finite.
  Document doc = test::loadFixture("workers.rpn");
  ExploreResult a = explore(doc.net, doc.state("sTree").state, 1000, 100000);
  REQUIRE(a.exhausted);
  ExploreResult b = explore(doc.net, doc.state("sTree").state, 2000, 200000);
  CHECK(b.exhausted);
  CHECK(a.states.size() == b.states.size());
}

TEST_CASE("member on the L1 net") {
  Document doc = test::loadFixture("abc.rpn");
  const TreeState& s0 = doc.state("sIni").state;
  CoverTarget target = doc.target("tF");
  MemberResult yes = member(doc.net, s0, target, letters("aabc"), 64);
  CHECK(yes.verdict == Membership::Yes);
  // The witness replays and its label projection is the word.
  TreeState cur = s0;
  std::string emitted;
  for (const FiringEvent& e : yes.witness) {
    cur = fire(doc.net, cur, e).state;
    emitted += doc.net.transitions[e.transition].label;
  }
  CHECK(emitted == "aabc");
  CHECK(covers(cur, target));

  CHECK(member(doc.net, s0, target, letters("abbc"), 64).verdict ==
        Membership::NoWithinBound);
}

TEST_CASE("member: empty word is a yes when the start already covers") {
  Document doc = test::loadFixture("abc.rpn");
  CoverTarget startTarget;
  startTarget.states.push_back(TreeState::single(Marking::single(doc.net.placeId("p1").value())));
  MemberResult r = member(doc.net, doc.state("sIni").state, startTarget, {}, 16);
  CHECK(r.verdict == Membership::Yes);
  CHECK(r.witness.empty());
}

TEST_CASE("language_sample matches L1 exactly at maxLen 3 and 5") {
  Document doc = test::loadFixture("abc.rpn");
  const TreeState& s0 = doc.state("sIni").state;
  CoverTarget target = doc.target("tF");
  SampleResult r3 = language_sample(doc.net, s0, target, 3);
  CHECK_FALSE(r3.capExceeded);
  CHECK(wordSet(r3) == l1UpTo(3));
  SampleResult r5 = language_sample(doc.net, s0, target, 5);
  CHECK_FALSE(r5.capExceeded);
  CHECK(wordSet(r5) == l1UpTo(5));
}

TEST_CASE("language_sample contains the empty word when s0 dominates the target") {
  Document doc = test::loadFixture("abc.rpn");
  CoverTarget startTarget;
  startTarget.states.push_back(TreeState::single(Marking::single(doc.net.placeId("p1").value())));
  SampleResult r = language_sample(doc.net, doc.state("sIni").state, startTarget, 2);
  CHECK(r.words.count({}) == 1);
}

TEST_CASE("property: exhausted explorations of the base net and its hat agree") {
  gen::Rng rng(44556677);
  int done = 0;
  while (done < 200) {
    RpnDef def = gen::randomNet(rng, {3, 4, 1});
    HatNet hat = build_hat(def);
    TreeState s0 = TreeState::single(gen::randomMarking(rng, def.places.size(), 1, 2));
    ExploreResult base = explore(def, s0, 60, 3000);
    if (!base.exhausted) continue;
    ExploreResult hatted = explore(hat.net, s0, 60, 3000);
    if (!hatted.exhausted) continue;
    std::set<std::string> sb, sh;
    for (const auto& [k, _] : base.index) sb.insert(k);
    for (const auto& [k, _] : hatted.index) sh.insert(k);
    CHECK(sb == sh);
    ++done;
  }
}
