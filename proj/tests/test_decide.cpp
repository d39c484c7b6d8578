#include "rpnkit/decide.hpp"

#include <doctest.h>

#include "fixtures.hpp"
#include "gen.hpp"

using namespace rpn;

namespace {

CoverTarget singleNode(const Marking& m) {
  CoverTarget t;
  t.states.push_back(TreeState::single(m));
  return t;
}

// Explorer-based cover oracle; unknown (nullopt) when not exhausted.
std::optional<bool> oracleCover(const RpnDef& def, const TreeState& s0, const CoverTarget& target,
                                std::size_t capStates = 10000) {
  ExploreResult r = explore(def, s0, 200, capStates);
  for (const AbstractState& a : r.states)
    if (covers(concretize(a), target)) return true;
  if (!r.exhausted) return std::nullopt;
  return false;
}

std::optional<bool> oracleCut(const RpnDef& def, const TreeState& s0,
                              std::size_t capStates = 10000) {
  ExploreResult r = explore(def, s0, 200, capStates);
  if (r.index.count("E")) return true;
  if (!r.exhausted) return std::nullopt;
  return false;
}

}  // namespace

TEST_CASE("decide_cut on the workers instances") {
  Document doc = test::loadFixture("workers.rpn");
  Verdict fromBeg = decide_cut(doc.net, doc.state("sBeg").state, true);
  CHECK(fromBeg.answer);
  REQUIRE(fromBeg.witnessSequence.has_value());
  CHECK(fire_sequence(doc.net, doc.state("sBeg").state, *fromBeg.witnessSequence).isEmpty());

  Verdict fromIni = decide_cut(doc.net, doc.state("sIni").state, true);
  CHECK_FALSE(fromIni.answer);
  // The RPN state space from p_ini is infinite, so the cross-check runs on
  // the one-thread view: its three reachable markings cover no cut guard.
  PetriNet hatEl = build_hat_el(build_hat(doc.net));
  PnReachResult r =
      pn_reach_bounded(hatEl, Marking::single(doc.net.placeId("p_ini").value()), 50, 100);
  REQUIRE(r.exhausted);
  for (const Marking& m : r.markings)
    for (TransId tau : doc.net.ofKind(TransKind::Cut))
      CHECK_FALSE(doc.net.transitions[tau].pre.leq(m));

  // The tree state has a finite reach set, so the explorer is conclusive.
  CHECK_FALSE(decide_cut(doc.net, doc.state("sTree").state).answer);
  CHECK(oracleCut(doc.net, doc.state("sTree").state) == false);
}

TEST_CASE("decide_cut on the antichain state s2 with a replaying witness") {
  Document doc = test::loadFixture("chains.rpn");
  const TreeState& s2 = doc.state("s2").state;
  Verdict v = decide_cut(doc.net, s2, true);
  CHECK(v.answer);
  REQUIRE(v.witnessSequence.has_value());
  CHECK(fire_sequence(doc.net, s2, *v.witnessSequence).isEmpty());
}

TEST_CASE("decide_cut on the empty state") {
  Document doc = test::loadFixture("workers.rpn");
  Verdict v = decide_cut(doc.net, TreeState{}, true);
  CHECK(v.answer);
  CHECK(v.witnessSequence->empty());
}

TEST_CASE("decide_cover on the workers net: root, child and zero targets") {
  Document doc = test::loadFixture("workers.rpn");
  const TreeState& sIni = doc.state("sIni").state;
  PlaceId pfin = doc.net.placeId("p_fin").value();
  PlaceId pbeg = doc.net.placeId("p_beg").value();

  Verdict coverFin = decide_cover(doc.net, sIni, singleNode(Marking::single(pfin)));
  CHECK(coverFin.answer);
  CHECK(oracleCover(doc.net, sIni, singleNode(Marking::single(pfin))) == true);

  // Zero-marking single node is dominated by anything reachable.
  CHECK(decide_cover(doc.net, sIni, singleNode(Marking{})).answer);

  // p_beg appears only at a child vertex, so the anchor is below the root.
  Verdict coverBeg = decide_cover(doc.net, sIni, singleNode(Marking::single(pbeg)));
  CHECK(coverBeg.answer);
  CHECK(oracleCover(doc.net, sIni, singleNode(Marking::single(pbeg))) == true);
}

TEST_CASE("decide_cover with a two-vertex tree target") {
  Document doc = test::loadFixture("workers.rpn");
  const TreeState& sIni = doc.state("sIni").state;
  // Root 0, child p_end behind an edge labeled p_fin: reached by
  // (r, t_beg)(v, t_sb).
  CoverTarget target;
  TreeState tree = TreeState::single(Marking{});
  tree.addChild(tree.root(), Marking::single(doc.net.placeId("p_fin").value()),
                Marking::single(doc.net.placeId("p_end").value()));
  target.states.push_back(tree);
  CHECK(decide_cover(doc.net, sIni, target).answer);
  CHECK(oracleCover(doc.net, sIni, target) == true);
  // The construction materializes the metered preamble plus anchor, node,
  // and per-vertex cut families.
  RootedResult rooted = make_rooted(doc.net, sIni);
  CutInstance cut =
      cover_to_cut_construct(rooted.net, TreeState::single(rooted.initialMarking), target);
  CHECK(cut.net.hasTransition("__cut.tau_done"));
  CHECK(cut.net.hasPlace("__cut.p.0.0"));
  CHECK(cut.net.hasPlace("__cut.p.0.1"));
  CHECK(cut.net.hasPlace("__cut.e.0.1"));
  PlaceId run = cut.net.placeId("__cut.run").value();
  const Transition& trun = cut.net.transitions[cut.net.transId("__cut.t_run").value()];
  CHECK(trun.pre == Marking::single(run));
  CHECK(trun.post == Marking::single(run, 2));
  const Transition& tstart = cut.net.transitions[cut.net.transId("__cut.t_start").value()];
  CHECK(tstart.kind == TransKind::Abstract);
  // t_start seeds the simulation with m0 plus one run token (and, like every
  // abstract transition of the result, one cut token).
  Marking omega = Marking::single(doc.net.placeId("p_ini").value());
  omega.add(run, 1);
  omega.add(cut.net.placeId("__cut.cut").value(), 1);
  CHECK(tstart.omega() == omega);
  // Every original transition of the metered copy consumes a run token.
  for (const char* name : {"t_beg", "t_a1", "t_tau1"}) {
    const Transition& t = cut.net.transitions[cut.net.transId(name).value()];
    CHECK(t.pre.at(run) == 1);
  }
  // One anchor family member per abstract transition of the metered net
  // (three originals plus t_start), since the target root has no children
  // whose edge labels would constrain them.
  std::size_t anchors = 0, nodes = 0;
  for (const Transition& t : cut.net.transitions) {
    anchors += t.name.rfind("__cut.anch.", 0) == 0;
    nodes += t.name.rfind("__cut.node.", 0) == 0;
  }
  CHECK(anchors == 4);
  // Node family: only abstract transitions whose post dominates the target
  // edge label p_fin qualify; that is t_beg (post p_fin + run after metering).
  CHECK(nodes == 1);
}

TEST_CASE("decide_cover handles multi-state targets natively") {
  Document doc = test::loadFixture("workers.rpn");
  const TreeState& sIni = doc.state("sIni").state;
  PlaceId pfin = doc.net.placeId("p_fin").value();
  PlaceId pini = doc.net.placeId("p_ini").value();
  // Neither two-token state is coverable alone...
  CoverTarget hard;
  hard.states.push_back(TreeState::single(Marking::single(pfin, 2)));
  hard.states.push_back(TreeState::single(Marking::single(pini, 2)));
  CHECK_FALSE(decide_cover(doc.net, sIni, hard).answer);
  // ...but adding a coverable member flips the union.
  CoverTarget mixed = hard;
  mixed.states.push_back(TreeState::single(Marking::single(pfin)));
  CHECK(decide_cover(doc.net, sIni, mixed).answer);
}

TEST_CASE("cover_to_cut with the empty state in the target") {
  RpnDef def;
  def.addPlace("p");
  CoverTarget target;
  target.states.push_back(TreeState{});
  CutInstance cut = cover_to_cut_construct(def, TreeState::single(Marking::single(0)), target);
  CHECK(cut.net.places.size() == 2);       // p plus the root place
  CHECK(cut.net.transitions.size() == 1);  // the root cut only
  CHECK(decide_cut(cut.net, cut.s0).answer);
}

TEST_CASE("decide_termination on the workers net is NONTERMINATING with a cycle witness") {
  Document doc = test::loadFixture("workers.rpn");
  Verdict v = decide_termination(doc.net, doc.state("sIni").state);
  CHECK_FALSE(v.answer);
  REQUIRE(v.witnessCycle.has_value());
  CHECK_FALSE(v.witnessCycle->empty());
}

TEST_CASE("decide_termination: quiet net terminates; elementary pump does not") {
  RpnDef quiet;
  quiet.addPlace("p");
  CHECK(decide_termination(quiet, TreeState::single(Marking::single(0))).answer);

  // Acyclic abstract graph, but the one-thread view has a self-covering loop.
  RpnDef pump;
  pump.addPlace("p");
  Transition t;
  t.name = "t";
  t.kind = TransKind::Elementary;
  t.pre = Marking::single(0);
  t.post = Marking::single(0, 2);
  pump.addTransition(std::move(t));
  Verdict v = decide_termination(pump, TreeState::single(Marking::single(0)));
  CHECK_FALSE(v.answer);
  REQUIRE(v.witnessPetri.has_value());
  CHECK(*v.witnessPetri == std::vector<std::string>{"t"});
}

TEST_CASE("decide_boundedness: workers net bounded, pumps unbounded, deep pump found") {
  Document doc = test::loadFixture("workers.rpn");
  CHECK(decide_boundedness(doc.net, doc.state("sIni").state).answer);

  RpnDef pump;
  pump.addPlace("p");
  Transition t;
  t.name = "t";
  t.kind = TransKind::Elementary;
  t.pre = Marking::single(0);
  t.post = Marking::single(0, 2);
  pump.addTransition(std::move(t));
  CHECK_FALSE(decide_boundedness(pump, TreeState::single(Marking::single(0))).answer);

  // Unbounded only inside the spawned thread (at M_a(v_t), not at M_a(r)).
  RpnDef deep;
  PlaceId p = deep.addPlace("p");
  PlaceId q = deep.addPlace("q");
  Transition spawn;
  spawn.name = "spawn";
  spawn.kind = TransKind::Abstract;
  spawn.pre = Marking::single(p);
  spawn.start = Marking::single(q);
  deep.addTransition(std::move(spawn));
  Transition grow;
  grow.name = "grow";
  grow.kind = TransKind::Elementary;
  grow.pre = Marking::single(q);
  grow.post = Marking::single(q, 2);
  deep.addTransition(std::move(grow));
  Verdict v = decide_boundedness(deep, TreeState::single(Marking::single(p)));
  CHECK_FALSE(v.answer);
  CHECK(v.method == "karp-miller-omega@v_spawn");
  // And from the root alone the view is bounded.
  CHECK(pn_bounded(build_hat_el(build_hat(deep)), Marking::single(p)));
}

TEST_CASE("decide_finiteness: workers net infinite while bounded") {
  Document doc = test::loadFixture("workers.rpn");
  Verdict fin = decide_finiteness(doc.net, doc.state("sIni").state);
  CHECK_FALSE(fin.answer);
  CHECK(fin.witnessCycle.has_value());
  CHECK(decide_boundedness(doc.net, doc.state("sIni").state).answer);
}

TEST_CASE("decide_finiteness prechecks") {
  Document doc = test::loadFixture("workers.rpn");
  CHECK(decide_finiteness(doc.net, TreeState{}).answer);

  RpnDef free;
  free.addPlace("p");
  Transition t;
  t.name = "t";
  t.kind = TransKind::Abstract;
  t.start = Marking::single(0);
  free.addTransition(std::move(t));
  Verdict v = decide_finiteness(free, TreeState::single(Marking{}));
  CHECK_FALSE(v.answer);
  CHECK(v.method == "unguarded-abstract:t");
}

TEST_CASE("cut_to_cover mirrors the source cut answer") {
  Document doc = test::loadFixture("workers.rpn");
  for (const char* name : {"sBeg", "sIni"}) {
    const TreeState& s0 = doc.state(name).state;
    bool cut = decide_cut(doc.net, s0).answer;
    RootedResult rooted = make_rooted(doc.net, s0);
    CoverInstance cov = cut_to_cover_construct(rooted.net, TreeState::single(rooted.initialMarking));
    CHECK(decide_cover(cov.net, cov.s0, cov.target).answer == cut);
  }
  // An immediate zero-guard cut makes the cover trivially hold.
  RpnDef zero;
  zero.addPlace("p");
  Transition tau;
  tau.name = "tau";
  tau.kind = TransKind::Cut;
  zero.addTransition(std::move(tau));
  CoverInstance cov = cut_to_cover_construct(zero, TreeState::single(Marking::single(0)));
  CHECK(decide_cover(cov.net, cov.s0, cov.target).answer);
}

TEST_CASE("union_construct joins the sampled languages") {
  // Two single-letter nets: the union samples {eps, a} u {eps, b}.
  auto oneLetter = [](const std::string& letter) {
    CoverInstance inst;
    PlaceId p = inst.net.addPlace("p");
    PlaceId q = inst.net.addPlace("q");
    Transition t;
    t.name = "t";
    t.kind = TransKind::Elementary;
    t.pre = Marking::single(p);
    t.post = Marking::single(q);
    t.label = letter;
    inst.net.addTransition(std::move(t));
    inst.s0 = TreeState::single(Marking::single(p));
    inst.target.states.push_back(TreeState::single(Marking::single(q)));
    return inst;
  };
  CoverInstance a = oneLetter("a"), b = oneLetter("b");
  CoverInstance u = union_construct(a, b);
  SampleResult su = language_sample(u.net, u.s0, u.target, 3);
  SampleResult sa = language_sample(a.net, a.s0, a.target, 3);
  SampleResult sb = language_sample(b.net, b.s0, b.target, 3);
  std::set<std::vector<std::string>> expected = sa.words;
  expected.insert(sb.words.begin(), sb.words.end());
  CHECK(su.words == expected);

  // Union with an empty-language side is the other side's language.
  CoverInstance dead = oneLetter("c");
  dead.target.states.clear();
  dead.target.states.push_back(
      TreeState::single(Marking::single(dead.net.placeId("p").value(), 5)));
  CoverInstance u2 = union_construct(a, dead);
  CHECK(language_sample(u2.net, u2.s0, u2.target, 3).words == sa.words);

  // Self-union keeps the language.
  CoverInstance u3 = union_construct(a, a);
  CHECK(language_sample(u3.net, u3.s0, u3.target, 3).words == sa.words);
}

TEST_CASE("property: decide_cover is monotone in the target") {
  gen::Rng rng(708090);
  int done = 0;
  while (done < 40) {
    RpnDef def = gen::randomNet(rng, {3, 4, 1});
    TreeState s0 = TreeState::single(gen::randomMarking(rng, def.places.size(), 1, 2));
    TreeState sf = gen::randomState(rng, def, 2);
    CoverTarget big = {{gen::inflate(rng, def, sf)}};
    if (!decide_cover(def, s0, big).answer) continue;
    // Shrinking the target preserves the answer.
    CHECK(decide_cover(def, s0, {{sf}}).answer);
    ++done;
  }
}

TEST_CASE("property: every thread marking lies in a one-thread reach set") {
  Document doc = test::loadFixture("workers.rpn");
  PetriNet hatEl = build_hat_el(build_hat(doc.net));
  AbstractGraph g =
      build_abstract_graph(doc.net, Marking::single(doc.net.placeId("p_ini").value()));
  std::set<Marking> covered;
  for (std::size_t u = 0; u < g.names.size(); ++u) {
    PnReachResult r = pn_reach_bounded(hatEl, g.markingOf[u], 200, 5000);
    REQUIRE(r.exhausted);
    covered.insert(r.markings.begin(), r.markings.end());
  }
  gen::Rng rng(1029384756);
  std::size_t observed = 0;
  while (observed < 10000) {
    TreeState s = doc.state("sIni").state;
    for (int step = 0; step < 12; ++step) {
      Sequence w = gen::randomWalk(rng, doc.net, s, 1);
      if (w.empty()) break;
      s = fire(doc.net, s, w[0]).state;
      if (s.isEmpty()) break;
      for (VertexId v : s.vertices()) {
        CHECK(covered.count(s.vertex(v).marking) == 1);
        ++observed;
      }
    }
  }
}
