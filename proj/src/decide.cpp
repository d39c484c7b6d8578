#include "rpnkit/decide.hpp"

#include <algorithm>

namespace rpn {

namespace {

std::string freshPlace(RpnDef& net, const std::string& want) {
  if (net.hasPlace(want) || net.hasTransition(want))
    throw Error("id-collision", "generated id '" + want + "' collides with a declared id");
  return want;
}

std::string freshTrans(const RpnDef& net, const std::string& want) {
  if (net.hasPlace(want) || net.hasTransition(want))
    throw Error("id-collision", "generated id '" + want + "' collides with a declared id");
  return want;
}

void checkTarget(const RpnDef& def, const CoverTarget& target) {
  if (target.states.empty()) throw Error("malformed-target", "cover target is empty");
  for (const TreeState& s : target.states)
    for (VertexId v : s.vertices()) {
      for (const auto& [p, n] : s.vertex(v).marking)
        if (p >= def.places.size())
          throw Error("malformed-target", "target marking uses an undeclared place");
      for (const auto& [p, n] : s.vertex(v).edgeLabel)
        if (p >= def.places.size())
          throw Error("malformed-target", "target edge label uses an undeclared place");
    }
}

}  // namespace

Verdict decide_cut(const RpnDef& def, const TreeState& s0, bool wantWitness,
                   std::size_t witnessCap) {
  Verdict v;
  if (s0.isEmpty()) {
    v.answer = true;
    v.method = "empty-state";
    if (wantWitness) v.witnessSequence = Sequence{};
    return v;
  }
  RootedResult rooted = make_rooted(def, s0);
  HatNet hat = build_hat(rooted.net, &v.stats.coverabilityCalls);
  PetriNet hatEl = build_hat_el(hat);
  v.method = "rooted+hatel-backward-cover";
  for (TransId tau : rooted.net.ofKind(TransKind::Cut)) {
    ++v.stats.coverabilityCalls;
    CoverWitness cw =
        pn_cover_witness(hatEl, rooted.initialMarking, rooted.net.transitions[tau].pre, witnessCap);
    if (!cw.coverable) continue;
    v.answer = true;
    if (wantWitness && !cw.truncated) {
      try {
        TreeState reached;
        Sequence lifted = lift_hat_el_sequence(hat, rooted.initialMarking, cw.firings, &reached);
        lifted.push_back({reached.root(), tau});
        v.witnessSequence = project_rooted_sequence(rooted, def, s0, lifted);
      } catch (const Error& e) {
        if (e.code != "missing-witness") throw;  // answer stands without a witness
      }
    }
    return v;
  }
  v.answer = false;
  return v;
}

Verdict decide_cover(const RpnDef& def, const TreeState& s0, const CoverTarget& target) {
  checkTarget(def, target);
  Verdict v;
  if (s0.isEmpty()) {
    v.answer = std::any_of(target.states.begin(), target.states.end(),
                           [](const TreeState& s) { return s.isEmpty(); });
    v.method = "empty-state";
    return v;
  }
  RootedResult rooted = make_rooted(def, s0);
  CutInstance cut =
      cover_to_cut_construct(rooted.net, TreeState::single(rooted.initialMarking), target);
  Verdict inner = decide_cut(cut.net, cut.s0, false);
  v.answer = inner.answer;
  v.method = "rooted+cover-to-cut+" + inner.method;
  v.stats = inner.stats;
  return v;
}

Verdict decide_termination(const RpnDef& def, const TreeState& s0) {
  Verdict v;
  if (s0.isEmpty()) {
    v.answer = true;
    v.method = "empty-state";
    return v;
  }
  RootedResult rooted = make_rooted(def, s0);
  HatNet hat = build_hat(rooted.net, &v.stats.coverabilityCalls);
  PetriNet hatEl = build_hat_el(hat);
  AbsGraphStats gs;
  AbstractGraph g = build_abstract_graph_over(rooted.net, hatEl, rooted.initialMarking, &gs);
  v.stats.coverabilityCalls += gs.coverabilityCalls;
  if (auto cycle = has_cycle(g)) {
    v.answer = false;
    v.method = "abstract-graph-cycle";
    std::vector<std::string> names;
    for (int i : *cycle) names.push_back(g.names[static_cast<std::size_t>(i)]);
    v.witnessCycle = std::move(names);
    return v;
  }
  for (std::size_t u = 0; u < g.names.size(); ++u) {
    TerminationResult tr = pn_terminates(hatEl, g.markingOf[u]);
    if (tr.terminates) continue;
    v.answer = false;
    v.method = "hatel-self-cover@" + g.names[u];
    std::vector<std::string> names;
    for (TransId t : tr.selfCover) names.push_back(hatEl.transitions[t].name);
    v.witnessPetri = std::move(names);
    return v;
  }
  v.answer = true;
  v.method = "abstract-graph-acyclic+hatel-terminates";
  return v;
}

Verdict decide_boundedness(const RpnDef& def, const TreeState& s0) {
  Verdict v;
  if (s0.isEmpty()) {
    v.answer = true;
    v.method = "empty-state";
    return v;
  }
  RootedResult rooted = make_rooted(def, s0);
  HatNet hat = build_hat(rooted.net, &v.stats.coverabilityCalls);
  PetriNet hatEl = build_hat_el(hat);
  AbsGraphStats gs;
  AbstractGraph g = build_abstract_graph_over(rooted.net, hatEl, rooted.initialMarking, &gs);
  v.stats.coverabilityCalls += gs.coverabilityCalls;
  v.method = "abstract-graph+karp-miller";
  v.answer = true;
  for (std::size_t u = 0; u < g.names.size(); ++u) {
    KmTree tree = karp_miller(hatEl, g.markingOf[u]);
    v.stats.kmNodes += tree.nodes.size();
    if (tree.sawOmega) {
      v.answer = false;
      v.method = "karp-miller-omega@" + g.names[u];
      return v;
    }
  }
  return v;
}

Verdict decide_finiteness(const RpnDef& def, const TreeState& s0) {
  Verdict v;
  if (s0.isEmpty()) {
    v.answer = true;
    v.method = "empty-state";
    return v;
  }
  for (TransId t : def.ofKind(TransKind::Abstract)) {
    if (def.transitions[t].pre.empty()) {
      // An unguarded abstract transition spawns threads forever.
      v.answer = false;
      v.method = "unguarded-abstract:" + def.transitions[t].name;
      return v;
    }
  }
  RootedResult rooted = make_rooted(def, s0);
  HatNet hat = build_hat(rooted.net, &v.stats.coverabilityCalls);
  PetriNet hatEl = build_hat_el(hat);
  AbsGraphStats gs;
  AbstractGraph g = build_abstract_graph_over(rooted.net, hatEl, rooted.initialMarking, &gs);
  v.stats.coverabilityCalls += gs.coverabilityCalls;
  if (auto cycle = has_cycle(g)) {
    v.answer = false;
    v.method = "abstract-graph-cycle";
    std::vector<std::string> names;
    for (int i : *cycle) names.push_back(g.names[static_cast<std::size_t>(i)]);
    v.witnessCycle = std::move(names);
    return v;
  }
  for (std::size_t u = 0; u < g.names.size(); ++u) {
    KmTree tree = karp_miller(hatEl, g.markingOf[u]);
    v.stats.kmNodes += tree.nodes.size();
    if (tree.sawOmega) {
      v.answer = false;
      v.method = "karp-miller-omega@" + g.names[u];
      return v;
    }
  }
  v.answer = true;
  v.method = "abstract-graph-acyclic+karp-miller";
  return v;
}

CutInstance cover_to_cut_construct(const RpnDef& def, const TreeState& s0,
                                   const CoverTarget& target) {
  if (s0.isEmpty() || s0.vertexCount() != 1)
    throw Error("precondition", "cover_to_cut_construct expects a single-vertex initial state");
  checkTarget(def, target);
  Marking m0 = s0.vertex(s0.root()).marking;

  bool hasEmptyTarget = std::any_of(target.states.begin(), target.states.end(),
                                    [](const TreeState& s) { return s.isEmpty(); });
  if (hasEmptyTarget) {
    // Covering the empty state holds after any firing sequence, so one fresh
    // root token plus an always-available root cut decides it.
    CutInstance out;
    out.net = def;
    PlaceId root = out.net.addPlace(freshPlace(out.net, "__cut.root"));
    Transition troot;
    troot.name = freshTrans(out.net, "__cut.t_root");
    troot.kind = TransKind::Cut;
    troot.pre = Marking::single(root);
    out.net.addTransition(std::move(troot));
    out.s0 = TreeState::single(m0.plus(Marking::single(root)));
    return out;
  }

  // Star preamble: move the simulation one level down and meter every firing
  // with run tokens that t_run pumps on demand.
  RpnDef star = def;
  PlaceId startP = star.addPlace(freshPlace(star, "__cut.start"));
  PlaceId runP = star.addPlace(freshPlace(star, "__cut.run"));
  for (Transition& t : star.transitions) {
    t.pre.add(runP, 1);
    if (t.kind == TransKind::Abstract) {
      t.post.add(runP, 1);
      t.start->add(runP, 1);
    }
  }
  {
    Transition trun;
    trun.name = freshTrans(star, "__cut.t_run");
    trun.kind = TransKind::Elementary;
    trun.pre = Marking::single(runP);
    trun.post = Marking::single(runP, 2);
    star.addTransition(std::move(trun));
    Transition tstart;
    tstart.name = freshTrans(star, "__cut.t_start");
    tstart.kind = TransKind::Abstract;
    tstart.pre = Marking::single(startP);
    tstart.start = m0.plus(Marking::single(runP));
    star.addTransition(std::move(tstart));
  }
  Marking starM0 = Marking::single(startP);
  // Target states follow the star net: every marking, edge labels included,
  // gains one run token.
  std::vector<TreeState> starTargets;
  for (const TreeState& s : target.states) {
    TreeState rebuilt;
    std::map<VertexId, VertexId> ids;
    for (VertexId v : s.vertices()) {
      const auto& vx = s.vertex(v);
      Marking m = vx.marking.plus(Marking::single(runP));
      if (vx.parent == kNoVertex)
        ids[v] = rebuilt.addRoot(m);
      else
        ids[v] = rebuilt.addChild(ids.at(vx.parent), vx.edgeLabel.plus(Marking::single(runP)), m);
    }
    starTargets.push_back(std::move(rebuilt));
  }

  // Main construction over the star net.
  CutInstance out;
  out.net = star;
  RpnDef& net = out.net;
  PlaceId todo = net.addPlace(freshPlace(net, "__cut.todo"));
  PlaceId done = net.addPlace(freshPlace(net, "__cut.done"));
  PlaceId cutP = net.addPlace(freshPlace(net, "__cut.cut"));

  // One place per target vertex and per target edge; names are keyed by the
  // target state's position so distinctness never depends on input ids.
  std::map<std::pair<std::size_t, VertexId>, PlaceId> pv;
  std::map<std::pair<std::size_t, VertexId>, PlaceId> pedge;  // keyed by the child vertex
  for (std::size_t si = 0; si < starTargets.size(); ++si) {
    for (VertexId v : starTargets[si].vertices()) {
      pv[{si, v}] = net.addPlace(
          freshPlace(net, "__cut.p." + std::to_string(si) + "." + std::to_string(v)));
      if (starTargets[si].vertex(v).parent != kNoVertex)
        pedge[{si, v}] = net.addPlace(
            freshPlace(net, "__cut.e." + std::to_string(si) + "." + std::to_string(v)));
    }
  }

  std::size_t nStarTransitions = net.transitions.size();
  for (std::size_t i = 0; i < nStarTransitions; ++i) {
    Transition& t = net.transitions[i];
    if (t.kind == TransKind::Abstract)
      t.start->add(cutP, 1);
    else if (t.kind == TransKind::Cut)
      t.pre.add(cutP, 1);
  }

  // Families t_Br, t_{r_s}, t_v per abstract transition of the star net. Note
  // the Omegas below use the pre-cut-token Omega of the star net.
  for (std::size_t i = 0; i < nStarTransitions; ++i) {
    const Transition t = net.transitions[i];  // copy; we append while iterating
    if (t.kind != TransKind::Abstract) continue;
    Marking omegaStar = t.start->minus(Marking::single(cutP));
    {
      Transition br;
      br.name = freshTrans(net, "__cut.br." + t.name);
      br.kind = TransKind::Abstract;
      br.pre = t.pre.plus(Marking::single(todo));
      br.post = Marking::single(done);
      br.start = omegaStar.plus(Marking::single(todo));
      br.label = t.label;
      net.addTransition(std::move(br));
    }
    for (std::size_t si = 0; si < starTargets.size(); ++si) {
      const TreeState& sf = starTargets[si];
      for (VertexId v : sf.vertices()) {
        const auto& vx = sf.vertex(v);
        std::size_t deg = vx.children.size();
        if (vx.parent == kNoVertex) {
          Transition anch;
          anch.name = freshTrans(net, "__cut.anch." + std::to_string(si) + "." + t.name);
          anch.kind = TransKind::Abstract;
          anch.pre = t.pre.plus(Marking::single(todo));
          anch.post = Marking::single(done);
          anch.start = omegaStar.plus(Marking::single(pv.at({si, v}), deg + 1));
          anch.label = t.label;
          net.addTransition(std::move(anch));
        } else if (vx.edgeLabel.leq(t.post)) {
          Transition node;
          node.name = freshTrans(net, "__cut.node." + std::to_string(si) + "." +
                                          std::to_string(v) + "." + t.name);
          node.kind = TransKind::Abstract;
          node.pre = t.pre.plus(Marking::single(pv.at({si, vx.parent})));
          node.post = Marking::single(pedge.at({si, v}));
          node.start = omegaStar.plus(Marking::single(pv.at({si, v}), deg + 1));
          node.label = t.label;
          net.addTransition(std::move(node));
        }
      }
    }
  }

  {
    Transition tauDone;
    tauDone.name = freshTrans(net, "__cut.tau_done");
    tauDone.kind = TransKind::Cut;
    tauDone.pre = Marking::single(done);
    net.addTransition(std::move(tauDone));
  }
  for (std::size_t si = 0; si < starTargets.size(); ++si) {
    const TreeState& sf = starTargets[si];
    for (VertexId v : sf.vertices()) {
      Transition tau;
      tau.name =
          freshTrans(net, "__cut.tau." + std::to_string(si) + "." + std::to_string(v));
      tau.kind = TransKind::Cut;
      tau.pre = sf.vertex(v).marking.plus(Marking::single(pv.at({si, v})));
      for (VertexId w : sf.vertex(v).children) tau.pre.add(pedge.at({si, w}), 1);
      net.addTransition(std::move(tau));
    }
  }

  out.s0 = TreeState::single(starM0.plus(Marking::single(todo)));
  return out;
}

CoverInstance cut_to_cover_construct(const RpnDef& def, const TreeState& s0) {
  if (s0.isEmpty() || s0.vertexCount() != 1)
    throw Error("precondition", "cut_to_cover_construct expects a single-vertex initial state");
  CoverInstance out;
  out.net = def;
  PlaceId todo = out.net.addPlace(freshPlace(out.net, "__cov.todo"));
  PlaceId done = out.net.addPlace(freshPlace(out.net, "__cov.done"));
  Transition start;
  start.name = freshTrans(out.net, "__cov.start");
  start.kind = TransKind::Abstract;
  start.pre = Marking::single(todo);
  start.post = Marking::single(done);
  start.start = s0.vertex(s0.root()).marking;
  out.net.addTransition(std::move(start));
  out.s0 = TreeState::single(Marking::single(todo));
  out.target.states.push_back(TreeState::single(Marking::single(done)));
  return out;
}

CoverInstance union_construct(const CoverInstance& a, const CoverInstance& b) {
  if (a.s0.vertexCount() != 1 || b.s0.vertexCount() != 1)
    throw Error("precondition", "union_construct expects single-vertex initial states");
  checkTarget(a.net, a.target);
  checkTarget(b.net, b.target);

  CoverInstance out;
  RpnDef& net = out.net;
  // Left side keeps its ids; the right side is uniformly prefixed so
  // self-union stays well-defined.
  for (const std::string& p : a.net.places) net.addPlace(p);
  std::vector<PlaceId> bPlace(b.net.places.size());
  for (PlaceId p = 0; p < b.net.places.size(); ++p)
    bPlace[p] = net.addPlace(freshPlace(net, "__un.b." + b.net.places[p]));
  PlaceId p0 = net.addPlace(freshPlace(net, "__un.p0"));
  PlaceId pA = net.addPlace(freshPlace(net, "__un.pA"));
  PlaceId pB = net.addPlace(freshPlace(net, "__un.pB"));

  auto remap = [&](const Marking& m) {
    Marking r;
    for (const auto& [p, n] : m) r.add(bPlace.at(p), n);
    return r;
  };

  for (const Transition& t : a.net.transitions) {
    Transition nt = t;
    nt.pre.add(pA, 1);
    if (nt.start) nt.start->add(pA, 1);
    net.addTransition(std::move(nt));
  }
  for (const Transition& t : b.net.transitions) {
    Transition nt;
    nt.name = freshTrans(net, "__un.b." + t.name);
    nt.kind = t.kind;
    nt.pre = remap(t.pre).plus(Marking::single(pB));
    nt.post = remap(t.post);
    if (t.start) nt.start = remap(*t.start).plus(Marking::single(pB));
    nt.label = t.label;
    net.addTransition(std::move(nt));
  }
  {
    Transition tb;
    tb.name = freshTrans(net, "__un.tbA");
    tb.kind = TransKind::Elementary;
    tb.pre = Marking::single(p0);
    tb.post = a.s0.vertex(a.s0.root()).marking.plus(Marking::single(pA));
    net.addTransition(std::move(tb));
    Transition tbp;
    tbp.name = freshTrans(net, "__un.tbB");
    tbp.kind = TransKind::Elementary;
    tbp.pre = Marking::single(p0);
    tbp.post = remap(b.s0.vertex(b.s0.root()).marking).plus(Marking::single(pB));
    net.addTransition(std::move(tbp));
    Transition tc;
    tc.name = freshTrans(net, "__un.tcA");
    tc.kind = TransKind::Elementary;
    tc.pre = Marking::single(pA);
    tc.post = Marking::single(pA, 2);
    net.addTransition(std::move(tc));
    Transition tcp;
    tcp.name = freshTrans(net, "__un.tcB");
    tcp.kind = TransKind::Elementary;
    tcp.pre = Marking::single(pB);
    tcp.post = Marking::single(pB, 2);
    net.addTransition(std::move(tcp));
  }

  auto bumpStates = [&](const std::vector<TreeState>& states, PlaceId branch, bool doRemap) {
    std::vector<TreeState> outStates;
    for (const TreeState& s : states) {
      TreeState rebuilt;
      std::map<VertexId, VertexId> ids;
      for (VertexId v : s.vertices()) {
        const auto& vx = s.vertex(v);
        Marking m = doRemap ? remap(vx.marking) : vx.marking;
        m.add(branch, 1);
        if (vx.parent == kNoVertex)
          ids[v] = rebuilt.addRoot(m);
        else
          ids[v] = rebuilt.addChild(ids.at(vx.parent),
                                    doRemap ? remap(vx.edgeLabel) : vx.edgeLabel, m);
      }
      outStates.push_back(std::move(rebuilt));
    }
    return outStates;
  };
  for (TreeState& s : bumpStates(a.target.states, pA, false)) out.target.states.push_back(std::move(s));
  for (TreeState& s : bumpStates(b.target.states, pB, true)) out.target.states.push_back(std::move(s));

  out.s0 = TreeState::single(Marking::single(p0));
  return out;
}

}  // namespace rpn
