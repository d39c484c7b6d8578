#include "rpnkit/reduce.hpp"

#include <algorithm>
#include <cassert>

namespace rpn {

namespace {

std::string freshName(const RpnDef& def, const std::string& want) {
  if (!def.hasPlace(want) && !def.hasTransition(want)) return want;
  throw Error("id-collision", "generated id '" + want + "' collides with a declared id");
}

// Shortcut names must stay unique even when the input already carries
// shortcuts (hat of a hat), so collisions get primes instead of errors.
std::string uniqueName(const RpnDef& def, std::string want) {
  while (def.hasPlace(want) || def.hasTransition(want)) want += '\'';
  return want;
}

}  // namespace

RootedResult make_rooted(const RpnDef& def, const TreeState& s0) {
  if (s0.isEmpty()) throw Error("empty-initial-state", "cannot root the empty state");
  RootedResult out;
  out.net = def;
  if (s0.vertexCount() == 1) {
    out.initialMarking = s0.vertex(s0.root()).marking;
    out.identity = true;
    return out;
  }
  for (VertexId v : s0.vertices()) {
    if (v == s0.root()) continue;
    PlaceId pv = out.net.addPlace(freshName(out.net, "__root.p" + std::to_string(v)));
    out.vertexPlace[v] = pv;
  }
  for (VertexId v : s0.vertices()) {
    if (v == s0.root()) continue;
    Transition tv;
    tv.name = freshName(out.net, "__root.t" + std::to_string(v));
    tv.kind = TransKind::Abstract;
    tv.pre = Marking::single(out.vertexPlace.at(v));
    tv.post = s0.vertex(v).edgeLabel;
    Marking omega = s0.vertex(v).marking;
    for (VertexId c : s0.vertex(v).children) omega.add(out.vertexPlace.at(c), 1);
    tv.start = omega;
    TransId id = out.net.addTransition(std::move(tv));
    out.spawnerVertex[id] = v;
  }
  out.initialMarking = s0.vertex(s0.root()).marking;
  for (VertexId c : s0.vertex(s0.root()).children)
    out.initialMarking.add(out.vertexPlace.at(c), 1);
  return out;
}

Sequence project_rooted_sequence(const RootedResult& rooted, const RpnDef& original,
                                 const TreeState& s0, const Sequence& seq) {
  if (rooted.identity) return seq;
  Sequence out;
  TreeState rootedState = TreeState::single(rooted.initialMarking);
  // Give the original replay the same fresh-id baseline so both sides create
  // matching ids once the spawner firings are out of the way.
  TreeState origState = s0;
  std::map<VertexId, VertexId> toOrig;  // rooted-state vertex -> original vertex
  toOrig[rootedState.root()] = s0.root();
  for (const FiringEvent& ev : seq) {
    auto spawner = rooted.spawnerVertex.find(ev.transition);
    FireResult r = fire(rooted.net, rootedState, ev);
    if (spawner != rooted.spawnerVertex.end()) {
      // Spawner firing: the created vertex plays the original vertex's role.
      toOrig[*r.created] = spawner->second;
      rootedState = std::move(r.state);
      continue;
    }
    VertexId origVertex = toOrig.at(ev.vertex);
    FireResult ro = fire(original, origState, {origVertex, ev.transition});
    if (r.created) toOrig[*r.created] = *ro.created;
    out.push_back({origVertex, ev.transition});
    rootedState = std::move(r.state);
    origState = std::move(ro.state);
  }
  return out;
}

PetriNet build_hat_el_partial(const RpnDef& base, const std::vector<TransId>& returning) {
  PetriNet pn;
  pn.places = base.places;
  for (TransId t = 0; t < base.transitions.size(); ++t) {
    const Transition& tr = base.transitions[t];
    if (tr.kind == TransKind::Cut) continue;
    PnTransition pt;
    pt.name = tr.name;
    pt.pre = tr.pre;
    pt.post = tr.kind == TransKind::Abstract ? Marking{} : tr.post;
    pt.label = tr.label;
    pn.transitions.push_back(std::move(pt));
  }
  for (TransId t : returning) {
    const Transition& tr = base.transitions[t];
    PnTransition sc;
    sc.name = tr.name + "^r";
    sc.pre = tr.pre;
    sc.post = tr.post;
    sc.label = tr.label;
    pn.transitions.push_back(std::move(sc));
  }
  return pn;
}

namespace {

// Rebuilds an RPN firing sequence (all at the root) from a Petri firing
// sequence over a partial hat_el net: original transitions fire as
// themselves, shortcut firings expand to the abstract firing followed by the
// stored witness replayed in the fresh child.
Sequence liftPetriSequence(const RpnDef& base, const std::vector<TransId>& returning,
                           const std::map<TransId, Sequence>& witnesses,
                           const std::vector<TransId>& petriFirings, TreeState& state) {
  // Petri transition indices: non-cut base transitions in order, then
  // shortcuts in `returning` order.
  std::vector<TransId> petriToBase;
  std::vector<char> petriIsShortcut;
  for (TransId t = 0; t < base.transitions.size(); ++t) {
    if (base.transitions[t].kind == TransKind::Cut) continue;
    petriToBase.push_back(t);
    petriIsShortcut.push_back(0);
  }
  for (TransId t : returning) {
    petriToBase.push_back(t);
    petriIsShortcut.push_back(1);
  }

  Sequence out;
  VertexId root = state.root();
  for (TransId pf : petriFirings) {
    TransId bt = petriToBase.at(pf);
    if (!petriIsShortcut.at(pf)) {
      out.push_back({root, bt});
      state = fire(base, state, {root, bt}).state;
      continue;
    }
    // Expand the shortcut: create the child, replay the witness inside it.
    auto witIt = witnesses.find(bt);
    if (witIt == witnesses.end())
      throw Error("missing-witness", "no witness stored for " + base.transitions[bt].name);
    FireResult r = fire(base, state, {root, bt});
    out.push_back({root, bt});
    VertexId child = *r.created;
    state = std::move(r.state);
    const Sequence& wit = witIt->second;
    // The witness was recorded from s[0, Omega(bt)]; remap its ids.
    TreeState shadow = TreeState::single(base.transitions[bt].omega());
    std::map<VertexId, VertexId> remap{{shadow.root(), child}};
    for (const FiringEvent& we : wit) {
      FireResult sr = fire(base, shadow, we);
      VertexId actual = remap.at(we.vertex);
      FireResult ar = fire(base, state, {actual, we.transition});
      if (sr.created) remap[*sr.created] = *ar.created;
      out.push_back({actual, we.transition});
      shadow = std::move(sr.state);
      state = std::move(ar.state);
    }
  }
  return out;
}

}  // namespace

std::pair<std::vector<TransId>, std::map<TransId, Sequence>> returning_transitions(
    const RpnDef& def, std::size_t witnessCap, std::size_t* coverCalls) {
  std::vector<TransId> returning;
  std::map<TransId, Sequence> witnesses;
  std::vector<TransId> abstractIds = def.ofKind(TransKind::Abstract);
  std::vector<TransId> cutIds = def.ofKind(TransKind::Cut);
  if (cutIds.empty()) return {returning, witnesses};

  bool grew = true;
  while (grew) {
    grew = false;
    // The round works against a snapshot: transitions admitted mid-round get
    // their shortcuts only in the next round, keeping Petri indices aligned.
    const std::vector<TransId> snapshot = returning;
    PetriNet hatEl = build_hat_el_partial(def, snapshot);
    for (TransId t : abstractIds) {
      if (std::find(returning.begin(), returning.end(), t) != returning.end()) continue;
      const Marking& omega = def.transitions[t].omega();
      for (TransId tau : cutIds) {
        if (coverCalls) ++*coverCalls;
        CoverWitness cw = pn_cover_witness(hatEl, omega, def.transitions[tau].pre, witnessCap);
        if (!cw.coverable) continue;
        // Membership stands on the coverability answer alone; past the cap we
        // simply store no witness.
        if (!cw.truncated) {
          try {
            TreeState st = TreeState::single(omega);
            Sequence wit = liftPetriSequence(def, snapshot, witnesses, cw.firings, st);
            wit.push_back({st.root(), tau});
            witnesses[t] = std::move(wit);
          } catch (const Error& e) {
            if (e.code != "missing-witness") throw;
          }
        }
        returning.push_back(t);
        std::sort(returning.begin(), returning.end());
        grew = true;
        break;
      }
    }
  }
  return {returning, witnesses};
}

HatNet build_hat(const RpnDef& def, std::size_t* coverCalls) {
  HatNet hat;
  hat.base = def;
  hat.net = def;
  auto [returning, witnesses] = returning_transitions(def, 10000, coverCalls);
  hat.returning = std::move(returning);
  hat.witnesses = std::move(witnesses);
  for (TransId t : hat.returning) {
    const Transition& tr = def.transitions[t];
    Transition sc;
    sc.name = uniqueName(hat.net, tr.name + "^r");
    sc.kind = TransKind::Elementary;
    sc.pre = tr.pre;
    sc.post = tr.post;
    sc.label = tr.label;  // shortcuts stay label-faithful to their original
    TransId id = hat.net.addTransition(std::move(sc));
    hat.shortcutOf[t] = id;
    hat.shortcutOrigin[id] = t;
  }
  return hat;
}

PetriNet build_hat_el(const HatNet& hat) {
  // Same transition order as build_hat_el_partial(base, returning), with the
  // shortcut names the hat net actually carries.
  PetriNet pn;
  pn.places = hat.base.places;
  for (TransId t = 0; t < hat.base.transitions.size(); ++t) {
    const Transition& tr = hat.base.transitions[t];
    if (tr.kind == TransKind::Cut) continue;
    PnTransition pt;
    pt.name = tr.name;
    pt.pre = tr.pre;
    pt.post = tr.kind == TransKind::Abstract ? Marking{} : tr.post;
    pt.label = tr.label;
    pn.transitions.push_back(std::move(pt));
  }
  for (TransId t : hat.returning) {
    const Transition& sc = hat.net.transitions[hat.shortcutOf.at(t)];
    pn.transitions.push_back({sc.name, sc.pre, sc.post, sc.label});
  }
  return pn;
}

Sequence lift_hat_el_sequence(const HatNet& hat, const Marking& m0,
                              const std::vector<TransId>& petriFirings, TreeState* finalState) {
  TreeState st = TreeState::single(m0);
  Sequence out = liftPetriSequence(hat.base, hat.returning, hat.witnesses, petriFirings, st);
  if (finalState) *finalState = std::move(st);
  return out;
}

namespace {

struct ReplayInfo {
  // Per event: the concrete firing vertex, created vertex (abstract), and for
  // cuts the erased vertex set.
  struct EventInfo {
    std::optional<VertexId> created;
    std::vector<VertexId> erased;
  };
  std::vector<EventInfo> events;
  std::map<VertexId, std::size_t> creatorOf;  // created vertex -> event index
  TreeState finalState;
};

ReplayInfo replay(const RpnDef& def, const TreeState& s0, const Sequence& seq) {
  ReplayInfo info;
  TreeState cur = s0;
  for (const FiringEvent& ev : seq) {
    ReplayInfo::EventInfo ei;
    const Transition& t = def.transitions.at(ev.transition);
    if (t.kind == TransKind::Cut) ei.erased = cur.descendants(ev.vertex);
    FireResult r = fire(def, cur, ev);
    if (r.created) {
      ei.created = r.created;
      info.creatorOf[*r.created] = info.events.size();
    }
    info.events.push_back(std::move(ei));
    cur = std::move(r.state);
  }
  info.finalState = std::move(cur);
  return info;
}

}  // namespace

bool is_omniscient(const RpnDef& def, const TreeState& s0, const Sequence& seq) {
  ReplayInfo info = replay(def, s0, seq);
  for (const auto& [v, _] : info.creatorOf)
    if (!info.finalState.hasVertex(v)) return false;
  return true;
}

Sequence omniscient_normalize(const HatNet& hat, const TreeState& s0, const Sequence& sigma) {
  // sigma is over base ids, which remain valid in hat.net.
  Sequence cur = sigma;
  AbstractState expected = abstraction(fire_sequence(hat.net, s0, cur));

  auto eventsWithin = [&](const ReplayInfo& info, const Sequence& seq, VertexId v,
                          std::size_t from, std::size_t to) {
    // Indices of events fired by v or by vertices created inside v's subtree
    // in the window (from, to).
    std::set<VertexId> inside{v};
    std::vector<std::size_t> hits;
    for (std::size_t k = from + 1; k < to; ++k) {
      if (inside.count(seq[k].vertex)) {
        hits.push_back(k);
        if (info.events[k].created) inside.insert(*info.events[k].created);
      }
    }
    return hits;
  };

  // Dropping a creation shifts every later fresh id, so surviving events are
  // re-anchored by the position of their firer's creation event and the
  // concrete ids are re-materialized by replay.
  auto rebuild = [&](const ReplayInfo& info, const std::vector<std::size_t>& drop,
                     std::size_t replaceAt, std::size_t creatorIdx, TransId shortcutId) {
    auto originOf = [&](VertexId v) -> std::pair<bool, std::size_t> {
      auto it = info.creatorOf.find(v);
      if (it == info.creatorOf.end()) return {true, static_cast<std::size_t>(v)};
      return {false, it->second};
    };
    struct Sym {
      bool initial;
      std::size_t ref;  // vertex id when initial, else creating position
      TransId trans;
      std::size_t pos;  // original position, to key created ids
    };
    std::vector<Sym> syms;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (std::binary_search(drop.begin(), drop.end(), k)) continue;
      TransId t = cur[k].transition;
      VertexId firer = cur[k].vertex;
      if (k == replaceAt) {
        t = shortcutId;
        firer = cur[creatorIdx].vertex;
      }
      auto [initial, ref] = originOf(firer);
      syms.push_back({initial, ref, t, k});
    }
    Sequence next;
    TreeState st = s0;
    std::map<std::size_t, VertexId> createdAt;  // original position -> new id
    for (const Sym& sym : syms) {
      VertexId v = sym.initial ? static_cast<VertexId>(sym.ref) : createdAt.at(sym.ref);
      FireResult r = fire(hat.net, st, {v, sym.trans});
      if (r.created) createdAt[sym.pos] = *r.created;
      next.push_back({v, sym.trans});
      st = std::move(r.state);
    }
    return next;
  };

  for (bool changed = true; changed;) {
    changed = false;
    ReplayInfo info = replay(hat.net, s0, cur);

    // Phase 1: collapse the first cut fired by a created vertex.
    for (std::size_t j = 0; j < cur.size(); ++j) {
      const Transition& tj = hat.net.transitions.at(cur[j].transition);
      if (tj.kind != TransKind::Cut) continue;
      auto creator = info.creatorOf.find(cur[j].vertex);
      if (creator == info.creatorOf.end()) continue;
      std::size_t i = creator->second;
      TransId created_by = cur[i].transition;
      auto sc = hat.shortcutOf.find(created_by);
      if (sc == hat.shortcutOf.end())
        throw Error("internal", "create/cut pair on a non-returning transition");
      std::vector<std::size_t> drop = eventsWithin(info, cur, cur[j].vertex, i, j);
      drop.push_back(i);
      std::sort(drop.begin(), drop.end());
      cur = rebuild(info, drop, j, i, sc->second);
      changed = true;
      break;
    }
    if (changed) continue;

    // Phase 2: drop creations of vertices erased by cuts of initial vertices.
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!info.events[i].created) continue;
      VertexId v = *info.events[i].created;
      if (info.finalState.hasVertex(v)) continue;
      std::vector<std::size_t> drop = eventsWithin(info, cur, v, i, cur.size());
      drop.push_back(i);
      std::sort(drop.begin(), drop.end());
      cur = rebuild(info, drop, cur.size(), 0, 0);
      changed = true;
      break;
    }
  }

  AbstractState got = abstraction(fire_sequence(hat.net, s0, cur));
  if (!(got == expected))
    throw Error("internal", "omniscient normalization changed the final state");
  return cur;
}

Sequence expand_hat_sequence(const HatNet& hat, const TreeState& s, const Sequence& hatSeq) {
  Sequence out;
  TreeState hatState = s;   // replay of hatSeq in hat.net
  TreeState baseState = s;  // replay of the expansion in the base net
  std::map<VertexId, VertexId> toBase;  // hat-state vertex -> base-state vertex
  for (VertexId v : s.vertices()) toBase[v] = v;

  for (const FiringEvent& ev : hatSeq) {
    auto origin = hat.shortcutOrigin.find(ev.transition);
    VertexId baseVertex = toBase.at(ev.vertex);
    if (origin == hat.shortcutOrigin.end()) {
      FireResult rh = fire(hat.net, hatState, ev);
      FireResult rb = fire(hat.base, baseState, {baseVertex, ev.transition});
      if (rh.created) toBase[*rh.created] = *rb.created;
      out.push_back({baseVertex, ev.transition});
      hatState = std::move(rh.state);
      baseState = std::move(rb.state);
      continue;
    }
    TransId bt = origin->second;
    auto wit = hat.witnesses.find(bt);
    if (wit == hat.witnesses.end())
      throw Error("missing-witness", "no witness stored for " + hat.base.transitions[bt].name);
    // Hat side: the shortcut fires as one elementary step.
    hatState = fire(hat.net, hatState, ev).state;
    // Base side: abstract firing, then the witness inside the fresh subtree.
    FireResult rb = fire(hat.base, baseState, {baseVertex, bt});
    out.push_back({baseVertex, bt});
    VertexId child = *rb.created;
    baseState = std::move(rb.state);
    TreeState shadow = TreeState::single(hat.base.transitions[bt].omega());
    std::map<VertexId, VertexId> remap{{shadow.root(), child}};
    for (const FiringEvent& we : wit->second) {
      FireResult sr = fire(hat.base, shadow, we);
      VertexId actual = remap.at(we.vertex);
      FireResult ar = fire(hat.base, baseState, {actual, we.transition});
      if (sr.created) remap[*sr.created] = *ar.created;
      out.push_back({actual, we.transition});
      shadow = std::move(sr.state);
      baseState = std::move(ar.state);
    }
  }
  return out;
}

}  // namespace rpn
