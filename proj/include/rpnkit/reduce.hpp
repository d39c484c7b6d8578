// Net transformations: the rooted construction, the returning-transition
// fixpoint with replayable witnesses, the shortcut-enriched net and its
// one-thread Petri view, omniscient normalization, and shortcut expansion.
#pragma once

#include "rpnkit/model.hpp"
#include "rpnkit/petri.hpp"

#include <map>
#include <set>
#include <vector>

namespace rpn {

struct RootedResult {
  RpnDef net;             // the input net plus one place/spawner per non-root vertex
  Marking initialMarking; // marking of the single-vertex initial state
  std::map<VertexId, PlaceId> vertexPlace;   // original non-root vertex -> p_v
  std::map<TransId, VertexId> spawnerVertex; // t_v -> the original vertex it recreates
  bool identity = false;  // true when s0 already was a single vertex
};

/// Encodes a tree-shaped initial state into places p_v and abstract spawner
/// transitions t_v, yielding an equivalent single-vertex instance.
/// Throws empty-initial-state on the empty tree.
RootedResult make_rooted(const RpnDef& def, const TreeState& s0);

/// Maps a firing sequence of the rooted net back to the original instance:
/// spawner firings are dropped and the vertices they create are identified
/// with the original vertices of s0.
Sequence project_rooted_sequence(const RootedResult& rooted, const RpnDef& original,
                                 const TreeState& s0, const Sequence& seq);

struct HatNet {
  RpnDef base;  // the net the hat was built from
  RpnDef net;   // base plus one shortcut elementary transition per returning transition
  std::vector<TransId> returning;          // base transition ids, ascending
  std::map<TransId, TransId> shortcutOf;   // base abstract id -> shortcut id in net
  std::map<TransId, TransId> shortcutOrigin;  // shortcut id in net -> base abstract id
  std::map<TransId, Sequence> witnesses;   // base id -> returning sequence from s[r, Omega(t)]

  bool isShortcut(TransId t) const { return shortcutOrigin.count(t) != 0; }
};

/// Least fixpoint of the returning set: t joins once some cut guard is
/// coverable from Omega(t) in the one-thread Petri view built with the
/// shortcuts admitted so far. Witnesses replay to the empty state.
std::pair<std::vector<TransId>, std::map<TransId, Sequence>> returning_transitions(
    const RpnDef& def, std::size_t witnessCap = 10000, std::size_t* coverCalls = nullptr);

HatNet build_hat(const RpnDef& def, std::size_t* coverCalls = nullptr);

/// Lifts a firing sequence of build_hat_el(hat) into a base-net sequence all
/// anchored at the root of s[r, m0]: abstract transitions fire as themselves,
/// shortcuts expand through their witnesses. Returns the lifted sequence and
/// leaves the reached state in *finalState when given.
Sequence lift_hat_el_sequence(const HatNet& hat, const Marking& m0,
                              const std::vector<TransId>& petriFirings,
                              TreeState* finalState = nullptr);

/// The one-thread Petri view: cut transitions dropped, abstract outputs
/// zeroed, elementary and shortcut transitions kept verbatim. Place indices
/// coincide with the RPN's.
PetriNet build_hat_el(const HatNet& hat);

/// Same view restricted to a given returning set; used by the fixpoint.
PetriNet build_hat_el_partial(const RpnDef& base, const std::vector<TransId>& returning);

/// Rewrites sigma (fireable in the base net from s0) into an omniscient hat
/// sequence: matched create/cut pairs collapse into shortcut firings and
/// doomed subtrees disappear. Reaches the same final state up to abstraction.
Sequence omniscient_normalize(const HatNet& hat, const TreeState& s0, const Sequence& sigma);

/// Inverse direction: every shortcut firing is expanded into the abstract
/// firing followed by its stored witness replayed inside the fresh subtree.
Sequence expand_hat_sequence(const HatNet& hat, const TreeState& s, const Sequence& hatSeq);

/// Omniscient predicate: every vertex created by seq exists in the final state.
bool is_omniscient(const RpnDef& def, const TreeState& s0, const Sequence& seq);

}  // namespace rpn
