// Decision procedures for the cut, coverability, termination, boundedness and
// finiteness problems, plus the language constructions gluing cut and
// coverability together.
#pragma once

#include "rpnkit/absgraph.hpp"
#include "rpnkit/explore.hpp"
#include "rpnkit/model.hpp"
#include "rpnkit/reduce.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rpn {

struct DecideStats {
  std::size_t coverabilityCalls = 0;
  std::size_t kmNodes = 0;
  std::int64_t wallclockMs = -1;  // filled only when timing is requested
};

struct Verdict {
  bool answer = false;
  std::string method;
  // At most one witness form is set; a firing-sequence witness replays on the
  // input instance and establishes the answer.
  std::optional<Sequence> witnessSequence;
  std::optional<std::vector<std::string>> witnessCycle;  // abstract-graph vertex names
  std::optional<std::vector<std::string>> witnessPetri;  // self-covering transition names
  DecideStats stats;
};

/// Is the empty state reachable? Witness (optional) is a cut sequence on the
/// original instance ending in the empty state.
Verdict decide_cut(const RpnDef& def, const TreeState& s0, bool wantWitness = false,
                   std::size_t witnessCap = 10000);

/// Is some state dominating a target state reachable? Always routed through
/// the cover-to-cut construction, keeping that construction on the hot path.
Verdict decide_cover(const RpnDef& def, const TreeState& s0, const CoverTarget& target);

/// answer == true means every firing sequence is finite.
Verdict decide_termination(const RpnDef& def, const TreeState& s0);

/// answer == true means some bound dominates every thread marking everywhere.
Verdict decide_boundedness(const RpnDef& def, const TreeState& s0);

/// answer == true means the set of reachable abstract states is finite.
Verdict decide_finiteness(const RpnDef& def, const TreeState& s0);

struct CutInstance {
  RpnDef net;
  TreeState s0;
};

/// Builds a net whose cut problem answers the source's coverability problem,
/// label-faithfully: a metered copy of the net (start/run preamble) plus
/// branch, anchor and per-target-vertex transition families whose cuts can
/// only unwind a tree that covers a target state. s0 must be a single vertex.
CutInstance cover_to_cut_construct(const RpnDef& def, const TreeState& s0,
                                   const CoverTarget& target);

struct CoverInstance {
  RpnDef net;
  TreeState s0;
  CoverTarget target;
};

/// Builds a net whose coverability of s[r, done] answers the source's cut
/// problem: one abstract start transition runs the whole instance in a child
/// whose cut releases the done token. s0 must be a single vertex.
CoverInstance cut_to_cover_construct(const RpnDef& def, const TreeState& s0);

/// Union of two coverability languages (both instances rooted): branch places
/// select the side, budget loops pump the per-thread branch tokens.
CoverInstance union_construct(const CoverInstance& a, const CoverInstance& b);

}  // namespace rpn
