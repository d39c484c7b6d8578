// Bounded brute-force exploration of the RPN state space over canonical
// abstract states: the independent oracle used by every decision procedure,
// and the engine for bounded language membership and sampling.
#pragma once

#include "rpnkit/model.hpp"
#include "rpnkit/order.hpp"

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace rpn {

struct CoverTarget {
  std::vector<TreeState> states;  // nonempty; all over the same net
};

struct ExploreResult {
  std::vector<AbstractState> states;  // discovery (BFS) order; index 0 = s0
  std::map<std::string, int> index;   // canonical serialization -> index
  // (source, label-or-"", destination); only stored states appear.
  std::set<std::tuple<int, std::string, int>> transitions;
  bool exhausted = false;
  std::string frontierCut;  // "", "step-cap" or "state-cap"
};

/// BFS over abstract states, deduplicated by canonical serialization.
/// Successors fire every enabled (vertex, transition) of a canonical
/// concretization, vertices in creation order, transitions in declaration
/// order. exhausted means the whole reachability set was enumerated.
ExploreResult explore(const RpnDef& def, const TreeState& s0, std::size_t capSteps,
                      std::size_t capStates);

/// True iff some reached state dominates one of the target states.
bool covers(const TreeState& s, const CoverTarget& target);

enum class Membership { Yes, NoWithinBound, Unknown };

struct MemberResult {
  Membership verdict = Membership::Unknown;
  Sequence witness;  // replayable when Yes, with label projection = word
};

/// Bounded membership of `word` in the coverability language. Epsilon chains
/// are limited per emitted letter; exceeding that budget or the step cap can
/// only degrade the answer to Unknown, never flip it to a wrong no.
MemberResult member(const RpnDef& def, const TreeState& s0, const CoverTarget& target,
                    const std::vector<std::string>& word, std::size_t capSteps,
                    std::size_t epsBudget = 64);

struct SampleResult {
  std::set<std::vector<std::string>> words;
  bool capExceeded = false;  // epsPruned || nodeCapHit
  bool epsPruned = false;    // some epsilon chain hit the per-letter budget
  bool nodeCapHit = false;   // the global node cap stopped the search
};

/// All words of length <= maxLen in the coverability language, by exhaustive
/// labeled search with the same epsilon budget discipline.
SampleResult language_sample(const RpnDef& def, const TreeState& s0, const CoverTarget& target,
                             std::size_t maxLen, std::size_t epsBudget = 64,
                             std::size_t nodeCap = 200000);

}  // namespace rpn
