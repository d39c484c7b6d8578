// Plain place/transition net engine: backward coverability over upward-closed
// sets, Karp-Miller construction, termination via self-covering detection, and
// a bounded brute-force reachability oracle.
#pragma once

#include "rpnkit/marking.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rpn {

struct PnTransition {
  std::string name;
  Marking pre;
  Marking post;
  std::string label;  // "" = epsilon
};

struct PetriNet {
  std::vector<std::string> places;
  std::vector<PnTransition> transitions;
};

/// Upward-closed set of markings kept as its antichain of minimal elements.
class UpwardClosedSet {
public:
  /// Inserts m unless it is already covered; drops basis elements m covers.
  /// Returns true iff the set grew.
  bool insert(const Marking& m);
  bool contains(const Marking& m) const;
  const std::vector<Marking>& basis() const { return basis_; }

private:
  std::vector<Marking> basis_;
};

/// Exact coverability decision: exists sigma with m0 -> m >= target.
/// Backward fixpoint over upward-closed basis sets; the primary decision path.
bool pn_coverable(const PetriNet& net, const Marking& m0, const Marking& target);

struct CoverWitness {
  bool coverable = false;
  std::vector<TransId> firings;  // replays m0 -> ... -> m >= target
  bool truncated = false;        // witness longer than the cap; answer stands
};

/// Coverability plus a replayable witness (when coverable and within cap).
CoverWitness pn_cover_witness(const PetriNet& net, const Marking& m0, const Marking& target,
                              std::size_t witnessCap = 10000);

/// Secondary coverability path via the Karp-Miller tree; used to cross-check.
bool pn_coverable_km(const PetriNet& net, const Marking& m0, const Marking& target);

struct KmNode {
  OmegaMarking marking;
  int parent = -1;
  std::optional<TransId> via;
};

struct KmTree {
  std::vector<KmNode> nodes;
  bool sawOmega = false;
};

/// Forward tree with omega acceleration against branch ancestors. Exploration
/// is deterministic: transitions in declaration order, FIFO frontier.
KmTree karp_miller(const PetriNet& net, const Marking& m0);

/// Diagnostic rendering; omega prints as "w".
std::string km_dump(const PetriNet& net, const KmTree& tree);

/// False iff the Karp-Miller construction introduces omega.
bool pn_bounded(const PetriNet& net, const Marking& m0);

struct TerminationResult {
  bool terminates = true;
  std::vector<TransId> selfCover;  // m0 ->* m ->+ m' with m <= m', when nonterminating
  std::size_t prefixLen = 0;       // firings before the covered marking m
};

/// False iff a self-covering sequence exists. The forward tree stays finite:
/// along any branch the markings form an antichain-free bad sequence, which
/// the well-quasi-ordering of N^P cuts off.
TerminationResult pn_terminates(const PetriNet& net, const Marking& m0);

struct PnReachResult {
  std::set<Marking> markings;
  bool exhausted = false;
};

/// BFS-reachable markings within the caps; exhausted means the full
/// reachability set was enumerated before any cap bound.
PnReachResult pn_reach_bounded(const PetriNet& net, const Marking& m0, std::size_t capSteps,
                               std::size_t capStates);

}  // namespace rpn
