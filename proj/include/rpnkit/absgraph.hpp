// The abstract graph G_{N,s0}: one vertex per fireable abstract transition
// plus the root, built by a fixpoint of coverability queries on the
// one-thread Petri view. Cycles witness unbounded-depth infinite runs.
#pragma once

#include "rpnkit/model.hpp"
#include "rpnkit/petri.hpp"
#include "rpnkit/reduce.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rpn {

struct AbstractGraph {
  // Vertex 0 is r; vertex k > 0 stands for abstract transition transOf[k].
  std::vector<std::string> names;              // "r", "v_<transition>"
  std::vector<Marking> markingOf;              // M_a
  std::vector<std::optional<TransId>> transOf; // base transition ids
  std::set<std::pair<int, int>> edges;

  std::optional<int> vertexOf(TransId t) const {
    for (std::size_t i = 1; i < transOf.size(); ++i)
      if (transOf[i] == t) return static_cast<int>(i);
    return std::nullopt;
  }
};

struct AbsGraphStats {
  std::size_t coverabilityCalls = 0;
  std::size_t cacheHits = 0;
};

/// Fixpoint over (vertex, abstract transition) pairs; each edge test is one
/// coverability query on hatEl, cached by (source marking, guard).
AbstractGraph build_abstract_graph_over(const RpnDef& def, const PetriNet& hatEl,
                                        const Marking& m0, AbsGraphStats* stats = nullptr);

/// Convenience wrapper that builds the hat net itself. The initial state is
/// expected to be rooted (a single vertex with marking m0).
AbstractGraph build_abstract_graph(const RpnDef& def, const Marking& m0,
                                   AbsGraphStats* stats = nullptr);

/// Some cycle iff the graph has one (self-loops count). Deterministic: the
/// first simple cycle found by ordered DFS from the smallest cycle vertex.
std::optional<std::vector<int>> has_cycle(const AbstractGraph& g);

std::string to_dot(const AbstractGraph& g, const RpnDef& def);

}  // namespace rpn
