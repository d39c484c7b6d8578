// The state quasi-orders: subtree embedding (leq) and its root-anchored
// variant, decided by per-node maximum bipartite matching with memoization.
#pragma once

#include "rpnkit/model.hpp"

#include <map>
#include <optional>

namespace rpn {

/// Injective vertex map witnessing s <= s'. For every v: M_s(v) <= M_s'(f(v)),
/// and every edge v ->m w maps to an edge f(v) ->m' f(w) with m <= m'.
struct Embedding {
  std::map<VertexId, VertexId> map;
};

struct OrderStats {
  std::size_t embedCalls = 0;   // memoized pair evaluations
  std::size_t matchingRuns = 0;
};

/// Precondition: both states belong to the same net (not checkable here).
std::optional<Embedding> leq(const TreeState& s, const TreeState& sp, OrderStats* stats = nullptr);

/// As leq, with the root of s pinned to the root of s'. The empty state is
/// root-dominated only by itself.
std::optional<Embedding> leq_rooted(const TreeState& s, const TreeState& sp,
                                    OrderStats* stats = nullptr);

/// s ~ s' iff their canonical abstractions coincide.
bool equivalent(const TreeState& s, const TreeState& sp);

/// Independent check that an embedding satisfies both witness invariants.
bool embedding_valid(const TreeState& s, const TreeState& sp, const Embedding& f);

}  // namespace rpn
