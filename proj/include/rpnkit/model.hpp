// Recursive Petri net definition, concrete tree states, the three-case firing
// rule, and the canonical abstract-state representation.
#pragma once

#include "rpnkit/marking.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rpn {

using VertexId = std::uint64_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

enum class TransKind { Elementary, Abstract, Cut };

std::string_view to_string(TransKind k);

struct Transition {
  std::string name;
  TransKind kind = TransKind::Elementary;
  Marking pre;   // W-
  Marking post;  // W+; must stay empty for cut transitions
  std::optional<Marking> start;  // Omega; present exactly for abstract transitions
  std::string label;             // "" reads as epsilon

  const Marking& omega() const { return start.value(); }
};

struct RpnDef {
  std::vector<std::string> places;
  std::vector<Transition> transitions;

  PlaceId addPlace(const std::string& name);
  TransId addTransition(Transition t);

  std::optional<PlaceId> placeId(std::string_view name) const;
  std::optional<TransId> transId(std::string_view name) const;
  const std::string& placeName(PlaceId p) const { return places.at(p); }
  const Transition& transition(TransId t) const { return transitions.at(t); }

  std::vector<TransId> ofKind(TransKind k) const;

  bool hasPlace(std::string_view name) const { return placeId(name).has_value(); }
  bool hasTransition(std::string_view name) const { return transId(name).has_value(); }

private:
  std::unordered_map<std::string, PlaceId> placeIdx_;
  std::unordered_map<std::string, TransId> transIdx_;
};

struct Violation {
  std::string code;  // e.g. "missing-start"
  std::string item;  // offending place/transition name
  std::string detail;
};

/// Structural checks on an RpnDef; empty result means all invariants hold.
std::vector<Violation> validate(const RpnDef& def);

/// Concrete state: a vertex-identified tree of (marking, edge label). Fresh
/// vertex ids come from a monotone counter carried by the state and are never
/// reissued within one firing history.
class TreeState {
public:
  struct Vertex {
    Marking marking;
    VertexId parent = kNoVertex;
    Marking edgeLabel;  // label of the edge parent -> this; unused for the root
    std::vector<VertexId> children;  // creation order
  };

  TreeState() = default;  // the empty state

  static TreeState single(Marking m);

  bool isEmpty() const { return root_ == kNoVertex; }
  VertexId root() const { return root_; }
  std::size_t vertexCount() const { return verts_.size(); }
  bool hasVertex(VertexId v) const { return verts_.count(v) != 0; }
  const Vertex& vertex(VertexId v) const;
  VertexId nextFreshId() const { return nextFresh_; }

  /// Keys in ascending id order, which coincides with creation order.
  std::vector<VertexId> vertices() const;

  const std::map<VertexId, Vertex>& table() const { return verts_; }

  /// Builder API used by the parser and the net constructions.
  VertexId addRoot(Marking m);
  VertexId addChild(VertexId parent, Marking edgeLabel, Marking m);

  /// All vertices of the subtree rooted at v, including v.
  std::vector<VertexId> descendants(VertexId v) const;

  // Mutators used by fire(); ordinary code treats states as values.
  void setMarking(VertexId v, Marking m);
  VertexId spawnChild(VertexId parent, Marking edgeLabel, Marking m);
  void eraseSubtree(VertexId v);
  void bumpCounter(VertexId atLeast) { nextFresh_ = std::max(nextFresh_, atLeast); }

private:
  std::map<VertexId, Vertex> verts_;
  VertexId root_ = kNoVertex;
  VertexId nextFresh_ = 0;
};

struct FiringEvent {
  VertexId vertex;
  TransId transition;
  bool operator==(const FiringEvent&) const = default;
};

using Sequence = std::vector<FiringEvent>;

/// True iff W-(t) <= M_s(v). Throws unknown-vertex / unknown-transition.
bool enabled(const RpnDef& def, const TreeState& s, FiringEvent e);

struct FireResult {
  TreeState state;
  std::optional<VertexId> created;  // set for abstract firings
};

/// One firing step; throws not-enabled. Never mutates the input state.
FireResult fire(const RpnDef& def, const TreeState& s, FiringEvent e);

/// Left fold of fire(); throws not-enabled-at-step with the failing index.
/// Vertex ids of events created mid-sequence are the deterministic fresh ids
/// the counter assigns, so recorded sequences replay exactly.
TreeState fire_sequence(const RpnDef& def, const TreeState& s, const Sequence& seq);

/// Canonical abstract state: vertex identities forgotten, children kept as a
/// multiset in a deterministic total order (lexicographic on serialization).
struct AbstractState {
  bool empty = true;
  Marking marking;
  std::vector<std::pair<Marking, AbstractState>> children;

  /// Deterministic serialization; computed once and cached (states are
  /// immutable after construction).
  const std::string& serialize() const;
  bool operator==(const AbstractState& o) const { return serialize() == o.serialize(); }

private:
  mutable std::string ser_;
};

AbstractState abstraction(const TreeState& s);

/// Canonical concretization: vertices numbered 0..n-1 in preorder following
/// the canonical child order.
TreeState concretize(const AbstractState& a);

}  // namespace rpn
