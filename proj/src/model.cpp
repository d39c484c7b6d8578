#include "rpnkit/model.hpp"

#include <algorithm>
#include <cassert>

namespace rpn {

std::string_view to_string(TransKind k) {
  switch (k) {
    case TransKind::Elementary: return "elem";
    case TransKind::Abstract: return "abs";
    case TransKind::Cut: return "cut";
  }
  return "?";
}

PlaceId RpnDef::addPlace(const std::string& name) {
  if (auto it = placeIdx_.find(name); it != placeIdx_.end()) return it->second;
  PlaceId id = static_cast<PlaceId>(places.size());
  places.push_back(name);
  placeIdx_.emplace(name, id);
  return id;
}

TransId RpnDef::addTransition(Transition t) {
  TransId id = static_cast<TransId>(transitions.size());
  transIdx_.emplace(t.name, id);
  transitions.push_back(std::move(t));
  return id;
}

std::optional<PlaceId> RpnDef::placeId(std::string_view name) const {
  auto it = placeIdx_.find(std::string(name));
  return it == placeIdx_.end() ? std::nullopt : std::optional(it->second);
}

std::optional<TransId> RpnDef::transId(std::string_view name) const {
  auto it = transIdx_.find(std::string(name));
  return it == transIdx_.end() ? std::nullopt : std::optional(it->second);
}

std::vector<TransId> RpnDef::ofKind(TransKind k) const {
  std::vector<TransId> out;
  for (TransId t = 0; t < transitions.size(); ++t)
    if (transitions[t].kind == k) out.push_back(t);
  return out;
}

namespace {

bool placesDeclared(const RpnDef& def, const Marking& m) {
  for (const auto& [p, n] : m)
    if (p >= def.places.size()) return false;
  return true;
}

}  // namespace

std::vector<Violation> validate(const RpnDef& def) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < def.places.size(); ++i)
    for (std::size_t j = i + 1; j < def.places.size(); ++j)
      if (def.places[i] == def.places[j])
        out.push_back({"duplicate-place", def.places[i], "place id declared twice"});
  std::map<std::string, int> tnames;
  for (const auto& t : def.transitions) tnames[t.name]++;
  for (const auto& [n, c] : tnames)
    if (c > 1) out.push_back({"duplicate-transition", n, "transition id declared twice"});

  for (const auto& t : def.transitions) {
    if (t.kind == TransKind::Abstract && !t.start.has_value())
      out.push_back({"missing-start", t.name, "abstract transition lacks a start marking"});
    if (t.kind != TransKind::Abstract && t.start.has_value())
      out.push_back({"start-on-nonabstract", t.name, "only abstract transitions carry a start marking"});
    if (t.kind == TransKind::Cut && !t.post.empty())
      out.push_back({"cut-has-post", t.name, "cut transitions have no output"});
    if (!placesDeclared(def, t.pre) || !placesDeclared(def, t.post) ||
        (t.start && !placesDeclared(def, *t.start)))
      out.push_back({"undeclared-place", t.name, "transition references an undeclared place"});
  }
  return out;
}

TreeState TreeState::single(Marking m) {
  TreeState s;
  s.addRoot(std::move(m));
  return s;
}

const TreeState::Vertex& TreeState::vertex(VertexId v) const {
  auto it = verts_.find(v);
  if (it == verts_.end()) throw Error("unknown-vertex", "no vertex " + std::to_string(v));
  return it->second;
}

std::vector<VertexId> TreeState::vertices() const {
  std::vector<VertexId> out;
  out.reserve(verts_.size());
  for (const auto& [v, _] : verts_) out.push_back(v);
  return out;
}

VertexId TreeState::addRoot(Marking m) {
  assert(isEmpty());
  VertexId id = nextFresh_++;
  verts_.emplace(id, Vertex{std::move(m), kNoVertex, {}, {}});
  root_ = id;
  return id;
}

VertexId TreeState::addChild(VertexId parent, Marking edgeLabel, Marking m) {
  return spawnChild(parent, std::move(edgeLabel), std::move(m));
}

std::vector<VertexId> TreeState::descendants(VertexId v) const {
  std::vector<VertexId> out;
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    const auto& kids = vertex(u).children;
    stack.insert(stack.end(), kids.begin(), kids.end());
  }
  return out;
}

void TreeState::setMarking(VertexId v, Marking m) { verts_.at(v).marking = std::move(m); }

VertexId TreeState::spawnChild(VertexId parent, Marking edgeLabel, Marking m) {
  auto pit = verts_.find(parent);
  if (pit == verts_.end()) throw Error("unknown-vertex", "no vertex " + std::to_string(parent));
  VertexId id = nextFresh_++;
  verts_.emplace(id, Vertex{std::move(m), parent, std::move(edgeLabel), {}});
  pit->second.children.push_back(id);
  return id;
}

void TreeState::eraseSubtree(VertexId v) {
  const Vertex& vx = vertex(v);
  if (vx.parent != kNoVertex) {
    auto& sib = verts_.at(vx.parent).children;
    sib.erase(std::find(sib.begin(), sib.end(), v));
  }
  for (VertexId u : descendants(v)) verts_.erase(u);
  if (v == root_) root_ = kNoVertex;
}

bool enabled(const RpnDef& def, const TreeState& s, FiringEvent e) {
  if (!s.hasVertex(e.vertex))
    throw Error("unknown-vertex", "no vertex " + std::to_string(e.vertex) + " in state");
  if (e.transition >= def.transitions.size())
    throw Error("unknown-transition", "no transition index " + std::to_string(e.transition));
  return def.transitions[e.transition].pre.leq(s.vertex(e.vertex).marking);
}

FireResult fire(const RpnDef& def, const TreeState& s, FiringEvent e) {
  if (!enabled(def, s, e))
    throw Error("not-enabled", "(" + std::to_string(e.vertex) + ", " +
                                   def.transitions[e.transition].name + ") is not enabled");
  const Transition& t = def.transitions[e.transition];
  TreeState out = s;
  switch (t.kind) {
    case TransKind::Elementary: {
      out.setMarking(e.vertex, s.vertex(e.vertex).marking.minus(t.pre).plus(t.post));
      return {std::move(out), std::nullopt};
    }
    case TransKind::Abstract: {
      if (!t.start) throw Error("missing-start", t.name + " has no start marking");
      out.setMarking(e.vertex, s.vertex(e.vertex).marking.minus(t.pre));
      VertexId created = out.spawnChild(e.vertex, t.post, *t.start);
      return {std::move(out), created};
    }
    case TransKind::Cut: {
      const auto& vx = s.vertex(e.vertex);
      if (vx.parent == kNoVertex) {
        TreeState emptyState;
        // Counter survives the cut so ids from the history are never reissued.
        emptyState.bumpCounter(s.nextFreshId());
        return {std::move(emptyState), std::nullopt};
      }
      Marking refund = vx.edgeLabel;
      VertexId parent = vx.parent;
      out.eraseSubtree(e.vertex);
      out.setMarking(parent, out.vertex(parent).marking.plus(refund));
      return {std::move(out), std::nullopt};
    }
  }
  throw Error("internal", "unreachable");
}

TreeState fire_sequence(const RpnDef& def, const TreeState& s, const Sequence& seq) {
  TreeState cur = s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    try {
      cur = fire(def, cur, seq[i]).state;
    } catch (const Error& e) {
      throw Error("not-enabled-at-step",
                  "step " + std::to_string(i) + ": " + e.what());
    }
  }
  return cur;
}

const std::string& AbstractState::serialize() const {
  if (!ser_.empty()) return ser_;
  if (empty) {
    ser_ = "E";
    return ser_;
  }
  std::string s = "[";
  s += marking.serialize();
  for (const auto& [edge, child] : children) {
    s += ';';
    s += edge.serialize();
    s += '>';
    s += child.serialize();
  }
  s += ']';
  ser_ = std::move(s);
  return ser_;
}

namespace {

AbstractState abstractFrom(const TreeState& s, VertexId v) {
  AbstractState a;
  a.empty = false;
  a.marking = s.vertex(v).marking;
  for (VertexId c : s.vertex(v).children)
    a.children.emplace_back(s.vertex(c).edgeLabel, abstractFrom(s, c));
  std::sort(a.children.begin(), a.children.end(), [](const auto& x, const auto& y) {
    auto kx = x.first.serialize() + ">" + x.second.serialize();
    auto ky = y.first.serialize() + ">" + y.second.serialize();
    return kx < ky;
  });
  return a;
}

void concretizeInto(const AbstractState& a, TreeState& s, VertexId at) {
  for (const auto& [edge, child] : a.children) {
    VertexId c = s.addChild(at, edge, child.marking);
    concretizeInto(child, s, c);
  }
}

}  // namespace

AbstractState abstraction(const TreeState& s) {
  if (s.isEmpty()) return {};
  return abstractFrom(s, s.root());
}

TreeState concretize(const AbstractState& a) {
  if (a.empty) return {};
  TreeState s = TreeState::single(a.marking);
  concretizeInto(a, s, s.root());
  return s;
}

}  // namespace rpn
