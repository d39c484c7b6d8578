#include "rpnkit/jsonio.hpp"

#include <algorithm>

namespace rpn {

Json marking_json(const RpnDef& net, const Marking& m) {
  std::vector<std::pair<std::string, Count>> items;
  for (const auto& [p, n] : m) items.emplace_back(net.placeName(p), n);
  std::sort(items.begin(), items.end());
  Json out = Json::object();
  for (const auto& [name, n] : items) out[name] = n;
  return out;
}

Json state_json(const RpnDef& net, const TreeState& s) {
  Json out;
  out["empty"] = s.isEmpty();
  Json nodes = Json::array();
  for (VertexId v : s.vertices()) {
    const auto& vx = s.vertex(v);
    Json n;
    n["id"] = v;
    if (vx.parent != kNoVertex) {
      n["parent"] = vx.parent;
      n["edge"] = marking_json(net, vx.edgeLabel);
    }
    n["marking"] = marking_json(net, vx.marking);
    nodes.push_back(std::move(n));
  }
  out["nodes"] = std::move(nodes);
  return out;
}

namespace {

Json script_json(const Script& script) {
  Json out = Json::array();
  for (const ScriptEvent& ev : script) {
    Json e;
    e["vertex"] = ev.vertex;
    e["transition"] = ev.transition;
    if (!ev.bindAs.empty()) e["as"] = ev.bindAs;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

Json verdict_json(const std::string& problem, const Verdict& v, const RpnDef& net,
                  const NamedState& from, bool withTiming) {
  Json out;
  out["kind"] = "verdict";
  out["problem"] = problem;
  out["answer"] = v.answer;
  out["method"] = v.method;
  if (v.witnessSequence)
    out["witness"] = {{"type", "firing-sequence"},
                      {"events", script_json(render_sequence(net, from, *v.witnessSequence))}};
  else if (v.witnessCycle)
    out["witness"] = {{"type", "cycle"}, {"vertices", *v.witnessCycle}};
  else if (v.witnessPetri)
    out["witness"] = {{"type", "self-covering"}, {"transitions", *v.witnessPetri}};
  Json stats;
  stats["coverability_calls"] = v.stats.coverabilityCalls;
  stats["km_nodes"] = v.stats.kmNodes;
  if (withTiming) stats["wallclock_ms"] = v.stats.wallclockMs;
  out["stats"] = std::move(stats);
  return out;
}

Json order_json(const NamedState& a, const NamedState& b, bool rooted,
                const std::optional<Embedding>& f) {
  Json out;
  out["kind"] = "order";
  out["rooted"] = rooted;
  out["answer"] = f.has_value();
  if (f) {
    Json w = Json::object();
    for (const auto& [u, v] : f->map) {
      std::string un = a.nameOf(u), vn = b.nameOf(v);
      w[un.empty() ? "v" + std::to_string(u) : un] = vn.empty() ? "v" + std::to_string(v) : vn;
    }
    out["witness"] = std::move(w);
  }
  return out;
}

Json graph_json(const AbstractGraph& g, const RpnDef& net) {
  Json out;
  out["kind"] = "abstract-graph";
  Json vs = Json::array();
  for (std::size_t i = 0; i < g.names.size(); ++i) {
    Json v;
    v["name"] = g.names[i];
    v["marking"] = marking_json(net, g.markingOf[i]);
    vs.push_back(std::move(v));
  }
  out["vertices"] = std::move(vs);
  Json es = Json::array();
  for (auto [a, b] : g.edges)
    es.push_back(Json::array({g.names[static_cast<std::size_t>(a)],
                              g.names[static_cast<std::size_t>(b)]}));
  out["edges"] = std::move(es);
  return out;
}

Json explore_json(const RpnDef& net, const ExploreResult& r) {
  Json out;
  out["kind"] = "explore";
  out["exhausted"] = r.exhausted;
  if (!r.frontierCut.empty()) out["frontier_cut"] = r.frontierCut;
  Json states = Json::array();
  for (const AbstractState& a : r.states) states.push_back(state_json(net, concretize(a)));
  out["states"] = std::move(states);
  Json edges = Json::array();
  for (const auto& [src, label, dst] : r.transitions)
    edges.push_back(Json::array({src, label, dst}));
  out["transitions"] = std::move(edges);
  return out;
}

Json member_json(const RpnDef& net, const NamedState& from,
                 const std::vector<std::string>& word, const MemberResult& r) {
  Json out;
  out["kind"] = "member";
  out["word"] = word;
  switch (r.verdict) {
    case Membership::Yes: out["verdict"] = "yes"; break;
    case Membership::NoWithinBound: out["verdict"] = "no-within-bound"; break;
    case Membership::Unknown: out["verdict"] = "unknown"; break;
  }
  if (r.verdict == Membership::Yes)
    out["witness"] = script_json(render_sequence(net, from, r.witness));
  return out;
}

Json sample_json(const SampleResult& r) {
  Json out;
  out["kind"] = "sample";
  out["cap_exceeded"] = r.capExceeded;
  Json words = Json::array();
  for (const auto& w : r.words) {
    std::string joined;
    for (const auto& letter : w) joined += letter;
    words.push_back(joined);
  }
  out["words"] = std::move(words);
  return out;
}

Json sim_json(const RpnDef& net, const TreeState& final) {
  Json out;
  out["kind"] = "sim";
  out["final"] = state_json(net, final);
  return out;
}

Json error_json(const Error& e) {
  Json out;
  out["kind"] = "error";
  out["code"] = e.code;
  out["message"] = e.what();
  return out;
}

}  // namespace rpn
