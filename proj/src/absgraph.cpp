#include "rpnkit/absgraph.hpp"

#include <algorithm>
#include <map>

namespace rpn {

AbstractGraph build_abstract_graph_over(const RpnDef& def, const PetriNet& hatEl,
                                        const Marking& m0, AbsGraphStats* stats) {
  AbstractGraph g;
  g.names.push_back("r");
  g.markingOf.push_back(m0);
  g.transOf.push_back(std::nullopt);

  std::vector<TransId> abstracts = def.ofKind(TransKind::Abstract);
  std::map<std::pair<Marking, TransId>, bool> cache;
  auto coverable = [&](const Marking& from, TransId t) {
    auto key = std::make_pair(from, t);
    if (auto it = cache.find(key); it != cache.end()) {
      if (stats) stats->cacheHits++;
      return it->second;
    }
    if (stats) stats->coverabilityCalls++;
    bool ok = pn_coverable(hatEl, from, def.transitions[t].pre);
    cache.emplace(key, ok);
    return ok;
  };

  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t u = 0; u < g.names.size(); ++u) {
      for (TransId t : abstracts) {
        if (!coverable(g.markingOf[u], t)) continue;
        auto v = g.vertexOf(t);
        if (!v) {
          g.names.push_back("v_" + def.transitions[t].name);
          g.markingOf.push_back(def.transitions[t].omega());
          g.transOf.push_back(t);
          v = static_cast<int>(g.names.size()) - 1;
        }
        if (g.edges.emplace(static_cast<int>(u), *v).second) grew = true;
      }
    }
  }
  return g;
}

AbstractGraph build_abstract_graph(const RpnDef& def, const Marking& m0, AbsGraphStats* stats) {
  HatNet hat = build_hat(def);
  PetriNet hatEl = build_hat_el(hat);
  return build_abstract_graph_over(def, hatEl, m0, stats);
}

std::optional<std::vector<int>> has_cycle(const AbstractGraph& g) {
  int n = static_cast<int>(g.names.size());
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (auto [a, b] : g.edges) succ[static_cast<std::size_t>(a)].push_back(b);
  for (auto& v : succ) std::sort(v.begin(), v.end());

  // reach[a][b]: b reachable from a via >= 1 edge.
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [a, b] : g.edges) reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (reach[a][k] && reach[k][b]) reach[a][b] = 1;

  for (int v = 0; v < n; ++v) {
    if (!reach[v][v]) continue;
    // Ordered DFS for a simple cycle v -> ... -> v.
    std::vector<int> path{v};
    std::vector<char> onPath(static_cast<std::size_t>(n), 0);
    onPath[static_cast<std::size_t>(v)] = 1;
    auto dfs = [&](auto&& self, int cur) -> bool {
      for (int w : succ[static_cast<std::size_t>(cur)]) {
        if (w == v) return true;
        if (onPath[static_cast<std::size_t>(w)] || !reach[w][v]) continue;
        onPath[static_cast<std::size_t>(w)] = 1;
        path.push_back(w);
        if (self(self, w)) return true;
        path.pop_back();
        onPath[static_cast<std::size_t>(w)] = 0;
      }
      return false;
    };
    if (dfs(dfs, v)) return path;
  }
  return std::nullopt;
}

std::string to_dot(const AbstractGraph& g, const RpnDef& def) {
  std::string out = "digraph abstract_graph {\n";
  for (std::size_t i = 0; i < g.names.size(); ++i) {
    std::string m;
    bool first = true;
    for (const auto& [p, n] : g.markingOf[i]) {
      if (!first) m += "+";
      first = false;
      if (n > 1) m += std::to_string(n);
      m += def.placeName(p);
    }
    if (m.empty()) m = "0";
    out += "  \"" + g.names[i] + "\" [label=\"" + g.names[i] + "\\n" + m + "\"];\n";
  }
  for (auto [a, b] : g.edges)
    out += "  \"" + g.names[static_cast<std::size_t>(a)] + "\" -> \"" +
           g.names[static_cast<std::size_t>(b)] + "\";\n";
  out += "}\n";
  return out;
}

}  // namespace rpn
