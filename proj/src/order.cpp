#include "rpnkit/order.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace rpn {

namespace {

// Memoized embeddability of subtree(u) into subtree(u'), one table per
// comparison. For positive pairs the child matching is kept so a witness can
// be reconstructed without re-searching.
class Comparer {
public:
  Comparer(const TreeState& s, const TreeState& sp, OrderStats* stats)
      : s_(s), sp_(sp), stats_(stats) {}

  bool embed(VertexId u, VertexId up) {
    auto key = std::make_pair(u, up);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (stats_) stats_->embedCalls++;
    bool ok = compute(u, up);
    memo_.emplace(key, ok);
    return ok;
  }

  // Fills f for the whole subtree pair; valid only after embed(u,up) == true.
  void reconstruct(VertexId u, VertexId up, Embedding& f) {
    f.map[u] = up;
    const auto& kids = s_.vertex(u).children;
    const auto& match = matching_.at({u, up});
    for (std::size_t i = 0; i < kids.size(); ++i)
      reconstruct(kids[i], sp_.vertex(up).children[match[i]], f);
  }

private:
  bool compute(VertexId u, VertexId up) {
    if (!s_.vertex(u).marking.leq(sp_.vertex(up).marking)) return false;
    const auto& kids = s_.vertex(u).children;
    const auto& kidsP = sp_.vertex(up).children;
    if (kids.empty()) {
      matching_[{u, up}] = {};
      return true;
    }
    if (kids.size() > kidsP.size()) return false;

    // Edge-label domination is checked before descending into embed().
    std::vector<std::vector<std::uint32_t>> adm(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const Marking& label = s_.vertex(kids[i]).edgeLabel;
      for (std::size_t j = 0; j < kidsP.size(); ++j) {
        if (!label.leq(sp_.vertex(kidsP[j]).edgeLabel)) continue;
        if (embed(kids[i], kidsP[j])) adm[i].push_back(static_cast<std::uint32_t>(j));
      }
      if (adm[i].empty()) return false;
    }

    // Kuhn's algorithm; left vertices and candidates visited in creation
    // order, which makes the resulting matching deterministic.
    if (stats_) stats_->matchingRuns++;
    std::vector<int> matchR(kidsP.size(), -1);
    std::vector<char> used;
    auto tryKuhn = [&](auto&& self, std::uint32_t i) -> bool {
      for (std::uint32_t j : adm[i]) {
        if (used[j]) continue;
        used[j] = 1;
        if (matchR[j] < 0 || self(self, static_cast<std::uint32_t>(matchR[j]))) {
          matchR[j] = static_cast<int>(i);
          return true;
        }
      }
      return false;
    };
    for (std::uint32_t i = 0; i < kids.size(); ++i) {
      used.assign(kidsP.size(), 0);
      if (!tryKuhn(tryKuhn, i)) return false;
    }
    std::vector<std::uint32_t> match(kids.size());
    for (std::size_t j = 0; j < matchR.size(); ++j)
      if (matchR[j] >= 0) match[static_cast<std::size_t>(matchR[j])] = static_cast<std::uint32_t>(j);
    matching_[{u, up}] = std::move(match);
    return true;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<VertexId, VertexId>& p) const {
      return std::hash<VertexId>()(p.first) * 1000003u ^ std::hash<VertexId>()(p.second);
    }
  };

  const TreeState& s_;
  const TreeState& sp_;
  OrderStats* stats_;
  std::unordered_map<std::pair<VertexId, VertexId>, bool, PairHash> memo_;
  std::unordered_map<std::pair<VertexId, VertexId>, std::vector<std::uint32_t>, PairHash> matching_;
};

}  // namespace

std::optional<Embedding> leq(const TreeState& s, const TreeState& sp, OrderStats* stats) {
  if (s.isEmpty()) return Embedding{};  // the empty state embeds everywhere
  if (sp.isEmpty()) return std::nullopt;
  Comparer cmp(s, sp, stats);
  for (VertexId anchor : sp.vertices()) {
    if (cmp.embed(s.root(), anchor)) {
      Embedding f;
      cmp.reconstruct(s.root(), anchor, f);
      return f;
    }
  }
  return std::nullopt;
}

std::optional<Embedding> leq_rooted(const TreeState& s, const TreeState& sp, OrderStats* stats) {
  if (s.isEmpty()) return sp.isEmpty() ? std::optional(Embedding{}) : std::nullopt;
  if (sp.isEmpty()) return std::nullopt;
  Comparer cmp(s, sp, stats);
  if (!cmp.embed(s.root(), sp.root())) return std::nullopt;
  Embedding f;
  cmp.reconstruct(s.root(), sp.root(), f);
  return f;
}

bool equivalent(const TreeState& s, const TreeState& sp) {
  return abstraction(s).serialize() == abstraction(sp).serialize();
}

bool embedding_valid(const TreeState& s, const TreeState& sp, const Embedding& f) {
  if (s.isEmpty()) return f.map.empty();
  if (f.map.size() != s.vertexCount()) return false;
  std::map<VertexId, int> seen;
  for (const auto& [u, up] : f.map) {
    if (!s.hasVertex(u) || !sp.hasVertex(up)) return false;
    if (seen[up]++) return false;  // injectivity
    if (!s.vertex(u).marking.leq(sp.vertex(up).marking)) return false;
  }
  for (const auto& [u, up] : f.map) {
    for (VertexId w : s.vertex(u).children) {
      auto it = f.map.find(w);
      if (it == f.map.end()) return false;
      const auto& wp = sp.vertex(it->second);
      if (wp.parent != up) return false;
      if (!s.vertex(w).edgeLabel.leq(wp.edgeLabel)) return false;
    }
  }
  return true;
}

}  // namespace rpn
