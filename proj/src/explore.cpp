#include "rpnkit/explore.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace rpn {

namespace {

// Enabled events of the canonical concretization, in deterministic order.
std::vector<FiringEvent> enabledEvents(const RpnDef& def, const TreeState& s) {
  std::vector<FiringEvent> out;
  for (VertexId v : s.vertices())
    for (TransId t = 0; t < def.transitions.size(); ++t)
      if (def.transitions[t].pre.leq(s.vertex(v).marking)) out.push_back({v, t});
  return out;
}

}  // namespace

ExploreResult explore(const RpnDef& def, const TreeState& s0, std::size_t capSteps,
                      std::size_t capStates) {
  ExploreResult res;
  AbstractState a0 = abstraction(s0);
  res.states.push_back(a0);
  res.index.emplace(a0.serialize(), 0);
  std::deque<int> frontier{0};
  std::size_t depth = 0;
  bool stepCapHit = false, stateCapHit = false;

  while (!frontier.empty() && !stateCapHit) {
    if (depth >= capSteps) {
      stepCapHit = true;
      break;
    }
    std::deque<int> next;
    for (int cur : frontier) {
      if (stateCapHit) break;
      TreeState concrete = concretize(res.states[static_cast<std::size_t>(cur)]);
      for (FiringEvent ev : enabledEvents(def, concrete)) {
        const std::string& label = def.transitions[ev.transition].label;
        AbstractState succ = abstraction(fire(def, concrete, ev).state);
        std::string key = succ.serialize();
        auto it = res.index.find(key);
        int idx;
        if (it != res.index.end()) {
          idx = it->second;
        } else {
          if (res.states.size() >= capStates) {
            stateCapHit = true;
            break;
          }
          idx = static_cast<int>(res.states.size());
          res.states.push_back(std::move(succ));
          res.index.emplace(key, idx);
          next.push_back(idx);
        }
        res.transitions.emplace(cur, label, idx);
      }
    }
    frontier = std::move(next);
    ++depth;
  }
  res.exhausted = frontier.empty() && !stepCapHit && !stateCapHit;
  if (stateCapHit)
    res.frontierCut = "state-cap";
  else if (stepCapHit)
    res.frontierCut = "step-cap";
  return res;
}

bool covers(const TreeState& s, const CoverTarget& target) {
  for (const TreeState& sf : target.states)
    if (leq(sf, s)) return true;
  return false;
}

namespace {

struct LangNode {
  int stateIdx;
  std::vector<std::string> word;
  std::size_t epsRun;  // epsilon firings since the last letter
};

// Shared engine for member and language_sample: BFS over (abstract state,
// emitted word) with an epsilon budget per letter.
struct LangSearch {
  const RpnDef& def;
  const CoverTarget& target;
  std::size_t epsBudget;

  std::vector<AbstractState> states;
  std::unordered_map<std::string, int> stateIndex;
  std::unordered_map<int, bool> coverCache;
  bool budgetPruned = false;

  int intern(const AbstractState& a) {
    std::string key = a.serialize();
    auto it = stateIndex.find(key);
    if (it != stateIndex.end()) return it->second;
    int idx = static_cast<int>(states.size());
    states.push_back(a);
    stateIndex.emplace(key, idx);
    return idx;
  }

  bool coversTarget(int idx) {
    auto it = coverCache.find(idx);
    if (it != coverCache.end()) return it->second;
    bool ok = covers(concretize(states[static_cast<std::size_t>(idx)]), target);
    coverCache.emplace(idx, ok);
    return ok;
  }
};

std::string seenKey(int stateIdx, const std::vector<std::string>& word, std::size_t epsRun) {
  std::string k = std::to_string(stateIdx);
  k += '|';
  for (const auto& w : word) {
    k += w;
    k += ',';
  }
  k += '|';
  k += std::to_string(epsRun);
  return k;
}

}  // namespace

MemberResult member(const RpnDef& def, const TreeState& s0, const CoverTarget& target,
                    const std::vector<std::string>& word, std::size_t capSteps,
                    std::size_t epsBudget) {
  // Nodes carry the concrete state so the yes-witness replays from s0 itself;
  // deduplication still works on (abstraction, consumed letters, eps run).
  struct Node {
    TreeState state;
    std::size_t pos;
    std::size_t epsRun;
    std::size_t depth;
    int parent;
    FiringEvent via{0, 0};
  };
  std::vector<Node> nodes;
  std::deque<int> frontier;
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, bool> coverCache;
  bool budgetPruned = false, stepCapHit = false;

  auto coversTarget = [&](const TreeState& s, const std::string& key) {
    auto it = coverCache.find(key);
    if (it != coverCache.end()) return it->second;
    bool ok = covers(s, target);
    coverCache.emplace(key, ok);
    return ok;
  };
  auto nodeKey = [](const std::string& stateKey, std::size_t pos, std::size_t epsRun) {
    return stateKey + "|" + std::to_string(pos) + "|" + std::to_string(epsRun);
  };

  std::string startKey = abstraction(s0).serialize();
  nodes.push_back({s0, 0, 0, 0, -1, {}});
  frontier.push_back(0);
  seen.insert(nodeKey(startKey, 0, 0));

  auto witnessOf = [&](int nodeIdx) {
    Sequence seq;
    for (int i = nodeIdx; nodes[static_cast<std::size_t>(i)].parent != -1;
         i = nodes[static_cast<std::size_t>(i)].parent)
      seq.push_back(nodes[static_cast<std::size_t>(i)].via);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  while (!frontier.empty()) {
    int ni = frontier.front();
    frontier.pop_front();
    std::size_t pos = nodes[static_cast<std::size_t>(ni)].pos;
    std::size_t depth = nodes[static_cast<std::size_t>(ni)].depth;
    std::size_t epsRun = nodes[static_cast<std::size_t>(ni)].epsRun;
    TreeState state = nodes[static_cast<std::size_t>(ni)].state;
    if (pos == word.size() && coversTarget(state, abstraction(state).serialize()))
      return {Membership::Yes, witnessOf(ni)};
    if (depth >= capSteps) {
      stepCapHit = true;
      continue;
    }
    for (FiringEvent ev : enabledEvents(def, state)) {
      const std::string& label = def.transitions[ev.transition].label;
      std::size_t npos = pos, neps = 0;
      if (label.empty()) {
        if (epsRun >= epsBudget) {
          budgetPruned = true;
          continue;
        }
        neps = epsRun + 1;
      } else {
        if (npos >= word.size() || word[npos] != label) continue;
        ++npos;
      }
      TreeState succ = fire(def, state, ev).state;
      if (!seen.insert(nodeKey(abstraction(succ).serialize(), npos, neps)).second) continue;
      nodes.push_back({std::move(succ), npos, neps, depth + 1, ni, ev});
      frontier.push_back(static_cast<int>(nodes.size()) - 1);
    }
  }
  if (stepCapHit || budgetPruned) return {Membership::Unknown, {}};
  return {Membership::NoWithinBound, {}};
}

SampleResult language_sample(const RpnDef& def, const TreeState& s0, const CoverTarget& target,
                             std::size_t maxLen, std::size_t epsBudget, std::size_t nodeCap) {
  SampleResult out;
  LangSearch ls{def, target, epsBudget, {}, {}, {}, false};
  std::deque<LangNode> frontier;
  std::unordered_set<std::string> seen;

  int start = ls.intern(abstraction(s0));
  frontier.push_back({start, {}, 0});
  seen.insert(seenKey(start, {}, 0));
  std::size_t expanded = 0;

  while (!frontier.empty()) {
    LangNode n = frontier.front();
    frontier.pop_front();
    if (ls.coversTarget(n.stateIdx)) out.words.insert(n.word);
    if (++expanded > nodeCap) {
      out.nodeCapHit = true;
      break;
    }
    TreeState concrete = concretize(ls.states[static_cast<std::size_t>(n.stateIdx)]);
    for (FiringEvent ev : enabledEvents(def, concrete)) {
      const std::string& label = def.transitions[ev.transition].label;
      LangNode succ{0, n.word, 0};
      if (label.empty()) {
        if (n.epsRun >= epsBudget) {
          ls.budgetPruned = true;
          continue;
        }
        succ.epsRun = n.epsRun + 1;
      } else {
        if (n.word.size() >= maxLen) continue;
        succ.word.push_back(label);
      }
      succ.stateIdx = ls.intern(abstraction(fire(def, concrete, ev).state));
      if (!seen.insert(seenKey(succ.stateIdx, succ.word, succ.epsRun)).second) continue;
      frontier.push_back(std::move(succ));
    }
  }
  out.epsPruned = ls.budgetPruned;
  out.capExceeded = out.epsPruned || out.nodeCapHit;
  return out;
}

}  // namespace rpn
