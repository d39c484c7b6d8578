#include "rpnkit/petri.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace rpn {

bool UpwardClosedSet::insert(const Marking& m) {
  for (const Marking& b : basis_)
    if (b.leq(m)) return false;
  std::erase_if(basis_, [&](const Marking& b) { return m.leq(b); });
  basis_.push_back(m);
  return true;
}

bool UpwardClosedSet::contains(const Marking& m) const {
  for (const Marking& b : basis_)
    if (b.leq(m)) return true;
  return false;
}

namespace {

// Smallest m' with m' -> (firing t) -> m'' >= b, i.e. pre(t) + max(b - post(t), 0).
Marking backwardStep(const Marking& b, const PnTransition& t) {
  Marking need = t.pre;
  for (const auto& [p, n] : b) {
    Count produced = t.post.at(p);
    if (n > produced) need.add(p, n - produced);
  }
  return need;
}

struct BasisEntry {
  Marking marking;
  TransId via = 0;
  int next = -1;  // index of the covered successor entry; -1 for the target itself
};

// Shared backward fixpoint. All generated elements live in an append-only
// arena so witness chains stay valid after antichain pruning.
struct BackwardResult {
  bool coverable = false;
  int hit = -1;  // arena index of the basis element below m0
  std::vector<BasisEntry> arena;
};

BackwardResult backwardCover(const PetriNet& net, const Marking& m0, const Marking& target) {
  BackwardResult res;
  res.arena.push_back({target, 0, -1});
  UpwardClosedSet frontierSet;
  frontierSet.insert(target);
  if (target.leq(m0)) {
    res.coverable = true;
    res.hit = 0;
    return res;
  }
  std::vector<int> work{0};
  while (!work.empty()) {
    std::vector<int> next;
    for (int idx : work) {
      Marking b = res.arena[static_cast<std::size_t>(idx)].marking;
      for (TransId t = 0; t < net.transitions.size(); ++t) {
        Marking pb = backwardStep(b, net.transitions[t]);
        if (!frontierSet.insert(pb)) continue;
        res.arena.push_back({pb, t, idx});
        int ni = static_cast<int>(res.arena.size()) - 1;
        if (pb.leq(m0)) {
          res.coverable = true;
          res.hit = ni;
          return res;
        }
        next.push_back(ni);
      }
    }
    work = std::move(next);
  }
  return res;
}

}  // namespace

bool pn_coverable(const PetriNet& net, const Marking& m0, const Marking& target) {
  return backwardCover(net, m0, target).coverable;
}

CoverWitness pn_cover_witness(const PetriNet& net, const Marking& m0, const Marking& target,
                              std::size_t witnessCap) {
  BackwardResult back = backwardCover(net, m0, target);
  CoverWitness out;
  out.coverable = back.coverable;
  if (!back.coverable) return out;
  // Replay the recorded chain: from any m >= entry.marking, firing entry.via
  // lands at a marking dominating the next entry.
  std::vector<TransId> seq;
  for (int i = back.hit; i != -1 && back.arena[static_cast<std::size_t>(i)].next != -1;
       i = back.arena[static_cast<std::size_t>(i)].next) {
    seq.push_back(back.arena[static_cast<std::size_t>(i)].via);
    if (seq.size() > witnessCap) {
      out.truncated = true;
      return out;
    }
  }
  out.firings = std::move(seq);
  return out;
}

KmTree karp_miller(const PetriNet& net, const Marking& m0) {
  KmTree tree;
  tree.nodes.push_back({OmegaMarking(m0), -1, std::nullopt});
  std::deque<int> frontier{0};
  // A node is expanded unless its marking equals one of its ancestors'.
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop_front();
    OmegaMarking m = tree.nodes[static_cast<std::size_t>(cur)].marking;
    bool repeat = false;
    for (int a = tree.nodes[static_cast<std::size_t>(cur)].parent; a != -1;
         a = tree.nodes[static_cast<std::size_t>(a)].parent) {
      if (tree.nodes[static_cast<std::size_t>(a)].marking == m) {
        repeat = true;
        break;
      }
    }
    if (repeat) continue;
    for (TransId t = 0; t < net.transitions.size(); ++t) {
      const auto& tr = net.transitions[t];
      if (!m.dominates(tr.pre)) continue;
      OmegaMarking succ = m.fire(tr.pre, tr.post);
      for (bool changed = true; changed;) {
        changed = false;
        for (int a = cur; a != -1; a = tree.nodes[static_cast<std::size_t>(a)].parent) {
          if (succ.accelerate(tree.nodes[static_cast<std::size_t>(a)].marking)) {
            tree.sawOmega = true;
            changed = true;
          }
        }
      }
      tree.nodes.push_back({std::move(succ), cur, t});
      frontier.push_back(static_cast<int>(tree.nodes.size()) - 1);
    }
  }
  return tree;
}

std::string km_dump(const PetriNet& net, const KmTree& tree) {
  std::string out;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const KmNode& n = tree.nodes[i];
    out += "#" + std::to_string(i);
    if (n.via) out += " <-" + net.transitions[*n.via].name + "- #" + std::to_string(n.parent);
    out += " ";
    std::string m = "{";
    bool first = true;
    for (const auto& [p, c] : n.marking) {
      if (!first) m += ",";
      first = false;
      m += net.places[p] + ":" + (c == OmegaMarking::kOmega ? "w" : std::to_string(c));
    }
    out += m.size() > 1 ? m + "}" : "0";
    out += "\n";
  }
  return out;
}

bool pn_coverable_km(const PetriNet& net, const Marking& m0, const Marking& target) {
  KmTree tree = karp_miller(net, m0);
  for (const KmNode& n : tree.nodes)
    if (n.marking.dominates(target)) return true;
  return false;
}

bool pn_bounded(const PetriNet& net, const Marking& m0) { return !karp_miller(net, m0).sawOmega; }

TerminationResult pn_terminates(const PetriNet& net, const Marking& m0) {
  struct Node {
    Marking marking;
    int parent;
    std::optional<TransId> via;
  };
  std::vector<Node> nodes{{m0, -1, std::nullopt}};
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop_front();
    const Marking m = nodes[static_cast<std::size_t>(cur)].marking;
    for (TransId t = 0; t < net.transitions.size(); ++t) {
      const auto& tr = net.transitions[t];
      if (!tr.pre.leq(m)) continue;
      Marking succ = m.minus(tr.pre).plus(tr.post);
      nodes.push_back({succ, cur, t});
      int ni = static_cast<int>(nodes.size()) - 1;
      for (int a = cur; a != -1; a = nodes[static_cast<std::size_t>(a)].parent) {
        if (nodes[static_cast<std::size_t>(a)].marking.leq(succ)) {
          // Self-covering sequence found: path m0 ->* a ->+ succ, a <= succ.
          TerminationResult res;
          res.terminates = false;
          std::vector<TransId> path;
          for (int i = ni; i != -1; i = nodes[static_cast<std::size_t>(i)].parent)
            if (nodes[static_cast<std::size_t>(i)].via) path.push_back(*nodes[static_cast<std::size_t>(i)].via);
          std::reverse(path.begin(), path.end());
          std::size_t depthA = 0;
          for (int i = a; i != -1; i = nodes[static_cast<std::size_t>(i)].parent)
            if (nodes[static_cast<std::size_t>(i)].via) depthA++;
          res.prefixLen = depthA;
          res.selfCover = std::move(path);
          return res;
        }
      }
      frontier.push_back(ni);
    }
  }
  return {};
}

PnReachResult pn_reach_bounded(const PetriNet& net, const Marking& m0, std::size_t capSteps,
                               std::size_t capStates) {
  PnReachResult res;
  res.markings.insert(m0);
  std::deque<Marking> frontier{m0};
  std::size_t depth = 0;
  bool truncated = false;
  while (!frontier.empty() && depth < capSteps) {
    std::deque<Marking> next;
    for (const Marking& m : frontier) {
      for (const auto& tr : net.transitions) {
        if (!tr.pre.leq(m)) continue;
        Marking succ = m.minus(tr.pre).plus(tr.post);
        if (res.markings.count(succ)) continue;
        if (res.markings.size() >= capStates) {
          truncated = true;
          continue;
        }
        res.markings.insert(succ);
        next.push_back(std::move(succ));
      }
    }
    frontier = std::move(next);
    ++depth;
  }
  res.exhausted = frontier.empty() && !truncated;
  return res;
}

}  // namespace rpn
