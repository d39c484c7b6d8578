// rpnkit: decision procedures, constructions and bounded oracles for
// recursive Petri nets, over the .rpn text format.
#include "rpnkit/absgraph.hpp"
#include "rpnkit/decide.hpp"
#include "rpnkit/explore.hpp"
#include "rpnkit/io.hpp"
#include "rpnkit/jsonio.hpp"
#include "rpnkit/reduce.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rpn;

struct Caps {
  std::size_t steps = 10000;
  std::size_t states = 10000;
  std::size_t eps = 64;
  std::size_t witness = 10000;
};

// RPNKIT_CAPS="steps=N,states=N,eps=N,witness=N" overrides the defaults.
Caps capsFromEnv() {
  Caps caps;
  const char* env = std::getenv("RPNKIT_CAPS");
  if (!env) return caps;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    std::size_t val = std::stoull(item.substr(eq + 1));
    if (key == "steps") caps.steps = val;
    else if (key == "states") caps.states = val;
    else if (key == "eps") caps.eps = val;
    else if (key == "witness") caps.witness = val;
  }
  return caps;
}

std::string readFileOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("no-such-file", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const NamedState& pickState(const Document& doc, const std::string& name) {
  return name.empty() ? doc.state(doc.firstStateName()) : doc.state(name);
}

CoverTarget pickTarget(const Document& doc, const std::string& name) {
  return name.empty() ? doc.target(doc.firstTargetName()) : doc.target(name);
}

void emit(const std::string& text, const std::string& outPath) {
  if (outPath.empty() || outPath == "-") {
    std::cout << text;
  } else {
    std::ofstream out(outPath);
    if (!out) throw Error("no-such-file", "cannot write '" + outPath + "'");
    out << text;
  }
}

NamedState syntheticState(const TreeState& s) {
  NamedState ns;
  ns.state = s;
  if (!s.isEmpty()) ns.names.emplace_back("r", s.root());
  return ns;
}

std::string witnessText(const RpnDef& net, const NamedState& from, const Sequence& seq) {
  return script_to_text(render_sequence(net, from, seq));
}

int runCheck(const std::string& problem, const Document& doc, const NamedState& st,
             const std::string& targetName, bool wantWitness, bool json, bool timing,
             const Caps& caps) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  if (problem == "cut") {
    v = decide_cut(doc.net, st.state, wantWitness, caps.witness);
  } else if (problem == "cover") {
    v = decide_cover(doc.net, st.state, pickTarget(doc, targetName));
  } else if (problem == "terminate") {
    v = decide_termination(doc.net, st.state);
  } else if (problem == "bounded") {
    v = decide_boundedness(doc.net, st.state);
  } else if (problem == "finite") {
    v = decide_finiteness(doc.net, st.state);
  } else {
    throw Error("usage", "unknown problem '" + problem + "'");
  }
  v.stats.wallclockMs = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  if (json) {
    std::cout << verdict_json(problem, v, doc.net, st, timing).dump(2) << "\n";
    return 0;
  }
  if (problem == "cut" || problem == "cover") {
    std::cout << (v.answer ? "YES" : "NO");
    if (v.witnessSequence && !v.witnessSequence->empty())
      std::cout << " (witness: " << witnessText(doc.net, st, *v.witnessSequence) << ")";
  } else if (problem == "terminate") {
    std::cout << (v.answer ? "TERMINATING" : "NONTERMINATING");
    if (v.witnessCycle) {
      std::cout << " (cycle:";
      for (const auto& n : *v.witnessCycle) std::cout << " " << n;
      std::cout << ")";
    } else if (v.witnessPetri) {
      std::cout << " (self-covering:";
      for (const auto& n : *v.witnessPetri) std::cout << " " << n;
      std::cout << ")";
    }
  } else if (problem == "bounded") {
    std::cout << (v.answer ? "BOUNDED" : "UNBOUNDED");
  } else {
    std::cout << (v.answer ? "FINITE" : "INFINITE");
    if (v.witnessCycle) {
      std::cout << " (cycle:";
      for (const auto& n : *v.witnessCycle) std::cout << " " << n;
      std::cout << ")";
    }
  }
  std::cout << "\n";
  return 0;
}

int runBuild(const std::string& what, const std::string& file, const std::string& file2,
             const std::string& stateName, const std::string& targetName,
             const std::string& outPath) {
  Document doc = parse(readFileOrThrow(file));
  Document out;
  if (what == "rooted") {
    RootedResult rooted = make_rooted(doc.net, pickState(doc, stateName).state);
    out.net = rooted.net;
    out.states.emplace_back("s0", syntheticState(TreeState::single(rooted.initialMarking)));
  } else if (what == "hat") {
    HatNet hat = build_hat(doc.net);
    out.net = hat.net;
    out.states = doc.states;
    out.targets = doc.targets;
  } else if (what == "hatel") {
    HatNet hat = build_hat(doc.net);
    PetriNet el = build_hat_el(hat);
    for (const std::string& p : el.places) out.net.addPlace(p);
    for (const PnTransition& t : el.transitions) {
      Transition nt;
      nt.name = t.name;
      nt.kind = TransKind::Elementary;
      nt.pre = t.pre;
      nt.post = t.post;
      nt.label = t.label;
      out.net.addTransition(std::move(nt));
    }
  } else if (what == "cov2cut") {
    RootedResult rooted = make_rooted(doc.net, pickState(doc, stateName).state);
    CutInstance cut = cover_to_cut_construct(
        rooted.net, TreeState::single(rooted.initialMarking), pickTarget(doc, targetName));
    out.net = cut.net;
    out.states.emplace_back("s0", syntheticState(cut.s0));
  } else if (what == "cut2cov") {
    RootedResult rooted = make_rooted(doc.net, pickState(doc, stateName).state);
    CoverInstance cov =
        cut_to_cover_construct(rooted.net, TreeState::single(rooted.initialMarking));
    out.net = cov.net;
    out.states.emplace_back("s0", syntheticState(cov.s0));
    out.states.emplace_back("goal", syntheticState(cov.target.states[0]));
    out.targets.emplace_back("goal", std::vector<std::string>{"goal"});
  } else if (what == "union") {
    if (file2.empty()) throw Error("usage", "build union needs two files");
    Document doc2 = parse(readFileOrThrow(file2));
    auto mk = [](const Document& d) {
      CoverInstance inst;
      inst.net = d.net;
      RootedResult rooted = make_rooted(d.net, d.state(d.firstStateName()).state);
      inst.net = rooted.net;
      inst.s0 = TreeState::single(rooted.initialMarking);
      inst.target = d.target(d.firstTargetName());
      return inst;
    };
    CoverInstance u = union_construct(mk(doc), mk(doc2));
    out.net = u.net;
    out.states.emplace_back("s0", syntheticState(u.s0));
    std::vector<std::string> refs;
    for (std::size_t i = 0; i < u.target.states.size(); ++i) {
      std::string name = "goal" + std::to_string(i);
      out.states.emplace_back(name, syntheticState(u.target.states[i]));
      refs.push_back(name);
    }
    out.targets.emplace_back("goal", std::move(refs));
  } else {
    throw Error("usage", "unknown build kind '" + what + "'");
  }
  emit(print(out), outPath);
  return 0;
}

int runOracle(const std::string& what, const Document& doc, const NamedState& st,
              const std::string& targetName, const std::string& word, std::size_t maxLen,
              bool json, const Caps& caps) {
  if (what == "explore") {
    ExploreResult r = explore(doc.net, st.state, caps.steps, caps.states);
    if (json) {
      std::cout << explore_json(doc.net, r).dump(2) << "\n";
    } else {
      std::cout << r.states.size() << " states, " << r.transitions.size() << " transitions, "
                << (r.exhausted ? "exhausted" : "cut: " + r.frontierCut) << "\n";
    }
    return 0;
  }
  if (what == "member") {
    std::vector<std::string> letters;
    for (char c : word) letters.emplace_back(1, c);
    MemberResult r = member(doc.net, st.state, pickTarget(doc, targetName), letters, caps.steps,
                            caps.eps);
    if (json) {
      std::cout << member_json(doc.net, st, letters, r).dump(2) << "\n";
    } else {
      std::cout << (r.verdict == Membership::Yes              ? "yes"
                    : r.verdict == Membership::NoWithinBound ? "no-within-bound"
                                                              : "unknown")
                << "\n";
    }
    return r.verdict == Membership::Unknown ? 3 : 0;
  }
  if (what == "sample") {
    SampleResult r =
        language_sample(doc.net, st.state, pickTarget(doc, targetName), maxLen, caps.eps,
                        caps.states * 20);
    if (json) {
      std::cout << sample_json(r).dump(2) << "\n";
    } else {
      for (const auto& w : r.words) {
        std::string joined;
        for (const auto& l : w) joined += l;
        std::cout << (joined.empty() ? "<eps>" : joined) << "\n";
      }
      if (r.capExceeded) std::cout << "(cap exceeded; sample incomplete)\n";
    }
    return r.capExceeded ? 3 : 0;
  }
  throw Error("usage", "unknown oracle '" + what + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rpnkit - recursive Petri net decision toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --json appear after the subcommand as well
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  Caps caps = capsFromEnv();

  // check <problem> FILE
  auto* check = app.add_subcommand("check", "decide cut/cover/terminate/bounded/finite");
  std::string checkProblem, checkFile, checkState, checkTarget;
  bool wantWitness = false, timing = false;
  check->add_option("problem", checkProblem, "one of cut|cover|terminate|bounded|finite")
      ->required();
  check->add_option("file", checkFile, ".rpn file")->required();
  check->add_option("--state", checkState, "initial state name (default: first in file)");
  check->add_option("--target", checkTarget, "cover target name (default: first in file)");
  check->add_flag("--witness", wantWitness, "extract a witness when possible");
  check->add_flag("--timing", timing, "include wallclock_ms in JSON stats");

  // graph FILE [--dot OUT]
  auto* graph = app.add_subcommand("graph", "build the abstract graph");
  std::string graphFile, graphState, dotOut;
  graph->add_option("file", graphFile, ".rpn file")->required();
  graph->add_option("--state", graphState, "initial state name");
  graph->add_option("--dot", dotOut, "write DOT here ('-' for stdout)");

  // order FILE A B [--rooted]
  auto* order = app.add_subcommand("order", "decide the embedding quasi-order between two states");
  std::string orderFile, orderA, orderB;
  bool rootedOrder = false;
  order->add_option("file", orderFile, ".rpn file")->required();
  order->add_option("a", orderA, "left state name")->required();
  order->add_option("b", orderB, "right state name")->required();
  order->add_flag("--rooted", rootedOrder, "pin the roots");

  // sim FILE --fire SCRIPT
  auto* sim = app.add_subcommand("sim", "replay a firing script");
  std::string simFile, simState, simScript;
  sim->add_option("file", simFile, ".rpn file")->required();
  sim->add_option("--state", simState, "initial state name");
  sim->add_option("--fire", simScript, "script, e.g. \"(r, t as v) (v, u)\"")->required();

  // build <what> FILE [FILE2] [-o OUT]
  auto* build = app.add_subcommand("build", "emit a transformed net");
  std::string buildWhat, buildFile, buildFile2, buildState, buildTarget, buildOut;
  build->add_option("what", buildWhat, "rooted|hat|hatel|cov2cut|cut2cov|union")->required();
  build->add_option("file", buildFile, ".rpn file")->required();
  build->add_option("file2", buildFile2, "second .rpn file (union)");
  build->add_option("--state", buildState, "initial state name");
  build->add_option("--target", buildTarget, "target name");
  build->add_option("-o,--out", buildOut, "output path (default stdout)");

  // oracle <what> FILE
  auto* oracle = app.add_subcommand("oracle", "bounded brute-force oracles");
  std::string oracleWhat, oracleFile, oracleState, oracleTarget, oracleWord;
  std::size_t maxLen = 3;
  oracle->add_option("what", oracleWhat, "explore|member|sample")->required();
  oracle->add_option("file", oracleFile, ".rpn file")->required();
  oracle->add_option("--state", oracleState, "initial state name");
  oracle->add_option("--target", oracleTarget, "target name");
  oracle->add_option("--word", oracleWord, "word for member (one letter per character)");
  oracle->add_option("--max-len", maxLen, "maximum word length for sample");
  oracle->add_option("--cap-steps", caps.steps, "step cap");
  oracle->add_option("--cap-states", caps.states, "state cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      Document doc = parse(readFileOrThrow(checkFile));
      return runCheck(checkProblem, doc, pickState(doc, checkState), checkTarget, wantWitness,
                      json, timing, caps);
    }
    if (graph->parsed()) {
      Document doc = parse(readFileOrThrow(graphFile));
      const NamedState& st = pickState(doc, graphState);
      RootedResult rooted = make_rooted(doc.net, st.state);
      AbstractGraph g = build_abstract_graph(rooted.net, rooted.initialMarking);
      if (!dotOut.empty()) emit(to_dot(g, rooted.net), dotOut);
      if (json)
        std::cout << graph_json(g, rooted.net).dump(2) << "\n";
      else if (dotOut.empty())
        std::cout << g.names.size() << " vertices, " << g.edges.size() << " edges\n";
      return 0;
    }
    if (order->parsed()) {
      Document doc = parse(readFileOrThrow(orderFile));
      const NamedState& a = doc.state(orderA);
      const NamedState& b = doc.state(orderB);
      auto f = rootedOrder ? leq_rooted(a.state, b.state) : leq(a.state, b.state);
      if (json) {
        std::cout << order_json(a, b, rootedOrder, f).dump(2) << "\n";
      } else if (f) {
        Json w = order_json(a, b, rootedOrder, f)["witness"];
        std::cout << "YES " << w.dump() << "\n";
      } else {
        std::cout << "NO\n";
      }
      return 0;
    }
    if (sim->parsed()) {
      Document doc = parse(readFileOrThrow(simFile));
      const NamedState& st = pickState(doc, simState);
      Sequence seq = resolve_script(doc.net, st, parse_script(simScript));
      TreeState fin = fire_sequence(doc.net, st.state, seq);
      if (json)
        std::cout << sim_json(doc.net, fin).dump(2) << "\n";
      else
        std::cout << print_state(doc.net, "final", fin);
      return 0;
    }
    if (build->parsed())
      return runBuild(buildWhat, buildFile, buildFile2, buildState, buildTarget, buildOut);
    if (oracle->parsed()) {
      Document doc = parse(readFileOrThrow(oracleFile));
      return runOracle(oracleWhat, doc, pickState(doc, oracleState), oracleTarget, oracleWord,
                       maxLen, json, caps);
    }
  } catch (const Error& e) {
    if (json)
      std::cout << error_json(e).dump(2) << "\n";
    else
      std::cerr << "error [" << e.code << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
