// Python bindings: the .rpn document model plus the main operations
// (simulation, order, decisions, abstract graph, constructions, oracles).
#include "rpnkit/absgraph.hpp"
#include "rpnkit/decide.hpp"
#include "rpnkit/explore.hpp"
#include "rpnkit/io.hpp"
#include "rpnkit/jsonio.hpp"
#include "rpnkit/reduce.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rpn;

namespace {

py::object jsonToPy(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(jsonToPy(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = jsonToPy(it.value());
      return out;
    }
    default: return py::none();
  }
}

const NamedState& namedState(const Document& doc, const std::string& name) {
  return name.empty() ? doc.state(doc.firstStateName()) : doc.state(name);
}

CoverTarget namedTarget(const Document& doc, const std::string& name) {
  return name.empty() ? doc.target(doc.firstTargetName()) : doc.target(name);
}

Verdict decideAny(const Document& doc, const std::string& problem, const std::string& state,
                  const std::string& target, bool witness) {
  const NamedState& st = namedState(doc, state);
  if (problem == "cut") return decide_cut(doc.net, st.state, witness);
  if (problem == "cover") return decide_cover(doc.net, st.state, namedTarget(doc, target));
  if (problem == "terminate") return decide_termination(doc.net, st.state);
  if (problem == "bounded") return decide_boundedness(doc.net, st.state);
  if (problem == "finite") return decide_finiteness(doc.net, st.state);
  throw Error("usage", "unknown problem '" + problem + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "recursive Petri net decision toolkit";

  py::register_exception<Error>(m, "RpnError");

  py::class_<Document>(m, "Document")
      .def_property_readonly("places",
                             [](const Document& d) { return d.net.places; })
      .def_property_readonly("transitions",
                             [](const Document& d) {
                               std::vector<std::string> out;
                               for (const auto& t : d.net.transitions) out.push_back(t.name);
                               return out;
                             })
      .def_property_readonly("states",
                             [](const Document& d) {
                               std::vector<std::string> out;
                               for (const auto& [n, _] : d.states) out.push_back(n);
                               return out;
                             })
      .def_property_readonly("targets",
                             [](const Document& d) {
                               std::vector<std::string> out;
                               for (const auto& [n, _] : d.targets) out.push_back(n);
                               return out;
                             })
      .def("__repr__", [](const Document& d) {
        return "<rpnkit.Document: " + std::to_string(d.net.places.size()) + " places, " +
               std::to_string(d.net.transitions.size()) + " transitions>";
      });

  m.def("parse", &parse, py::arg("text"), "Parse a .rpn document");
  m.def("print_document", [](const Document& d) { return print(d); });
  m.def(
      "validate",
      [](const Document& d) {
        py::list out;
        for (const Violation& v : validate(d.net)) {
          py::dict item;
          item["code"] = v.code;
          item["item"] = v.item;
          item["detail"] = v.detail;
          out.append(item);
        }
        return out;
      },
      "Net invariant violations (empty means valid)");

  m.def(
      "fire",
      [](const Document& doc, const std::string& state, const std::string& script) {
        const NamedState& st = namedState(doc, state);
        Sequence seq = resolve_script(doc.net, st, parse_script(script));
        TreeState fin = fire_sequence(doc.net, st.state, seq);
        return jsonToPy(state_json(doc.net, fin));
      },
      py::arg("doc"), py::arg("state"), py::arg("script"),
      "Replay a firing script and return the final state");

  m.def(
      "abstraction_key",
      [](const Document& doc, const std::string& state) {
        return abstraction(namedState(doc, state).state).serialize();
      },
      py::arg("doc"), py::arg("state"),
      "Canonical serialization of the state's abstraction");

  m.def(
      "leq",
      [](const Document& doc, const std::string& a, const std::string& b, bool rooted) {
        const NamedState& sa = doc.state(a);
        const NamedState& sb = doc.state(b);
        auto f = rooted ? leq_rooted(sa.state, sb.state) : leq(sa.state, sb.state);
        return jsonToPy(order_json(sa, sb, rooted, f));
      },
      py::arg("doc"), py::arg("a"), py::arg("b"), py::arg("rooted") = false,
      "Decide the embedding order between two named states");

  m.def(
      "decide",
      [](const Document& doc, const std::string& problem, const std::string& state,
         const std::string& target, bool witness) {
        Verdict v = decideAny(doc, problem, state, target, witness);
        return jsonToPy(verdict_json(problem, v, doc.net, namedState(doc, state), false));
      },
      py::arg("doc"), py::arg("problem"), py::arg("state") = "", py::arg("target") = "",
      py::arg("witness") = false,
      "Decide cut/cover/terminate/bounded/finite for a named initial state");

  m.def(
      "abstract_graph",
      [](const Document& doc, const std::string& state, bool dot) -> py::object {
        RootedResult rooted = make_rooted(doc.net, namedState(doc, state).state);
        AbstractGraph g = build_abstract_graph(rooted.net, rooted.initialMarking);
        if (dot) return py::str(to_dot(g, rooted.net));
        return jsonToPy(graph_json(g, rooted.net));
      },
      py::arg("doc"), py::arg("state") = "", py::arg("dot") = false);

  m.def(
      "returning",
      [](const Document& doc) {
        auto [ids, witnesses] = returning_transitions(doc.net);
        py::dict out;
        for (TransId t : ids) {
          const std::string& name = doc.net.transitions[t].name;
          if (auto it = witnesses.find(t); it != witnesses.end()) {
            NamedState from;
            from.state = TreeState::single(doc.net.transitions[t].omega());
            from.names.emplace_back("r", from.state.root());
            out[py::str(name)] = script_to_text(render_sequence(doc.net, from, it->second));
          } else {
            out[py::str(name)] = py::none();
          }
        }
        return out;
      },
      "Returning abstract transitions with their witness scripts");

  m.def(
      "explore",
      [](const Document& doc, const std::string& state, std::size_t capSteps,
         std::size_t capStates) {
        ExploreResult r = explore(doc.net, namedState(doc, state).state, capSteps, capStates);
        return jsonToPy(explore_json(doc.net, r));
      },
      py::arg("doc"), py::arg("state") = "", py::arg("cap_steps") = 10000,
      py::arg("cap_states") = 10000);

  m.def(
      "member",
      [](const Document& doc, const std::string& word, const std::string& state,
         const std::string& target, std::size_t capSteps, std::size_t epsBudget) {
        std::vector<std::string> letters;
        for (char c : word) letters.emplace_back(1, c);
        const NamedState& st = namedState(doc, state);
        MemberResult r =
            member(doc.net, st.state, namedTarget(doc, target), letters, capSteps, epsBudget);
        return jsonToPy(member_json(doc.net, st, letters, r));
      },
      py::arg("doc"), py::arg("word"), py::arg("state") = "", py::arg("target") = "",
      py::arg("cap_steps") = 10000, py::arg("eps_budget") = 64);

  m.def(
      "sample",
      [](const Document& doc, std::size_t maxLen, const std::string& state,
         const std::string& target, std::size_t epsBudget, std::size_t nodeCap) {
        SampleResult r = language_sample(doc.net, namedState(doc, state).state,
                                         namedTarget(doc, target), maxLen, epsBudget, nodeCap);
        return jsonToPy(sample_json(r));
      },
      py::arg("doc"), py::arg("max_len"), py::arg("state") = "", py::arg("target") = "",
      py::arg("eps_budget") = 64, py::arg("node_cap") = 200000);

  m.def(
      "build",
      [](const Document& doc, const std::string& what, const std::string& state,
         const std::string& target) {
        Document out;
        auto synthetic = [](const TreeState& s) {
          NamedState ns;
          ns.state = s;
          if (!s.isEmpty()) ns.names.emplace_back("r", s.root());
          return ns;
        };
        if (what == "rooted") {
          RootedResult rooted = make_rooted(doc.net, namedState(doc, state).state);
          out.net = rooted.net;
          out.states.emplace_back("s0", synthetic(TreeState::single(rooted.initialMarking)));
        } else if (what == "hat") {
          out.net = build_hat(doc.net).net;
        } else if (what == "hatel") {
          PetriNet el = build_hat_el(build_hat(doc.net));
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
          RootedResult rooted = make_rooted(doc.net, namedState(doc, state).state);
          CutInstance cut = cover_to_cut_construct(
              rooted.net, TreeState::single(rooted.initialMarking), namedTarget(doc, target));
          out.net = cut.net;
          out.states.emplace_back("s0", synthetic(cut.s0));
        } else if (what == "cut2cov") {
          RootedResult rooted = make_rooted(doc.net, namedState(doc, state).state);
          CoverInstance cov =
              cut_to_cover_construct(rooted.net, TreeState::single(rooted.initialMarking));
          out.net = cov.net;
          out.states.emplace_back("s0", synthetic(cov.s0));
          out.states.emplace_back("goal", synthetic(cov.target.states[0]));
          out.targets.emplace_back("goal", std::vector<std::string>{"goal"});
        } else {
          throw Error("usage", "unknown build kind '" + what + "'");
        }
        return print(out);
      },
      py::arg("doc"), py::arg("what"), py::arg("state") = "", py::arg("target") = "",
      "Emit a transformed net (rooted/hat/hatel/cov2cut/cut2cov) as .rpn text");
}
