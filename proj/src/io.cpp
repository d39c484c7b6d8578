#include "rpnkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rpn {

VertexId NamedState::vertexByName(const std::string& n) const {
  for (const auto& [name, v] : names)
    if (name == n) return v;
  throw Error("unknown-vertex", "no vertex named '" + n + "'");
}

std::string NamedState::nameOf(VertexId v) const {
  for (const auto& [name, id] : names)
    if (id == v) return name;
  return "";
}

const NamedState& Document::state(const std::string& name) const {
  for (const auto& [n, s] : states)
    if (n == name) return s;
  throw Error("unknown-state", "no state named '" + name + "'");
}

CoverTarget Document::target(const std::string& name) const {
  for (const auto& [n, refs] : targets) {
    if (n != name) continue;
    CoverTarget t;
    for (const std::string& ref : refs) t.states.push_back(state(ref).state);
    return t;
  }
  throw Error("unknown-target", "no target named '" + name + "'");
}

const std::string& Document::firstStateName() const {
  if (states.empty()) throw Error("unknown-state", "file declares no state");
  return states.front().first;
}

const std::string& Document::firstTargetName() const {
  if (targets.empty()) throw Error("unknown-target", "file declares no target");
  return targets.front().first;
}

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void skipWs() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool eof() {
    skipWs();
    return pos >= text.size();
  }

  char peek() {
    skipWs();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  void expect(char c) {
    skipWs();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool tryConsume(char c) {
    skipWs();
    if (pos < text.size() && text[pos] == c) {
      advance();
      return true;
    }
    return false;
  }

  static bool idStart(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool idChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '^' ||
           c == '-' || c == '\'';
  }

  std::string ident() {
    skipWs();
    if (pos >= text.size() || !idStart(text[pos])) fail("expected identifier");
    std::string out;
    while (pos < text.size() && idChar(text[pos])) {
      out += text[pos];
      advance();
    }
    return out;
  }

  std::string keyword() { return ident(); }

  bool peekKeyword(const std::string& kw) {
    skipWs();
    std::size_t savedPos = pos;
    int savedLine = line, savedCol = col;
    if (pos >= text.size() || !idStart(text[pos])) return false;
    std::string got;
    while (pos < text.size() && idChar(text[pos])) {
      got += text[pos];
      advance();
    }
    pos = savedPos;
    line = savedLine;
    col = savedCol;
    return got == kw;
  }

  Count number() {
    skipWs();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected number");
    Count n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      n = n * 10 + static_cast<Count>(text[pos] - '0');
      advance();
    }
    return n;
  }
};

// bag := (id [":" nat])* | "0" ; ends at ';', '}' or a following keyword
// (the node grammar continues with "marking" after an edge bag).
Marking parseBag(Lexer& lx, const RpnDef& net, const char* stopWord = nullptr) {
  Marking m;
  bool any = false;
  for (;;) {
    char c = lx.peek();
    if (c == ';' || c == '}' || c == '\0') break;
    if (stopWord && lx.peekKeyword(stopWord)) break;
    if (!any && c == '0') {
      lx.advance();
      return {};
    }
    std::string id = lx.ident();
    auto p = net.placeId(id);
    if (!p) lx.fail("undeclared place '" + id + "'");
    Count n = 1;
    if (lx.tryConsume(':')) n = lx.number();
    m.add(*p, n);
    any = true;
  }
  return m;
}

void parseTransition(Lexer& lx, RpnDef& net, TransKind kind) {
  Transition t;
  t.kind = kind;
  t.name = lx.ident();
  if (net.hasTransition(t.name)) lx.fail("duplicate transition '" + t.name + "'");
  lx.expect('{');
  bool haveIn = false;
  while (!lx.tryConsume('}')) {
    std::string kw = lx.keyword();
    lx.expect(':');
    if (kw == "in") {
      t.pre = parseBag(lx, net);
      haveIn = true;
    } else if (kw == "out") {
      // A cut with an output parses but fails net validation afterwards.
      t.post = parseBag(lx, net);
    } else if (kw == "start") {
      t.start = parseBag(lx, net);
    } else if (kw == "label") {
      t.label = lx.ident();
    } else {
      lx.fail("unknown field '" + kw + "'");
    }
    lx.expect(';');
  }
  if (!haveIn) lx.fail("transition '" + t.name + "' lacks 'in:'");
  net.addTransition(std::move(t));
}

NamedState parseState(Lexer& lx, const RpnDef& net) {
  NamedState st;
  lx.expect('{');
  while (!lx.tryConsume('}')) {
    std::string kw = lx.keyword();
    if (kw != "node") lx.fail("expected 'node'");
    std::string name = lx.ident();
    for (const auto& [n, _] : st.names)
      if (n == name) lx.fail("duplicate node '" + name + "'");
    std::string parentName;
    Marking edge;
    bool hasParent = false;
    if (lx.peekKeyword("parent")) {
      lx.keyword();
      parentName = lx.ident();
      hasParent = true;
      std::string kw2 = lx.keyword();
      if (kw2 != "edge") lx.fail("expected 'edge'");
      edge = parseBag(lx, net, "marking");
    }
    std::string kw3 = lx.keyword();
    if (kw3 != "marking") lx.fail("expected 'marking'");
    Marking m = parseBag(lx, net);
    lx.expect(';');

    if (!hasParent) {
      if (!st.state.isEmpty()) lx.fail("state has two roots ('" + name + "')");
      st.names.emplace_back(name, st.state.addRoot(std::move(m)));
    } else {
      VertexId parent = kNoVertex;
      for (const auto& [n, v] : st.names)
        if (n == parentName) parent = v;
      if (parent == kNoVertex)
        lx.fail("parent '" + parentName + "' not declared before '" + name + "'");
      // Every edge label must be the post of some abstract transition.
      bool legal = false;
      for (const Transition& t : net.transitions)
        if (t.kind == TransKind::Abstract && t.post == edge) legal = true;
      if (!legal) lx.fail("edge label of '" + name + "' is not an abstract transition's output");
      st.names.emplace_back(name, st.state.addChild(parent, std::move(edge), std::move(m)));
    }
  }
  return st;
}

}  // namespace

Document parse(std::string_view text) {
  Lexer lx{text};
  Document doc;
  if (lx.keyword() != "net") lx.fail("expected 'net'");
  lx.expect('{');
  if (lx.keyword() != "places") lx.fail("expected 'places'");
  while (lx.peek() != ';') {
    std::string p = lx.ident();
    if (doc.net.hasPlace(p)) lx.fail("duplicate place '" + p + "'");
    doc.net.addPlace(p);
  }
  lx.expect(';');
  while (!lx.tryConsume('}')) {
    std::string kw = lx.keyword();
    if (kw == "elem")
      parseTransition(lx, doc.net, TransKind::Elementary);
    else if (kw == "abs")
      parseTransition(lx, doc.net, TransKind::Abstract);
    else if (kw == "cut")
      parseTransition(lx, doc.net, TransKind::Cut);
    else
      lx.fail("expected a transition kind (elem/abs/cut)");
  }

  while (!lx.eof()) {
    std::string kw = lx.keyword();
    if (kw == "state") {
      std::string name = lx.ident();
      for (const auto& [n, _] : doc.states)
        if (n == name) lx.fail("duplicate state '" + name + "'");
      doc.states.emplace_back(name, parseState(lx, doc.net));
    } else if (kw == "target") {
      std::string name = lx.ident();
      for (const auto& [n, _] : doc.targets)
        if (n == name) lx.fail("duplicate target '" + name + "'");
      std::vector<std::string> refs;
      lx.expect('{');
      while (!lx.tryConsume('}')) {
        std::string ref = lx.ident();
        bool found = false;
        for (const auto& [n, _] : doc.states) found |= (n == ref);
        if (!found) lx.fail("target references unknown state '" + ref + "'");
        refs.push_back(ref);
      }
      if (refs.empty()) lx.fail("target '" + name + "' is empty");
      doc.targets.emplace_back(name, std::move(refs));
    } else {
      lx.fail("expected 'state' or 'target'");
    }
  }

  auto violations = validate(doc.net);
  if (!violations.empty()) {
    std::string msg = "net validation failed:";
    for (const auto& v : violations) msg += " [" + v.code + " " + v.item + "]";
    throw Error("validation", msg);
  }
  return doc;
}

namespace {

std::string bagText(const RpnDef& net, const Marking& m) {
  if (m.empty()) return "0";
  std::vector<std::pair<std::string, Count>> items;
  for (const auto& [p, n] : m) items.emplace_back(net.placeName(p), n);
  std::sort(items.begin(), items.end());
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].first;
    if (items[i].second != 1) out += ':' + std::to_string(items[i].second);
  }
  return out;
}

}  // namespace

std::string print_net(const RpnDef& net) {
  std::ostringstream out;
  out << "net {\n  places";
  std::vector<std::string> places = net.places;
  std::sort(places.begin(), places.end());
  for (const auto& p : places) out << ' ' << p;
  out << ";\n";
  std::vector<const Transition*> ts;
  for (const Transition& t : net.transitions) ts.push_back(&t);
  std::sort(ts.begin(), ts.end(),
            [](const Transition* a, const Transition* b) { return a->name < b->name; });
  for (const Transition* t : ts) {
    out << "  " << to_string(t->kind) << ' ' << t->name << " { in: " << bagText(net, t->pre)
        << ";";
    if (t->kind != TransKind::Cut) out << " out: " << bagText(net, t->post) << ";";
    if (t->start) out << " start: " << bagText(net, *t->start) << ";";
    if (!t->label.empty()) out << " label: " << t->label << ";";
    out << " }\n";
  }
  out << "}\n";
  return out.str();
}

std::string print_state(const RpnDef& net, const std::string& name, const TreeState& s) {
  std::ostringstream out;
  out << "state " << name << " {";
  if (s.isEmpty()) {
    out << " }\n";
    return out.str();
  }
  out << "\n";
  // Stable synthetic names: v<id>; document names are not known here.
  for (VertexId v : s.vertices()) {
    const auto& vx = s.vertex(v);
    out << "  node v" << v;
    if (vx.parent != kNoVertex)
      out << " parent v" << vx.parent << " edge " << bagText(net, vx.edgeLabel);
    out << " marking " << bagText(net, vx.marking) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string print(const Document& doc) {
  std::ostringstream out;
  out << print_net(doc.net);
  for (const auto& [name, st] : doc.states) {
    out << "state " << name << " {";
    if (st.state.isEmpty()) {
      out << " }\n";
      continue;
    }
    out << "\n";
    for (VertexId v : st.state.vertices()) {
      const auto& vx = st.state.vertex(v);
      std::string vn = st.nameOf(v);
      if (vn.empty()) vn = "v" + std::to_string(v);
      out << "  node " << vn;
      if (vx.parent != kNoVertex) {
        std::string pn = st.nameOf(vx.parent);
        if (pn.empty()) pn = "v" + std::to_string(vx.parent);
        out << " parent " << pn << " edge " << bagText(doc.net, vx.edgeLabel);
      }
      out << " marking " << bagText(doc.net, vx.marking) << ";\n";
    }
    out << "}\n";
  }
  for (const auto& [name, refs] : doc.targets) {
    out << "target " << name << " {";
    for (const auto& r : refs) out << ' ' << r;
    out << " }\n";
  }
  return out.str();
}

Script parse_script(std::string_view text) {
  Lexer lx{text};
  Script out;
  while (!lx.eof()) {
    lx.expect('(');
    ScriptEvent ev;
    ev.vertex = lx.ident();
    lx.expect(',');
    ev.transition = lx.ident();
    if (lx.peekKeyword("as")) {
      lx.keyword();
      ev.bindAs = lx.ident();
    }
    lx.expect(')');
    out.push_back(std::move(ev));
  }
  return out;
}

std::string script_to_text(const Script& script) {
  std::string out;
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (i) out += ' ';
    out += '(' + script[i].vertex + ", " + script[i].transition;
    if (!script[i].bindAs.empty()) out += " as " + script[i].bindAs;
    out += ')';
  }
  return out;
}

Sequence resolve_script(const RpnDef& def, const NamedState& from, const Script& script) {
  std::map<std::string, VertexId> env;
  for (const auto& [n, v] : from.names) env[n] = v;
  TreeState cur = from.state;
  Sequence out;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const ScriptEvent& ev = script[i];
    auto tid = def.transId(ev.transition);
    if (!tid)
      throw Error("unknown-transition",
                  "step " + std::to_string(i) + ": no transition '" + ev.transition + "'");
    auto vit = env.find(ev.vertex);
    if (vit == env.end())
      throw Error("unknown-vertex",
                  "step " + std::to_string(i) + ": no vertex '" + ev.vertex + "'");
    FiringEvent fe{vit->second, *tid};
    FireResult r = [&] {
      try {
        return fire(def, cur, fe);
      } catch (const Error& e) {
        throw Error("not-enabled-at-step", "step " + std::to_string(i) + ": " + e.what());
      }
    }();
    if (!ev.bindAs.empty()) {
      if (!r.created)
        throw Error("bad-binding", "step " + std::to_string(i) + ": 'as' on a non-abstract firing");
      env[ev.bindAs] = *r.created;
    }
    out.push_back(fe);
    cur = std::move(r.state);
  }
  return out;
}

Script render_sequence(const RpnDef& def, const NamedState& from, const Sequence& seq) {
  std::map<VertexId, std::string> names;
  for (const auto& [n, v] : from.names) names[v] = n;
  TreeState cur = from.state;
  Script out;
  std::size_t fresh = 0;
  for (const FiringEvent& fe : seq) {
    ScriptEvent ev;
    auto nit = names.find(fe.vertex);
    ev.vertex = nit != names.end() ? nit->second : "v" + std::to_string(fe.vertex);
    ev.transition = def.transitions.at(fe.transition).name;
    FireResult r = fire(def, cur, fe);
    if (r.created) {
      ev.bindAs = "n" + std::to_string(++fresh);
      names[*r.created] = ev.bindAs;
    }
    out.push_back(std::move(ev));
    cur = std::move(r.state);
  }
  return out;
}

}  // namespace rpn
