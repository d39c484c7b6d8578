// The .rpn text format: a net block, named state blocks, named target blocks
// and per-transition labels in one file, so whole instances are single
// fixtures. Parse errors carry line/column.
#pragma once

#include "rpnkit/explore.hpp"
#include "rpnkit/model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rpn {

struct ParseError : Error {
  int line, col;
  ParseError(const std::string& msg, int l, int c)
      : Error("syntax-error", msg + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l),
        col(c) {}
};

struct NamedState {
  TreeState state;
  std::vector<std::pair<std::string, VertexId>> names;  // declaration order

  VertexId vertexByName(const std::string& n) const;
  std::string nameOf(VertexId v) const;  // "" when the vertex has no name
};

struct Document {
  RpnDef net;
  std::vector<std::pair<std::string, NamedState>> states;   // file order
  std::vector<std::pair<std::string, std::vector<std::string>>> targets;

  const NamedState& state(const std::string& name) const;
  CoverTarget target(const std::string& name) const;
  const std::string& firstStateName() const;
  const std::string& firstTargetName() const;
};

/// Parses and validates; throws ParseError for syntax and Error("validation")
/// for net/state violations.
Document parse(std::string_view text);

/// Canonical form: places and transitions sorted by id, counts of 1 omitted.
/// parse . print is the identity on canonical form.
std::string print(const Document& doc);
std::string print_net(const RpnDef& net);

/// Firing scripts, e.g. "(r, t_beg as v) (v, t_tau1)". Created vertices are
/// named with `as` bindings so replays are deterministic.
struct ScriptEvent {
  std::string vertex;
  std::string transition;
  std::string bindAs;  // empty = no binding
};
using Script = std::vector<ScriptEvent>;

Script parse_script(std::string_view text);
std::string script_to_text(const Script& script);

/// Resolves names/aliases to concrete vertex ids by replaying from the state.
Sequence resolve_script(const RpnDef& def, const NamedState& from, const Script& script);

/// Inverse of resolve_script: initial vertices keep their document names,
/// created vertices get aliases n1, n2, ... in creation order.
Script render_sequence(const RpnDef& def, const NamedState& from, const Sequence& seq);

/// One state rendered as a .rpn state block ("state <name> { ... }"); the
/// empty state renders as "state <name> { }".
std::string print_state(const RpnDef& net, const std::string& name, const TreeState& s);

}  // namespace rpn
