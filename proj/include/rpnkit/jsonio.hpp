// JSON views of results for the CLI and the Python bindings. Key order is
// fixed and map iteration is sorted, so equal inputs give equal bytes.
#pragma once

#include "rpnkit/absgraph.hpp"
#include "rpnkit/decide.hpp"
#include "rpnkit/explore.hpp"
#include "rpnkit/io.hpp"
#include "rpnkit/order.hpp"

#include <json.hpp>

namespace rpn {

using Json = nlohmann::ordered_json;

Json marking_json(const RpnDef& net, const Marking& m);
Json state_json(const RpnDef& net, const TreeState& s);
Json verdict_json(const std::string& problem, const Verdict& v, const RpnDef& net,
                  const NamedState& from, bool withTiming);
Json order_json(const NamedState& a, const NamedState& b, bool rooted,
                const std::optional<Embedding>& f);
Json graph_json(const AbstractGraph& g, const RpnDef& net);
Json explore_json(const RpnDef& net, const ExploreResult& r);
Json member_json(const RpnDef& net, const NamedState& from,
                 const std::vector<std::string>& word, const MemberResult& r);
Json sample_json(const SampleResult& r);
Json sim_json(const RpnDef& net, const TreeState& final);
Json error_json(const Error& e);

}  // namespace rpn
