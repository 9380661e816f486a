#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ifcil/cil.hpp"
#include "ifcil/graph.hpp"
#include "ifcil/verifier.hpp"

namespace ifcil {

// A KTS plus an absorbing `sink` state reachable from every state by every
// operation, so finite flow paths become infinite runs.
struct SinkKts {
  Kts kts;  // state 0 is the sink
  std::map<QualifiedName, std::string> mangled;  // types and typeattributes
};

SinkKts add_sink(const Kts& kts, const NodeSet& nodes);

struct AttributeDefinition {
  QualifiedName name;
  std::vector<AttrExpr> sets;
  bool cyclic = false;
  std::set<QualifiedName> members;
};

std::vector<AttributeDefinition> attribute_definitions(const RuleSet& normal, const Graph& g);

struct EmitOptions {
  // Pin path ends with X(type=sink).
  bool exact_ends = false;
};

std::string emit_nusmv(const SinkKts& ks, const std::vector<AttributeDefinition>& attrs,
                       const std::vector<LabeledRequirement>& reqs, const EmitOptions& opts = {});

// Maps `-- specification ... is true|false` lines, in order, to verdicts.
std::vector<Verdict> parse_response(std::string_view text, const std::vector<LabeledRequirement>& reqs);

std::string mangle(const QualifiedName& q);

}  // namespace ifcil
