#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ifcil/cil.hpp"
#include "ifcil/graph.hpp"
#include "ifcil/normalize.hpp"
#include "ifcil/verifier.hpp"

namespace ifcil::testing {

inline std::string data_path(const std::string& name) { return std::string(IFCIL_TEST_DATA) + "/" + name; }

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse, normalize and build everything down to the KTS.
struct Pipeline {
  Diagnostics diags;
  RuleSet parsed;
  RuleSet normal;
  Graph graph;
  std::vector<LabeledRequirement> reqs;
  Ifd ifd;
  Kts kts;

  explicit Pipeline(const std::string& text, const FlowTable& table = FlowTable::defaults()) {
    parsed = parse_config(text, &diags);
    normal = normalize(parsed, &diags);
    graph = build_graph(normal, &diags);
    reqs = collect_requirements(normal, graph);
    ifd = build_ifd(graph, table, false, &diags);
    kts = build_kts(ifd);
  }

  static Pipeline fixture(const std::string& name) { return Pipeline(read_data(name)); }

  const LabeledRequirement& req(const std::string& label) const {
    for (const auto& r : reqs)
      if (r.label == label) return r;
    throw std::runtime_error("no requirement " + label);
  }
};

inline QualifiedName qn(const std::string& s) { return QualifiedName::parse(s); }

}  // namespace ifcil::testing
