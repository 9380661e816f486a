#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifcil/cil.hpp"
#include "ifcil/diagnostics.hpp"

namespace ifcil {

// Types and typeattributes declared in block or global namespaces.
struct NodeSet {
  std::vector<QualifiedName> names;  // sorted
  std::vector<bool> is_type;
  std::map<QualifiedName, int> index;
  std::vector<std::set<int>> ta;  // member types; a type maps to itself

  int id(const QualifiedName& q) const {
    auto it = index.find(q);
    return it == index.end() ? -1 : it->second;
  }
  size_t size() const { return names.size(); }
  std::vector<int> types() const;
};

using ClassPerm = std::pair<std::string, std::string>;

struct Graph {
  NodeSet nodes;
  // Permission arcs, closed over typeattribute membership.
  std::map<std::pair<int, int>, std::set<ClassPerm>> arcs;
  std::set<QualifiedName> cyclic;
};

struct AttributeMembers {
  std::map<QualifiedName, std::set<QualifiedName>> members;
  std::set<QualifiedName> cyclic;
};

// Typeattribute memberships over the declared types. A reference back into
// an attribute that is still being evaluated counts as empty, and only the
// attributes evaluated without such pruning are memoized, so the result does
// not depend on evaluation order.
AttributeMembers resolve_typeattributes(const RuleSet& normal, Diagnostics* diags = nullptr);

Graph build_graph(const RuleSet& normal, Diagnostics* diags = nullptr);

// Requirements in block and global namespaces, in document order.
std::vector<LabeledRequirement> collect_requirements(const RuleSet& normal, const Graph& g);

enum class FlowDirection { Forward, Backward, Both, None };

class FlowTable {
 public:
  static FlowTable defaults();
  // Lines of `<key> <forward|backward|both|none>`; key is `class.op` or `op`.
  static FlowTable parse(std::string_view text);

  void set(const std::string& key, FlowDirection d) { entries_[key] = d; }
  // The more specific `class.op` entry wins over a bare `op`.
  std::optional<FlowDirection> lookup(const std::string& cls, const std::string& op) const;
  FlowTable overlay(const FlowTable& top) const;
  const std::map<std::string, FlowDirection>& entries() const { return entries_; }

 private:
  std::map<std::string, FlowDirection> entries_;
};

struct Ifd {
  NodeSet nodes;
  std::map<std::pair<int, int>, std::set<std::string>> arcs;
};

// In strict mode an operation missing from the table is an error; otherwise
// it carries no flow and a warning is recorded.
Ifd build_ifd(const Graph& g, const FlowTable& table, bool strict = false, Diagnostics* diags = nullptr);

}  // namespace ifcil
