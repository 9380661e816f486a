#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ifcil/qualified_name.hpp"

namespace ifcil {

struct NodeRef {
  bool wildcard = true;
  QualifiedName name;

  static NodeRef any() { return {}; }
  static NodeRef named(QualifiedName n) { return {false, std::move(n)}; }

  auto operator<=>(const NodeRef&) const = default;
  bool operator==(const NodeRef&) const = default;
};

struct OpSet {
  bool all = true;
  std::set<std::string> ops;

  static OpSet any() { return {}; }
  static OpSet of(std::set<std::string> ops) { return {false, std::move(ops)}; }

  bool contains(const std::string& op) const { return all || ops.count(op) > 0; }
  bool subset_of(const OpSet& other) const;
  OpSet unite(const OpSet& other) const;
  OpSet intersect(const OpSet& other) const;
  bool empty() const { return !all && ops.empty(); }

  auto operator<=>(const OpSet&) const = default;
  bool operator==(const OpSet&) const = default;
};

enum class Arrow { Single, Multi };

struct Step {
  Arrow arrow = Arrow::Multi;
  OpSet ops;

  auto operator<=>(const Step&) const = default;
  bool operator==(const Step&) const = default;
};

// n0 s0 n1 s1 ... n_k. Consecutive segments share the boundary node, so the
// invariant nodes.size() == steps.size() + 1 holds by construction.
struct Kind {
  std::vector<NodeRef> nodes;
  std::vector<Step> steps;

  size_t size() const { return steps.size(); }
  bool valid() const { return !steps.empty() && nodes.size() == steps.size() + 1; }

  auto operator<=>(const Kind&) const = default;
  bool operator==(const Kind&) const = default;
};

struct Requirement {
  enum class Type { Exists, Prohibit, Constraint };
  Type type = Type::Exists;
  Kind kind;        // P, or the antecedent of a constraint
  Kind consequent;  // only meaningful for constraints

  static Requirement exists(Kind k) { return {Type::Exists, std::move(k), {}}; }
  static Requirement prohibit(Kind k) { return {Type::Prohibit, std::move(k), {}}; }
  static Requirement constraint(Kind a, Kind c) { return {Type::Constraint, std::move(a), std::move(c)}; }

  auto operator<=>(const Requirement&) const = default;
  bool operator==(const Requirement&) const = default;
};

struct LabeledRequirement {
  std::string label;
  Requirement requirement;

  auto operator<=>(const LabeledRequirement&) const = default;
  bool operator==(const LabeledRequirement&) const = default;
};

// (new:target) R, where target may be a dotted label path for blockinherit.
struct Refinement {
  std::string label;
  std::string target;
  Requirement requirement;

  auto operator<=>(const Refinement&) const = default;
  bool operator==(const Refinement&) const = default;
};

using IflItem = std::variant<LabeledRequirement, Refinement>;

IflItem parse_ifl(std::string_view text);
Kind parse_kind(std::string_view text);
Requirement parse_requirement(std::string_view text);

std::string to_string(const NodeRef& n);
std::string to_string(const Step& s);
std::string to_string(const Kind& k);
std::string to_string(const Requirement& r);
std::string to_string(const LabeledRequirement& r);
std::string to_string(const Refinement& r);

// Names appearing in a requirement, wildcards excluded.
std::vector<QualifiedName> named_nodes(const Requirement& r);

template <class F>
Requirement map_nodes(Requirement r, F&& f) {
  for (auto* k : {&r.kind, &r.consequent})
    for (auto& n : k->nodes)
      if (!n.wildcard) n.name = f(n.name);
  return r;
}

Requirement substitute(const Requirement& r, const std::map<std::string, QualifiedName>& binding);

}  // namespace ifcil
