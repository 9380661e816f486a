#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ifcil/diagnostics.hpp"
#include "ifcil/ifl.hpp"
#include "ifcil/qualified_name.hpp"

namespace ifcil {

struct AttrExpr {
  // List is a bare name list `(a b c)`, read as a union.
  enum class Op { Name, List, And, Or, Xor, Not };
  Op op = Op::Name;
  QualifiedName name;
  std::vector<AttrExpr> operands;

  static AttrExpr leaf(QualifiedName n) { return {Op::Name, std::move(n), {}}; }

  bool operator==(const AttrExpr&) const = default;
};

// Block and macro bodies are not nested here: the body of a block `n`
// declared in namespace s is the set of rules located at s.n.
struct BlockDecl {
  std::string name;
  bool operator==(const BlockDecl&) const = default;
};
struct TypeDecl {
  std::string name;
  bool operator==(const TypeDecl&) const = default;
};
struct TypeAttributeDecl {
  std::string name;
  bool operator==(const TypeAttributeDecl&) const = default;
};
struct MacroDecl {
  std::string name;
  std::vector<std::string> params;  // every parameter has kind `type`
  bool operator==(const MacroDecl&) const = default;
};
struct Allow {
  QualifiedName src;
  QualifiedName dst;
  std::string cls;
  std::vector<std::string> perms;  // sorted, unique
  bool operator==(const Allow&) const = default;
};
struct TypeAttributeSet {
  QualifiedName attr;
  AttrExpr expr;
  bool operator==(const TypeAttributeSet&) const = default;
};
struct Call {
  QualifiedName macro;
  std::vector<QualifiedName> args;
  std::vector<Refinement> refinements;
  bool operator==(const Call&) const = default;
};
struct BlockInherit {
  QualifiedName block;
  std::vector<Refinement> refinements;
  bool operator==(const BlockInherit&) const = default;
};
struct IflRule {
  LabeledRequirement req;
  bool operator==(const IflRule&) const = default;
};
struct Unsupported {
  std::string text;
  bool operator==(const Unsupported&) const = default;
};

using Rule = std::variant<BlockDecl, TypeDecl, TypeAttributeDecl, MacroDecl, Allow, TypeAttributeSet,
                          Call, BlockInherit, IflRule, Unsupported>;

struct LocatedRule {
  QualifiedName ns;
  Rule rule;
  bool operator==(const LocatedRule&) const = default;
};

// Ordered set of located rules: document order is kept, duplicates dropped.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<LocatedRule> rules);

  bool add(LocatedRule r);
  bool contains(const LocatedRule& r) const;

  const std::vector<LocatedRule>& rules() const { return rules_; }
  size_t size() const { return rules_.size(); }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  bool operator==(const RuleSet& o) const { return rules_ == o.rules_; }
  bool same_set(const RuleSet& o) const;

 private:
  std::vector<LocatedRule> rules_;
  std::unordered_set<std::string> keys_;
};

bool is_command(const Rule& r);
bool is_declaration(const Rule& r);

std::string rule_key(const LocatedRule& r);

RuleSet parse_config(std::string_view text, Diagnostics* diags = nullptr);

std::string print_rule(const Rule& r);
std::string print_expr(const AttrExpr& e);
std::string print_config(const RuleSet& rules);
// One `ns: rule` line per located rule.
std::string print_flat(const RuleSet& rules);

template <class F>
AttrExpr map_expr_names(AttrExpr e, F&& f) {
  if (e.op == AttrExpr::Op::Name) e.name = f(e.name);
  for (auto& o : e.operands) o = map_expr_names(std::move(o), f);
  return e;
}

}  // namespace ifcil
