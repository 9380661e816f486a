#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>

#include "ifcil/cil.hpp"

namespace ifcil {

enum class NameKind { Type, TypeAttribute, Block, Macro };

class DeclIndex {
 public:
  DeclIndex() = default;
  explicit DeclIndex(const RuleSet& rules);

  bool declares(const QualifiedName& ns, NameKind kind, const std::string& name) const;
  // Parameters of the macro whose body namespace is `ns`, if it is one.
  const std::vector<std::string>* macro_params(const QualifiedName& ns) const;
  bool is_macro(const QualifiedName& ns) const { return macro_params(ns) != nullptr; }
  // True when `ns` lies inside a macro body.
  bool in_macro(const QualifiedName& ns) const;

 private:
  std::unordered_set<std::string> decls_;
  std::map<QualifiedName, std::vector<std::string>> macros_;
};

// eval: resolve p in exactly namespace ns. Type lookups fall back to
// typeattributes, since a typeattribute can stand wherever a type can.
std::optional<QualifiedName> eval(const QualifiedName& ns, NameKind kind, const QualifiedName& p,
                                  const DeclIndex& index);
// eval_bar: as eval, then retry in enclosing namespaces, stopping before the
// global namespace unless ns is global itself.
std::optional<QualifiedName> eval_bar(const QualifiedName& ns, NameKind kind, const QualifiedName& p,
                                      const DeclIndex& index);
// eval_bar in ns, falling back to eval_bar in ns2.
std::optional<QualifiedName> eval_or(const QualifiedName& ns, const QualifiedName& ns2, NameKind kind,
                                     const QualifiedName& p, const DeclIndex& index);

inline std::optional<QualifiedName> eval(const QualifiedName& ns, NameKind kind, const QualifiedName& p,
                                         const RuleSet& rules) {
  return eval(ns, kind, p, DeclIndex(rules));
}
inline std::optional<QualifiedName> eval_bar(const QualifiedName& ns, NameKind kind, const QualifiedName& p,
                                             const RuleSet& rules) {
  return eval_bar(ns, kind, p, DeclIndex(rules));
}
inline std::optional<QualifiedName> eval_or(const QualifiedName& ns, const QualifiedName& ns2, NameKind kind,
                                            const QualifiedName& p, const RuleSet& rules) {
  return eval_or(ns, ns2, kind, p, DeclIndex(rules));
}

}  // namespace ifcil
