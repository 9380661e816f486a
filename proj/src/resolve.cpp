#include "ifcil/resolve.hpp"

namespace ifcil {

namespace {

char tag(NameKind k) {
  switch (k) {
    case NameKind::Type: return 't';
    case NameKind::TypeAttribute: return 'a';
    case NameKind::Block: return 'b';
    case NameKind::Macro: return 'm';
  }
  return '?';
}

std::string key(const QualifiedName& ns, NameKind k, const std::string& name) {
  return ns.str() + '\x1f' + tag(k) + '\x1f' + name;
}

}  // namespace

DeclIndex::DeclIndex(const RuleSet& rules) {
  for (const auto& r : rules) {
    if (auto* t = std::get_if<TypeDecl>(&r.rule)) {
      decls_.insert(key(r.ns, NameKind::Type, t->name));
    } else if (auto* a = std::get_if<TypeAttributeDecl>(&r.rule)) {
      decls_.insert(key(r.ns, NameKind::TypeAttribute, a->name));
    } else if (auto* b = std::get_if<BlockDecl>(&r.rule)) {
      decls_.insert(key(r.ns, NameKind::Block, b->name));
    } else if (auto* m = std::get_if<MacroDecl>(&r.rule)) {
      decls_.insert(key(r.ns, NameKind::Macro, m->name));
      macros_[r.ns.child(m->name)] = m->params;
    }
  }
}

bool DeclIndex::declares(const QualifiedName& ns, NameKind kind, const std::string& name) const {
  return decls_.count(key(ns, kind, name)) > 0;
}

const std::vector<std::string>* DeclIndex::macro_params(const QualifiedName& ns) const {
  auto it = macros_.find(ns);
  return it == macros_.end() ? nullptr : &it->second;
}

bool DeclIndex::in_macro(const QualifiedName& ns) const {
  for (std::optional<QualifiedName> n = ns; n; n = n->parent())
    if (is_macro(*n)) return true;
  return false;
}

std::optional<QualifiedName> eval(const QualifiedName& ns, NameKind kind, const QualifiedName& p,
                                  const DeclIndex& index) {
  if (p.anchored) return p;
  QualifiedName scope = ns.concat(p.prefix());
  if (index.declares(scope, kind, p.last()) ||
      (kind == NameKind::Type && index.declares(scope, NameKind::TypeAttribute, p.last())))
    return ns.concat(p);
  return std::nullopt;
}

std::optional<QualifiedName> eval_bar(const QualifiedName& ns, NameKind kind, const QualifiedName& p,
                                      const DeclIndex& index) {
  if (auto r = eval(ns, kind, p, index)) return r;
  if (ns.is_global()) return std::nullopt;
  for (QualifiedName s = ns.prefix(); !s.is_global(); s = s.prefix())
    if (auto r = eval(s, kind, p, index)) return r;
  return std::nullopt;
}

std::optional<QualifiedName> eval_or(const QualifiedName& ns, const QualifiedName& ns2, NameKind kind,
                                     const QualifiedName& p, const DeclIndex& index) {
  if (auto r = eval_bar(ns, kind, p, index)) return r;
  return eval_bar(ns2, kind, p, index);
}

}  // namespace ifcil
