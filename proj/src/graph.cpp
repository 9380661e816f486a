#include "ifcil/graph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ifcil/resolve.hpp"

namespace ifcil {

std::vector<int> NodeSet::types() const {
  std::vector<int> out;
  for (size_t i = 0; i < names.size(); ++i)
    if (is_type[i]) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

struct Decls {
  std::set<QualifiedName> types;
  std::set<QualifiedName> attrs;
  std::map<QualifiedName, std::vector<const AttrExpr*>> sets;
};

Decls collect(const RuleSet& normal) {
  DeclIndex idx(normal);
  Decls d;
  for (const auto& r : normal) {
    if (idx.in_macro(r.ns)) continue;
    if (auto* t = std::get_if<TypeDecl>(&r.rule)) d.types.insert(r.ns.child(t->name));
    if (auto* a = std::get_if<TypeAttributeDecl>(&r.rule)) d.attrs.insert(r.ns.child(a->name));
  }
  for (const auto& r : normal) {
    if (idx.in_macro(r.ns)) continue;
    if (auto* s = std::get_if<TypeAttributeSet>(&r.rule)) {
      if (!d.attrs.count(s->attr)) throw SemanticError("typeattributeset on undeclared typeattribute " + s->attr.str());
      d.sets[s->attr].push_back(&s->expr);
    }
  }
  return d;
}

class AttrEval {
 public:
  explicit AttrEval(const Decls& d) : d_(d) {}

  std::set<QualifiedName> root(const QualifiedName& a) {
    stack_.clear();
    bool pruned = false;
    return attr(a, pruned);
  }

  std::set<QualifiedName> cyclic;

 private:
  std::set<QualifiedName> attr(const QualifiedName& a, bool& pruned) {
    if (auto it = memo_.find(a); it != memo_.end()) return it->second;
    if (std::find(stack_.begin(), stack_.end(), a) != stack_.end()) {
      for (auto it = std::find(stack_.begin(), stack_.end(), a); it != stack_.end(); ++it) cyclic.insert(*it);
      pruned = true;
      return {};
    }
    stack_.push_back(a);
    bool mine = false;
    std::set<QualifiedName> out;
    if (auto it = d_.sets.find(a); it != d_.sets.end())
      for (const AttrExpr* e : it->second) {
        auto s = expr(*e, mine);
        out.insert(s.begin(), s.end());
      }
    stack_.pop_back();
    if (!mine) memo_[a] = out;
    pruned = pruned || mine;
    return out;
  }

  std::set<QualifiedName> expr(const AttrExpr& e, bool& pruned) {
    using Op = AttrExpr::Op;
    switch (e.op) {
      case Op::Name:
        if (d_.types.count(e.name)) return {e.name};
        if (d_.attrs.count(e.name)) return attr(e.name, pruned);
        throw SemanticError("typeattribute expression names undeclared " + e.name.str());
      case Op::Not: {
        auto x = expr(e.operands[0], pruned);
        std::set<QualifiedName> out;
        std::set_difference(d_.types.begin(), d_.types.end(), x.begin(), x.end(), std::inserter(out, out.end()));
        return out;
      }
      case Op::List:
      case Op::Or:
      case Op::And:
      case Op::Xor: {
        std::set<QualifiedName> acc = expr(e.operands[0], pruned);
        for (size_t i = 1; i < e.operands.size(); ++i) {
          auto y = expr(e.operands[i], pruned);
          std::set<QualifiedName> out;
          if (e.op == Op::And)
            std::set_intersection(acc.begin(), acc.end(), y.begin(), y.end(), std::inserter(out, out.end()));
          else if (e.op == Op::Xor)
            std::set_symmetric_difference(acc.begin(), acc.end(), y.begin(), y.end(), std::inserter(out, out.end()));
          else
            std::set_union(acc.begin(), acc.end(), y.begin(), y.end(), std::inserter(out, out.end()));
          acc = std::move(out);
        }
        return acc;
      }
    }
    return {};
  }

  const Decls& d_;
  std::vector<QualifiedName> stack_;
  std::map<QualifiedName, std::set<QualifiedName>> memo_;
};

AttributeMembers resolve(const Decls& d, Diagnostics* diags) {
  AttrEval ev(d);
  AttributeMembers out;
  for (const auto& a : d.attrs) out.members[a] = ev.root(a);
  out.cyclic = ev.cyclic;
  if (!out.cyclic.empty()) {
    std::string names;
    for (const auto& c : out.cyclic) names += (names.empty() ? "" : ", ") + c.str();
    warn(diags, "cyclic typeattribute definitions (" + names +
                    "); a reference back into an attribute under evaluation was treated as empty");
  }
  return out;
}

}  // namespace

AttributeMembers resolve_typeattributes(const RuleSet& normal, Diagnostics* diags) {
  return resolve(collect(normal), diags);
}

Graph build_graph(const RuleSet& normal, Diagnostics* diags) {
  Decls d = collect(normal);
  AttributeMembers m = resolve(d, diags);
  Graph g;
  g.cyclic = m.cyclic;
  NodeSet& ns = g.nodes;
  std::set<QualifiedName> all = d.types;
  for (const auto& a : d.attrs) {
    if (d.types.count(a)) throw SemanticError(a.str() + " is declared both as type and typeattribute");
    all.insert(a);
  }
  for (const auto& n : all) {
    ns.index[n] = static_cast<int>(ns.names.size());
    ns.names.push_back(n);
    ns.is_type.push_back(d.types.count(n) > 0);
  }
  ns.ta.resize(ns.names.size());
  for (size_t i = 0; i < ns.names.size(); ++i) {
    if (ns.is_type[i]) {
      ns.ta[i].insert(static_cast<int>(i));
    } else {
      for (const auto& t : m.members[ns.names[i]]) ns.ta[i].insert(ns.id(t));
    }
  }

  DeclIndex idx(normal);
  for (const auto& r : normal) {
    auto* a = std::get_if<Allow>(&r.rule);
    if (!a || idx.in_macro(r.ns)) continue;
    int s = ns.id(a->src), t = ns.id(a->dst);
    if (s < 0) throw SemanticError("allow names undeclared " + a->src.str());
    if (t < 0) throw SemanticError("allow names undeclared " + a->dst.str());
    std::set<ClassPerm> perms;
    for (const auto& p : a->perms) perms.insert({a->cls, p});
    g.arcs[{s, t}].insert(perms.begin(), perms.end());
    for (int s2 : ns.ta[s])
      for (int t2 : ns.ta[t]) g.arcs[{s2, t2}].insert(perms.begin(), perms.end());
  }
  return g;
}

std::vector<LabeledRequirement> collect_requirements(const RuleSet& normal, const Graph& g) {
  DeclIndex idx(normal);
  std::vector<LabeledRequirement> out;
  std::set<std::string> labels;
  for (const auto& r : normal) {
    auto* i = std::get_if<IflRule>(&r.rule);
    if (!i || idx.in_macro(r.ns)) continue;
    for (const auto& n : named_nodes(i->req.requirement))
      if (g.nodes.id(n) < 0)
        throw SemanticError("requirement " + i->req.label + " names unknown node " + n.str());
    LabeledRequirement lr = i->req;
    if (!r.ns.is_global()) lr.label = r.ns.str().substr(1) + "." + lr.label;
    if (!labels.insert(lr.label).second) throw SemanticError("duplicate requirement label " + lr.label);
    out.push_back(std::move(lr));
  }
  return out;
}

FlowTable FlowTable::defaults() {
  FlowTable t;
  for (const char* op : {"read", "getattr"}) t.set(op, FlowDirection::Backward);
  for (const char* op : {"write", "append", "setattr"}) t.set(op, FlowDirection::Forward);
  t.set("ioctl", FlowDirection::Both);
  return t;
}

FlowTable FlowTable::parse(std::string_view text) {
  static const std::map<std::string, FlowDirection> names = {
      {"forward", FlowDirection::Forward},
      {"backward", FlowDirection::Backward},
      {"both", FlowDirection::Both},
      {"none", FlowDirection::None},
  };
  FlowTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key, dir, extra;
    if (!(ls >> key)) continue;
    if (!(ls >> dir) || (ls >> extra)) throw FlowTableError("flow table line " + std::to_string(n) + ": expected `<op> <direction>`");
    std::transform(dir.begin(), dir.end(), dir.begin(), [](unsigned char c) { return std::tolower(c); });
    auto it = names.find(dir);
    if (it == names.end()) throw FlowTableError("flow table line " + std::to_string(n) + ": unknown direction `" + dir + "`");
    t.set(key, it->second);
  }
  return t;
}

std::optional<FlowDirection> FlowTable::lookup(const std::string& cls, const std::string& op) const {
  if (auto it = entries_.find(cls + "." + op); it != entries_.end()) return it->second;
  if (auto it = entries_.find(op); it != entries_.end()) return it->second;
  return std::nullopt;
}

FlowTable FlowTable::overlay(const FlowTable& top) const {
  FlowTable t = *this;
  for (const auto& [k, v] : top.entries_) t.entries_[k] = v;
  return t;
}

Ifd build_ifd(const Graph& g, const FlowTable& table, bool strict, Diagnostics* diags) {
  Ifd ifd;
  ifd.nodes = g.nodes;
  std::set<ClassPerm> unknown;
  for (const auto& [arc, perms] : g.arcs) {
    for (const auto& cp : perms) {
      auto d = table.lookup(cp.first, cp.second);
      if (!d) {
        if (strict) throw FlowTableError("no flow direction for " + cp.first + "." + cp.second);
        unknown.insert(cp);
        continue;
      }
      if (*d == FlowDirection::Forward || *d == FlowDirection::Both) ifd.arcs[arc].insert(cp.second);
      if (*d == FlowDirection::Backward || *d == FlowDirection::Both) ifd.arcs[{arc.second, arc.first}].insert(cp.second);
    }
  }
  for (const auto& cp : unknown)
    warn(diags, "no flow direction for " + cp.first + "." + cp.second + "; treated as none");
  return ifd;
}

}  // namespace ifcil
