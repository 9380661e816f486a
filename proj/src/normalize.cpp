#include "ifcil/normalize.hpp"

#include <functional>
#include <map>
#include <set>
#include <unordered_set>

#include "ifcil/refine.hpp"
#include "ifcil/resolve.hpp"

namespace ifcil {

namespace {

using NameFn = std::function<QualifiedName(const QualifiedName&, NameKind)>;

Requirement map_requirement(const Requirement& r, const NameFn& f) {
  return map_nodes(r, [&](const QualifiedName& q) { return f(q, NameKind::Type); });
}

std::vector<Refinement> map_refinements(std::vector<Refinement> refs, const NameFn& f) {
  for (auto& r : refs) r.requirement = map_requirement(r.requirement, f);
  return refs;
}

Rule map_names(const Rule& rule, const NameFn& f) {
  Rule out = rule;
  if (auto* a = std::get_if<Allow>(&out)) {
    a->src = f(a->src, NameKind::Type);
    a->dst = f(a->dst, NameKind::Type);
  } else if (auto* s = std::get_if<TypeAttributeSet>(&out)) {
    s->attr = f(s->attr, NameKind::TypeAttribute);
    s->expr = map_expr_names(s->expr, [&](const QualifiedName& q) { return f(q, NameKind::Type); });
  } else if (auto* c = std::get_if<Call>(&out)) {
    c->macro = f(c->macro, NameKind::Macro);
    for (auto& a : c->args) a = f(a, NameKind::Type);
    c->refinements = map_refinements(c->refinements, f);
  } else if (auto* b = std::get_if<BlockInherit>(&out)) {
    b->block = f(b->block, NameKind::Block);
    b->refinements = map_refinements(b->refinements, f);
  } else if (auto* i = std::get_if<IflRule>(&out)) {
    i->req.requirement = map_requirement(i->req.requirement, f);
  }
  return out;
}

Rule bind_args(const Rule& rule, const std::map<std::string, QualifiedName>& binding) {
  return map_names(rule, [&](const QualifiedName& q, NameKind k) {
    if (k == NameKind::Macro || k == NameKind::Block || !q.is_simple()) return q;
    auto it = binding.find(q.last());
    return it == binding.end() ? q : it->second;
  });
}

// Anchor what already resolves from `ns` so requirements written in
// different scopes can be compared node by node.
Requirement canonical(const Requirement& r, const QualifiedName& ns, const DeclIndex& idx) {
  return map_nodes(r, [&](const QualifiedName& q) {
    auto res = eval_or(ns, QualifiedName::global(), NameKind::Type, q, idx);
    return res ? *res : q;
  });
}

Requirement refine_requirement(const Requirement& base, const Refinement& ref, const QualifiedName& base_ns,
                               const QualifiedName& ref_ns, const DeclIndex& idx) {
  MeetResult m = meet(canonical(base, base_ns, idx), canonical(ref.requirement, ref_ns, idx));
  if (m.value) return *m.value;
  if (m.inconclusive)
    throw NormalizeError("could not decide the refinement (" + ref.label + ":" + ref.target + ") within budget");
  throw NormalizeError("refinement (" + ref.label + ":" + ref.target + ") " + to_string(ref.requirement) +
                       " has no common refinement with " + to_string(base));
}

std::string ref_id(const LocatedRule& owner, size_t i) { return rule_key(owner) + '\x1d' + std::to_string(i); }

void check_inherit_refinements_used(const RuleSet& rules, const std::set<std::string>& used) {
  for (const auto& r : rules) {
    auto* b = std::get_if<BlockInherit>(&r.rule);
    if (!b) continue;
    const auto* refs = &b->refinements;
    for (size_t i = 0; i < refs->size(); ++i)
      if (!used.count(ref_id(r, i)))
        throw NormalizeError("refinement (" + (*refs)[i].label + ":" + (*refs)[i].target +
                             ") matches no requirement, in " + r.ns.str() + ": " + print_rule(r.rule));
  }
}

// Rebuilds a rule list, inserting generated rules around the rule that
// produced them. Returns true when anything new appeared.
class Builder {
 public:
  explicit Builder(const RuleSet& cur) {
    for (const auto& r : cur) seen_.insert(rule_key(r));
  }
  void keep(const LocatedRule& r) { out_.add(r); }
  void add(LocatedRule r) {
    if (seen_.insert(rule_key(r)).second) {
      out_.add(std::move(r));
      grew_ = true;
    }
  }
  bool grew() const { return grew_; }
  RuleSet take() { return std::move(out_); }

 private:
  std::unordered_set<std::string> seen_;
  RuleSet out_;
  bool grew_ = false;
};

std::string join_label(const QualifiedName& rel, const std::string& label) {
  std::string out;
  for (const auto& s : rel.path) out += s + ".";
  return out + label;
}

void check_inherit_cycles(const RuleSet& rules) {
  std::map<QualifiedName, std::set<QualifiedName>> edges;
  for (const auto& r : rules) {
    auto* b = std::get_if<BlockInherit>(&r.rule);
    if (!b) continue;
    for (QualifiedName s = r.ns; !s.is_global(); s = s.prefix()) edges[s].insert(b->block);
  }
  std::map<QualifiedName, int> state;
  std::function<void(const QualifiedName&)> visit = [&](const QualifiedName& n) {
    state[n] = 1;
    for (const auto& m : edges[n]) {
      if (state[m] == 1) throw NormalizeError("cyclic blockinherit involving " + m.str());
      if (state[m] == 0) visit(m);
    }
    state[n] = 2;
  };
  for (const auto& [n, _] : edges)
    if (state[n] == 0) visit(n);
}

}  // namespace

RuleSet resolve_inherits(const RuleSet& rules) {
  DeclIndex idx(rules);
  RuleSet out;
  for (const auto& r : rules) {
    auto* b = std::get_if<BlockInherit>(&r.rule);
    if (!b || b->block.anchored) {
      out.add(r);
      continue;
    }
    auto res = eval_or(r.ns, QualifiedName::global(), NameKind::Block, b->block, idx);
    if (!res) throw NormalizeError("cannot resolve block `" + b->block.str() + "` in " + r.ns.str());
    BlockInherit nb = *b;
    nb.block = *res;
    out.add({r.ns, nb});
  }
  return out;
}

RuleSet expand_inherits(const RuleSet& rules) {
  check_inherit_cycles(rules);
  size_t bound = 2;
  for (const auto& r : rules)
    if (std::holds_alternative<BlockDecl>(r.rule)) ++bound;

  RuleSet cur = rules;
  std::set<std::string> used;
  for (size_t iter = 0;; ++iter) {
    if (iter > bound) throw NormalizeError("blockinherit expansion did not reach a fixpoint");
    DeclIndex idx(cur);
    Builder b(cur);
    for (const auto& r : cur) {
      b.keep(r);
      auto* inh = std::get_if<BlockInherit>(&r.rule);
      if (!inh) continue;
      if (!idx.declares(inh->block.prefix(), NameKind::Block, inh->block.last()))
        throw NormalizeError("blockinherit of undeclared block " + inh->block.str());
      for (const auto& src : cur) {
        if (!src.ns.has_prefix(inh->block)) continue;
        QualifiedName rho = src.ns.relative_to(inh->block);
        QualifiedName target = r.ns.concat(rho);
        auto* ifl = std::get_if<IflRule>(&src.rule);
        if (!ifl) {
          b.add({target, src.rule});
          continue;
        }
        std::string wanted = join_label(rho, ifl->req.label);
        bool refined = false;
        for (size_t i = 0; i < inh->refinements.size(); ++i) {
          const Refinement& ref = inh->refinements[i];
          if (ref.target != wanted) continue;
          refined = true;
          used.insert(ref_id(r, i));
          Requirement m = refine_requirement(ifl->req.requirement, ref, target, r.ns, idx);
          b.add({target, IflRule{{ref.label, m}}});
        }
        if (!refined) b.add({target, src.rule});
      }
    }
    RuleSet next = b.take();
    bool grew = b.grew();
    cur = std::move(next);
    if (!grew) break;
  }
  check_inherit_refinements_used(cur, used);
  RuleSet out;
  for (const auto& r : cur)
    if (!std::holds_alternative<BlockInherit>(r.rule)) out.add(r);
  return out;
}

RuleSet resolve_calls(const RuleSet& rules) {
  DeclIndex idx(rules);
  RuleSet out;
  for (const auto& r : rules) {
    auto* c = std::get_if<Call>(&r.rule);
    if (!c || c->macro.anchored) {
      out.add(r);
      continue;
    }
    auto res = eval_or(r.ns, QualifiedName::global(), NameKind::Macro, c->macro, idx);
    if (!res) throw NormalizeError("cannot resolve macro `" + c->macro.str() + "` in " + r.ns.str());
    Call nc = *c;
    nc.macro = *res;
    out.add({r.ns, nc});
  }
  return out;
}

RuleSet copy_macro_declarations(const RuleSet& rules) {
  RuleSet cur = rules;
  while (true) {
    std::map<QualifiedName, std::vector<const Rule*>> decls;
    for (const auto& r : cur)
      if (std::holds_alternative<TypeDecl>(r.rule) || std::holds_alternative<TypeAttributeDecl>(r.rule))
        decls[r.ns].push_back(&r.rule);
    Builder b(cur);
    for (const auto& r : cur) {
      if (auto* c = std::get_if<Call>(&r.rule)) {
        auto it = decls.find(c->macro);
        if (it != decls.end())
          for (const Rule* d : it->second) b.add({r.ns, *d});
      }
      b.keep(r);
    }
    bool grew = b.grew();
    cur = b.take();
    if (!grew) return cur;
  }
}

RuleSet expand_calls(const RuleSet& rules) {
  RuleSet cur = rules;
  std::set<std::string> used;
  // Refinements keep their identity across the name rewrites of this phase.
  std::map<std::string, std::string> origin;

  auto rewrite_macro_bodies = [&](const RuleSet& in) {
    DeclIndex idx(in);
    RuleSet out;
    for (const auto& r : in) {
      const auto* params = idx.macro_params(r.ns);
      if (!params || !is_command(r.rule)) {
        out.add(r);
        continue;
      }
      Rule nr = map_names(r.rule, [&](const QualifiedName& q, NameKind k) {
        if (q.anchored) return q;
        if (q.is_simple() && std::find(params->begin(), params->end(), q.last()) != params->end()) return q;
        if (eval(r.ns, k, q, idx)) return q;
        auto res = eval_bar(r.ns, k, q, idx);
        return res ? *res : q;
      });
      LocatedRule lr{r.ns, nr};
      if (auto* c = std::get_if<Call>(&nr)) {
        for (size_t i = 0; i < c->refinements.size(); ++i) {
          auto old = origin.find(ref_id(r, i));
          origin[ref_id(lr, i)] = old == origin.end() ? ref_id(r, i) : old->second;
        }
      }
      out.add(std::move(lr));
    }
    return out;
  };
  auto id_of = [&](const LocatedRule& r, size_t i) {
    auto it = origin.find(ref_id(r, i));
    return it == origin.end() ? ref_id(r, i) : it->second;
  };

  RuleSet original = cur;
  while (true) {
    bool changed = false;
    for (RuleSet prev = cur;; prev = cur) {
      cur = rewrite_macro_bodies(cur);
      if (cur == prev) break;
      changed = true;
    }

    while (true) {
      DeclIndex idx(cur);
      std::set<QualifiedName> has_calls;
      std::map<QualifiedName, std::vector<const Rule*>> bodies;
      for (const auto& r : cur) {
        if (std::holds_alternative<Call>(r.rule)) has_calls.insert(r.ns);
        if (is_command(r.rule)) bodies[r.ns].push_back(&r.rule);
      }
      Builder b(cur);
      for (const auto& r : cur) {
        b.keep(r);
        auto* c = std::get_if<Call>(&r.rule);
        if (!c || has_calls.count(c->macro)) continue;
        const auto* params = idx.macro_params(c->macro);
        if (!params) throw NormalizeError(c->macro.str() + " is not a macro");
        if (params->size() != c->args.size())
          throw NormalizeError("macro " + c->macro.str() + " expects " + std::to_string(params->size()) +
                               " arguments, got " + std::to_string(c->args.size()));
        std::map<std::string, QualifiedName> binding;
        for (size_t i = 0; i < params->size(); ++i) binding[(*params)[i]] = c->args[i];
        for (const Rule* body : bodies[c->macro]) {
          Rule bound = bind_args(*body, binding);
          auto* ifl = std::get_if<IflRule>(&bound);
          if (!ifl) {
            b.add({r.ns, bound});
            continue;
          }
          bool refined = false;
          for (size_t i = 0; i < c->refinements.size(); ++i) {
            const Refinement& ref = c->refinements[i];
            if (ref.target != ifl->req.label) continue;
            refined = true;
            used.insert(id_of(r, i));
            Requirement m = refine_requirement(ifl->req.requirement, ref, r.ns, r.ns, idx);
            b.add({r.ns, IflRule{{ref.label, m}}});
          }
          if (!refined) b.add({r.ns, bound});
        }
      }
      bool grew = b.grew();
      cur = b.take();
      if (!grew) break;
      changed = true;
    }

    std::set<QualifiedName> has_calls;
    for (const auto& r : cur)
      if (std::holds_alternative<Call>(r.rule)) has_calls.insert(r.ns);
    RuleSet kept;
    for (const auto& r : cur) {
      auto* c = std::get_if<Call>(&r.rule);
      if (c && !has_calls.count(c->macro)) {
        changed = true;
        continue;
      }
      kept.add(r);
    }
    cur = std::move(kept);
    if (!changed) break;
  }

  for (const auto& r : cur)
    if (auto* c = std::get_if<Call>(&r.rule))
      throw NormalizeError("recursive macro call to " + c->macro.str() + " in " + r.ns.str());
  for (const auto& r : original) {
    auto* c = std::get_if<Call>(&r.rule);
    if (!c) continue;
    for (size_t i = 0; i < c->refinements.size(); ++i)
      if (!used.count(ref_id(r, i)))
        throw NormalizeError("refinement (" + c->refinements[i].label + ":" + c->refinements[i].target +
                             ") matches no requirement of " + c->macro.str());
  }
  return cur;
}

RuleSet anchor_names(const RuleSet& rules) {
  DeclIndex idx(rules);
  RuleSet out;
  for (const auto& r : rules) {
    if (idx.in_macro(r.ns)) {
      out.add(r);
      continue;
    }
    out.add({r.ns, map_names(r.rule, [&](const QualifiedName& q, NameKind k) {
               if (q.anchored) return q;
               auto res = eval_or(r.ns, QualifiedName::global(), k, q, idx);
               if (!res) throw NormalizeError("cannot resolve `" + q.str() + "` in " + r.ns.str());
               return *res;
             })});
  }
  return out;
}

RuleSet disambiguate_labels(const RuleSet& rules, Diagnostics* diags) {
  std::map<std::pair<QualifiedName, std::string>, std::vector<Requirement>> seen;
  std::set<std::pair<QualifiedName, std::string>> taken;
  for (const auto& r : rules)
    if (auto* i = std::get_if<IflRule>(&r.rule)) taken.insert({r.ns, i->req.label});
  RuleSet out;
  for (const auto& r : rules) {
    auto* i = std::get_if<IflRule>(&r.rule);
    if (!i) {
      out.add(r);
      continue;
    }
    auto& reqs = seen[{r.ns, i->req.label}];
    reqs.push_back(i->req.requirement);
    if (reqs.size() == 1) {
      out.add(r);
      continue;
    }
    std::string label;
    for (size_t n = reqs.size();; ++n) {
      label = i->req.label + "_" + std::to_string(n);
      if (taken.insert({r.ns, label}).second) break;
    }
    warn(diags, "label " + i->req.label + " in " + r.ns.str() + " names several requirements; renamed one to " +
                    label);
    out.add({r.ns, IflRule{{label, i->req.requirement}}});
  }
  return out;
}

RuleSet normalize(const RuleSet& rules, Diagnostics* diags) {
  RuleSet r = resolve_inherits(rules);
  r = expand_inherits(r);
  r = resolve_calls(r);
  r = copy_macro_declarations(r);
  r = expand_calls(r);
  r = anchor_names(r);
  return disambiguate_labels(r, diags);
}

RuleSet strip_ifl(const RuleSet& rules) {
  RuleSet out;
  for (const auto& r : rules) {
    if (std::holds_alternative<IflRule>(r.rule)) continue;
    Rule nr = r.rule;
    if (auto* c = std::get_if<Call>(&nr)) c->refinements.clear();
    if (auto* b = std::get_if<BlockInherit>(&nr)) b->refinements.clear();
    out.add({r.ns, std::move(nr)});
  }
  return out;
}

RuleSet project_blocks(const RuleSet& rules) {
  DeclIndex idx(rules);
  RuleSet out;
  for (const auto& r : rules)
    if (!idx.in_macro(r.ns) && !std::holds_alternative<MacroDecl>(r.rule)) out.add(r);
  return out;
}

}  // namespace ifcil
