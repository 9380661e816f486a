#include <map>

#include "ifcil/cil.hpp"

namespace ifcil {

RuleSet::RuleSet(std::vector<LocatedRule> rules) {
  for (auto& r : rules) add(std::move(r));
}

bool RuleSet::add(LocatedRule r) {
  if (!keys_.insert(rule_key(r)).second) return false;
  rules_.push_back(std::move(r));
  return true;
}

bool RuleSet::contains(const LocatedRule& r) const { return keys_.count(rule_key(r)) > 0; }

bool RuleSet::same_set(const RuleSet& o) const { return keys_ == o.keys_; }

bool is_declaration(const Rule& r) {
  return std::holds_alternative<BlockDecl>(r) || std::holds_alternative<TypeDecl>(r) ||
         std::holds_alternative<TypeAttributeDecl>(r) || std::holds_alternative<MacroDecl>(r);
}

bool is_command(const Rule& r) {
  return std::holds_alternative<Allow>(r) || std::holds_alternative<TypeAttributeSet>(r) ||
         std::holds_alternative<Call>(r) || std::holds_alternative<IflRule>(r);
}

std::string rule_key(const LocatedRule& r) { return r.ns.str() + '\x1e' + print_rule(r.rule); }

std::string print_expr(const AttrExpr& e) {
  using Op = AttrExpr::Op;
  if (e.op == Op::Name) return e.name.str();
  std::string out = "(";
  switch (e.op) {
    case Op::And: out += "and"; break;
    case Op::Or: out += "or"; break;
    case Op::Xor: out += "xor"; break;
    case Op::Not: out += "not"; break;
    default: break;
  }
  for (size_t i = 0; i < e.operands.size(); ++i) {
    if (i > 0 || e.op != Op::List) out += ' ';
    out += print_expr(e.operands[i]);
  }
  return out + ")";
}

namespace {

std::string island(const std::string& body) { return ";IFL; " + body + " ;IFL;"; }

std::string refinements_text(const std::vector<Refinement>& refs) {
  std::string out;
  for (const auto& r : refs) out += " " + island(to_string(r));
  return out;
}

std::string macro_header(const MacroDecl& m) {
  std::string out = "(macro " + m.name + " (";
  for (size_t i = 0; i < m.params.size(); ++i) out += (i ? " " : "") + std::string("(type ") + m.params[i] + ")";
  return out + ")";
}

struct Printer {
  std::map<QualifiedName, std::vector<const Rule*>> by_ns;

  void body(const QualifiedName& ns, int depth, std::vector<std::string>& lines) const {
    auto it = by_ns.find(ns);
    if (it == by_ns.end()) return;
    std::string pad(2 * depth, ' ');
    for (const Rule* r : it->second) {
      std::string header;
      QualifiedName inner;
      if (auto* b = std::get_if<BlockDecl>(r)) {
        header = "(block " + b->name;
        inner = ns.child(b->name);
      } else if (auto* m = std::get_if<MacroDecl>(r)) {
        header = macro_header(*m);
        inner = ns.child(m->name);
      } else {
        lines.push_back(pad + print_rule(*r));
        continue;
      }
      lines.push_back(pad + header);
      body(inner, depth + 1, lines);
      lines.back() += ")";
    }
  }
};

}  // namespace

std::string print_rule(const Rule& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BlockDecl>) {
          return "(block " + r.name + ")";
        } else if constexpr (std::is_same_v<T, TypeDecl>) {
          return "(type " + r.name + ")";
        } else if constexpr (std::is_same_v<T, TypeAttributeDecl>) {
          return "(typeattribute " + r.name + ")";
        } else if constexpr (std::is_same_v<T, MacroDecl>) {
          return macro_header(r) + ")";
        } else if constexpr (std::is_same_v<T, Allow>) {
          std::string perms;
          for (const auto& p : r.perms) perms += (perms.empty() ? "" : " ") + p;
          return "(allow " + r.src.str() + " " + r.dst.str() + " (" + r.cls + " (" + perms + ")))";
        } else if constexpr (std::is_same_v<T, TypeAttributeSet>) {
          return "(typeattributeset " + r.attr.str() + " " + print_expr(r.expr) + ")";
        } else if constexpr (std::is_same_v<T, Call>) {
          std::string out = "(call " + r.macro.str() + " (";
          for (size_t i = 0; i < r.args.size(); ++i) out += (i ? " " : "") + r.args[i].str();
          return out + ")" + refinements_text(r.refinements) + ")";
        } else if constexpr (std::is_same_v<T, BlockInherit>) {
          return "(blockinherit " + r.block.str() + refinements_text(r.refinements) + ")";
        } else if constexpr (std::is_same_v<T, IflRule>) {
          return island(to_string(r.req));
        } else {
          return r.text;
        }
      },
      rule);
}

std::string print_config(const RuleSet& rules) {
  Printer p;
  for (const auto& r : rules) p.by_ns[r.ns].push_back(&r.rule);
  std::vector<std::string> lines;
  p.body(QualifiedName::global(), 0, lines);
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string print_flat(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules) out += r.ns.str() + "\t" + print_rule(r.rule) + "\n";
  return out;
}

}  // namespace ifcil
