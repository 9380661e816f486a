#include "ifcil/nusmv.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "ifcil/resolve.hpp"

namespace ifcil {

std::string mangle(const QualifiedName& q) {
  std::string out;
  for (const auto& s : q.path) out += (out.empty() ? "" : "_") + s;
  return out;
}

namespace {

const std::set<std::string>& reserved() {
  static const std::set<std::string> words = {
      "sink", "type", "operation", "next", "MODULE", "DEFINE", "VAR", "IVAR", "TRANS", "INIT", "LTLSPEC",
      "TRUE", "FALSE", "X", "F", "G", "U", "V", "xor", "xnor", "mod", "in", "union", "case", "esac", "init",
      "self", "process", "boolean", "integer", "word", "array", "of", "A", "E", "Y", "Z", "H", "O", "S", "T"};
  return words;
}

bool valid_nusmv_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

class Emitter {
 public:
  Emitter(const SinkKts& ks, const EmitOptions& opts) : ks_(ks), opts_(opts) {}

  std::string expr(const AttrExpr& e) const {
    using Op = AttrExpr::Op;
    switch (e.op) {
      case Op::Name: return atom(e.name);
      case Op::Not: return "(!(" + expr(e.operands[0]) + "))";
      default: break;
    }
    if (e.operands.size() == 1) return expr(e.operands[0]);
    const char* sep = e.op == Op::And ? " & " : e.op == Op::Xor ? " xor " : " | ";
    std::string out = "(";
    for (size_t i = 0; i < e.operands.size(); ++i) out += (i ? sep : "") + expr(e.operands[i]);
    return out + ")";
  }

  std::string atom(const QualifiedName& q) const {
    const std::string& m = ks_.mangled.at(q);
    return ks_.kts.state_index.count(q) ? "type=" + m : m;
  }

  std::string ops(const OpSet& o) const {
    if (o.ops.size() == 1) return "operation=" + *o.ops.begin();
    std::string out = "(";
    for (const auto& op : o.ops) out += (out.size() > 1 ? " | " : "") + ("operation=" + op);
    return out + ")";
  }

  std::string kind(const Kind& k, size_t i) const {
    const Step& st = k.steps[i];
    bool last = i + 1 == k.steps.size();
    std::string tail;
    bool compound;
    if (last) {
      const NodeRef& end = k.nodes[i + 1];
      tail = end.wildcard ? "!(type=sink)" : atom(end.name);
      compound = false;
      if (opts_.exact_ends) {
        tail += " & X(type=sink)";
        compound = true;
      }
    } else {
      tail = kind(k, i + 1);
      compound = true;
    }
    std::string next;
    if (st.arrow == Arrow::Single) {
      next = "X(" + tail + ")";
    } else if (st.ops.all) {
      next = compound ? "X(F(" + tail + "))" : "X(F " + tail + ")";
    } else {
      std::string o = ops(st.ops);
      if (o.front() != '(') o = "(" + o + ")";
      next = "X(" + o + " U (" + tail + "))";
    }
    std::vector<std::string> head;
    if (!k.nodes[i].wildcard) head.push_back(atom(k.nodes[i].name));
    if (!st.ops.all) head.push_back(ops(st.ops));
    head.push_back(next);
    std::string out;
    for (const auto& h : head) out += (out.empty() ? "" : " & ") + h;
    return out;
  }

  std::string spec(const Requirement& r) const {
    if (r.type == Requirement::Type::Constraint)
      return "(!(" + kind(r.kind, 0) + ") | (" + kind(r.consequent, 0) + "))";
    return "!(" + kind(r.kind, 0) + ")";
  }

 private:
  const SinkKts& ks_;
  const EmitOptions& opts_;
};

void collect_ops(const Kind& k, std::set<std::string>& out) {
  for (const auto& s : k.steps) out.insert(s.ops.ops.begin(), s.ops.ops.end());
}

}  // namespace

SinkKts add_sink(const Kts& kts, const NodeSet& nodes) {
  SinkKts ks;
  Kts& k = ks.kts;
  k.actions = kts.actions;
  k.states.push_back(QualifiedName::local("sink"));
  k.labels.push_back({});
  k.out.emplace_back();
  for (size_t s = 0; s < kts.states.size(); ++s) {
    k.states.push_back(kts.states[s]);
    k.labels.push_back(kts.labels[s]);
    k.out.emplace_back();
    for (auto [a, d] : kts.out[s]) k.out.back().push_back({a, d + 1});
  }
  for (auto& moves : k.out)
    for (size_t a = 0; a < k.actions.size(); ++a) moves.push_back({static_cast<int>(a), 0});
  for (size_t s = 0; s < k.states.size(); ++s) k.state_index[k.states[s]] = static_cast<int>(s);
  std::map<std::string, QualifiedName> back;
  for (const auto& n : nodes.names) {
    std::string m = mangle(n);
    if (reserved().count(m) || !valid_nusmv_name(m))
      throw EmitError("`" + n.str() + "` cannot be used as a NuSMV name (mangled `" + m + "`); rename it");
    auto [it, fresh] = back.emplace(m, n);
    if (!fresh) throw EmitError("`" + n.str() + "` and `" + it->second.str() + "` both mangle to `" + m + "`");
    ks.mangled[n] = m;
  }
  return ks;
}

std::vector<AttributeDefinition> attribute_definitions(const RuleSet& normal, const Graph& g) {
  DeclIndex idx(normal);
  std::map<QualifiedName, AttributeDefinition> defs;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes.is_type[i]) continue;
    AttributeDefinition d;
    d.name = g.nodes.names[i];
    d.cyclic = g.cyclic.count(d.name) > 0;
    for (int t : g.nodes.ta[i]) d.members.insert(g.nodes.names[t]);
    defs[d.name] = std::move(d);
  }
  for (const auto& r : normal)
    if (auto* s = std::get_if<TypeAttributeSet>(&r.rule); s && !idx.in_macro(r.ns)) defs.at(s->attr).sets.push_back(s->expr);
  std::vector<AttributeDefinition> out;
  for (auto& [_, d] : defs) out.push_back(std::move(d));
  return out;
}

std::string emit_nusmv(const SinkKts& ks, const std::vector<AttributeDefinition>& attrs,
                       const std::vector<LabeledRequirement>& reqs, const EmitOptions& opts) {
  Emitter em(ks, opts);
  const Kts& k = ks.kts;
  std::ostringstream out;

  bool nontrivial = false;
  for (const auto& [q, m] : ks.mangled) nontrivial = nontrivial || q.path.size() > 1;
  if (nontrivial) {
    out << "-- name map\n";
    for (const auto& [q, m] : ks.mangled) out << "--   " << m << " = " << q.str() << "\n";
    out << "\n";
  }

  out << "MODULE main\n\n";

  std::vector<std::pair<std::string, std::string>> defines;
  for (const auto& a : attrs) {
    std::string body;
    if (a.cyclic) {
      for (const auto& m : a.members) body += (body.empty() ? "" : " | ") + em.atom(m);
      if (a.members.size() > 1) body = "(" + body + ")";
    } else {
      for (const auto& e : a.sets) body += (body.empty() ? "" : " | ") + em.expr(e);
      if (a.sets.size() > 1) body = "(" + body + ")";
    }
    if (body.empty()) body = "FALSE";
    defines.push_back({ks.mangled.at(a.name), body});
  }
  std::sort(defines.begin(), defines.end());
  if (!defines.empty()) {
    out << "DEFINE\n";
    for (const auto& [name, body] : defines) out << "  " << name << " := " << body << " & !(type=sink);\n";
  }

  std::vector<std::pair<std::string, int>> states;
  for (size_t s = 1; s < k.states.size(); ++s) states.push_back({ks.mangled.at(k.states[s]), static_cast<int>(s)});
  std::sort(states.begin(), states.end());
  out << "VAR\n  type : { sink";
  for (const auto& [m, _] : states) out << ", " << m;
  out << " };\n\n";

  std::set<std::string> ops(k.actions.begin(), k.actions.end());
  for (const auto& r : reqs) {
    collect_ops(r.requirement.kind, ops);
    collect_ops(r.requirement.consequent, ops);
  }
  if (ops.empty()) ops.insert("none");
  out << "IVAR\n  operation : {";
  bool first = true;
  for (const auto& o : ops) {
    out << (first ? " " : ", ") << o;
    first = false;
  }
  out << " };\n\n";

  out << "TRANS\n";
  for (const auto& [m, s] : states) {
    std::vector<std::pair<std::string, std::string>> moves;
    for (auto [a, d] : k.out[s])
      if (d != 0) moves.push_back({ks.mangled.at(k.states[d]), k.actions[a]});
    std::sort(moves.begin(), moves.end());
    out << "  (type=" << m << " -> (";
    for (const auto& [d, a] : moves) out << "(operation=" << a << " & next(type=" << d << ")) | ";
    out << "next(type=sink))) &\n";
  }
  out << "  (type=sink -> next(type=sink))\n\n";

  for (const auto& r : reqs) out << "LTLSPEC " << em.spec(r.requirement) << "\n";
  return out.str();
}

std::vector<Verdict> parse_response(std::string_view text, const std::vector<LabeledRequirement>& reqs) {
  std::vector<bool> results;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("-- specification", 0) != 0) continue;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (line.size() >= 8 && line.compare(line.size() - 8, 8, " is true") == 0)
      results.push_back(true);
    else if (line.size() >= 9 && line.compare(line.size() - 9, 9, " is false") == 0)
      results.push_back(false);
    else
      throw EmitError("unrecognized checker line: " + line);
  }
  if (results.size() != reqs.size())
    throw EmitError("checker reported " + std::to_string(results.size()) + " results for " +
                    std::to_string(reqs.size()) + " specifications");
  std::vector<Verdict> out;
  for (size_t i = 0; i < reqs.size(); ++i) {
    bool holds = reqs[i].requirement.type == Requirement::Type::Exists ? !results[i] : results[i];
    out.push_back(holds ? Verdict::Satisfied : Verdict::Violated);
  }
  return out;
}

}  // namespace ifcil
