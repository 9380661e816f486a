#include "ifcil/verifier.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>

namespace ifcil {

size_t Kts::transition_count() const {
  size_t n = 0;
  for (const auto& o : out) n += o.size();
  return n;
}

int Kts::action_id(const std::string& op) const {
  auto it = std::lower_bound(actions.begin(), actions.end(), op);
  return it != actions.end() && *it == op ? static_cast<int>(it - actions.begin()) : -1;
}

Kts build_kts(const Ifd& ifd) {
  Kts k;
  const NodeSet& ns = ifd.nodes;
  std::vector<int> state_of(ns.size(), -1);
  for (int t : ns.types()) {
    state_of[t] = static_cast<int>(k.states.size());
    k.state_index[ns.names[t]] = state_of[t];
    k.states.push_back(ns.names[t]);
  }
  std::set<std::string> ops;
  for (const auto& [arc, o] : ifd.arcs)
    if (state_of[arc.first] >= 0 && state_of[arc.second] >= 0) ops.insert(o.begin(), o.end());
  k.actions.assign(ops.begin(), ops.end());
  k.out.resize(k.states.size());
  k.labels.resize(k.states.size());
  for (size_t n = 0; n < ns.size(); ++n)
    for (int t : ns.ta[n]) k.labels[state_of[t]].insert(ns.names[n]);
  for (const auto& [arc, o] : ifd.arcs) {
    int s = state_of[arc.first], d = state_of[arc.second];
    if (s < 0 || d < 0) continue;
    for (const auto& op : o) k.out[s].push_back({k.action_id(op), d});
  }
  for (auto& o : k.out)
    std::sort(o.begin(), o.end(), [](auto a, auto b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  return k;
}

KindAutomaton::KindAutomaton(const Kind& kind, const Kts& kts) {
  for (const auto& n : kind.nodes) {
    std::vector<char> m(kts.states.size(), 0);
    for (size_t s = 0; s < kts.states.size(); ++s) m[s] = n.wildcard || kts.labels[s].count(n.name);
    node_match_.push_back(std::move(m));
  }
  for (const auto& st : kind.steps) {
    std::vector<char> m(kts.actions.size(), 0);
    for (size_t a = 0; a < kts.actions.size(); ++a) m[a] = st.ops.contains(kts.actions[a]);
    op_match_.push_back(std::move(m));
    steps_.push_back(st.arrow);
  }
}

void KindAutomaton::step(int q, const KtsStep& t, std::vector<int>& out) const {
  int k = accepting();
  if (q < k) {
    if (!node_match_[q][t.src] || !op_match_[q][t.action]) return;
    if (node_match_[q + 1][t.dst]) out.push_back(q + 1);
    if (steps_[q] == Arrow::Multi) out.push_back(k + 1 + q);
  } else if (q > k) {
    int i = q - k - 1;
    if (!op_match_[i][t.action]) return;
    if (node_match_[i + 1][t.dst]) out.push_back(i + 1);
    out.push_back(q);
  }
}

bool KindAutomaton::accepts(const std::vector<KtsStep>& word) const {
  if (word.empty()) return false;
  std::set<int> cur{initial()};
  std::vector<int> buf;
  for (const auto& t : word) {
    std::set<int> next;
    for (int q : cur) {
      buf.clear();
      step(q, t, buf);
      next.insert(buf.begin(), buf.end());
    }
    cur = std::move(next);
  }
  return cur.count(accepting()) > 0;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "SATISFIED";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "";
}

namespace {

std::vector<WitnessStep> render(const Kts& kts, const std::vector<KtsStep>& steps) {
  std::vector<WitnessStep> out;
  for (const auto& s : steps) out.push_back({kts.states[s.src], kts.actions[s.action], kts.states[s.dst]});
  return out;
}

// Shortest step sequence accepted by the automaton, if any.
std::optional<std::vector<KtsStep>> find_path(const Kts& kts, const KindAutomaton& a) {
  const int Q = a.state_count();
  const size_t n = kts.states.size() * Q;
  std::vector<int> parent(n, -2);
  std::vector<KtsStep> via(n);
  std::deque<int> queue;
  for (int s = 0; s < static_cast<int>(kts.states.size()); ++s) {
    parent[s * Q + a.initial()] = -1;
    queue.push_back(s * Q + a.initial());
  }
  std::vector<int> buf;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    int s = cur / Q, q = cur % Q;
    for (auto [act, d] : kts.out[s]) {
      KtsStep t{s, act, d};
      buf.clear();
      a.step(q, t, buf);
      for (int q2 : buf) {
        int id = d * Q + q2;
        if (parent[id] != -2) continue;
        parent[id] = cur;
        via[id] = t;
        if (q2 == a.accepting()) {
          std::vector<KtsStep> path;
          for (int x = id; parent[x] >= 0; x = parent[x]) path.push_back(via[x]);
          std::reverse(path.begin(), path.end());
          return path;
        }
        queue.push_back(id);
      }
    }
  }
  return std::nullopt;
}

struct ProductKey {
  int s;
  int q;
  uint64_t mask;
  bool operator==(const ProductKey&) const = default;
};

struct ProductHash {
  size_t operator()(const ProductKey& k) const noexcept {
    return std::hash<uint64_t>{}(k.mask * 1000003u + static_cast<uint64_t>(k.s) * 131 + k.q);
  }
};

CheckResult check_constraint(const Kts& kts, const Requirement& r) {
  KindAutomaton p(r.kind, kts), c(r.consequent, kts);
  if (c.state_count() > 63) return {Verdict::Unknown, {}, "consequent too long to determinize"};
  std::unordered_map<ProductKey, int, ProductHash> ids;
  std::vector<ProductKey> keys;
  std::vector<int> parent;
  std::vector<KtsStep> via;
  std::set<uint64_t> subsets;
  std::deque<int> queue;
  auto intern = [&](ProductKey k, int par, KtsStep t) -> int {
    auto [it, fresh] = ids.emplace(k, static_cast<int>(keys.size()));
    if (!fresh) return -1;
    keys.push_back(k);
    parent.push_back(par);
    via.push_back(t);
    subsets.insert(k.mask);
    queue.push_back(it->second);
    return it->second;
  };
  for (int s = 0; s < static_cast<int>(kts.states.size()); ++s) intern({s, p.initial(), 1}, -1, {});
  const uint64_t accept_bit = uint64_t{1} << c.accepting();
  std::vector<int> buf;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    ProductKey k = keys[cur];
    for (auto [act, d] : kts.out[k.s]) {
      KtsStep t{k.s, act, d};
      uint64_t mask = 0;
      for (int q = 0; q < c.state_count(); ++q) {
        if (!(k.mask >> q & 1)) continue;
        buf.clear();
        c.step(q, t, buf);
        for (int q2 : buf) mask |= uint64_t{1} << q2;
      }
      buf.clear();
      p.step(k.q, t, buf);
      for (int q2 : buf) {
        int id = intern({d, q2, mask}, cur, t);
        if (id < 0) continue;
        if (q2 == p.accepting() && !(mask & accept_bit)) {
          std::vector<KtsStep> path;
          for (int x = id; parent[x] >= 0; x = parent[x]) path.push_back(via[x]);
          std::reverse(path.begin(), path.end());
          return {Verdict::Violated, render(kts, path), {}};
        }
        if (subsets.size() > kSubsetBound) return {Verdict::Unknown, {}, "subset construction bound exceeded"};
      }
    }
  }
  return {Verdict::Satisfied, {}, {}};
}

}  // namespace

CheckResult check(const Kts& kts, const Requirement& r) {
  using T = Requirement::Type;
  if (r.type == T::Constraint) return check_constraint(kts, r);
  auto path = find_path(kts, KindAutomaton(r.kind, kts));
  CheckResult res;
  if (path) res.witness = render(kts, *path);
  bool exists = path.has_value();
  res.verdict = (r.type == T::Exists) == exists ? Verdict::Satisfied : Verdict::Violated;
  return res;
}

std::vector<LabeledResult> check_all(const Kts& kts, const std::vector<LabeledRequirement>& reqs) {
  std::vector<LabeledResult> out;
  for (const auto& r : reqs) out.push_back({r.label, check(kts, r.requirement)});
  return out;
}

namespace {

class PathMatcher {
 public:
  PathMatcher(const std::vector<PathArc>& path, const Kind& kind, const NodeSet& nodes)
      : path_(path), kind_(kind), nodes_(nodes) {}

  bool run() const { return !path_.empty() && match(0, 0, false); }

 private:
  bool node_ok(int n, const NodeRef& m) const {
    if (m.wildcard) return nodes_.is_type[n];
    int id = nodes_.id(m.name);
    return id >= 0 && nodes_.ta[id].count(n) > 0;
  }

  bool arc_ok(const PathArc& a, const NodeRef& from, const OpSet& ops, const NodeRef& to) const {
    if (!node_ok(a.src, from) || !node_ok(a.dst, to)) return false;
    return std::any_of(a.ops.begin(), a.ops.end(), [&](const std::string& o) { return ops.contains(o); });
  }

  // Does path[pos..] follow segments t.. of the kind, with the source of
  // segment t relaxed to `*` when `loose`?
  bool match(size_t pos, size_t t, bool loose) const {
    size_t rem = path_.size() - pos;
    if (rem == 0) return false;
    const NodeRef any = NodeRef::any();
    const NodeRef& from = loose ? any : kind_.nodes[t];
    const NodeRef& to = kind_.nodes[t + 1];
    const Step& st = kind_.steps[t];
    bool last = t + 1 == kind_.steps.size();
    const PathArc& a = path_[pos];
    if (st.arrow == Arrow::Single) {
      if (last) return rem == 1 && arc_ok(a, from, st.ops, to);
      return rem >= 2 && arc_ok(a, from, st.ops, any) && match(pos + 1, t + 1, false);
    }
    if (last) {
      if (rem == 1) return arc_ok(a, from, st.ops, to);
      return arc_ok(a, from, st.ops, any) && match(pos + 1, t, true);
    }
    if (rem < 2 || !arc_ok(a, from, st.ops, any)) return false;
    return match(pos + 1, t + 1, false) || match(pos + 1, t, true);
  }

  const std::vector<PathArc>& path_;
  const Kind& kind_;
  const NodeSet& nodes_;
};

// Where a path prefix can stand inside a kind, following the clauses of
// the path-kind definition one arc at a time: segment t with its source
// either checked or relaxed to `*`, or the whole kind consumed.
struct Residual {
  static constexpr int kDone = -1;
  std::set<std::pair<int, bool>> at;  // (segment, loose); (kDone, false) once complete

  bool done() const { return at.count({kDone, false}) > 0; }
  bool empty() const { return at.empty(); }
  auto operator<=>(const Residual&) const = default;
};

class ClauseStepper {
 public:
  ClauseStepper(const Kind& kind, const NodeSet& nodes) : kind_(kind), nodes_(nodes) {}

  Residual start() const { return {{{0, false}}}; }

  Residual advance(const Residual& r, int src, const std::string& op, int dst) const {
    Residual out;
    const NodeRef any = NodeRef::any();
    for (auto [t, loose] : r.at) {
      if (t == Residual::kDone) continue;
      const NodeRef& from = loose ? any : kind_.nodes[t];
      const NodeRef& to = kind_.nodes[t + 1];
      const Step& st = kind_.steps[t];
      bool last = t + 1 == static_cast<int>(kind_.steps.size());
      if (!st.ops.contains(op) || !node_ok(src, from)) continue;
      if (last && node_ok(dst, to)) out.at.insert({Residual::kDone, false});
      if (!node_ok(dst, any)) continue;
      if (!last) out.at.insert({t + 1, false});
      if (st.arrow == Arrow::Multi) out.at.insert({t, true});
    }
    return out;
  }

 private:
  bool node_ok(int n, const NodeRef& m) const {
    if (m.wildcard) return nodes_.is_type[n];
    int id = nodes_.id(m.name);
    return id >= 0 && nodes_.ta[id].count(n) > 0;
  }

  const Kind& kind_;
  const NodeSet& nodes_;
};

// Paths of I with one operation per arc, searched breadth first up to the
// length bound. Prefixes ending in the same node with the same residuals
// have the same extensions, so only the shortest representative is kept.
class PathEnumerator {
 public:
  PathEnumerator(const Ifd& ifd, const Requirement& r)
      : ifd_(ifd), r_(r), p_(r.kind, ifd.nodes), q_(r.consequent, ifd.nodes) {
    for (const auto& [arc, ops] : ifd.arcs)
      if (ifd.nodes.is_type[arc.first] && ifd.nodes.is_type[arc.second])
        for (const auto& op : ops) adj_[arc.first].push_back({op, arc.second});
    size_t segs = std::max(r.kind.size(), r.type == Requirement::Type::Constraint ? r.consequent.size() : 0);
    bound_ = ifd.nodes.types().size() * (segs + 1);
  }

  // Exists: a path of kind P. Prohibit: the same. Constraint: a path of kind
  // P that is not of kind P'.
  bool find_counterexample() {
    bool constraint = r_.type == Requirement::Type::Constraint;
    using State = std::tuple<int, Residual, Residual>;
    std::set<State> seen;
    std::vector<State> layer;
    for (int t : ifd_.nodes.types()) {
      State s{t, p_.start(), constraint ? q_.start() : Residual{}};
      if (seen.insert(s).second) layer.push_back(std::move(s));
    }
    for (size_t len = 1; len <= bound_ && !layer.empty(); ++len) {
      std::vector<State> next;
      for (const auto& [n, rp, rq] : layer) {
        auto it = adj_.find(n);
        if (it == adj_.end()) continue;
        for (const auto& [op, m] : it->second) {
          Residual np = p_.advance(rp, n, op, m);
          if (np.empty()) continue;
          Residual nq = constraint ? q_.advance(rq, n, op, m) : Residual{};
          if (np.done() && !(constraint && nq.done())) return true;
          State s{m, std::move(np), std::move(nq)};
          if (seen.insert(s).second) next.push_back(std::move(s));
        }
      }
      layer = std::move(next);
    }
    return false;
  }

 private:
  const Ifd& ifd_;
  const Requirement& r_;
  ClauseStepper p_;
  ClauseStepper q_;
  std::map<int, std::vector<std::pair<std::string, int>>> adj_;
  size_t bound_ = 0;
};

Ltl node(Ltl::Op op, std::string name = {}) { return {op, std::move(name), {}}; }
Ltl unary(Ltl::Op op, Ltl a) { return {op, {}, {std::move(a)}}; }
Ltl binary(Ltl::Op op, Ltl a, Ltl b) { return {op, {}, {std::move(a), std::move(b)}}; }

Ltl conj(std::vector<Ltl> xs) {
  std::vector<Ltl> kept;
  for (auto& x : xs)
    if (x.op != Ltl::Op::True) kept.push_back(std::move(x));
  if (kept.empty()) return node(Ltl::Op::True);
  if (kept.size() == 1) return std::move(kept[0]);
  return {Ltl::Op::And, {}, std::move(kept)};
}

Ltl ops_formula(const OpSet& ops, const std::set<std::string>& universe) {
  const std::set<std::string>& names = ops.all ? universe : ops.ops;
  if (ops.all && names.empty()) return node(Ltl::Op::True);
  Ltl f{Ltl::Op::Or, {}, {}};
  for (const auto& o : names) f.args.push_back(node(Ltl::Op::Action, o));
  if (f.args.size() == 1) return std::move(f.args[0]);
  return f;
}

Ltl node_formula(const NodeRef& n, bool sink) {
  if (!n.wildcard) return node(Ltl::Op::Node, n.name.str());
  return sink ? unary(Ltl::Op::Not, node(Ltl::Op::Sink)) : node(Ltl::Op::True);
}

Ltl encode_from(const Kind& k, size_t i, const std::set<std::string>& universe, bool sink) {
  const Step& st = k.steps[i];
  Ltl ops = ops_formula(st.ops, universe);
  Ltl tail;
  if (i + 1 == k.steps.size()) {
    Ltl end = sink ? unary(Ltl::Op::Next, node(Ltl::Op::Sink))
                   : unary(Ltl::Op::Not, unary(Ltl::Op::Next, node(Ltl::Op::True)));
    tail = conj({node_formula(k.nodes[i + 1], sink), std::move(end)});
  } else {
    tail = encode_from(k, i + 1, universe, sink);
  }
  if (st.arrow == Arrow::Multi) tail = binary(Ltl::Op::Until, ops, std::move(tail));
  return conj({node_formula(k.nodes[i], sink), ops, unary(Ltl::Op::Next, std::move(tail))});
}

}  // namespace

bool path_has_kind(const std::vector<PathArc>& path, const Kind& kind, const NodeSet& nodes) {
  return PathMatcher(path, kind, nodes).run();
}

bool oracle_holds(const Ifd& ifd, const Requirement& r) {
  bool found = PathEnumerator(ifd, r).find_counterexample();
  return r.type == Requirement::Type::Exists ? found : !found;
}

Ltl encode_ltl(const Kind& kind, const std::set<std::string>& universe, bool sink) {
  return encode_from(kind, 0, universe, sink);
}

std::string to_string(const Ltl& f) {
  using Op = Ltl::Op;
  auto atomic = [](const Ltl& g) {
    return g.op == Op::True || g.op == Op::Node || g.op == Op::Action || g.op == Op::Sink;
  };
  auto wrap = [&](const Ltl& g) {
    std::string s = to_string(g);
    return atomic(g) || g.op == Op::Next || g.op == Op::Not ? s : "(" + s + ")";
  };
  switch (f.op) {
    case Op::True: return "true";
    case Op::Node:
    case Op::Action: return f.name;
    case Op::Sink: return "sink";
    case Op::Not: return atomic(f.args[0]) ? "!" + to_string(f.args[0]) : "!(" + to_string(f.args[0]) + ")";
    case Op::Next: return "X(" + to_string(f.args[0]) + ")";
    case Op::Until: return wrap(f.args[0]) + " U " + wrap(f.args[1]);
    case Op::And:
    case Op::Or: {
      std::string s;
      for (const auto& a : f.args) s += (s.empty() ? "" : f.op == Op::And ? " & " : " | ") + wrap(a);
      return s;
    }
  }
  return {};
}

}  // namespace ifcil
