#include "ifcil/refine.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ifcil {

namespace {

bool node_leq(const NodeRef& a, const NodeRef& b) { return b.wildcard || a == b; }

bool step_leq(const Step& a, const Step& b) {
  return (a.arrow == b.arrow || b.arrow == Arrow::Multi) && a.ops.subset_of(b.ops);
}

bool pointwise_leq(const Kind& a, const Kind& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.nodes.size(); ++i)
    if (!node_leq(a.nodes[i], b.nodes[i])) return false;
  for (size_t i = 0; i < a.steps.size(); ++i)
    if (!step_leq(a.steps[i], b.steps[i])) return false;
  return true;
}

// One structural rewrite at boundary j (0 < j < size) where the middle node
// has been generalized to `*`.
void successors(const Kind& k, std::vector<Kind>& out) {
  for (size_t j = 1; j < k.steps.size(); ++j) {
    const Step& s1 = k.steps[j - 1];
    const Step& s2 = k.steps[j];
    OpSet u = s1.ops.unite(s2.ops);
    {
      Kind m = k;
      m.nodes.erase(m.nodes.begin() + j);
      m.steps.erase(m.steps.begin() + j);
      m.steps[j - 1] = {Arrow::Multi, u};
      out.push_back(std::move(m));
    }
    if (s2.arrow == Arrow::Single) {
      Kind m = k;
      m.nodes[j] = NodeRef::any();
      m.steps[j - 1] = {Arrow::Single, s1.ops};
      m.steps[j] = {Arrow::Multi, u};
      out.push_back(std::move(m));
    }
    if (s1.arrow == Arrow::Single) {
      Kind m = k;
      m.nodes[j] = NodeRef::any();
      m.steps[j - 1] = {Arrow::Multi, u};
      m.steps[j] = {Arrow::Single, s2.ops};
      out.push_back(std::move(m));
    }
  }
}

bool within(const Kind& k, const OpSet& bound) {
  for (const auto& s : k.steps)
    if (!s.ops.subset_of(bound)) return false;
  return true;
}

Tri both(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

// Multi steps may be stretched into several Multi steps joined by `*`.
void expansions(const Kind& k, size_t i, size_t len, Kind& cur, std::vector<Kind>& out) {
  size_t rest_min = k.steps.size() - i;
  if (rest_min == 0) {
    if (len == 0) {
      cur.nodes.push_back(k.nodes.back());
      out.push_back(cur);
      cur.nodes.pop_back();
    }
    return;
  }
  if (len < rest_min) return;
  size_t max_here = k.steps[i].arrow == Arrow::Multi ? len - (rest_min - 1) : 1;
  for (size_t c = 1; c <= max_here; ++c) {
    size_t mark_n = cur.nodes.size();
    cur.nodes.push_back(k.nodes[i]);
    cur.steps.push_back(k.steps[i]);
    for (size_t x = 1; x < c; ++x) {
      cur.nodes.push_back(NodeRef::any());
      cur.steps.push_back(k.steps[i]);
    }
    expansions(k, i + 1, len - c, cur, out);
    cur.nodes.resize(mark_n);
    cur.steps.resize(mark_n);
  }
}

std::vector<Kind> expansions(const Kind& k, size_t len) {
  std::vector<Kind> out;
  Kind cur;
  expansions(k, 0, len, cur, out);
  return out;
}

// Contiguous groups of steps collapsed into `start +[union]> end`.
void contractions(const Kind& k, size_t i, size_t groups, Kind& cur, std::vector<Kind>& out) {
  size_t n = k.steps.size();
  if (i == n) {
    if (groups == 0) {
      cur.nodes.push_back(k.nodes.back());
      out.push_back(cur);
      cur.nodes.pop_back();
    }
    return;
  }
  if (groups == 0 || n - i < groups) return;
  for (size_t end = i + 1; end + (groups - 1) <= n; ++end) {
    Step s = k.steps[i];
    if (end - i > 1) {
      s.arrow = Arrow::Multi;
      for (size_t j = i + 1; j < end; ++j) s.ops = s.ops.unite(k.steps[j].ops);
    }
    cur.nodes.push_back(k.nodes[i]);
    cur.steps.push_back(s);
    contractions(k, end, groups - 1, cur, out);
    cur.nodes.pop_back();
    cur.steps.pop_back();
  }
}

std::vector<Kind> contractions(const Kind& k, size_t groups) {
  std::vector<Kind> out;
  Kind cur;
  contractions(k, 0, groups, cur, out);
  return out;
}

std::optional<Kind> pointwise_meet(const Kind& a, const Kind& b) {
  Kind m;
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const NodeRef& x = a.nodes[i];
    const NodeRef& y = b.nodes[i];
    if (x.wildcard)
      m.nodes.push_back(y);
    else if (y.wildcard || x == y)
      m.nodes.push_back(x);
    else
      return std::nullopt;
  }
  for (size_t i = 0; i < a.steps.size(); ++i) {
    OpSet o = a.steps[i].ops.intersect(b.steps[i].ops);
    if (o.empty()) return std::nullopt;
    Arrow w = a.steps[i].arrow == Arrow::Single || b.steps[i].arrow == Arrow::Single ? Arrow::Single : Arrow::Multi;
    m.steps.push_back({w, o});
  }
  return m;
}

Kind pointwise_join(const Kind& a, const Kind& b) {
  Kind j;
  for (size_t i = 0; i < a.nodes.size(); ++i)
    j.nodes.push_back(a.nodes[i] == b.nodes[i] ? a.nodes[i] : NodeRef::any());
  for (size_t i = 0; i < a.steps.size(); ++i) {
    Arrow w = a.steps[i].arrow == Arrow::Multi || b.steps[i].arrow == Arrow::Multi ? Arrow::Multi : Arrow::Single;
    j.steps.push_back({w, a.steps[i].ops.unite(b.steps[i].ops)});
  }
  return j;
}

// Picks the extreme element among candidates: maximal when `upward`,
// minimal otherwise. Ties go to the shorter (meet) or longer (join) kind,
// then to the textual order.
MeetResult pick(const std::vector<Kind>& cands, bool upward, bool inconclusive) {
  MeetResult res;
  res.inconclusive = inconclusive;
  std::vector<const Kind*> best;
  for (const auto& c : cands) {
    bool dominated = false;
    for (const auto& d : cands) {
      if (&c == &d) continue;
      const Kind& lo = upward ? c : d;
      const Kind& hi = upward ? d : c;
      Tri fwd = refines_kind(lo, hi);
      if (fwd == Tri::Unknown) res.inconclusive = true;
      if (fwd != Tri::True) continue;
      Tri back = refines_kind(hi, lo);
      if (back == Tri::Unknown) res.inconclusive = true;
      if (back == Tri::False) {
        dominated = true;
        break;
      }
    }
    if (!dominated) best.push_back(&c);
  }
  if (best.empty()) return res;
  auto order = [&](const Kind* x, const Kind* y) {
    if (x->size() != y->size()) return upward ? x->size() < y->size() : x->size() > y->size();
    return to_string(*x) < to_string(*y);
  };
  res.value = Requirement::exists(**std::min_element(best.begin(), best.end(), order));
  return res;
}

void dedupe(std::vector<Kind>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Tri refines_kind(const Kind& lower, const Kind& upper, size_t budget) {
  if (!lower.valid() || !upper.valid()) return Tri::False;
  if (lower.size() < upper.size()) return Tri::False;
  if (!node_leq(lower.nodes.front(), upper.nodes.front()) || !node_leq(lower.nodes.back(), upper.nodes.back()))
    return Tri::False;
  OpSet bound = OpSet::of({});
  for (const auto& s : upper.steps) bound = bound.unite(s.ops);
  if (!within(lower, bound)) return Tri::False;

  std::set<Kind> seen{lower};
  std::deque<Kind> queue{lower};
  std::vector<Kind> next;
  while (!queue.empty()) {
    Kind k = std::move(queue.front());
    queue.pop_front();
    if (pointwise_leq(k, upper)) return Tri::True;
    next.clear();
    successors(k, next);
    for (auto& n : next) {
      if (n.size() < upper.size() || !within(n, bound)) continue;
      if (seen.size() >= budget) return Tri::Unknown;
      if (seen.insert(n).second) queue.push_back(std::move(n));
    }
  }
  return Tri::False;
}

Tri refines(const Requirement& lower, const Requirement& upper, size_t budget) {
  using T = Requirement::Type;
  if (lower.type != upper.type) return Tri::False;
  switch (lower.type) {
    case T::Exists: return refines_kind(lower.kind, upper.kind, budget);
    case T::Prohibit: return refines_kind(upper.kind, lower.kind, budget);
    case T::Constraint:
      return both(refines_kind(upper.kind, lower.kind, budget),
                  refines_kind(lower.consequent, upper.consequent, budget));
  }
  return Tri::False;
}

MeetResult meet_kind(const Kind& a, const Kind& b) {
  std::vector<Kind> cands{a, b};
  size_t lo = std::max(a.size(), b.size());
  size_t hi = a.size() + b.size();
  for (size_t len = lo; len <= hi; ++len) {
    auto ea = expansions(a, len);
    auto eb = expansions(b, len);
    for (const auto& x : ea)
      for (const auto& y : eb)
        if (auto m = pointwise_meet(x, y)) cands.push_back(std::move(*m));
  }
  dedupe(cands);
  bool inconclusive = false;
  std::vector<Kind> sound;
  for (auto& c : cands) {
    Tri t = both(refines_kind(c, a), refines_kind(c, b));
    if (t == Tri::Unknown) inconclusive = true;
    if (t == Tri::True) sound.push_back(std::move(c));
  }
  return pick(sound, true, inconclusive);
}

MeetResult join_kind(const Kind& a, const Kind& b) {
  std::vector<Kind> cands{a, b};
  for (size_t len = 1; len <= std::min(a.size(), b.size()); ++len) {
    auto ca = contractions(a, len);
    auto cb = contractions(b, len);
    for (const auto& x : ca)
      for (const auto& y : cb) cands.push_back(pointwise_join(x, y));
  }
  dedupe(cands);
  bool inconclusive = false;
  std::vector<Kind> sound;
  for (auto& c : cands) {
    Tri t = both(refines_kind(a, c), refines_kind(b, c));
    if (t == Tri::Unknown) inconclusive = true;
    if (t == Tri::True) sound.push_back(std::move(c));
  }
  return pick(sound, false, inconclusive);
}

MeetResult meet(const Requirement& a, const Requirement& b) {
  using T = Requirement::Type;
  MeetResult res;
  if (a.type != b.type) return res;
  switch (a.type) {
    case T::Exists: return meet_kind(a.kind, b.kind);
    case T::Prohibit: {
      res = join_kind(a.kind, b.kind);
      if (res.value) res.value = Requirement::prohibit(res.value->kind);
      return res;
    }
    case T::Constraint: {
      MeetResult ant = join_kind(a.kind, b.kind);
      MeetResult con = meet_kind(a.consequent, b.consequent);
      res.inconclusive = ant.inconclusive || con.inconclusive;
      if (ant.value && con.value) res.value = Requirement::constraint(ant.value->kind, con.value->kind);
      return res;
    }
  }
  return res;
}

}  // namespace ifcil
