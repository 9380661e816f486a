#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ifcil/graph.hpp"
#include "ifcil/ifl.hpp"

namespace ifcil {

// States are the types of the IFD; one transition per operation of an arc.
struct Kts {
  std::vector<QualifiedName> states;
  std::vector<std::string> actions;
  std::vector<std::vector<std::pair<int, int>>> out;  // (action, target)
  std::vector<std::set<QualifiedName>> labels;        // the type and its typeattributes
  std::map<QualifiedName, int> state_index;

  size_t transition_count() const;
  int action_id(const std::string& op) const;
};

Kts build_kts(const Ifd& ifd);

struct KtsStep {
  int src;
  int action;
  int dst;
};

// Nondeterministic automaton over KTS steps accepting exactly the step
// sequences that follow a kind. States 0..k are segment boundaries, k+1+i is
// "inside" multi-step segment i; state k accepts.
class KindAutomaton {
 public:
  KindAutomaton(const Kind& kind, const Kts& kts);

  int initial() const { return 0; }
  int accepting() const { return static_cast<int>(steps_.size()); }
  int state_count() const { return static_cast<int>(2 * steps_.size() + 1); }
  void step(int q, const KtsStep& t, std::vector<int>& out) const;
  bool accepts(const std::vector<KtsStep>& word) const;

 private:
  std::vector<std::vector<char>> node_match_;  // [kind node][kts state]
  std::vector<std::vector<char>> op_match_;    // [segment][action]
  std::vector<Arrow> steps_;
};

enum class Verdict { Satisfied, Violated, Unknown };

const char* to_string(Verdict v);

struct WitnessStep {
  QualifiedName from;
  std::string op;
  QualifiedName to;
};

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<WitnessStep> witness;
  std::string note;
};

inline constexpr size_t kSubsetBound = size_t{1} << 14;

CheckResult check(const Kts& kts, const Requirement& r);

struct LabeledResult {
  std::string label;
  CheckResult result;
};

std::vector<LabeledResult> check_all(const Kts& kts, const std::vector<LabeledRequirement>& reqs);

// Flow-path matching straight from the definition, for cross-checking.
struct PathArc {
  int src;
  std::set<std::string> ops;
  int dst;
};

bool path_has_kind(const std::vector<PathArc>& path, const Kind& kind, const NodeSet& nodes);

// Enumerates IFD paths up to |types| * (segments + 1) arcs.
bool oracle_holds(const Ifd& ifd, const Requirement& r);

struct Ltl {
  enum class Op { True, Node, Action, Sink, Not, And, Or, Next, Until };
  Op op = Op::True;
  std::string name;
  std::vector<Ltl> args;
};

// `universe` expands an unrestricted operation filter. With `sink`, the end
// of a path is X(sink) instead of !X(true).
Ltl encode_ltl(const Kind& kind, const std::set<std::string>& universe, bool sink = false);
std::string to_string(const Ltl& f);

}  // namespace ifcil
