#pragma once

#include <optional>

#include "ifcil/ifl.hpp"

namespace ifcil {

enum class Tri { False, True, Unknown };

inline constexpr size_t kRefineBudget = 200000;

// Decides lower ⪯ upper on kinds by exhaustive search over the rewrite
// steps; the search space is finite because steps never lengthen a kind.
Tri refines_kind(const Kind& lower, const Kind& upper, size_t budget = kRefineBudget);
Tri refines(const Requirement& lower, const Requirement& upper, size_t budget = kRefineBudget);

struct MeetResult {
  std::optional<Requirement> value;
  // Set when some candidate could not be decided within budget.
  bool inconclusive = false;
};

// Greatest common refinement; empty when the operands have different
// variants or no common refinement exists.
MeetResult meet(const Requirement& a, const Requirement& b);
MeetResult meet_kind(const Kind& a, const Kind& b);
// Least common generalization; used for prohibitions and antecedents.
MeetResult join_kind(const Kind& a, const Kind& b);

}  // namespace ifcil
