#pragma once

#include "ifcil/cil.hpp"
#include "ifcil/diagnostics.hpp"

namespace ifcil {

// Full rewrite to normal form: no blockinherit, no calls, every name in
// block and global namespaces anchored. Throws NormalizeError.
RuleSet normalize(const RuleSet& rules, Diagnostics* diags = nullptr);

// Individual phases, in pipeline order.
RuleSet resolve_inherits(const RuleSet& rules);
RuleSet expand_inherits(const RuleSet& rules);
RuleSet resolve_calls(const RuleSet& rules);
RuleSet copy_macro_declarations(const RuleSet& rules);
RuleSet expand_calls(const RuleSet& rules);
RuleSet anchor_names(const RuleSet& rules);
// Distinct requirements sharing a label in one namespace get `_2`, `_3`...
RuleSet disambiguate_labels(const RuleSet& rules, Diagnostics* diags);

// Drops requirement islands and refinements.
RuleSet strip_ifl(const RuleSet& rules);
// Drops macro declarations and everything inside macro bodies.
RuleSet project_blocks(const RuleSet& rules);

}  // namespace ifcil
