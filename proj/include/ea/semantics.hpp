#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ea/rule.hpp"
#include "ea/state.hpp"

namespace ea {

// Binding of rule variables to values.
using Env = std::map<std::string, Value>;

// The value of a term in a state under a variable binding. Boolean
// connectives behave classically, equality returns true/false, and the
// arithmetic names are interpreted over the integers.
Value eval_term(const TermPtr& t, const State& s, const Env& env = {});

// The update set a rule gives rise to at a state. A choice rule must have
// been resolved first (see enumerate_choices).
UpdateSet update_set(const RulePtr& r, const State& s, const Env& env = {});

// One rule instance per element of a choice rule's universe. Rules without
// a choice yield a single unresolved instance; an empty universe yields no
// instances at all.
struct ResolvedRule {
  RulePtr rule;
  std::optional<int> choice;  // index into the universe, in declaration order
  std::optional<Value> chosen;
};

std::vector<ResolvedRule> enumerate_choices(const RulePtr& r, const State& s);

// A rule is enabled when its update set is consistent and contains a
// non-trivial update.
bool is_enabled(const RulePtr& r, const State& s, const Env& env = {});

}  // namespace ea
