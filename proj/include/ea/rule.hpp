#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ea/value.hpp"

namespace ea {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// A term: a literal element, a variable reference, or a symbol application.
// The interpreted operator names (+, -, mod, =, !=, and, or, not) are
// ordinary applications handled by the evaluator.
struct Term {
  enum class Kind { Literal, Variable, Apply };

  Kind kind = Kind::Literal;
  Value literal;
  std::string name;           // variable or applied symbol
  std::vector<TermPtr> args;  // Apply only

  static TermPtr lit(Value v);
  static TermPtr var(std::string name);
  static TermPtr app(std::string symbol, std::vector<TermPtr> args = {});

  std::string text() const;
};

bool equal(const TermPtr& a, const TermPtr& b);

struct Rule;
using RulePtr = std::shared_ptr<const Rule>;

// A transition rule: update instruction, block, conditional, parallel
// synchronous rule (var) or choice rule (choose).
struct Rule {
  enum class Kind { Update, Block, If, Var, Choose };

  Kind kind = Kind::Block;

  // Update
  std::string symbol;
  std::vector<TermPtr> args;
  TermPtr rhs;

  // Block
  std::vector<RulePtr> items;

  // If
  TermPtr guard;
  RulePtr body;       // then-branch; also var/choose body
  RulePtr else_body;  // optional

  // Var / Choose
  std::string var;
  std::string universe;

  static RulePtr update(std::string symbol, std::vector<TermPtr> args,
                        TermPtr rhs);
  static RulePtr block(std::vector<RulePtr> items);
  static RulePtr cond(TermPtr guard, RulePtr then_rule,
                      RulePtr else_rule = nullptr);
  static RulePtr var_rule(std::string var, std::string universe, RulePtr body);
  static RulePtr choose_rule(std::string var, std::string universe,
                             RulePtr body);
};

bool equal(const RulePtr& a, const RulePtr& b);

// Replaces free occurrences of a variable by a literal value; binders of
// the same name shadow as usual.
TermPtr substitute(const TermPtr& t, const std::string& var, const Value& v);
RulePtr substitute(const RulePtr& r, const std::string& var, const Value& v);

// All function names appearing in a term or rule (update targets included,
// builtins excluded). Used to build agent views.
void collect_symbols(const TermPtr& t, std::set<std::string>& out);
void collect_symbols(const RulePtr& r, std::set<std::string>& out);

// Universe names referenced by var/choose rules.
void collect_universes(const RulePtr& r, std::set<std::string>& out);

}  // namespace ea
