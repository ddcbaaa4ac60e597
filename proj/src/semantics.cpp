#include "ea/semantics.hpp"

#include <algorithm>

#include "ea/errors.hpp"

namespace ea {

namespace {

long long euclid_mod(long long a, long long b) {
  if (b == 0) throw EvalError("mod by zero");
  long long m = a % b;
  return m < 0 ? m + (b < 0 ? -b : b) : m;
}

Value eval_builtin(const std::string& op, const std::vector<Value>& xs) {
  if (op == "true") return Value::boolean(true);
  if (op == "false") return Value::boolean(false);
  if (op == "undef") return Value::undef();
  if (op == "Bool") return Value::boolean(xs[0].is_boolean());
  if (op == "=") return Value::boolean(xs[0] == xs[1]);
  if (op == "!=") return Value::boolean(!(xs[0] == xs[1]));
  if (op == "and") return Value::boolean(xs[0].truth() && xs[1].truth());
  if (op == "or") return Value::boolean(xs[0].truth() || xs[1].truth());
  if (op == "not") return Value::boolean(!xs[0].truth());
  if (op == "+") return Value::integer(xs[0].as_int() + xs[1].as_int());
  if (op == "-") return Value::integer(xs[0].as_int() - xs[1].as_int());
  if (op == "mod") return Value::integer(euclid_mod(xs[0].as_int(), xs[1].as_int()));
  throw StructuralError("unknown builtin '" + op + "'");
}

// Finds the unique choice rule in a tree, if any. The machines in this
// toolkit never nest variable-binding constructors, so more than one
// choice in a rule is rejected.
const Rule* find_choose(const RulePtr& r) {
  if (!r) return nullptr;
  switch (r->kind) {
    case Rule::Kind::Choose:
      return r.get();
    case Rule::Kind::Update:
      return nullptr;
    case Rule::Kind::Block: {
      const Rule* found = nullptr;
      for (const RulePtr& item : r->items) {
        const Rule* c = find_choose(item);
        if (c && found)
          throw StructuralError("multiple choice rules in one rule tree");
        if (c) found = c;
      }
      return found;
    }
    case Rule::Kind::If: {
      const Rule* a = find_choose(r->body);
      const Rule* b = find_choose(r->else_body);
      if (a && b)
        throw StructuralError("multiple choice rules in one rule tree");
      return a ? a : b;
    }
    case Rule::Kind::Var:
      return find_choose(r->body);
  }
  return nullptr;
}

// Replaces the (unique) choice node by its body with the variable bound.
RulePtr resolve_choose(const RulePtr& r, const Value& chosen) {
  if (!r) return r;
  switch (r->kind) {
    case Rule::Kind::Choose:
      return substitute(r->body, r->var, chosen);
    case Rule::Kind::Update:
      return r;
    case Rule::Kind::Block: {
      std::vector<RulePtr> items;
      items.reserve(r->items.size());
      for (const RulePtr& item : r->items)
        items.push_back(resolve_choose(item, chosen));
      return Rule::block(std::move(items));
    }
    case Rule::Kind::If:
      return Rule::cond(r->guard, resolve_choose(r->body, chosen),
                        resolve_choose(r->else_body, chosen));
    case Rule::Kind::Var:
      return Rule::var_rule(r->var, r->universe,
                            resolve_choose(r->body, chosen));
  }
  return r;
}

}  // namespace

Value eval_term(const TermPtr& t, const State& s, const Env& env) {
  if (!t) throw StructuralError("null term");
  switch (t->kind) {
    case Term::Kind::Literal:
      return t->literal;
    case Term::Kind::Variable: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw EvalError("unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Apply: {
      std::vector<Value> xs;
      xs.reserve(t->args.size());
      for (const TermPtr& arg : t->args) xs.push_back(eval_term(arg, s, env));
      if (Vocabulary::is_builtin(t->name)) return eval_builtin(t->name, xs);
      // Universes act as unary predicates: membership.
      if (xs.size() == 1 && s.has_universe(t->name)) {
        const auto& elems = s.universe(t->name);
        bool member =
            std::find(elems.begin(), elems.end(), xs[0]) != elems.end();
        return Value::boolean(member);
      }
      const FunctionSymbol& f = s.vocab().at(t->name);
      if (static_cast<std::size_t>(f.arity) != xs.size()) {
        throw StructuralError("symbol '" + t->name + "' applied to " +
                              std::to_string(xs.size()) + " arguments, arity " +
                              std::to_string(f.arity));
      }
      return s.read(Location{t->name, std::move(xs)});
    }
  }
  throw StructuralError("malformed term");
}

UpdateSet update_set(const RulePtr& r, const State& s, const Env& env) {
  UpdateSet out;
  if (!r) return out;
  switch (r->kind) {
    case Rule::Kind::Update: {
      const FunctionSymbol& f = s.vocab().at(r->symbol);
      if (static_cast<std::size_t>(f.arity) != r->args.size()) {
        throw StructuralError("update of '" + r->symbol + "' with " +
                              std::to_string(r->args.size()) +
                              " arguments, arity " + std::to_string(f.arity));
      }
      Location loc{r->symbol, {}};
      loc.args.reserve(r->args.size());
      for (const TermPtr& arg : r->args)
        loc.args.push_back(eval_term(arg, s, env));
      out.insert(Update{std::move(loc), eval_term(r->rhs, s, env)});
      return out;
    }
    case Rule::Kind::Block: {
      for (const RulePtr& item : r->items) {
        for (const Update& u : update_set(item, s, env)) out.insert(u);
      }
      return out;
    }
    case Rule::Kind::If: {
      Value g = eval_term(r->guard, s, env);
      if (!g.is_boolean())
        throw TypeError("guard evaluated to non-boolean " + g.key());
      if (g.truth()) return update_set(r->body, s, env);
      if (r->else_body) return update_set(r->else_body, s, env);
      return out;
    }
    case Rule::Kind::Var: {
      for (const Value& u : s.universe(r->universe)) {
        Env inner = env;
        inner[r->var] = u;
        for (const Update& upd : update_set(r->body, s, inner))
          out.insert(upd);
      }
      return out;
    }
    case Rule::Kind::Choose:
      throw ContractError(
          "choice rule reached without a resolution; enumerate_choices first");
  }
  return out;
}

std::vector<ResolvedRule> enumerate_choices(const RulePtr& r, const State& s) {
  std::vector<ResolvedRule> out;
  const Rule* choose = find_choose(r);
  if (!choose) {
    out.push_back(ResolvedRule{r, std::nullopt, std::nullopt});
    return out;
  }
  const std::vector<Value>& elems = s.universe(choose->universe);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    out.push_back(ResolvedRule{resolve_choose(r, elems[i]),
                               static_cast<int>(i), elems[i]});
  }
  return out;
}

bool is_enabled(const RulePtr& r, const State& s, const Env& env) {
  UpdateSet us = update_set(r, s, env);
  if (!is_consistent(us)) return false;
  for (const Update& u : us) {
    if (!(s.read(u.location) == u.value)) return true;
  }
  return false;
}

}  // namespace ea
