#include "ea/rule.hpp"

#include "ea/state.hpp"

namespace ea {

TermPtr Term::lit(Value v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Literal;
  t->literal = std::move(v);
  return t;
}

TermPtr Term::var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Variable;
  t->name = std::move(name);
  return t;
}

TermPtr Term::app(std::string symbol, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Apply;
  t->name = std::move(symbol);
  t->args = std::move(args);
  return t;
}

std::string Term::text() const {
  switch (kind) {
    case Kind::Literal:
      return literal.text();
    case Kind::Variable:
      return name;
    case Kind::Apply: {
      if (args.empty()) return name;
      std::string out = name + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i]->text();
      }
      return out + ")";
    }
  }
  return "?";
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Literal:
      return a->literal == b->literal;
    case Term::Kind::Variable:
      return a->name == b->name;
    case Term::Kind::Apply: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) return false;
      }
      return true;
    }
  }
  return false;
}

RulePtr Rule::update(std::string symbol, std::vector<TermPtr> args,
                     TermPtr rhs) {
  auto r = std::make_shared<Rule>();
  r->kind = Kind::Update;
  r->symbol = std::move(symbol);
  r->args = std::move(args);
  r->rhs = std::move(rhs);
  return r;
}

RulePtr Rule::block(std::vector<RulePtr> items) {
  auto r = std::make_shared<Rule>();
  r->kind = Kind::Block;
  r->items = std::move(items);
  return r;
}

RulePtr Rule::cond(TermPtr guard, RulePtr then_rule, RulePtr else_rule) {
  auto r = std::make_shared<Rule>();
  r->kind = Kind::If;
  r->guard = std::move(guard);
  r->body = std::move(then_rule);
  r->else_body = std::move(else_rule);
  return r;
}

RulePtr Rule::var_rule(std::string var, std::string universe, RulePtr body) {
  auto r = std::make_shared<Rule>();
  r->kind = Kind::Var;
  r->var = std::move(var);
  r->universe = std::move(universe);
  r->body = std::move(body);
  return r;
}

RulePtr Rule::choose_rule(std::string var, std::string universe,
                          RulePtr body) {
  auto r = std::make_shared<Rule>();
  r->kind = Kind::Choose;
  r->var = std::move(var);
  r->universe = std::move(universe);
  r->body = std::move(body);
  return r;
}

bool equal(const RulePtr& a, const RulePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Rule::Kind::Update: {
      if (a->symbol != b->symbol || a->args.size() != b->args.size())
        return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) return false;
      }
      return equal(a->rhs, b->rhs);
    }
    case Rule::Kind::Block: {
      if (a->items.size() != b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i) {
        if (!equal(a->items[i], b->items[i])) return false;
      }
      return true;
    }
    case Rule::Kind::If:
      return equal(a->guard, b->guard) && equal(a->body, b->body) &&
             equal(a->else_body, b->else_body);
    case Rule::Kind::Var:
    case Rule::Kind::Choose:
      return a->var == b->var && a->universe == b->universe &&
             equal(a->body, b->body);
  }
  return false;
}

TermPtr substitute(const TermPtr& t, const std::string& var, const Value& v) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Literal:
      return t;
    case Term::Kind::Variable:
      return t->name == var ? Term::lit(v) : t;
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const TermPtr& arg : t->args) {
        TermPtr sub = substitute(arg, var, v);
        changed = changed || sub != arg;
        args.push_back(std::move(sub));
      }
      return changed ? Term::app(t->name, std::move(args)) : t;
    }
  }
  return t;
}

RulePtr substitute(const RulePtr& r, const std::string& var, const Value& v) {
  if (!r) return r;
  switch (r->kind) {
    case Rule::Kind::Update: {
      std::vector<TermPtr> args;
      args.reserve(r->args.size());
      for (const TermPtr& arg : r->args) args.push_back(substitute(arg, var, v));
      return Rule::update(r->symbol, std::move(args),
                          substitute(r->rhs, var, v));
    }
    case Rule::Kind::Block: {
      std::vector<RulePtr> items;
      items.reserve(r->items.size());
      for (const RulePtr& item : r->items)
        items.push_back(substitute(item, var, v));
      return Rule::block(std::move(items));
    }
    case Rule::Kind::If:
      return Rule::cond(substitute(r->guard, var, v),
                        substitute(r->body, var, v),
                        substitute(r->else_body, var, v));
    case Rule::Kind::Var:
    case Rule::Kind::Choose: {
      if (r->var == var) return r;  // shadowed
      RulePtr body = substitute(r->body, var, v);
      return r->kind == Rule::Kind::Var
                 ? Rule::var_rule(r->var, r->universe, std::move(body))
                 : Rule::choose_rule(r->var, r->universe, std::move(body));
    }
  }
  return r;
}

void collect_symbols(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == Term::Kind::Apply) {
    if (!Vocabulary::is_builtin(t->name)) out.insert(t->name);
    for (const TermPtr& arg : t->args) collect_symbols(arg, out);
  }
}

void collect_symbols(const RulePtr& r, std::set<std::string>& out) {
  if (!r) return;
  switch (r->kind) {
    case Rule::Kind::Update:
      out.insert(r->symbol);
      for (const TermPtr& arg : r->args) collect_symbols(arg, out);
      collect_symbols(r->rhs, out);
      break;
    case Rule::Kind::Block:
      for (const RulePtr& item : r->items) collect_symbols(item, out);
      break;
    case Rule::Kind::If:
      collect_symbols(r->guard, out);
      collect_symbols(r->body, out);
      collect_symbols(r->else_body, out);
      break;
    case Rule::Kind::Var:
    case Rule::Kind::Choose:
      collect_symbols(r->body, out);
      break;
  }
}

void collect_universes(const RulePtr& r, std::set<std::string>& out) {
  if (!r) return;
  switch (r->kind) {
    case Rule::Kind::Update:
      break;
    case Rule::Kind::Block:
      for (const RulePtr& item : r->items) collect_universes(item, out);
      break;
    case Rule::Kind::If:
      collect_universes(r->body, out);
      collect_universes(r->else_body, out);
      break;
    case Rule::Kind::Var:
    case Rule::Kind::Choose:
      out.insert(r->universe);
      collect_universes(r->body, out);
      break;
  }
}

}  // namespace ea
