// Shared test fixture: the two-token ring state and random rule/state
// generators used by the semantics property tests.
#pragma once

#include <memory>
#include <random>

#include "ea/semantics.hpp"

namespace eatest {

struct TokenRing {
  ea::VocabularyPtr vocab;
  ea::State state;

  TokenRing() {
    auto v = std::make_shared<ea::Vocabulary>();
    v->add({"Token1", 0, false, false, false});
    v->add({"Token2", 0, false, false, false});
    v->add({"Next", 1, false, false, true});
    v->add({"Colored", 1, true, false, false});
    v->add({"p", 0, false, false, false});
    v->add({"g", 0, false, false, false});
    vocab = v;
    state = ea::State(vocab);
    state.declare_universe("Nodes", {ea::Value::opaque("n1"),
                                     ea::Value::opaque("n2"),
                                     ea::Value::opaque("n3")});
    state.write({"Token1", {}}, node(1));
    state.write({"Token2", {}}, node(2));
    state.write({"Next", {node(1)}}, node(2));
    state.write({"Next", {node(2)}}, node(3));
    state.write({"Next", {node(3)}}, node(1));
    state.write({"p", {}}, ea::Value::integer(5));
    state.write({"g", {}}, ea::Value::integer(2));
  }

  static ea::Value node(int i) {
    return ea::Value::opaque("n" + std::to_string(i));
  }
};

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int below(int n) {
    return static_cast<int>(std::uniform_int_distribution<>(0, n - 1)(gen));
  }
  bool flip() { return below(2) == 1; }
};

inline ea::State random_token_state(Rng& rng) {
  TokenRing ring;
  ea::State s = ring.state;
  s.write({"Token1", {}}, TokenRing::node(rng.below(3) + 1));
  s.write({"Token2", {}}, TokenRing::node(rng.below(3) + 1));
  for (int i = 1; i <= 3; ++i) {
    s.write({"Colored", {TokenRing::node(i)}}, ea::Value::boolean(rng.flip()));
  }
  s.write({"p", {}}, ea::Value::integer(rng.below(6)));
  s.write({"g", {}}, ea::Value::integer(rng.below(6)));
  return s;
}

inline ea::TermPtr random_term(Rng& rng, bool boolean, int depth = 0) {
  using ea::Term;
  if (boolean) {
    switch (depth > 2 ? rng.below(2) : rng.below(4)) {
      case 0:
        return Term::app("=", {random_term(rng, false, depth + 1),
                               random_term(rng, false, depth + 1)});
      case 1:
        return Term::app("!=", {random_term(rng, false, depth + 1),
                                random_term(rng, false, depth + 1)});
      case 2:
        return Term::app("and", {random_term(rng, true, depth + 1),
                                 random_term(rng, true, depth + 1)});
      default:
        return Term::app("not", {random_term(rng, true, depth + 1)});
    }
  }
  switch (rng.below(4)) {
    case 0:
      return Term::app("Token1", {});
    case 1:
      return Term::app("Token2", {});
    case 2:
      return Term::app("Next", {Term::app(rng.flip() ? "Token1" : "Token2",
                                          {})});
    default:
      return Term::lit(TokenRing::node(rng.below(3) + 1));
  }
}

inline ea::RulePtr random_rule(Rng& rng, int depth = 0) {
  using ea::Rule;
  using ea::Term;
  int pick = depth > 2 ? 0 : rng.below(4);
  switch (pick) {
    case 0: {
      if (rng.flip()) {
        return Rule::update(rng.flip() ? "Token1" : "Token2", {},
                            random_term(rng, false, depth + 1));
      }
      return Rule::update("Colored", {random_term(rng, false, depth + 1)},
                          Term::lit(ea::Value::boolean(rng.flip())));
    }
    case 1: {
      std::vector<ea::RulePtr> items;
      int count = rng.below(3) + 1;
      for (int i = 0; i < count; ++i)
        items.push_back(random_rule(rng, depth + 1));
      return Rule::block(std::move(items));
    }
    case 2:
      return Rule::cond(random_term(rng, true, depth + 1),
                        random_rule(rng, depth + 1),
                        rng.flip() ? random_rule(rng, depth + 1) : nullptr);
    default: {
      auto colored = Rule::cond(
          Term::app("!=",
                    {Term::var("x"), random_term(rng, false, depth + 1)}),
          Rule::update("Colored", {Term::var("x")},
                       Term::lit(ea::Value::boolean(true))));
      return Rule::var_rule("x", "Nodes", colored);
    }
  }
}

}  // namespace eatest
