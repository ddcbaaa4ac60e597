#include <random>

#include "doctest.h"
#include "ea/semantics.hpp"
#include "token_ring.hpp"

using namespace ea;

namespace {

using eatest::Rng;
using eatest::TokenRing;
using eatest::random_rule;
using eatest::random_term;
using eatest::random_token_state;

TermPtr T(const std::string& s) { return Term::app(s, {}); }
TermPtr T1(const std::string& s, TermPtr a) { return Term::app(s, {a}); }

}  // namespace

TEST_CASE("values: equality is the superuniverse relation") {
  CHECK(Value::boolean(true) != Value::boolean(false));
  CHECK(Value::undef() != Value::boolean(true));
  CHECK(Value::undef() != Value::boolean(false));
  CHECK(Value::undef() == Value::undef());
  // different tags are always distinct elements
  CHECK(Value::integer(0) != Value::boolean(false));
  CHECK(Value::datum("x") != Value::opaque("x"));
  CHECK(Value::datum("x") == Value::datum("x"));
  CHECK(Value::integer(3) == Value::integer(3));
}

TEST_CASE("vocabulary carries the logic symbols") {
  Vocabulary v;
  for (const char* name : {"true", "false", "undef", "Bool", "="}) {
    CHECK(v.has(name));
  }
  CHECK(v.at("true").arity == 0);
  CHECK(v.at("false").arity == 0);
  CHECK(v.at("undef").arity == 0);
  CHECK(v.at("=").is_predicate);
}

TEST_CASE("eval_term basics") {
  TokenRing ring;
  CHECK(eval_term(Term::lit(Value::boolean(true)), ring.state) ==
        Value::boolean(true));
  CHECK(eval_term(T("true"), ring.state) == Value::boolean(true));
  // move token 1 to the successor: Next(Token1) evaluates through the state
  CHECK(eval_term(T1("Next", T("Token1")), ring.state) == TokenRing::node(2));
  // arithmetic over interpreted integers
  CHECK(eval_term(Term::app("-", {T("p"), T("g")}), ring.state) ==
        Value::integer(3));
  CHECK(eval_term(Term::app("mod", {T("p"), Term::lit(Value::integer(4))}),
                  ring.state) == Value::integer(1));

  CHECK_THROWS_AS(eval_term(Term::var("x"), ring.state), EvalError);
  CHECK_THROWS_AS(eval_term(T1("Token1", T("Token2")), ring.state),
                  StructuralError);
  CHECK_THROWS_AS(eval_term(T("NoSuchSymbol"), ring.state), StructuralError);
}

TEST_CASE("off-domain reads are undef, false for predicates") {
  TokenRing ring;
  CHECK(ring.state.read({"Next", {Value::opaque("n9")}}).is_undef());
  CHECK(ring.state.read({"Colored", {TokenRing::node(1)}}) ==
        Value::boolean(false));
  // reading never mutates
  State copy = ring.state;
  (void)copy.read({"Colored", {TokenRing::node(3)}});
  CHECK(copy == ring.state);
}

TEST_CASE("update_set: exchange the tokens") {
  TokenRing ring;
  auto rule = Rule::block({
      Rule::update("Token1", {}, T("Token2")),
      Rule::update("Token2", {}, T("Token1")),
  });
  UpdateSet us = update_set(rule, ring.state);
  CHECK(us.size() == 2);
  CHECK(us.contains({{"Token1", {}}, TokenRing::node(2)}));
  CHECK(us.contains({{"Token2", {}}, TokenRing::node(1)}));

  State next = fire(ring.state, us).state;
  CHECK(next.read({"Token1", {}}) == TokenRing::node(2));
  CHECK(next.read({"Token2", {}}) == TokenRing::node(1));
}

TEST_CASE("update_set: conditional") {
  TokenRing ring;
  auto guarded = Rule::cond(Term::app("=", {T("Token1"), T("Token2")}),
                            Rule::update("Colored", {T("Token1")},
                                         Term::lit(Value::boolean(true))));
  // tokens sit on different nodes: empty update set
  CHECK(update_set(guarded, ring.state).empty());

  State together = ring.state;
  together.write({"Token2", {}}, TokenRing::node(1));
  UpdateSet us = update_set(guarded, together);
  CHECK(us.size() == 1);
  CHECK(us.contains({{"Colored", {TokenRing::node(1)}}, Value::boolean(true)}));

  auto bad_guard = Rule::cond(T("Token1"), Rule::block({}));
  CHECK_THROWS_AS(update_set(bad_guard, ring.state), TypeError);
}

TEST_CASE("update_set: else branch") {
  TokenRing ring;
  auto rule = Rule::cond(Term::app("=", {T("Token1"), T("Token2")}),
                         Rule::update("Token1", {}, T("Token2")),
                         Rule::update("Token2", {},
                                      Term::lit(TokenRing::node(3))));
  // guard is false here, so the else branch contributes the set
  UpdateSet us = update_set(rule, ring.state);
  CHECK(us.size() == 1);
  CHECK(us.contains({{"Token2", {}}, TokenRing::node(3)}));
}

TEST_CASE("update_set: var rule colors the unoccupied nodes") {
  TokenRing ring;
  auto unoccupied =
      Term::app("and", {Term::app("!=", {Term::var("x"), T("Token1")}),
                        Term::app("!=", {Term::var("x"), T("Token2")})});
  auto rule = Rule::var_rule(
      "x", "Nodes",
      Rule::cond(unoccupied, Rule::update("Colored", {Term::var("x")},
                                          Term::lit(Value::boolean(true)))));
  UpdateSet us = update_set(rule, ring.state);
  CHECK(us.size() == 1);
  CHECK(us.contains({{"Colored", {TokenRing::node(3)}}, Value::boolean(true)}));
}

TEST_CASE("choose: contract and enumeration") {
  TokenRing ring;
  auto choose = Rule::choose_rule(
      "x", "Nodes",
      Rule::update("Token1", {}, Term::var("x")));
  CHECK_THROWS_AS(update_set(choose, ring.state), ContractError);

  auto instances = enumerate_choices(choose, ring.state);
  REQUIRE(instances.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(instances[i].choice == i);
    CHECK(*instances[i].chosen == TokenRing::node(i + 1));
    UpdateSet us = update_set(instances[i].rule, ring.state);
    CHECK(us.contains({{"Token1", {}}, TokenRing::node(i + 1)}));
  }

  State no_nodes = ring.state;
  no_nodes.declare_universe("Nodes", {});
  CHECK(enumerate_choices(choose, no_nodes).empty());

  // rules without a choice yield one unresolved instance
  auto plain = Rule::update("Token1", {}, T("Token2"));
  auto single = enumerate_choices(plain, ring.state);
  REQUIRE(single.size() == 1);
  CHECK_FALSE(single[0].choice.has_value());
}

TEST_CASE("is_consistent") {
  Location token1{"Token1", {}};
  UpdateSet conflicting;
  conflicting.insert({token1, TokenRing::node(1)});
  conflicting.insert({token1, TokenRing::node(2)});
  CHECK_FALSE(is_consistent(conflicting));

  UpdateSet repeated;
  repeated.insert({token1, TokenRing::node(1)});
  repeated.insert({token1, TokenRing::node(1)});
  CHECK(is_consistent(repeated));
  CHECK(repeated.size() == 1);  // set-like membership

  CHECK(is_consistent(UpdateSet{}));
}

TEST_CASE("fire") {
  TokenRing ring;
  SUBCASE("empty set is the identity") {
    CHECK(fire(ring.state, {}).state == ring.state);
  }
  SUBCASE("a singleton moves the token, nothing else changes") {
    UpdateSet us;
    us.insert({{"Token1", {}}, TokenRing::node(2)});
    FireResult r = fire(ring.state, us);
    CHECK(r.applied);
    CHECK(r.state.read({"Token1", {}}) == TokenRing::node(2));
    CHECK(r.state.read({"Token2", {}}) == ring.state.read({"Token2", {}}));
    CHECK(r.state.read({"Next", {TokenRing::node(1)}}) == TokenRing::node(2));
  }
  SUBCASE("an inconsistent set does nothing, with a diagnostic") {
    UpdateSet us;
    us.insert({{"p", {}}, Value::integer(1)});
    us.insert({{"p", {}}, Value::integer(2)});
    FireResult r = fire(ring.state, us);
    CHECK_FALSE(r.applied);
    CHECK(r.state == ring.state);
  }
  SUBCASE("updates of static symbols are illegal") {
    UpdateSet us;
    us.insert({{"Next", {TokenRing::node(1)}}, TokenRing::node(1)});
    CHECK_THROWS_AS(fire(ring.state, us), StructuralError);
  }
  SUBCASE("predicates hold only true and false") {
    UpdateSet us;
    us.insert({{"Colored", {TokenRing::node(1)}}, Value::integer(7)});
    CHECK_THROWS_AS(fire(ring.state, us), TypeError);
  }
}

TEST_CASE("is_enabled needs a non-trivial update") {
  TokenRing ring;
  auto trivial = Rule::update("p", {}, T("p"));
  CHECK_FALSE(is_enabled(trivial, ring.state));
  auto bump = Rule::update("p", {}, Term::app("+", {T("p"), Term::lit(Value::integer(1))}));
  CHECK(is_enabled(bump, ring.state));
}

// ---- property tests ------------------------------------------------------

TEST_CASE("property: block update set is the union of its members") {
  Rng rng(20240301);
  for (int round = 0; round < 300; ++round) {
    State s = random_token_state(rng);
    std::vector<RulePtr> items;
    int count = rng.below(4);
    for (int i = 0; i < count; ++i) items.push_back(random_rule(rng));
    UpdateSet whole = update_set(Rule::block(items), s);
    UpdateSet joined;
    for (const RulePtr& item : items) {
      for (const Update& u : update_set(item, s)) joined.insert(u);
    }
    REQUIRE(whole == joined);
  }
}

TEST_CASE("property: firing an inconsistent set is the identity") {
  Rng rng(20240302);
  for (int round = 0; round < 300; ++round) {
    State s = random_token_state(rng);
    UpdateSet us = update_set(random_rule(rng), s);
    FireResult r = fire(s, us);
    if (!is_consistent(us)) {
      REQUIRE(r.state == s);
      REQUIRE_FALSE(r.applied);
    } else {
      REQUIRE(r.applied);
    }
  }
}

TEST_CASE("property: frame - locations outside the set keep their value") {
  Rng rng(20240303);
  int fired = 0;
  for (int round = 0; round < 300; ++round) {
    State s = random_token_state(rng);
    UpdateSet us = update_set(random_rule(rng), s);
    if (!is_consistent(us)) continue;
    ++fired;
    State next = fire(s, us).state;
    auto written = [&](const Location& loc) {
      for (const Update& u : us) {
        if (u.location == loc) return true;
      }
      return false;
    };
    for (const auto& [loc, v] : s.interp()) {
      if (!written(loc)) REQUIRE(next.read(loc) == v);
    }
    for (const auto& [loc, v] : next.interp()) {
      if (!written(loc)) REQUIRE(s.read(loc) == v);
    }
  }
  CHECK(fired > 100);  // the generator produces plenty of consistent sets
}

TEST_CASE("property: var rule equals manual instantiation") {
  Rng rng(20240304);
  for (int round = 0; round < 200; ++round) {
    State s = random_token_state(rng);
    auto body = random_rule(rng, 2);
    auto rule = Rule::var_rule("y", "Nodes", body);
    UpdateSet whole = update_set(rule, s);
    UpdateSet oracle;
    for (const Value& u : s.universe("Nodes")) {
      for (const Update& upd : update_set(substitute(body, "y", u), s))
        oracle.insert(upd);
    }
    REQUIRE(whole == oracle);
  }
}

TEST_CASE("property: choose enumeration is complete and ordered") {
  Rng rng(20240305);
  TokenRing ring;
  for (int round = 0; round < 200; ++round) {
    auto body = random_rule(rng, 2);
    auto choose = Rule::choose_rule("x", "Nodes", body);
    auto wrapped = rng.flip()
                       ? Rule::cond(random_term(rng, true), choose)
                       : RulePtr(choose);
    auto instances = enumerate_choices(wrapped, ring.state);
    const auto& nodes = ring.state.universe("Nodes");
    REQUIRE(instances.size() == nodes.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
      REQUIRE(instances[i].choice == static_cast<int>(i));
      REQUIRE(*instances[i].chosen == nodes[i]);
    }
  }
}

TEST_CASE("property: predicates only ever hold true or false") {
  Rng rng(20240306);
  for (int round = 0; round < 200; ++round) {
    State s = random_token_state(rng);
    UpdateSet us = update_set(random_rule(rng), s);
    if (!is_consistent(us)) continue;
    State next = fire(s, us).state;
    for (const auto& [loc, v] : next.interp()) {
      if (next.vocab().at(loc.symbol).is_predicate) {
        REQUIRE(v.is_boolean());
      }
    }
  }
}

TEST_CASE("canonical text is stable and write-normalizing") {
  TokenRing ring;
  State a = ring.state;
  State b = ring.state;
  // writing the default erases; explicit undef equals implicit
  b.write({"Next", {Value::opaque("n9")}}, Value::undef());
  b.write({"Colored", {TokenRing::node(1)}}, Value::boolean(false));
  CHECK(a == b);
  CHECK(a.canonical_text() == b.canonical_text());
}
