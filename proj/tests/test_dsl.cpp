#include "doctest.h"
#include "ea/dsl.hpp"
#include "ea/ringbuffer.hpp"

using namespace ea;
using ringbuf::RingParams;

namespace {

std::string resource(const std::string& name) {
  return dsl::read_file(std::string(EA_RESOURCE_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("the four machines parse from their transcriptions") {
  RingParams params = RingParams::of(4, 2);
  struct Case {
    const char* file;
    Machine machine;
  };
  Case cases[] = {{"r1.ea", ringbuf::build_r1(params)},
                  {"r2.ea", ringbuf::build_r2(params)},
                  {"rea.ea", ringbuf::build_rea(params)},
                  {"cea.ea", ringbuf::build_cea(params)}};
  for (const Case& c : cases) {
    INFO(c.file);
    DistributedProgram parsed = dsl::parse_program(resource(c.file), c.file);
    CHECK(equal(parsed, c.machine.program));
  }
}

TEST_CASE("row machine transcription: modules and symbols") {
  DistributedProgram p = dsl::parse_program(resource("rea.ea"), "rea.ea");
  CHECK(p.modules.size() == 2);
  CHECK(p.module_named("FrontEnd"));
  CHECK(p.module_named("BackEnd"));
  for (const char* s :
       {"p", "g", "Buffer", "InputDatum", "OutputDatum", "InSendBit",
        "InReceiveBit", "OutSendBit", "OutReceiveBit"}) {
    CHECK(p.vocab->has(s));
  }
  CHECK(p.vocab->at("InSendBit").is_external);
  CHECK(p.vocab->at("InReceiveBit").is_external == false);
  CHECK(p.vocab->at("N").is_static);
}

TEST_CASE("the rendered column machine matches the golden file") {
  Machine cea = ringbuf::build_cea(RingParams::of(4, 2));
  CHECK(dsl::render(cea.program) == resource("golden/cea.ea"));
}

TEST_CASE("small programs and diagnostics") {
  SUBCASE("one module, one conditional") {
    DistributedProgram p =
        dsl::parse_program("module M if true then x := 1 endif");
    CHECK(p.modules.size() == 1);
    REQUIRE(p.modules[0].rules.size() == 1);
    CHECK(p.modules[0].rules[0].second->kind == Rule::Kind::If);
  }
  SUBCASE("unclosed endif fails at end of input") {
    try {
      dsl::parse_program("module M if true then x := 1", "m.ea");
      FAIL("expected a syntax error");
    } catch (const dsl::DslError& e) {
      CHECK(std::string(e.what()).find("m.ea:1:") == 0);
    }
  }
  SUBCASE("duplicate module names") {
    CHECK_THROWS_AS(dsl::parse_program("module M x := 1 module M y := 2"),
                    StructuralError);
  }
  SUBCASE("arity inconsistency across uses") {
    CHECK_THROWS_AS(dsl::parse_program("module M f(1) := f + 1"),
                    dsl::DslError);
  }
  SUBCASE("modules may not update external symbols") {
    CHECK_THROWS_AS(
        dsl::parse_program("function In/0 external module M In := 1"),
        StructuralError);
  }
  SUBCASE("comma-separated updates form a block") {
    DistributedProgram p = dsl::parse_program(
        "module M if g then p := p + 1, Mode(Me) := Wait endif");
    const RulePtr& rule = p.modules[0].rules[0].second;
    REQUIRE(rule->kind == Rule::Kind::If);
    REQUIRE(rule->body->kind == Rule::Kind::Block);
    CHECK(rule->body->items.size() == 2);
  }
  SUBCASE("chained comparisons are rejected") {
    CHECK_THROWS_AS(
        dsl::parse_program("module M if a = b = c then x := 1 endif"),
        dsl::DslError);
  }
}

TEST_CASE("operator precedence") {
  // not > mod > (+,-) > (=,!=) > and > or
  DistributedProgram p = dsl::parse_program(
      "module M if p - g != N and InSendBit != InReceiveBit then "
      "x := p mod N + 1 endif");
  const RulePtr& rule = p.modules[0].rules[0].second;
  const TermPtr& guard = rule->guard;
  REQUIRE(guard->name == "and");
  CHECK(guard->args[0]->name == "!=");
  CHECK(guard->args[0]->args[0]->name == "-");
  // mod binds tighter than +
  const TermPtr& rhs = rule->body->rhs;
  CHECK(rhs->name == "+");
  CHECK(rhs->args[0]->name == "mod");
}

TEST_CASE("state files") {
  RingParams params = RingParams::of(4, 2);

  SUBCASE("row machine initial state") {
    Machine rea = ringbuf::build_rea(params);
    GlobalState s =
        dsl::parse_state(resource("rea_n4.eas"), rea.program, "rea_n4.eas");
    CHECK(s == rea.initial);
    CHECK(agents_of(s).size() == 2);
    CHECK(s.read({"p", {}}) == Value::integer(0));
    for (int i = 0; i < 4; ++i) {
      CHECK(s.read({"Buffer", {Value::integer(i)}}).is_undef());
    }
  }

  SUBCASE("column machine initial state") {
    Machine cea = ringbuf::build_cea(params);
    GlobalState s =
        dsl::parse_state(resource("cea_n4.eas"), cea.program, "cea_n4.eas");
    CHECK(s == cea.initial);
    auto agents = agents_of(s);
    REQUIRE(agents.size() == 4);
    for (const Value& a : agents) {
      CHECK(a.is_integer());
      CHECK(module_name_of(s, a) == "Slot");
      CHECK(s.read({"pp", {a}}) == Value::integer(0));
      CHECK(s.read({"gg", {a}}) == Value::integer(0));
      CHECK(s.read({"Mode", {a}}) == Value::mode("Get"));
    }
  }

  SUBCASE("values outside every universe are diagnosed") {
    Machine rea = ringbuf::build_rea(params);
    CHECK_THROWS_AS(
        dsl::parse_state("universe Data = { d0 }\nInputDatum = nope",
                         rea.program, "bad.eas"),
        dsl::DslError);
  }

  SUBCASE("rendering sorts bindings by symbol then arguments") {
    Machine cea = ringbuf::build_cea(RingParams::of(2, 1));
    std::string text = dsl::render(cea.initial);
    CHECK(text.find("gg(0) = 0") < text.find("gg(1) = 0"));
    CHECK(text.find("gg(1) = 0") < text.find("pp(0) = 0"));
  }
}

TEST_CASE("round-trip: parse after render is a fixed point") {
  std::vector<std::string> sources = {
      resource("r1.ea"),
      resource("r2.ea"),
      resource("rea.ea"),
      resource("cea.ea"),
      "module M if x = 1 then a := 2 else a := 3 endif",
      "module M var n ranges over Nodes if not Colored(n) then "
      "Colored(n) := true endif endvar",
      "module M block a := 1 block b := 2 endblock endblock",
      "module M choose d in Data out := d, count := count + 1 endchoose",
  };
  for (const std::string& text : sources) {
    DistributedProgram once = dsl::parse_program(text);
    std::string rendered = dsl::render(once);
    DistributedProgram twice = dsl::parse_program(rendered);
    CHECK(equal(once, twice));
  }
}

TEST_CASE("state render round-trips") {
  for (int n : {1, 3}) {
    RingParams params = RingParams::of(n, 2);
    for (const Machine& m :
         {ringbuf::build_r1(params), ringbuf::build_r2(params),
          ringbuf::build_rea(params), ringbuf::build_cea(params)}) {
      GlobalState parsed =
          dsl::parse_state(dsl::render(m.initial), m.program, "rt.eas");
      CHECK(parsed == m.initial);
    }
  }
}
