#include "ea/ringbuffer.hpp"

#include <algorithm>
#include <deque>

#include "ea/errors.hpp"

namespace ea::ringbuf {

namespace {

TermPtr T(const std::string& s) { return Term::app(s, {}); }
TermPtr T1(const std::string& s, TermPtr a) {
  return Term::app(s, {std::move(a)});
}
TermPtr num(long long v) { return Term::lit(Value::integer(v)); }
TermPtr bin(const char* op, TermPtr a, TermPtr b) {
  return Term::app(op, {std::move(a), std::move(b)});
}

FunctionSymbol dyn(const std::string& name, int arity) {
  return {name, arity, false, false, false};
}
FunctionSymbol ext(const std::string& name, int arity) {
  return {name, arity, false, true, false};
}
FunctionSymbol stat(const std::string& name, int arity) {
  return {name, arity, false, false, true};
}

VocabularyPtr make_vocab(std::vector<FunctionSymbol> symbols,
                         const std::vector<std::string>& module_names) {
  auto vocab = std::make_shared<Vocabulary>();
  vocab->add({"Me", 0, false, false, true});
  vocab->add({"Mod", 1, false, false, true});
  vocab->add({"Agents", 1, true, false, true});
  for (FunctionSymbol& f : symbols) vocab->add(std::move(f));
  for (const std::string& name : module_names) vocab->add(stat(name, 0));
  return vocab;
}

long long read_int(const State& s, const std::string& symbol) {
  return s.read(Location{symbol, {}}).as_int();
}

long long read_int1(const State& s, const std::string& symbol, long long arg) {
  return s.read(Location{symbol, {Value::integer(arg)}}).as_int();
}

void put(State& s, const std::string& symbol, Value v) {
  s.write(Location{symbol, {}}, std::move(v));
}

void put1(State& s, const std::string& symbol, Value arg, Value v) {
  s.write(Location{symbol, {std::move(arg)}}, std::move(v));
}

std::vector<Value> int_range(int n) {
  std::vector<Value> out;
  for (int i = 0; i < n; ++i) out.push_back(Value::integer(i));
  return out;
}

std::vector<Value> datum_universe(const RingParams& params) {
  std::vector<Value> out;
  for (const std::string& d : params.data) out.push_back(Value::datum(d));
  return out;
}

void common_initial(State& s, const RingParams& params) {
  s.declare_universe("Data", datum_universe(params));
  s.declare_universe("ZN", int_range(params.n));
  s.declare_universe("Z2", int_range(2));
  put(s, "N", Value::integer(params.n));
  put(s, "p", Value::integer(0));
  put(s, "g", Value::integer(0));
  put(s, "InputDatum", Value::datum(params.data.front()));
  put(s, "OutputDatum", Value::datum(params.data.front()));
}

void zero_bits(State& s) {
  for (const char* bit :
       {"InSendBit", "InReceiveBit", "OutSendBit", "OutReceiveBit"}) {
    put(s, bit, Value::integer(0));
  }
}

// guard: Mode(Me) = <mode>
TermPtr mode_is(TermPtr who, const std::string& mode) {
  return bin("=", T1("Mode", std::move(who)), T(mode));
}

}  // namespace

RingParams RingParams::of(int n, int data_size) {
  if (n < 1 || data_size < 1)
    throw ContractError("ring parameters require N >= 1 and data size >= 1");
  RingParams p;
  p.n = n;
  p.data.clear();
  for (int i = 0; i < data_size; ++i)
    p.data.push_back("d" + std::to_string(i));
  return p;
}

Machine build_r1(const RingParams& params) {
  auto vocab = make_vocab(
      {dyn("Buffer", 1), dyn("InputDatum", 0), dyn("Mode", 1), stat("N", 0),
       dyn("OutputDatum", 0), stat("Ready", 0), stat("Receiver", 1),
       stat("Sender", 1), stat("Wait", 0), stat("Work", 0), dyn("g", 0),
       dyn("p", 0)},
      {"InputEnvironment", "OutputEnvironment", "InputChannel",
       "OutputChannel", "BuffFrontEnd", "BuffBackEnd"});

  DistributedProgram program;
  program.vocab = vocab;

  EAModule in_env{"InputEnvironment", {}};
  in_env.rules.emplace_back(
      "", Rule::cond(mode_is(T("Me"), "Work"),
                     Rule::block({
                         Rule::choose_rule(
                             "v", "Data",
                             Rule::update("InputDatum", {}, Term::var("v"))),
                         Rule::update("Mode", {T("Me")}, T("Ready")),
                     })));

  EAModule out_env{"OutputEnvironment", {}};
  out_env.rules.emplace_back(
      "", Rule::cond(mode_is(T("Me"), "Work"),
                     Rule::update("Mode", {T("Me")}, T("Ready"))));

  auto channel_guard = bin("and", mode_is(T1("Sender", T("Me")), "Ready"),
                           mode_is(T1("Receiver", T("Me")), "Ready"));

  EAModule in_ch{"InputChannel", {}};
  in_ch.rules.emplace_back(
      "", Rule::cond(channel_guard,
                     Rule::block({
                         Rule::update("Buffer", {bin("mod", T("p"), T("N"))},
                                      T("InputDatum")),
                         Rule::update("Mode", {T1("Sender", T("Me"))},
                                      T("Work")),
                         Rule::update("Mode", {T1("Receiver", T("Me"))},
                                      T("Work")),
                     })));

  EAModule out_ch{"OutputChannel", {}};
  out_ch.rules.emplace_back(
      "", Rule::cond(channel_guard,
                     Rule::block({
                         Rule::update("OutputDatum", {},
                                      T1("Buffer", bin("mod", T("g"), T("N")))),
                         Rule::update("Mode", {T1("Sender", T("Me"))},
                                      T("Work")),
                         Rule::update("Mode", {T1("Receiver", T("Me"))},
                                      T("Work")),
                     })));

  EAModule front{"BuffFrontEnd", {}};
  front.rules.emplace_back(
      "FrontWait",
      Rule::cond(bin("and", mode_is(T("Me"), "Wait"),
                     bin("!=", bin("-", T("p"), T("g")), T("N"))),
                 Rule::update("Mode", {T("Me")}, T("Ready"))));
  front.rules.emplace_back(
      "FrontWork",
      Rule::cond(mode_is(T("Me"), "Work"),
                 Rule::block({
                     Rule::update("p", {}, bin("+", T("p"), num(1))),
                     Rule::update("Mode", {T("Me")}, T("Wait")),
                 })));

  EAModule back{"BuffBackEnd", {}};
  back.rules.emplace_back(
      "BackWait",
      Rule::cond(bin("and", mode_is(T("Me"), "Wait"),
                     bin("!=", bin("-", T("p"), T("g")), num(0))),
                 Rule::update("Mode", {T("Me")}, T("Ready"))));
  back.rules.emplace_back(
      "BackWork",
      Rule::cond(mode_is(T("Me"), "Work"),
                 Rule::block({
                     Rule::update("g", {}, bin("+", T("g"), num(1))),
                     Rule::update("Mode", {T("Me")}, T("Wait")),
                 })));

  program.modules = {in_env, out_env, in_ch, out_ch, front, back};
  program.validate();

  State init(vocab);
  common_initial(init, params);
  Value a_in_env = Value::agent("in_env");
  Value a_out_env = Value::agent("out_env");
  Value a_in_ch = Value::agent("in_ch");
  Value a_out_ch = Value::agent("out_ch");
  Value a_front = Value::agent("front_end");
  Value a_back = Value::agent("back_end");
  init.declare_universe(
      "Agents", {a_in_env, a_out_env, a_in_ch, a_out_ch, a_front, a_back});
  put1(init, "Mod", a_in_env, Value::opaque("InputEnvironment"));
  put1(init, "Mod", a_out_env, Value::opaque("OutputEnvironment"));
  put1(init, "Mod", a_in_ch, Value::opaque("InputChannel"));
  put1(init, "Mod", a_out_ch, Value::opaque("OutputChannel"));
  put1(init, "Mod", a_front, Value::opaque("BuffFrontEnd"));
  put1(init, "Mod", a_back, Value::opaque("BuffBackEnd"));
  init.declare_universe("Modes", {Value::mode("Ready"), Value::mode("Wait"),
                                  Value::mode("Work")});
  init.declare_universe("SendersAndReceivers",
                        {a_in_env, a_out_env, a_front, a_back});
  put(init, "Ready", Value::mode("Ready"));
  put(init, "Wait", Value::mode("Wait"));
  put(init, "Work", Value::mode("Work"));
  put1(init, "Sender", a_in_ch, a_in_env);
  put1(init, "Receiver", a_in_ch, a_front);
  put1(init, "Sender", a_out_ch, a_back);
  put1(init, "Receiver", a_out_ch, a_out_env);
  put1(init, "Mode", a_in_env, Value::mode("Work"));
  put1(init, "Mode", a_out_env, Value::mode("Ready"));
  put1(init, "Mode", a_front, Value::mode("Wait"));
  put1(init, "Mode", a_back, Value::mode("Wait"));

  return {"R1", std::move(program), std::move(init)};
}

Machine build_r2(const RingParams& params) {
  auto vocab = make_vocab(
      {dyn("Buffer", 1), dyn("InReceiveBit", 0), dyn("InSendBit", 0),
       dyn("InputDatum", 0), dyn("Mode", 1), stat("N", 0),
       dyn("OutReceiveBit", 0), dyn("OutSendBit", 0), dyn("OutputDatum", 0),
       stat("Ready", 0), stat("Wait", 0), stat("Work", 0), dyn("g", 0),
       dyn("p", 0)},
      {"InputEnvironment", "OutputEnvironment", "BuffFrontEnd",
       "BuffBackEnd"});

  DistributedProgram program;
  program.vocab = vocab;

  EAModule in_env{"InputEnvironment", {}};
  in_env.rules.emplace_back(
      "", Rule::cond(bin("=", T("InSendBit"), T("InReceiveBit")),
                     Rule::block({
                         Rule::choose_rule(
                             "v", "Data",
                             Rule::update("InputDatum", {}, Term::var("v"))),
                         Rule::update("InSendBit", {},
                                      bin("-", num(1), T("InSendBit"))),
                     })));

  EAModule out_env{"OutputEnvironment", {}};
  out_env.rules.emplace_back(
      "", Rule::cond(bin("!=", T("OutSendBit"), T("OutReceiveBit")),
                     Rule::update("OutReceiveBit", {},
                                  bin("-", num(1), T("OutReceiveBit")))));

  EAModule front{"BuffFrontEnd", {}};
  front.rules.emplace_back(
      "FrontWait",
      Rule::cond(bin("and", mode_is(T("Me"), "Wait"),
                     bin("!=", bin("-", T("p"), T("g")), T("N"))),
                 Rule::update("Mode", {T("Me")}, T("Ready"))));
  front.rules.emplace_back(
      "FrontCommunicate",
      Rule::cond(bin("and", mode_is(T("Me"), "Ready"),
                     bin("!=", T("InSendBit"), T("InReceiveBit"))),
                 Rule::block({
                     Rule::update("Buffer", {bin("mod", T("p"), T("N"))},
                                  T("InputDatum")),
                     Rule::update("Mode", {T("Me")}, T("Work")),
                     Rule::update("InReceiveBit", {},
                                  bin("-", num(1), T("InReceiveBit"))),
                 })));
  front.rules.emplace_back(
      "FrontWork",
      Rule::cond(mode_is(T("Me"), "Work"),
                 Rule::block({
                     Rule::update("p", {}, bin("+", T("p"), num(1))),
                     Rule::update("Mode", {T("Me")}, T("Wait")),
                 })));

  EAModule back{"BuffBackEnd", {}};
  back.rules.emplace_back(
      "BackWait",
      Rule::cond(bin("and", mode_is(T("Me"), "Wait"),
                     bin("!=", bin("-", T("p"), T("g")), num(0))),
                 Rule::update("Mode", {T("Me")}, T("Ready"))));
  back.rules.emplace_back(
      "BackCommunicate",
      Rule::cond(bin("and", mode_is(T("Me"), "Ready"),
                     bin("=", T("OutSendBit"), T("OutReceiveBit"))),
                 Rule::block({
                     Rule::update("OutputDatum", {},
                                  T1("Buffer", bin("mod", T("g"), T("N")))),
                     Rule::update("Mode", {T("Me")}, T("Work")),
                     Rule::update("OutSendBit", {},
                                  bin("-", num(1), T("OutSendBit"))),
                 })));
  back.rules.emplace_back(
      "BackWork",
      Rule::cond(mode_is(T("Me"), "Work"),
                 Rule::block({
                     Rule::update("g", {}, bin("+", T("g"), num(1))),
                     Rule::update("Mode", {T("Me")}, T("Wait")),
                 })));

  program.modules = {in_env, out_env, front, back};
  program.validate();

  State init(vocab);
  common_initial(init, params);
  zero_bits(init);
  Value a_in_env = Value::agent("in_env");
  Value a_out_env = Value::agent("out_env");
  Value a_front = Value::agent("front_end");
  Value a_back = Value::agent("back_end");
  init.declare_universe("Agents", {a_in_env, a_out_env, a_front, a_back});
  put1(init, "Mod", a_in_env, Value::opaque("InputEnvironment"));
  put1(init, "Mod", a_out_env, Value::opaque("OutputEnvironment"));
  put1(init, "Mod", a_front, Value::opaque("BuffFrontEnd"));
  put1(init, "Mod", a_back, Value::opaque("BuffBackEnd"));
  init.declare_universe("Modes", {Value::mode("Ready"), Value::mode("Wait"),
                                  Value::mode("Work")});
  init.declare_universe("BufferAgents", {a_front, a_back});
  put(init, "Ready", Value::mode("Ready"));
  put(init, "Wait", Value::mode("Wait"));
  put(init, "Work", Value::mode("Work"));
  put1(init, "Mode", a_front, Value::mode("Wait"));
  put1(init, "Mode", a_back, Value::mode("Wait"));

  return {"R2", std::move(program), std::move(init)};
}

Machine build_rea(const RingParams& params) {
  auto vocab = make_vocab(
      {dyn("Buffer", 1), dyn("InReceiveBit", 0), ext("InSendBit", 0),
       ext("InputDatum", 0), stat("N", 0), ext("OutReceiveBit", 0),
       dyn("OutSendBit", 0), dyn("OutputDatum", 0), dyn("g", 0), dyn("p", 0)},
      {"FrontEnd", "BackEnd"});

  DistributedProgram program;
  program.vocab = vocab;

  EAModule front{"FrontEnd", {}};
  front.rules.emplace_back(
      "", Rule::cond(bin("and", bin("!=", bin("-", T("p"), T("g")), T("N")),
                         bin("!=", T("InSendBit"), T("InReceiveBit"))),
                     Rule::block({
                         Rule::update("Buffer", {bin("mod", T("p"), T("N"))},
                                      T("InputDatum")),
                         Rule::update("InReceiveBit", {},
                                      bin("-", num(1), T("InReceiveBit"))),
                         Rule::update("p", {}, bin("+", T("p"), num(1))),
                     })));

  EAModule back{"BackEnd", {}};
  back.rules.emplace_back(
      "", Rule::cond(bin("and", bin("!=", bin("-", T("p"), T("g")), num(0)),
                         bin("=", T("OutSendBit"), T("OutReceiveBit"))),
                     Rule::block({
                         Rule::update("OutputDatum", {},
                                      T1("Buffer", bin("mod", T("g"), T("N")))),
                         Rule::update("OutSendBit", {},
                                      bin("-", num(1), T("OutSendBit"))),
                         Rule::update("g", {}, bin("+", T("g"), num(1))),
                     })));

  program.modules = {front, back};
  program.validate();

  State init(vocab);
  common_initial(init, params);
  zero_bits(init);
  Value a_front = Value::agent("front_end");
  Value a_back = Value::agent("back_end");
  init.declare_universe("Agents", {a_front, a_back});
  put1(init, "Mod", a_front, Value::opaque("FrontEnd"));
  put1(init, "Mod", a_back, Value::opaque("BackEnd"));

  return {"Rea", std::move(program), std::move(init)};
}

Machine build_cea(const RingParams& params) {
  auto vocab = make_vocab(
      {dyn("Buffer", 1), stat("Get", 0), dyn("InReceiveBit", 0),
       ext("InSendBit", 0), ext("InputDatum", 0), dyn("Mode", 1), stat("N", 0),
       ext("OutReceiveBit", 0), dyn("OutSendBit", 0), dyn("OutputDatum", 0),
       stat("Put", 0), dyn("gg", 1), dyn("pp", 1)},
      {"Slot"});

  DistributedProgram program;
  program.vocab = vocab;

  // InputTurn(Me), expanded:
  //   (Me = 0 and pp(0) = pp(N - 1)) or (Me != 0 and pp(Me) != pp(Me - 1))
  auto turn = [](const char* counter) {
    return bin("or",
               bin("and", bin("=", T("Me"), num(0)),
                   bin("=", T1(counter, num(0)),
                       T1(counter, bin("-", T("N"), num(1))))),
               bin("and", bin("!=", T("Me"), num(0)),
                   bin("!=", T1(counter, T("Me")),
                       T1(counter, bin("-", T("Me"), num(1))))));
  };

  EAModule slot{"Slot", {}};
  slot.rules.emplace_back(
      "Get",
      Rule::cond(bin("and",
                     bin("and", mode_is(T("Me"), "Get"), turn("pp")),
                     bin("!=", T("InSendBit"), T("InReceiveBit"))),
                 Rule::block({
                     Rule::update("Buffer", {T("Me")}, T("InputDatum")),
                     Rule::update("InReceiveBit", {},
                                  bin("-", num(1), T("InReceiveBit"))),
                     Rule::update("pp", {T("Me")},
                                  bin("-", num(1), T1("pp", T("Me")))),
                     Rule::update("Mode", {T("Me")}, T("Put")),
                 })));
  slot.rules.emplace_back(
      "Put",
      Rule::cond(bin("and",
                     bin("and", mode_is(T("Me"), "Put"), turn("gg")),
                     bin("=", T("OutSendBit"), T("OutReceiveBit"))),
                 Rule::block({
                     Rule::update("OutputDatum", {}, T1("Buffer", T("Me"))),
                     Rule::update("OutSendBit", {},
                                  bin("-", num(1), T("OutSendBit"))),
                     Rule::update("gg", {T("Me")},
                                  bin("-", num(1), T1("gg", T("Me")))),
                     Rule::update("Mode", {T("Me")}, T("Get")),
                 })));

  program.modules = {slot};
  program.validate();

  State init(vocab);
  init.declare_universe("Data", datum_universe(params));
  init.declare_universe("ZN", int_range(params.n));
  init.declare_universe("Z2", int_range(2));
  init.declare_universe("Modes", {Value::mode("Get"), Value::mode("Put")});
  put(init, "N", Value::integer(params.n));
  put(init, "Get", Value::mode("Get"));
  put(init, "Put", Value::mode("Put"));
  put(init, "InputDatum", Value::datum(params.data.front()));
  put(init, "OutputDatum", Value::datum(params.data.front()));
  zero_bits(init);
  std::vector<Value> agents = int_range(params.n);
  init.declare_universe("Agents", agents);
  for (const Value& agent : agents) {
    put1(init, "Mod", agent, Value::opaque("Slot"));
    put1(init, "pp", agent, Value::integer(0));
    put1(init, "gg", agent, Value::integer(0));
    put1(init, "Mode", agent, Value::mode("Get"));
  }

  return {"Cea", std::move(program), std::move(init)};
}

RingKind detect_kind(const DistributedProgram& program) {
  if (program.module_named("Slot")) return RingKind::Cea;
  if (program.module_named("InputChannel")) return RingKind::R1;
  if (program.module_named("FrontEnd")) return RingKind::Rea;
  if (program.module_named("BuffFrontEnd")) return RingKind::R2;
  throw StructuralError("not one of the ring machines");
}

int switch_point(const std::vector<int>& bits) {
  int n = static_cast<int>(bits.size());
  int found = -1;
  for (int k = 0; k < n; ++k) {
    bool holds = k == 0 ? bits[0] == bits[n - 1] : bits[k] != bits[k - 1];
    if (!holds) continue;
    if (found >= 0)
      throw Error("switch point is not unique (positions " +
                  std::to_string(found) + " and " + std::to_string(k) + ")");
    found = k;
  }
  if (found < 0) throw Error("pattern has no switch point");
  return found;
}

namespace {

int half_turn_bit(long long counter, int n, int i) {
  long long div_parity = (counter / n) % 2;
  return i >= counter % n ? static_cast<int>(div_parity)
                          : static_cast<int>(1 - div_parity);
}

const std::vector<std::string>& rea_cea_common() {
  static const std::vector<std::string> common = {
      "Buffer",     "InReceiveBit", "InSendBit",  "InputDatum",
      "N",          "OutReceiveBit", "OutSendBit", "OutputDatum"};
  return common;
}

void copy_symbols(State& to, const State& from,
                  const std::vector<std::string>& symbols) {
  for (const std::string& f : symbols) {
    to.erase_symbol(f);
    for (const auto& [loc, v] : from.entries_of(f)) to.write(loc, v);
  }
}

}  // namespace

State h_map(const State& row_state, const RingParams& params) {
  static thread_local std::map<std::string, State> templates;
  std::string key = std::to_string(params.n);
  for (const std::string& d : params.data) key += "," + d;
  auto it = templates.find(key);
  if (it == templates.end())
    it = templates.emplace(key, build_cea(params).initial).first;

  State c = it->second;
  int n = params.n;
  long long p = read_int(row_state, "p");
  long long g = read_int(row_state, "g");
  if (p < 0 || g < 0) throw equiv::MapUndefined("negative counter");
  for (int i = 0; i < n; ++i) {
    int ppi = half_turn_bit(p, n, i);
    int ggi = half_turn_bit(g, n, i);
    put1(c, "pp", Value::integer(i), Value::integer(ppi));
    put1(c, "gg", Value::integer(i), Value::integer(ggi));
    // Mode is redundant: Get exactly when pp and gg agree.
    put1(c, "Mode", Value::integer(i),
         ppi == ggi ? Value::mode("Get") : Value::mode("Put"));
  }
  copy_symbols(c, row_state, rea_cea_common());
  return c;
}

State h_inverse(const State& col_state, const RingParams& params) {
  static thread_local std::map<std::string, State> templates;
  std::string key = std::to_string(params.n);
  for (const std::string& d : params.data) key += "," + d;
  auto it = templates.find(key);
  if (it == templates.end())
    it = templates.emplace(key, build_rea(params).initial).first;

  int n = params.n;
  int kp, kg;
  try {
    kp = in_map(col_state);
    kg = out_map(col_state);
  } catch (const Error& e) {
    throw equiv::MapUndefined(std::string("no inverse: ") + e.what());
  }
  long long p2n = read_int1(col_state, "pp", kp) * n + kp;
  long long g2n = read_int1(col_state, "gg", kg) * n + kg;
  long long diff = (p2n - g2n + 2 * n) % (2 * n);
  if (diff > n)
    throw equiv::MapUndefined("pp/gg pattern puts p-g above N");

  State a = it->second;
  put(a, "g", Value::integer(g2n));
  put(a, "p", Value::integer(g2n + diff));
  copy_symbols(a, col_state, rea_cea_common());
  return a;
}

namespace {

int turn_holder(const State& col_state, const char* counter) {
  int n = static_cast<int>(read_int(col_state, "N"));
  std::vector<int> bits;
  bits.reserve(n);
  for (int i = 0; i < n; ++i)
    bits.push_back(static_cast<int>(read_int1(col_state, counter, i)));
  return switch_point(bits);
}

}  // namespace

int in_map(const State& col_state) { return turn_holder(col_state, "pp"); }
int out_map(const State& col_state) { return turn_holder(col_state, "gg"); }

equiv::ConfigMap rea_cea_config_map(const RingParams& params) {
  equiv::ConfigMap h;
  h.forward = [params](const State& a) { return h_map(a, params); };
  h.backward = [params](const State& c) { return h_inverse(c, params); };
  return h;
}

equiv::AgentCorrespondence rea_cea_correspondence() {
  equiv::AgentCorrespondence corr;
  corr.forward = [](const State& b, const Value& agent_a) {
    if (agent_a == Value::agent("front_end"))
      return Value::integer(in_map(b));
    if (agent_a == Value::agent("back_end"))
      return Value::integer(out_map(b));
    throw ContractError("unknown row agent " + agent_a.text());
  };
  corr.backward = [](const State& b, const Value& agent_b) {
    Value mode = b.read(Location{"Mode", {agent_b}});
    if (mode == Value::mode("Get")) return Value::agent("front_end");
    if (mode == Value::mode("Put")) return Value::agent("back_end");
    throw ContractError("column agent " + agent_b.text() +
                        " has no mode; cannot match");
  };
  return corr;
}

explorer::EnvStrategy ring_free_env(bool handshake) {
  return explorer::EnvStrategy::free_env(
      {{"InputDatum", "Data"}, {"InSendBit", "Z2"}, {"OutReceiveBit", "Z2"}},
      handshake);
}

equiv::LockstepVerdict check_equiv_rea_cea(const RingParams& params,
                                           const explorer::Bounds& bounds) {
  Machine rea = build_rea(params);
  Machine cea = build_cea(params);
  return equiv::check_lockstep(rea, cea, congruence_R(params.n),
                               congruence_identity(),
                               rea_cea_config_map(params),
                               rea_cea_correspondence(), ring_free_env(),
                               bounds);
}

std::vector<PpRow> pp_table(int n) {
  std::vector<PpRow> rows;
  for (long long p = 0; p < 2 * n - 1; ++p) {
    PpRow row;
    row.p = p;
    for (int i = 0; i < n; ++i) row.pp.push_back(half_turn_bit(p, n, i));
    row.box = switch_point(row.pp);
    rows.push_back(std::move(row));
  }
  return rows;
}

State shift_pg(const State& s, long long delta) {
  State out = s;
  put(out, "p", Value::integer(read_int(s, "p") + delta));
  put(out, "g", Value::integer(read_int(s, "g") + delta));
  return out;
}

std::vector<std::pair<State, State>> equivalent_samples(
    const RingParams& params, std::size_t max_pairs) {
  Machine rea = build_rea(params);
  explorer::Bounds bounds;
  bounds.max_nodes = max_pairs;
  explorer::TransitionGraph graph =
      explorer::explore(rea.program, rea.initial, congruence_R(params.n),
                        ring_free_env(), bounds);
  std::vector<std::pair<State, State>> out;
  for (const auto& node : graph.nodes) {
    if (out.size() >= max_pairs) break;
    out.emplace_back(node.representative,
                     shift_pg(node.representative, 2 * params.n));
  }
  return out;
}

// --- runs: classification, fifo, ordering -------------------------------

namespace {

// The named sub-rule an enabled move executes, by exclusive guards.
std::string fired_subrule(const DistributedProgram& program,
                          const GlobalState& pre_with_delta,
                          const Value& agent, std::optional<int> choice) {
  const EAModule* module =
      program.module_named(module_name_of(pre_with_delta, agent));
  if (!module) return "";
  GlobalState local = pre_with_delta;
  local.write(Location{"Me", {}}, agent);
  for (const auto& [name, rule] : module->rules) {
    for (const ResolvedRule& res : enumerate_choices(rule, local)) {
      if (res.choice != choice) continue;
      if (is_enabled(res.rule, local)) return name;
    }
  }
  return "";
}

enum class MoveClass { Input, Output, Other };

MoveClass classify(RingKind kind, const DistributedProgram& program,
                   const GlobalState& pre_with_delta, const Move& move) {
  std::string module = module_name_of(pre_with_delta, move.agent);
  switch (kind) {
    case RingKind::R1:
      if (module == "InputChannel") return MoveClass::Input;
      if (module == "OutputChannel") return MoveClass::Output;
      return MoveClass::Other;
    case RingKind::R2: {
      if (module != "BuffFrontEnd" && module != "BuffBackEnd")
        return MoveClass::Other;
      std::string fired =
          fired_subrule(program, pre_with_delta, move.agent, move.choice);
      if (fired == "FrontCommunicate") return MoveClass::Input;
      if (fired == "BackCommunicate") return MoveClass::Output;
      return MoveClass::Other;
    }
    case RingKind::Rea:
      if (module == "FrontEnd") return MoveClass::Input;
      if (module == "BackEnd") return MoveClass::Output;
      return MoveClass::Other;
    case RingKind::Cea: {
      std::string fired =
          fired_subrule(program, pre_with_delta, move.agent, move.choice);
      if (fired == "Get") return MoveClass::Input;
      if (fired == "Put") return MoveClass::Output;
      return MoveClass::Other;
    }
  }
  return MoveClass::Other;
}

struct AnalyzedRun {
  std::vector<std::vector<bool>> before;
  std::vector<GlobalState> pre_delta;   // state of the strict down-set + env
  std::vector<GlobalState> post;        // state after the move
  std::vector<MoveClass> classes;
  std::vector<int> inputs;   // move indices, ordered
  std::vector<int> outputs;
  std::optional<std::string> incomparable;  // two input (output) moves
};

AnalyzedRun analyze(const Machine& machine, const Run& run) {
  AnalyzedRun a;
  a.before = run.precedence();
  int n = static_cast<int>(run.size());
  RingKind kind = detect_kind(machine.program);
  for (int mu = 0; mu < n; ++mu) {
    std::uint64_t down = 0;
    for (int i = 0; i < n; ++i)
      if (a.before[i][mu]) down |= 1ull << i;
    GlobalState lambda = state_of_segment(machine.program, run, down);
    GlobalState with_delta =
        run.moves[mu].env_effect.empty()
            ? lambda
            : apply_env(lambda, run.moves[mu].env_effect, machine.program);
    a.post.push_back(
        state_of_segment(machine.program, run, down | (1ull << mu)));
    a.classes.push_back(classify(kind, machine.program, with_delta,
                                 run.moves[mu]));
    a.pre_delta.push_back(std::move(with_delta));
  }

  auto sequence = [&](MoveClass cls, std::vector<int>& out,
                      const char* label) {
    for (int i = 0; i < n; ++i)
      if (a.classes[i] == cls) out.push_back(i);
    for (std::size_t x = 0; x < out.size(); ++x) {
      for (std::size_t y = x + 1; y < out.size(); ++y) {
        if (!a.before[out[x]][out[y]] && !a.before[out[y]][out[x]]) {
          a.incomparable = std::string(label) + " moves " +
                           std::to_string(out[x]) + " and " +
                           std::to_string(out[y]) + " are incomparable";
          return;
        }
      }
    }
    std::sort(out.begin(), out.end(), [&](int x, int y) {
      return a.before[x][y];
    });
  };
  sequence(MoveClass::Input, a.inputs, "input");
  if (!a.incomparable) sequence(MoveClass::Output, a.outputs, "output");
  return a;
}

std::string datum_at(const GlobalState& s, const char* symbol) {
  return s.read(Location{symbol, {}}).text();
}

}  // namespace

FifoVerdict fifo_check(const Machine& machine, const Run& run) {
  FifoVerdict v;
  AnalyzedRun a = analyze(machine, run);
  if (a.incomparable) {
    v.ok = false;
    v.detail = *a.incomparable;
    return v;
  }
  for (int mu : a.inputs)
    v.inputs.push_back(datum_at(a.pre_delta[mu], "InputDatum"));
  for (int nu : a.outputs)
    v.outputs.push_back(datum_at(a.post[nu], "OutputDatum"));

  v.regular_exact = v.outputs.size() == v.inputs.size();
  v.regular_atleast = v.outputs.size() >= v.inputs.size();

  if (v.outputs.size() > v.inputs.size()) {
    v.ok = false;
    v.detail = "more outputs than inputs";
    return v;
  }
  for (std::size_t j = 0; j < v.outputs.size(); ++j) {
    if (v.outputs[j] != v.inputs[j]) {
      v.ok = false;
      v.detail = "output " + std::to_string(j) + " is " + v.outputs[j] +
                 ", expected " + v.inputs[j];
      return v;
    }
  }
  // mu_i < nu_i < mu_{i+N} wherever both sides exist.
  int n_slots = static_cast<int>(read_int(machine.initial, "N"));
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    if (i < a.inputs.size() && !a.before[a.inputs[i]][a.outputs[i]]) {
      v.ok = false;
      v.detail = "output move " + std::to_string(i) +
                 " does not follow input move " + std::to_string(i);
      return v;
    }
    std::size_t later = i + static_cast<std::size_t>(n_slots);
    if (later < a.inputs.size() &&
        !a.before[a.outputs[i]][a.inputs[later]]) {
      v.ok = false;
      v.detail = "input move " + std::to_string(later) +
                 " does not follow output move " + std::to_string(i);
      return v;
    }
  }
  return v;
}

SweepReport fifo_sweep(const Machine& machine,
                       const explorer::EnvStrategy& env,
                       const Congruence& memo_cong, int depth) {
  SweepReport report;
  RingKind kind = detect_kind(machine.program);
  int n_slots = static_cast<int>(read_int(machine.initial, "N"));

  std::map<std::string, int> memo;  // key -> deepest verified remaining

  std::function<bool(const GlobalState&, std::deque<std::string>&, int)> dfs =
      [&](const GlobalState& s, std::deque<std::string>& pending,
          int remaining) -> bool {
    if (remaining == 0) return true;
    std::string key = memo_cong.canon(s).canonical_text() + "|";
    for (const std::string& d : pending) key += d + ",";
    auto it = memo.find(key);
    if (it != memo.end() && it->second >= remaining) return true;
    for (explorer::Step& step :
         explorer::successors(machine.program, s, env, 0)) {
      GlobalState with_delta =
          step.env.empty() ? s : apply_env(s, step.env, machine.program);
      Move move{step.agent, step.choice, step.env};
      MoveClass cls = classify(kind, machine.program, with_delta, move);
      if (cls == MoveClass::Input) {
        if (static_cast<int>(pending.size()) >= n_slots) {
          report.ok = false;
          report.detail = "input move admitted with " +
                          std::to_string(pending.size()) +
                          " pending items (chain violated)";
          return false;
        }
        pending.push_back(datum_at(with_delta, "InputDatum"));
        bool ok = dfs(step.state, pending, remaining - 1);
        pending.pop_back();
        if (!ok) return false;
      } else if (cls == MoveClass::Output) {
        if (pending.empty()) {
          report.ok = false;
          report.detail = "output move with no pending input";
          return false;
        }
        std::string emitted = datum_at(step.state, "OutputDatum");
        if (emitted != pending.front()) {
          report.ok = false;
          report.detail =
              "output " + emitted + ", expected " + pending.front();
          return false;
        }
        std::string head = pending.front();
        pending.pop_front();
        bool ok = dfs(step.state, pending, remaining - 1);
        pending.push_front(head);
        if (!ok) return false;
      } else {
        if (!dfs(step.state, pending, remaining - 1)) return false;
      }
    }
    memo[key] = std::max(memo.count(key) ? memo[key] : 0, remaining);
    return true;
  };

  std::deque<std::string> pending;
  dfs(machine.initial, pending, depth);
  report.nodes = memo.size();
  return report;
}

// --- induced runs -------------------------------------------------------

State induce_r2_state(const State& r1_state, const Machine& r2) {
  State out = r2.initial;  // carries universes, agents, constants
  const auto& buffer_agents = r2.initial.universe("BufferAgents");
  // Clause (a): common function names keep their interpretation. Mode is
  // typed over BufferAgents here, so the environment agents' modes have no
  // counterpart location and stay out of the reduct.
  for (const auto& [name, f] : r2.program.vocab->symbols()) {
    if (Vocabulary::is_builtin(name)) continue;
    if (name == "Me" || name == "Mod" || name == "Agents") continue;
    if (name == "InSendBit" || name == "InReceiveBit" ||
        name == "OutSendBit" || name == "OutReceiveBit")
      continue;
    if (r2.program.module_named(name)) continue;
    out.erase_symbol(name);
    for (const auto& [loc, v] : r1_state.entries_of(name)) {
      if (name == "Mode" &&
          std::find(buffer_agents.begin(), buffer_agents.end(),
                    loc.args[0]) == buffer_agents.end())
        continue;
      out.write(loc, v);
    }
  }
  out.declare_universe("Data", r1_state.universe("Data"));

  auto mode_of = [&](const char* agent) {
    return r1_state.read(Location{"Mode", {Value::agent(agent)}});
  };
  bool front_quiet = mode_of("front_end") == Value::mode("Wait") ||
                     mode_of("front_end") == Value::mode("Ready");
  bool back_quiet = mode_of("back_end") == Value::mode("Wait") ||
                    mode_of("back_end") == Value::mode("Ready");
  long long p = read_int(r1_state, "p");
  long long g = read_int(r1_state, "g");

  // Clauses (b)-(e): bits derived from counters and modes.
  long long in_receive = front_quiet ? p % 2 : 1 - p % 2;
  long long out_send = back_quiet ? g % 2 : 1 - g % 2;
  long long in_send = mode_of("in_env") == Value::mode("Work")
                          ? in_receive
                          : 1 - in_receive;
  long long out_receive = mode_of("out_env") == Value::mode("Ready")
                              ? out_send
                              : 1 - out_send;
  put(out, "InReceiveBit", Value::integer(in_receive));
  put(out, "OutSendBit", Value::integer(out_send));
  put(out, "InSendBit", Value::integer(in_send));
  put(out, "OutReceiveBit", Value::integer(out_receive));
  return out;
}

Run induce_r2_run(const Machine& r1, const Machine& r2, const Run& run) {
  RunVerdict valid = validate_run(r1.program, run);
  if (!valid)
    throw ContractError("induce_r2_run needs a validated run: " +
                        valid.witness);
  Run out;
  out.initial = induce_r2_state(run.initial, r2);
  auto before = run.precedence();
  int n = static_cast<int>(run.size());
  for (int i = 0; i < n; ++i) {
    Move move = run.moves[i];
    std::string module = module_name_of(run.initial, move.agent);
    if (module == "InputChannel") move.agent = Value::agent("front_end");
    if (module == "OutputChannel") move.agent = Value::agent("back_end");
    out.moves.push_back(std::move(move));
  }
  // Keep the full order of the original poset.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (before[i][j]) out.order.emplace_back(i, j);
    }
  }
  return out;
}

// --- ordering lemmas ----------------------------------------------------

namespace {

// Buffer slot a move touches, when it touches one.
std::optional<int> slot_of(RingKind kind, const AnalyzedRun& a,
                           const Machine& machine, int mu, MoveClass cls) {
  if (cls == MoveClass::Other) return std::nullopt;
  int n = static_cast<int>(read_int(machine.initial, "N"));
  const GlobalState& pre = a.pre_delta[mu];
  if (kind == RingKind::Cea) {
    // agents of the column machine are the slots themselves
    return std::nullopt;
  }
  long long counter =
      cls == MoveClass::Input ? read_int(pre, "p") : read_int(pre, "g");
  return static_cast<int>(counter % n);
}

OrderingVerdict require_comparable(const AnalyzedRun& a,
                                   const std::vector<int>& moves,
                                   const std::string& lemma) {
  for (std::size_t x = 0; x < moves.size(); ++x) {
    for (std::size_t y = x + 1; y < moves.size(); ++y) {
      int i = moves[x], j = moves[y];
      if (!a.before[i][j] && !a.before[j][i]) {
        return {false, lemma,
                "moves " + std::to_string(i) + " and " + std::to_string(j) +
                    " are incomparable"};
      }
    }
  }
  return {};
}

}  // namespace

OrderingVerdict ordering_checks(const Machine& machine, const Run& run) {
  RingKind kind = detect_kind(machine.program);
  AnalyzedRun a = analyze(machine, run);
  int n = static_cast<int>(run.size());

  auto moves_of_module = [&](const char* module) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i) {
      if (module_name_of(run.initial, run.moves[i].agent) == module)
        out.push_back(i);
    }
    return out;
  };

  if (kind == RingKind::R1) {
    // Channel moves versus the matching buffer end, pairwise comparable.
    for (auto [channel, buffer_end] :
         {std::pair<const char*, const char*>{"InputChannel", "BuffFrontEnd"},
          {"OutputChannel", "BuffBackEnd"}}) {
      std::vector<int> both = moves_of_module(channel);
      for (int m : moves_of_module(buffer_end)) both.push_back(m);
      OrderingVerdict v = require_comparable(
          a, both, std::string("channel/buffer ordering (") + channel + ")");
      if (!v) return v;
    }
    // Same-slot input and output channel moves.
    int slots = static_cast<int>(read_int(machine.initial, "N"));
    for (int k = 0; k < slots; ++k) {
      std::vector<int> k_moves;
      for (int i = 0; i < n; ++i) {
        auto s = slot_of(kind, a, machine, i, a.classes[i]);
        if (s && *s == k) k_moves.push_back(i);
      }
      OrderingVerdict v = require_comparable(
          a, k_moves, "same-slot channel ordering (slot " + std::to_string(k) +
                          ")");
      if (!v) return v;
    }
    return {};
  }

  if (kind == RingKind::R2 || kind == RingKind::Rea) {
    int slots = static_cast<int>(read_int(machine.initial, "N"));
    for (int k = 0; k < slots; ++k) {
      std::vector<int> k_moves;
      for (int i = 0; i < n; ++i) {
        auto s = slot_of(kind, a, machine, i, a.classes[i]);
        if (s && *s == k) k_moves.push_back(i);
      }
      OrderingVerdict v = require_comparable(
          a, k_moves, "k-slot ordering (slot " + std::to_string(k) + ")");
      if (!v) return v;
    }
    return {};
  }

  // Column machine: Get moves linearly ordered, Put moves linearly ordered.
  OrderingVerdict v = require_comparable(a, a.inputs, "Get ordering");
  if (!v) return v;
  return require_comparable(a, a.outputs, "Put ordering");
}

// --- inequivalence metrics ----------------------------------------------

namespace {

// Static term evaluation over Me and static symbols; nullopt when the
// term depends on dynamic state.
std::optional<Value> static_eval(const TermPtr& t, const State& initial,
                                 const Value& me) {
  switch (t->kind) {
    case Term::Kind::Literal:
      return t->literal;
    case Term::Kind::Variable:
      return std::nullopt;
    case Term::Kind::Apply:
      break;
  }
  if (t->name == "Me") return me;
  if (Vocabulary::is_builtin(t->name)) {
    std::vector<Value> xs;
    for (const TermPtr& arg : t->args) {
      auto v = static_eval(arg, initial, me);
      if (!v) return std::nullopt;
      xs.push_back(*v);
    }
    if (t->name == "=") return Value::boolean(xs[0] == xs[1]);
    if (t->name == "!=") return Value::boolean(!(xs[0] == xs[1]));
    if (t->name == "+") return Value::integer(xs[0].as_int() + xs[1].as_int());
    if (t->name == "-") return Value::integer(xs[0].as_int() - xs[1].as_int());
    if (t->name == "mod") {
      long long b = xs[1].as_int();
      long long m = xs[0].as_int() % b;
      return Value::integer(m < 0 ? m + (b < 0 ? -b : b) : m);
    }
    if (t->name == "and") return Value::boolean(xs[0].truth() && xs[1].truth());
    if (t->name == "or") return Value::boolean(xs[0].truth() || xs[1].truth());
    if (t->name == "not") return Value::boolean(!xs[0].truth());
    return std::nullopt;
  }
  const FunctionSymbol* f = initial.vocab().find(t->name);
  if (!f || !f->is_static) return std::nullopt;
  std::vector<Value> xs;
  for (const TermPtr& arg : t->args) {
    auto v = static_eval(arg, initial, me);
    if (!v) return std::nullopt;
    xs.push_back(*v);
  }
  return initial.read(Location{t->name, xs});
}

struct LocationSet {
  std::set<Location> locs;

  void add(const DistributedProgram& program, const State& initial,
           const std::string& symbol, const std::vector<TermPtr>& args,
           const Value& me) {
    const FunctionSymbol* f = program.vocab->find(symbol);
    if (!f || f->is_static) return;
    std::vector<Value> ground;
    bool all_ground = true;
    for (const TermPtr& arg : args) {
      auto v = static_eval(arg, initial, me);
      if (!v) {
        all_ground = false;
        break;
      }
      ground.push_back(*v);
    }
    if (all_ground) {
      locs.insert(Location{symbol, std::move(ground)});
      return;
    }
    // Unresolvable argument: every slot of the ring domain.
    if (f->arity == 1 && initial.has_universe("ZN")) {
      for (const Value& i : initial.universe("ZN"))
        locs.insert(Location{symbol, {i}});
      return;
    }
    locs.insert(Location{symbol, {}});
  }
};

void collect_term_locations(const TermPtr& t, const DistributedProgram& prog,
                            const State& initial, const Value& me,
                            LocationSet& out) {
  if (!t || t->kind != Term::Kind::Apply) return;
  if (t->name == "and" || t->name == "or") {
    auto left = static_eval(t->args[0], initial, me);
    if (left && left->is_boolean()) {
      bool decides = (t->name == "and") ? !left->truth() : left->truth();
      if (decides) return;  // short-circuit: the other side is never read
      collect_term_locations(t->args[1], prog, initial, me, out);
      return;
    }
    collect_term_locations(t->args[0], prog, initial, me, out);
    collect_term_locations(t->args[1], prog, initial, me, out);
    return;
  }
  for (const TermPtr& arg : t->args)
    collect_term_locations(arg, prog, initial, me, out);
  if (!Vocabulary::is_builtin(t->name) && t->name != "Me")
    out.add(prog, initial, t->name, t->args, me);
}

void collect_rule_locations(const RulePtr& r, const DistributedProgram& prog,
                            const State& initial, const Value& me,
                            LocationSet& out) {
  if (!r) return;
  switch (r->kind) {
    case Rule::Kind::Update:
      for (const TermPtr& arg : r->args)
        collect_term_locations(arg, prog, initial, me, out);
      collect_term_locations(r->rhs, prog, initial, me, out);
      out.add(prog, initial, r->symbol, r->args, me);
      return;
    case Rule::Kind::Block:
      for (const RulePtr& item : r->items)
        collect_rule_locations(item, prog, initial, me, out);
      return;
    case Rule::Kind::If: {
      auto guard = static_eval(r->guard, initial, me);
      collect_term_locations(r->guard, prog, initial, me, out);
      if (guard && guard->is_boolean()) {
        collect_rule_locations(guard->truth() ? r->body : r->else_body, prog,
                               initial, me, out);
      } else {
        collect_rule_locations(r->body, prog, initial, me, out);
        collect_rule_locations(r->else_body, prog, initial, me, out);
      }
      return;
    }
    case Rule::Kind::Var:
    case Rule::Kind::Choose:
      collect_rule_locations(r->body, prog, initial, me, out);
      return;
  }
}

}  // namespace

MetricsReport inequivalence_metrics(const Machine& machine,
                                    const RingParams& params,
                                    const explorer::Bounds& bounds) {
  if (read_int(machine.initial, "N") != params.n)
    throw ContractError("metrics parameters disagree with the machine");
  MetricsReport report;

  // Locations of the communication interface do not count as internal.
  std::set<std::string> interface = {"InputDatum",   "OutputDatum",
                                     "InSendBit",    "InReceiveBit",
                                     "OutSendBit",   "OutReceiveBit"};

  std::map<Location, int> touching;
  for (const Value& agent : agents_of(machine.initial)) {
    const EAModule* module = machine.program.module_named(
        module_name_of(machine.initial, agent));
    LocationSet set;
    for (const auto& [name, rule] : module->rules)
      collect_rule_locations(rule, machine.program, machine.initial, agent,
                             set);
    for (const Location& loc : set.locs) {
      if (interface.count(loc.symbol)) continue;
      touching[loc] += 1;
    }
  }
  for (const auto& [loc, count] : touching) {
    if (count >= 2) {
      report.shared_location_names.push_back(loc.text());
    }
  }
  report.shared_internal_locations = report.shared_location_names.size();

  // Dynamic observables under the identity congruence.
  RingKind kind = detect_kind(machine.program);
  explorer::EnvStrategy env = machine.program.has_external_symbols()
                                  ? ring_free_env()
                                  : explorer::EnvStrategy::none();
  explorer::TransitionGraph graph = explorer::explore(
      machine.program, machine.initial, congruence_identity(), env, bounds);
  report.closure_complete = graph.complete;
  int max_depth = 0;
  for (const auto& node : graph.nodes) max_depth = std::max(max_depth, node.depth);
  report.max_counter_by_depth.assign(max_depth + 1, 0);
  report.configs_by_depth.assign(max_depth + 1, 0);
  for (const auto& node : graph.nodes) {
    long long magnitude = 0;
    if (kind == RingKind::Cea) {
      for (const Value& agent : agents_of(machine.initial)) {
        magnitude = std::max(magnitude, read_int1(node.representative, "pp",
                                                  agent.as_int()));
        magnitude = std::max(magnitude, read_int1(node.representative, "gg",
                                                  agent.as_int()));
      }
    } else {
      magnitude = std::max(std::abs(read_int(node.representative, "p")),
                           std::abs(read_int(node.representative, "g")));
    }
    report.max_counter_by_depth[node.depth] =
        std::max(report.max_counter_by_depth[node.depth], magnitude);
    report.configs_by_depth[node.depth] += 1;
  }
  for (std::size_t d = 1; d < report.max_counter_by_depth.size(); ++d) {
    report.max_counter_by_depth[d] = std::max(
        report.max_counter_by_depth[d], report.max_counter_by_depth[d - 1]);
    report.configs_by_depth[d] += report.configs_by_depth[d - 1];
  }
  return report;
}

// --- strict comparison ----------------------------------------------------

StrictReport strict_comparison(const RingParams& params,
                               const explorer::Bounds& bounds) {
  StrictReport report;
  Machine cea = build_cea(params);
  Machine rea = build_rea(params);
  explorer::EnvStrategy env = ring_free_env();

  explorer::Bounds first = bounds;
  explorer::TransitionGraph g1 = explorer::explore(
      cea.program, cea.initial, congruence_identity(), env, first);
  explorer::Bounds second = bounds;
  second.max_depth = bounds.max_depth + 16;
  explorer::TransitionGraph g2 = explorer::explore(
      cea.program, cea.initial, congruence_identity(), env, second);
  report.cea_count_first = g1.nodes.size();
  report.cea_count_second = g2.nodes.size();
  report.cea_complete = g1.complete && g2.complete;

  // The row machine's identity quotient keeps growing with depth; explore
  // until it exceeds the column machine's finite count.
  explorer::Bounds rb = bounds;
  rb.max_depth = 4;
  while (true) {
    explorer::TransitionGraph gr = explorer::explore(
        rea.program, rea.initial, congruence_identity(), env, rb);
    report.rea_count = gr.nodes.size();
    report.rea_depth = rb.max_depth;
    if (gr.nodes.size() > report.cea_count_second) {
      report.rea_exceeds = true;
      break;
    }
    if (gr.complete || rb.max_depth > 512 ||
        gr.nodes.size() >= bounds.max_nodes) {
      break;  // cannot grow further; strict inequivalence not witnessed
    }
    rb.max_depth *= 2;
  }
  return report;
}

// --- lemma suite ----------------------------------------------------------

namespace {

bool member(const std::vector<Value>& universe, const Value& v) {
  return std::find(universe.begin(), universe.end(), v) != universe.end();
}

LemmaResult run_invariant(const char* name, const Machine& machine,
                          const Congruence& cong,
                          const explorer::EnvStrategy& env,
                          const explorer::Bounds& bounds,
                          const std::function<bool(const State&)>& pred) {
  explorer::InvariantResult r = explorer::check_invariant(
      machine.program, machine.initial, cong, env, bounds, pred);
  LemmaResult out{name, r.holds, ""};
  if (!r.holds) {
    out.detail = "violated after " + std::to_string(r.path.size()) + " steps";
  } else if (!r.complete) {
    out.detail = "holds (bounded)";
  } else {
    out.detail = "holds (exhaustive)";
  }
  return out;
}

bool typing_r1(const State& s) {
  const auto& data = s.universe("Data");
  const auto& modes = s.universe("Modes");
  const auto& zn = s.universe("ZN");
  const auto& snr = s.universe("SendersAndReceivers");
  for (const auto& [loc, v] : s.entries_of("Mode")) {
    if (!member(snr, loc.args[0]) || !member(modes, v)) return false;
  }
  for (const Value& agent : snr) {
    if (s.read(Location{"Mode", {agent}}).is_undef()) return false;
  }
  if (!s.read(Location{"p", {}}).is_integer()) return false;
  if (!s.read(Location{"g", {}}).is_integer()) return false;
  for (const auto& [loc, v] : s.entries_of("Buffer")) {
    if (!member(zn, loc.args[0]) || !member(data, v)) return false;
  }
  return member(data, s.read(Location{"InputDatum", {}})) &&
         member(data, s.read(Location{"OutputDatum", {}}));
}

bool p_minus_g_in_range(const State& s, int n) {
  long long d = read_int(s, "p") - read_int(s, "g");
  return 0 <= d && d <= n;
}

bool turn_shape(const State& s, const char* counter, int n) {
  int k;
  try {
    k = turn_holder(s, counter);
  } catch (const Error&) {
    return false;
  }
  long long at_k = read_int1(s, counter, k);
  for (int i = 0; i < k; ++i) {
    if (read_int1(s, counter, i) != 1 - at_k) return false;
  }
  for (int i = k; i < n; ++i) {
    if (read_int1(s, counter, i) != at_k) return false;
  }
  return true;
}

bool mode_redundancy(const State& s, int n) {
  for (int k = 0; k < n; ++k) {
    Value mode = s.read(Location{"Mode", {Value::integer(k)}});
    bool same = read_int1(s, "pp", k) == read_int1(s, "gg", k);
    if (same && !(mode == Value::mode("Get"))) return false;
    if (!same && !(mode == Value::mode("Put"))) return false;
  }
  return true;
}

LemmaResult runs_ordering_and_fifo(const char* name, const Machine& machine,
                                   const explorer::EnvStrategy& env,
                                   int depth, std::size_t max_runs,
                                   bool check_fifo) {
  std::vector<Run> runs = explorer::enumerate_runs(
      machine.program, machine.initial, env, depth, max_runs);
  for (const Run& run : runs) {
    if (check_fifo) {
      FifoVerdict f = fifo_check(machine, run);
      if (!f) return {name, false, f.detail};
    } else {
      OrderingVerdict o = ordering_checks(machine, run);
      if (!o) return {name, false, o.lemma + ": " + o.detail};
    }
  }
  return {name, true,
          "holds on " + std::to_string(runs.size()) + " runs (depth " +
              std::to_string(depth) + ")"};
}

}  // namespace

std::vector<LemmaResult> lemma_suite(RingKind kind, const RingParams& params,
                                     const explorer::Bounds& bounds) {
  std::vector<LemmaResult> out;
  int n = params.n;

  switch (kind) {
    case RingKind::R1: {
      Machine m = build_r1(params);
      auto env = explorer::EnvStrategy::none();
      explorer::Bounds rb = bounds;
      rb.max_depth = std::min(bounds.max_depth, 14);
      out.push_back(run_invariant("typing", m, congruence_identity(), env, rb,
                                  typing_r1));
      out.push_back(run_invariant(
          "p-g-bounds-and-modes", m, congruence_identity(), env, rb,
          [n](const State& s) {
            if (!p_minus_g_in_range(s, n)) return false;
            long long d = read_int(s, "p") - read_int(s, "g");
            Value back = s.read(Location{"Mode", {Value::agent("back_end")}});
            Value front =
                s.read(Location{"Mode", {Value::agent("front_end")}});
            if (d == 0 && !(back == Value::mode("Wait"))) return false;
            if (d == n && !(front == Value::mode("Wait"))) return false;
            return true;
          }));
      out.push_back(runs_ordering_and_fifo("ordering", m, env, 7, 4000,
                                           false));
      out.push_back(runs_ordering_and_fifo("fifo", m, env, 7, 4000, true));
      return out;
    }
    case RingKind::R2: {
      Machine m = build_r2(params);
      auto env = explorer::EnvStrategy::none();
      explorer::Bounds rb = bounds;
      rb.max_depth = std::min(bounds.max_depth, 14);
      out.push_back(run_invariant("p-g-bounds", m, congruence_identity(), env,
                                  rb, [n](const State& s) {
                                    return p_minus_g_in_range(s, n);
                                  }));
      out.push_back(runs_ordering_and_fifo("k-slot-ordering", m, env, 7, 4000,
                                           false));
      out.push_back(runs_ordering_and_fifo("fifo", m, env, 7, 4000, true));
      return out;
    }
    case RingKind::Rea: {
      Machine m = build_rea(params);
      auto env = ring_free_env();
      Congruence cong = congruence_R(n);
      out.push_back(run_invariant("p-g-bounds", m, cong, env, bounds,
                                  [n](const State& s) {
                                    return p_minus_g_in_range(s, n);
                                  }));
      RingParams captured = params;
      out.push_back(run_invariant(
          "in-out-connection", m, cong, env, bounds,
          [captured, n](const State& s) {
            State c = h_map(s, captured);
            return in_map(c) == read_int(s, "p") % n &&
                   out_map(c) == read_int(s, "g") % n;
          }));
      out.push_back(run_invariant(
          "h-well-defined", m, cong, env, bounds,
          [captured, n](const State& s) {
            State shifted = shift_pg(s, 2 * n);
            if (!(h_map(s, captured) == h_map(shifted, captured)))
              return false;
            // the division parities behind h agree on the class
            return (read_int(s, "p") / n) % 2 ==
                       (read_int(shifted, "p") / n) % 2 &&
                   (read_int(s, "g") / n) % 2 ==
                       (read_int(shifted, "g") / n) % 2;
          }));
      out.push_back(runs_ordering_and_fifo("k-slot-ordering", m, env, 6, 4000,
                                           false));
      SweepReport sweep = fifo_sweep(m, env, cong, 12);
      out.push_back({"fifo", sweep.ok,
                     sweep.ok ? "holds on all runs to depth 12" : sweep.detail});
      return out;
    }
    case RingKind::Cea: {
      Machine m = build_cea(params);
      auto env = ring_free_env();
      Congruence cong = congruence_identity();
      out.push_back(run_invariant("in-out-uniqueness-and-shape", m, cong, env,
                                  bounds, [n](const State& s) {
                                    return turn_shape(s, "pp", n) &&
                                           turn_shape(s, "gg", n);
                                  }));
      out.push_back(run_invariant("mode-redundancy", m, cong, env, bounds,
                                  [n](const State& s) {
                                    return mode_redundancy(s, n);
                                  }));
      out.push_back(runs_ordering_and_fifo("get-put-ordering", m, env, 6, 4000,
                                           false));
      SweepReport sweep = fifo_sweep(m, env, cong, 12);
      out.push_back({"fifo", sweep.ok,
                     sweep.ok ? "holds on all runs to depth 12" : sweep.detail});
      return out;
    }
  }
  return out;
}

}  // namespace ea::ringbuf
