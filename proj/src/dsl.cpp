#include "ea/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace ea::dsl {

namespace {

enum class Tok {
  End,
  Name,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Assign,  // :=
  Eq,      // =
  Neq,     // !=
  Plus,
  Minus,
  Slash,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long number = 0;
  int line = 1;
  int col = 1;
};

const char* kKeywords[] = {
    "universe", "function", "abbrev", "module", "rule",   "block",
    "endblock", "if",       "then",   "else",   "endif",  "var",
    "ranges",   "over",     "endvar", "choose", "in",     "endchoose",
    "and",      "or",       "not",    "mod",    "true",   "false",
    "undef",    "external", "static", "predicate", "agent", "runs",
    "datum",    "mode",     "opaque"};

bool is_keyword(const std::string& s) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), s) !=
         std::end(kKeywords);
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {
    advance();
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw DslError(file_, tok_.line, tok_.col, message);
  }
  const std::string& file() const { return file_; }

 private:
  void advance() {
    skip_space();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::End;
      tok_.text = "end of input";
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        name += text_[pos_];
        bump();
      }
      tok_.kind = Tok::Name;
      tok_.text = std::move(name);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      std::string raw;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        raw += text_[pos_];
        v = v * 10 + (text_[pos_] - '0');
        bump();
      }
      tok_.kind = Tok::Int;
      tok_.number = v;
      tok_.text = raw;
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two(':', '=')) {
      bump();
      bump();
      tok_.kind = Tok::Assign;
      tok_.text = ":=";
      return;
    }
    if (two('!', '=')) {
      bump();
      bump();
      tok_.kind = Tok::Neq;
      tok_.text = "!=";
      return;
    }
    bump();
    switch (c) {
      case '(': tok_.kind = Tok::LParen; break;
      case ')': tok_.kind = Tok::RParen; break;
      case '{': tok_.kind = Tok::LBrace; break;
      case '}': tok_.kind = Tok::RBrace; break;
      case ',': tok_.kind = Tok::Comma; break;
      case ':': tok_.kind = Tok::Colon; break;
      case '=': tok_.kind = Tok::Eq; break;
      case '+': tok_.kind = Tok::Plus; break;
      case '-': tok_.kind = Tok::Minus; break;
      case '/': tok_.kind = Tok::Slash; break;
      default:
        throw DslError(file_, tok_.line, tok_.col,
                       std::string("unexpected character '") + c + "'");
    }
    tok_.text = std::string(1, c);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

struct Abbrev {
  std::vector<std::string> params;
  TermPtr body;
};

// Term-for-variable substitution used to expand abbreviations.
TermPtr subst_term(const TermPtr& t, const std::string& var,
                   const TermPtr& repl) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Literal:
      return t;
    case Term::Kind::Variable:
      return t->name == var ? repl : t;
    case Term::Kind::Apply: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const TermPtr& a : t->args) args.push_back(subst_term(a, var, repl));
      return Term::app(t->name, std::move(args));
    }
  }
  return t;
}

class ProgramParser {
 public:
  ProgramParser(const std::string& text, const std::string& file)
      : lex_(text, file) {}

  DistributedProgram parse() {
    auto vocab = std::make_shared<Vocabulary>();
    vocab_ = vocab.get();
    add_framework_symbols();
    while (lex_.peek().kind != Tok::End) {
      const Token& t = lex_.peek();
      if (t.kind != Tok::Name) lex_.fail("expected a declaration or module");
      if (t.text == "universe") {
        parse_universe_decl();
      } else if (t.text == "function") {
        parse_function_decl();
      } else if (t.text == "abbrev") {
        parse_abbrev_decl();
      } else if (t.text == "module") {
        parse_module();
      } else {
        lex_.fail("expected 'universe', 'function', 'abbrev' or 'module', got '" +
                  t.text + "'");
      }
    }
    DistributedProgram program;
    program.vocab = vocab;
    program.modules = std::move(modules_);
    program.validate();
    return program;
  }

 private:
  void add_framework_symbols() {
    vocab_->add({"Me", 0, false, false, true});
    vocab_->add({"Mod", 1, false, false, true});
    vocab_->add({"Agents", 1, true, false, true});
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind)
      lex_.fail("expected " + what + ", got '" + lex_.peek().text + "'");
    return lex_.take();
  }

  std::string expect_name(const std::string& what) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Name || is_keyword(t.text))
      lex_.fail("expected " + what + ", got '" + t.text + "'");
    return lex_.take().text;
  }

  bool at_keyword(const std::string& kw) const {
    return lex_.peek().kind == Tok::Name && lex_.peek().text == kw;
  }

  void eat_keyword(const std::string& kw) {
    if (!at_keyword(kw))
      lex_.fail("expected '" + kw + "', got '" + lex_.peek().text + "'");
    lex_.take();
  }

  void parse_universe_decl() {
    lex_.take();
    std::string name = expect_name("a universe name");
    universes_.insert(name);
    if (lex_.peek().kind == Tok::Colon) {
      lex_.take();
      expect_name("an element kind");  // recorded only in state files
    }
    if (lex_.peek().kind == Tok::Eq) {
      lex_.take();
      expect(Tok::LBrace, "'{'");
      while (lex_.peek().kind != Tok::RBrace) {
        if (lex_.peek().kind == Tok::Int) {
          lex_.take();
        } else {
          expect_name("an element name");
        }
        if (lex_.peek().kind == Tok::Comma) lex_.take();
      }
      lex_.take();
    }
  }

  void parse_function_decl() {
    lex_.take();
    FunctionSymbol f;
    f.name = expect_name("a function name");
    expect(Tok::Slash, "'/'");
    f.arity = static_cast<int>(expect(Tok::Int, "an arity").number);
    while (true) {
      if (at_keyword("external")) {
        lex_.take();
        f.is_external = true;
      } else if (at_keyword("static")) {
        lex_.take();
        f.is_static = true;
      } else if (at_keyword("predicate")) {
        lex_.take();
        f.is_predicate = true;
      } else {
        break;
      }
    }
    declare(f);
  }

  void parse_abbrev_decl() {
    lex_.take();
    std::string name = expect_name("an abbreviation name");
    Abbrev ab;
    expect(Tok::LParen, "'('");
    while (lex_.peek().kind != Tok::RParen) {
      ab.params.push_back(expect_name("a parameter name"));
      if (lex_.peek().kind == Tok::Comma) lex_.take();
    }
    lex_.take();
    expect(Tok::Eq, "'='");
    std::vector<std::string> scope = ab.params;
    ab.body = parse_term(scope);
    abbrevs_[name] = std::move(ab);
  }

  void parse_module() {
    lex_.take();
    EAModule m;
    m.name = expect_name("a module name");
    declare({m.name, 0, false, false, true});
    std::vector<std::string> scope;
    while (true) {
      if (at_keyword("rule")) {
        lex_.take();
        std::string rule_name = expect_name("a rule name");
        m.rules.emplace_back(rule_name, parse_rule(scope));
      } else if (starts_rule()) {
        m.rules.emplace_back("", parse_rule(scope));
      } else {
        break;
      }
    }
    if (m.rules.empty()) lex_.fail("module '" + m.name + "' has no rules");
    modules_.push_back(std::move(m));
  }

  bool starts_rule() const {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Name) return false;
    if (t.text == "block" || t.text == "if" || t.text == "var" ||
        t.text == "choose")
      return true;
    return !is_keyword(t.text);
  }

  // A sequence of rules up to a closing keyword; a single rule stays bare,
  // several become a block.
  RulePtr parse_rule_list(std::vector<std::string>& scope) {
    std::vector<RulePtr> items;
    while (starts_rule()) {
      items.push_back(parse_rule(scope));
      if (lex_.peek().kind == Tok::Comma) lex_.take();
    }
    if (items.empty()) lex_.fail("expected at least one rule");
    if (items.size() == 1) return items.front();
    return Rule::block(std::move(items));
  }

  RulePtr parse_rule(std::vector<std::string>& scope) {
    if (at_keyword("block")) {
      lex_.take();
      std::vector<RulePtr> items;
      while (starts_rule()) {
        items.push_back(parse_rule(scope));
        if (lex_.peek().kind == Tok::Comma) lex_.take();
      }
      eat_keyword("endblock");
      return Rule::block(std::move(items));
    }
    if (at_keyword("if")) {
      lex_.take();
      TermPtr guard = parse_term(scope);
      eat_keyword("then");
      RulePtr then_rule = parse_rule_list(scope);
      RulePtr else_rule;
      if (at_keyword("else")) {
        lex_.take();
        else_rule = parse_rule_list(scope);
      }
      eat_keyword("endif");
      return Rule::cond(std::move(guard), std::move(then_rule),
                        std::move(else_rule));
    }
    if (at_keyword("var")) {
      lex_.take();
      std::string var = expect_name("a variable name");
      eat_keyword("ranges");
      eat_keyword("over");
      std::string universe = expect_name("a universe name");
      scope.push_back(var);
      RulePtr body = parse_rule_list(scope);
      scope.pop_back();
      eat_keyword("endvar");
      return Rule::var_rule(var, universe, std::move(body));
    }
    if (at_keyword("choose")) {
      lex_.take();
      std::string var = expect_name("a variable name");
      eat_keyword("in");
      std::string universe = expect_name("a universe name");
      scope.push_back(var);
      RulePtr body = parse_rule_list(scope);
      scope.pop_back();
      eat_keyword("endchoose");
      return Rule::choose_rule(var, universe, std::move(body));
    }
    // Update instruction.
    std::string symbol = expect_name("a rule");
    std::vector<TermPtr> args;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      while (lex_.peek().kind != Tok::RParen) {
        args.push_back(parse_term(scope));
        if (lex_.peek().kind == Tok::Comma) lex_.take();
      }
      lex_.take();
    }
    expect(Tok::Assign, "':='");
    TermPtr rhs = parse_term(scope);
    use_symbol(symbol, static_cast<int>(args.size()));
    return Rule::update(std::move(symbol), std::move(args), std::move(rhs));
  }

  // Precedence, loosest first: or < and < (= !=) < (+ -) < mod < not.
  TermPtr parse_term(std::vector<std::string>& scope) {
    return parse_or(scope);
  }

  TermPtr parse_or(std::vector<std::string>& scope) {
    TermPtr t = parse_and(scope);
    while (at_keyword("or")) {
      lex_.take();
      t = Term::app("or", {t, parse_and(scope)});
    }
    return t;
  }

  TermPtr parse_and(std::vector<std::string>& scope) {
    TermPtr t = parse_cmp(scope);
    while (at_keyword("and")) {
      lex_.take();
      t = Term::app("and", {t, parse_cmp(scope)});
    }
    return t;
  }

  TermPtr parse_cmp(std::vector<std::string>& scope) {
    TermPtr t = parse_add(scope);
    if (lex_.peek().kind == Tok::Eq || lex_.peek().kind == Tok::Neq) {
      std::string op = lex_.take().kind == Tok::Eq ? "=" : "!=";
      t = Term::app(op, {t, parse_add(scope)});
      if (lex_.peek().kind == Tok::Eq || lex_.peek().kind == Tok::Neq)
        lex_.fail("chained comparisons need parentheses");
    }
    return t;
  }

  TermPtr parse_add(std::vector<std::string>& scope) {
    TermPtr t = parse_mod(scope);
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      std::string op = lex_.take().kind == Tok::Plus ? "+" : "-";
      t = Term::app(op, {t, parse_mod(scope)});
    }
    return t;
  }

  TermPtr parse_mod(std::vector<std::string>& scope) {
    TermPtr t = parse_unary(scope);
    while (at_keyword("mod")) {
      lex_.take();
      t = Term::app("mod", {t, parse_unary(scope)});
    }
    return t;
  }

  TermPtr parse_unary(std::vector<std::string>& scope) {
    if (at_keyword("not")) {
      lex_.take();
      return Term::app("not", {parse_unary(scope)});
    }
    return parse_atom(scope);
  }

  TermPtr parse_atom(std::vector<std::string>& scope) {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) return Term::lit(Value::integer(lex_.take().number));
    if (t.kind == Tok::LParen) {
      lex_.take();
      TermPtr inner = parse_term(scope);
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind != Tok::Name) lex_.fail("expected a term, got '" + t.text + "'");
    if (t.text == "true") {
      lex_.take();
      return Term::lit(Value::boolean(true));
    }
    if (t.text == "false") {
      lex_.take();
      return Term::lit(Value::boolean(false));
    }
    if (t.text == "undef") {
      lex_.take();
      return Term::lit(Value::undef());
    }
    if (is_keyword(t.text))
      lex_.fail("expected a term, got keyword '" + t.text + "'");
    std::string name = lex_.take().text;
    if (std::find(scope.begin(), scope.end(), name) != scope.end()) {
      return Term::var(name);
    }
    std::vector<TermPtr> args;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      while (lex_.peek().kind != Tok::RParen) {
        args.push_back(parse_term(scope));
        if (lex_.peek().kind == Tok::Comma) lex_.take();
      }
      lex_.take();
    }
    auto ab = abbrevs_.find(name);
    if (ab != abbrevs_.end()) {
      if (args.size() != ab->second.params.size())
        lex_.fail("abbreviation '" + name + "' expects " +
                  std::to_string(ab->second.params.size()) + " arguments");
      TermPtr body = ab->second.body;
      for (std::size_t i = 0; i < args.size(); ++i)
        body = subst_term(body, ab->second.params[i], args[i]);
      return body;
    }
    use_symbol(name, static_cast<int>(args.size()));
    return Term::app(std::move(name), std::move(args));
  }

  void declare(FunctionSymbol f) {
    try {
      vocab_->add(std::move(f));
    } catch (const StructuralError& e) {
      lex_.fail(e.what());
    }
  }

  // Symbols may be introduced by use; arity inconsistencies are an error.
  void use_symbol(const std::string& name, int arity) {
    if (Vocabulary::is_builtin(name)) {
      // Only Bool can reach here as a plain name; operators are tokens.
      if (arity != 1)
        lex_.fail("builtin '" + name + "' used with wrong arity");
      return;
    }
    const FunctionSymbol* f = vocab_->find(name);
    if (!f) {
      declare({name, arity, false, false, false});
      return;
    }
    if (f->arity != arity)
      lex_.fail("symbol '" + name + "' used with " + std::to_string(arity) +
                " arguments but declared with arity " +
                std::to_string(f->arity));
  }

  Lexer lex_;
  Vocabulary* vocab_ = nullptr;
  std::vector<EAModule> modules_;
  std::map<std::string, Abbrev> abbrevs_;
  std::set<std::string> universes_;
};

class StateParser {
 public:
  StateParser(const std::string& text, const DistributedProgram& program,
              const std::string& file)
      : lex_(text, file), program_(program) {}

  GlobalState parse() {
    GlobalState s(program_.vocab);
    std::vector<Value> agents;
    while (lex_.peek().kind != Tok::End) {
      if (at_keyword("universe")) {
        parse_universe(s);
      } else if (at_keyword("agent")) {
        parse_agent(s, agents);
      } else {
        parse_binding(s);
      }
    }
    s.declare_universe("Agents", agents);
    return s;
  }

 private:
  bool at_keyword(const std::string& kw) const {
    return lex_.peek().kind == Tok::Name && lex_.peek().text == kw;
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind)
      lex_.fail("expected " + what + ", got '" + lex_.peek().text + "'");
    return lex_.take();
  }

  std::string expect_name(const std::string& what) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Name || is_keyword(t.text))
      lex_.fail("expected " + what + ", got '" + t.text + "'");
    return lex_.take().text;
  }

  void parse_universe(GlobalState& s) {
    lex_.take();
    std::string name = expect_name("a universe name");
    Tag kind = Tag::Datum;
    if (lex_.peek().kind == Tok::Colon) {
      lex_.take();
      const Token& k = lex_.peek();
      if (k.kind != Tok::Name) lex_.fail("expected an element kind");
      if (k.text == "datum") kind = Tag::Datum;
      else if (k.text == "mode") kind = Tag::Mode;
      else if (k.text == "opaque") kind = Tag::Opaque;
      else lex_.fail("unknown element kind '" + k.text + "'");
      lex_.take();
    }
    expect(Tok::Eq, "'='");
    expect(Tok::LBrace, "'{'");
    std::vector<Value> elems;
    while (lex_.peek().kind != Tok::RBrace) {
      if (lex_.peek().kind == Tok::Int) {
        elems.push_back(Value::integer(lex_.take().number));
      } else {
        std::string en = expect_name("an element name");
        auto it = named_.find(en);
        if (it != named_.end()) {
          elems.push_back(it->second);
        } else {
          Value v = kind == Tag::Mode
                        ? Value::mode(en)
                        : kind == Tag::Opaque ? Value::opaque(en)
                                              : Value::datum(en);
          named_.emplace(en, v);
          elems.push_back(v);
        }
      }
      if (lex_.peek().kind == Tok::Comma) lex_.take();
    }
    lex_.take();
    s.declare_universe(name, std::move(elems));
  }

  void parse_agent(GlobalState& s, std::vector<Value>& agents) {
    lex_.take();
    Value agent;
    if (lex_.peek().kind == Tok::Int) {
      agent = Value::integer(lex_.take().number);
    } else {
      std::string name = expect_name("an agent name");
      agent = Value::agent(name);
      named_.emplace(name, agent);
    }
    if (!at_keyword("runs")) lex_.fail("expected 'runs'");
    lex_.take();
    std::string module = expect_name("a module name");
    if (!program_.module_named(module))
      lex_.fail("unknown module '" + module + "'");
    agents.push_back(agent);
    s.write(Location{"Mod", {agent}}, Value::opaque(module));
  }

  void parse_binding(GlobalState& s) {
    std::string symbol = expect_name("a symbol name");
    const FunctionSymbol* f = program_.vocab->find(symbol);
    if (!f) lex_.fail("symbol '" + symbol + "' is not in the vocabulary");
    Location loc{symbol, {}};
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      while (lex_.peek().kind != Tok::RParen) {
        loc.args.push_back(parse_value());
        if (lex_.peek().kind == Tok::Comma) lex_.take();
      }
      lex_.take();
    }
    if (static_cast<int>(loc.args.size()) != f->arity)
      lex_.fail("symbol '" + symbol + "' has arity " +
                std::to_string(f->arity));
    expect(Tok::Eq, "'='");
    s.write(loc, parse_value());
  }

  Value parse_value() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) return Value::integer(lex_.take().number);
    if (t.kind != Tok::Name) lex_.fail("expected a value, got '" + t.text + "'");
    if (t.text == "true") {
      lex_.take();
      return Value::boolean(true);
    }
    if (t.text == "false") {
      lex_.take();
      return Value::boolean(false);
    }
    if (t.text == "undef") {
      lex_.take();
      return Value::undef();
    }
    std::string name = expect_name("a value");
    auto it = named_.find(name);
    if (it != named_.end()) return it->second;
    if (program_.module_named(name)) return Value::opaque(name);
    lex_.fail("value '" + name + "' is outside every declared universe");
  }

  Lexer lex_;
  const DistributedProgram& program_;
  std::map<std::string, Value> named_;
};

// --- rendering ---------------------------------------------------------

int prec_of(const std::string& op) {
  if (op == "or") return 1;
  if (op == "and") return 2;
  if (op == "=" || op == "!=") return 3;
  if (op == "+" || op == "-") return 4;
  if (op == "mod") return 5;
  if (op == "not") return 6;
  return 7;
}

bool is_operator(const std::string& op) { return prec_of(op) < 7; }

void render_term(const TermPtr& t, int min_prec, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Literal:
      out += t->literal.text();
      return;
    case Term::Kind::Variable:
      out += t->name;
      return;
    case Term::Kind::Apply:
      break;
  }
  if (is_operator(t->name) && Vocabulary::is_builtin(t->name)) {
    int p = prec_of(t->name);
    bool parens = p < min_prec;
    if (parens) out += "(";
    if (t->name == "not") {
      out += "not ";
      render_term(t->args[0], p, out);
    } else {
      render_term(t->args[0], p, out);
      out += " " + t->name + " ";
      render_term(t->args[1], p + 1, out);
    }
    if (parens) out += ")";
    return;
  }
  out += t->name;
  if (!t->args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ", ";
      render_term(t->args[i], 0, out);
    }
    out += ")";
  }
}

std::string term_text(const TermPtr& t) {
  std::string out;
  render_term(t, 0, out);
  return out;
}

void render_rule(const RulePtr& r, int indent, std::string& out);

void render_rule_list(const RulePtr& r, int indent, std::string& out) {
  if (r && r->kind == Rule::Kind::Block) {
    for (const RulePtr& item : r->items) render_rule(item, indent, out);
  } else if (r) {
    render_rule(r, indent, out);
  }
}

void render_rule(const RulePtr& r, int indent, std::string& out) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (r->kind) {
    case Rule::Kind::Update: {
      out += pad + r->symbol;
      if (!r->args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < r->args.size(); ++i) {
          if (i) out += ", ";
          out += term_text(r->args[i]);
        }
        out += ")";
      }
      out += " := " + term_text(r->rhs) + "\n";
      return;
    }
    case Rule::Kind::Block: {
      out += pad + "block\n";
      for (const RulePtr& item : r->items) render_rule(item, indent + 1, out);
      out += pad + "endblock\n";
      return;
    }
    case Rule::Kind::If: {
      out += pad + "if " + term_text(r->guard) + " then\n";
      render_rule_list(r->body, indent + 1, out);
      if (r->else_body) {
        out += pad + "else\n";
        render_rule_list(r->else_body, indent + 1, out);
      }
      out += pad + "endif\n";
      return;
    }
    case Rule::Kind::Var: {
      out += pad + "var " + r->var + " ranges over " + r->universe + "\n";
      render_rule_list(r->body, indent + 1, out);
      out += pad + "endvar\n";
      return;
    }
    case Rule::Kind::Choose: {
      out += pad + "choose " + r->var + " in " + r->universe + "\n";
      render_rule_list(r->body, indent + 1, out);
      out += pad + "endchoose\n";
      return;
    }
  }
}

}  // namespace

DistributedProgram parse_program(const std::string& text,
                                 const std::string& filename) {
  return ProgramParser(text, filename).parse();
}

GlobalState parse_state(const std::string& text,
                        const DistributedProgram& program,
                        const std::string& filename) {
  return StateParser(text, program, filename).parse();
}

std::string render(const DistributedProgram& program) {
  std::string out;
  std::set<std::string> universes;
  for (const EAModule& m : program.modules) {
    for (const auto& [name, rule] : m.rules) collect_universes(rule, universes);
  }
  for (const std::string& u : universes) out += "universe " + u + "\n";
  if (!universes.empty()) out += "\n";

  std::set<std::string> module_names;
  for (const EAModule& m : program.modules) module_names.insert(m.name);
  for (const auto& [name, f] : program.vocab->symbols()) {
    if (Vocabulary::is_builtin(name)) continue;
    if (name == "Me" || name == "Mod" || name == "Agents") continue;
    if (module_names.count(name)) continue;
    out += "function " + name + "/" + std::to_string(f.arity);
    if (f.is_external) out += " external";
    if (f.is_static) out += " static";
    if (f.is_predicate) out += " predicate";
    out += "\n";
  }
  for (const EAModule& m : program.modules) {
    out += "\nmodule " + m.name + "\n";
    for (const auto& [rname, rule] : m.rules) {
      if (!rname.empty()) out += "rule " + rname + "\n";
      render_rule(rule, 1, out);
    }
  }
  return out;
}

std::string render(const GlobalState& state) {
  std::string out;
  // Agents first: universes may list agent elements by name.
  if (state.has_universe("Agents")) {
    for (const Value& agent : state.universe("Agents")) {
      Value mod = state.read(Location{"Mod", {agent}});
      out += "agent " + agent.text() + " runs " + mod.text() + "\n";
    }
  }
  for (const auto& [name, elems] : state.universes()) {
    if (name == "Agents") continue;
    Tag kind = Tag::Integer;
    for (const Value& v : elems) kind = v.tag();
    out += "universe " + name;
    if (kind == Tag::Mode) out += " : mode";
    if (kind == Tag::Opaque) out += " : opaque";
    out += " = { ";
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) out += ", ";
      out += elems[i].text();
    }
    out += " }\n";
  }
  std::vector<std::pair<Location, Value>> bindings;
  for (const auto& [loc, v] : state.interp()) {
    if (loc.symbol == "Mod") continue;
    bindings.emplace_back(loc, v);
  }
  std::sort(bindings.begin(), bindings.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [loc, v] : bindings) {
    out += loc.symbol;
    if (!loc.args.empty()) {
      out += "(";
      for (std::size_t i = 0; i < loc.args.size(); ++i) {
        if (i) out += ", ";
        out += loc.args[i].text();
      }
      out += ")";
    }
    out += " = " + v.text() + "\n";
  }
  return out;
}

std::vector<EnvAssignment> parse_script(const std::string& text,
                                        const DistributedProgram& program,
                                        const GlobalState& reference,
                                        const std::string& filename) {
  // Reuse the state parser's value resolution by matching names against
  // the reference state's universes.
  std::map<std::string, Value> named;
  for (const auto& [uname, elems] : reference.universes()) {
    for (const Value& v : elems) {
      if (!v.name().empty()) named.emplace(v.name(), v);
    }
  }
  Lexer lex(text, filename);
  std::vector<EnvAssignment> script;
  auto parse_value = [&]() -> Value {
    const Token& t = lex.peek();
    if (t.kind == Tok::Int) return Value::integer(lex.take().number);
    if (t.kind != Tok::Name) lex.fail("expected a value");
    if (t.text == "true") {
      lex.take();
      return Value::boolean(true);
    }
    if (t.text == "false") {
      lex.take();
      return Value::boolean(false);
    }
    if (t.text == "undef") {
      lex.take();
      return Value::undef();
    }
    std::string name = lex.take().text;
    auto it = named.find(name);
    if (it == named.end())
      lex.fail("value '" + name + "' is outside every declared universe");
    return it->second;
  };
  while (lex.peek().kind != Tok::End) {
    if (!(lex.peek().kind == Tok::Name && lex.peek().text == "step"))
      lex.fail("expected 'step'");
    lex.take();
    EnvAssignment step;
    while (lex.peek().kind == Tok::Name && lex.peek().text != "step" &&
           !is_keyword(lex.peek().text)) {
      std::string symbol = lex.take().text;
      const FunctionSymbol* f = program.vocab->find(symbol);
      if (!f || !f->is_external)
        lex.fail("'" + symbol + "' is not an external symbol");
      if (lex.peek().kind != Tok::Eq) lex.fail("expected '='");
      lex.take();
      step[symbol] = parse_value();
      if (lex.peek().kind == Tok::Comma) lex.take();
    }
    script.push_back(std::move(step));
  }
  return script;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ea::dsl
