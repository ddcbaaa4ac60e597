#include "ea/state.hpp"

#include <algorithm>
#include <sstream>

#include "ea/errors.hpp"

namespace ea {

namespace {

const char* kBuiltins[] = {"true", "false", "undef", "Bool", "=",   "!=",
                           "and",  "or",    "not",   "+",    "-",   "mod"};

FunctionSymbol builtin(const std::string& name, int arity, bool predicate) {
  FunctionSymbol f;
  f.name = name;
  f.arity = arity;
  f.is_predicate = predicate;
  f.is_static = true;
  return f;
}

}  // namespace

Vocabulary::Vocabulary() {
  add(builtin("true", 0, false));
  add(builtin("false", 0, false));
  add(builtin("undef", 0, false));
  add(builtin("Bool", 1, true));
  add(builtin("=", 2, true));
  add(builtin("!=", 2, true));
  add(builtin("and", 2, true));
  add(builtin("or", 2, true));
  add(builtin("not", 1, true));
  add(builtin("+", 2, false));
  add(builtin("-", 2, false));
  add(builtin("mod", 2, false));
}

void Vocabulary::add(FunctionSymbol symbol) {
  auto it = symbols_.find(symbol.name);
  if (it != symbols_.end() && !(it->second == symbol)) {
    throw StructuralError("conflicting declarations for symbol '" +
                          symbol.name + "'");
  }
  symbols_.emplace(symbol.name, std::move(symbol));
}

bool Vocabulary::has(const std::string& name) const {
  return symbols_.count(name) != 0;
}

const FunctionSymbol& Vocabulary::at(const std::string& name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) {
    throw StructuralError("symbol '" + name + "' is not in the vocabulary");
  }
  return it->second;
}

const FunctionSymbol* Vocabulary::find(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

bool Vocabulary::is_builtin(const std::string& name) {
  for (const char* b : kBuiltins) {
    if (name == b) return true;
  }
  return false;
}

bool operator<(const Location& a, const Location& b) {
  if (a.symbol != b.symbol) return a.symbol < b.symbol;
  return a.args < b.args;
}

std::string Location::text() const {
  if (args.empty()) return symbol;
  std::string out = symbol + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].text();
  }
  return out + ")";
}

std::size_t LocationHash::operator()(const Location& loc) const {
  std::size_t h = std::hash<std::string>()(loc.symbol);
  for (const Value& v : loc.args) {
    h = h * 1099511628211ull ^ v.hash();
  }
  return h;
}

void UpdateSet::insert(Update u) {
  if (!contains(u)) updates_.push_back(std::move(u));
}

bool UpdateSet::contains(const Update& u) const {
  return std::find(updates_.begin(), updates_.end(), u) != updates_.end();
}

bool operator==(const UpdateSet& a, const UpdateSet& b) {
  if (a.size() != b.size()) return false;
  for (const Update& u : a) {
    if (!b.contains(u)) return false;
  }
  return true;
}

void State::declare_universe(const std::string& name,
                             std::vector<Value> elems) {
  universes_[name] = std::move(elems);
}

bool State::has_universe(const std::string& name) const {
  return universes_.count(name) != 0;
}

const std::vector<Value>& State::universe(const std::string& name) const {
  auto it = universes_.find(name);
  if (it == universes_.end()) {
    throw StructuralError("unknown universe '" + name + "'");
  }
  return it->second;
}

const Value& State::read(const Location& loc) const {
  static const Value kUndef = Value::undef();
  static const Value kFalse = Value::boolean(false);
  auto it = interp_.find(loc);
  if (it != interp_.end()) return it->second;
  const FunctionSymbol* f = vocab_->find(loc.symbol);
  if (f && f->is_predicate) return kFalse;
  return kUndef;
}

void State::write(const Location& loc, const Value& v) {
  const FunctionSymbol* f = vocab_->find(loc.symbol);
  bool is_default =
      (f && f->is_predicate) ? v == Value::boolean(false) : v.is_undef();
  if (is_default) {
    interp_.erase(loc);
  } else {
    interp_[loc] = v;
  }
}

std::vector<std::pair<Location, Value>> State::entries_of(
    const std::string& symbol) const {
  std::vector<std::pair<Location, Value>> out;
  for (const auto& [loc, v] : interp_) {
    if (loc.symbol == symbol) out.emplace_back(loc, v);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void State::erase_symbol(const std::string& symbol) {
  for (auto it = interp_.begin(); it != interp_.end();) {
    if (it->first.symbol == symbol) {
      it = interp_.erase(it);
    } else {
      ++it;
    }
  }
}

std::string State::canonical_text() const {
  std::ostringstream out;
  for (const auto& [name, elems] : universes_) {
    out << "universe " << name << "={";
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) out << ",";
      out << elems[i].key();
    }
    out << "}\n";
  }
  std::vector<std::pair<Location, const Value*>> lines;
  lines.reserve(interp_.size());
  for (const auto& [loc, v] : interp_) lines.emplace_back(loc, &v);
  std::sort(lines.begin(), lines.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [loc, v] : lines) {
    out << loc.symbol;
    if (!loc.args.empty()) {
      out << "(";
      for (std::size_t i = 0; i < loc.args.size(); ++i) {
        if (i) out << ",";
        out << loc.args[i].key();
      }
      out << ")";
    }
    out << "=" << v->key() << "\n";
  }
  return out.str();
}

bool operator==(const State& a, const State& b) {
  if (a.vocab_ != b.vocab_ && !(*a.vocab_ == *b.vocab_)) return false;
  return a.universes_ == b.universes_ && a.interp_ == b.interp_;
}

bool is_consistent(const UpdateSet& updates) {
  std::unordered_map<Location, Value, LocationHash> seen;
  for (const Update& u : updates) {
    auto [it, inserted] = seen.emplace(u.location, u.value);
    if (!inserted && !(it->second == u.value)) return false;
  }
  return true;
}

FireResult fire(const State& s, const UpdateSet& updates) {
  for (const Update& u : updates) {
    const FunctionSymbol* f = s.vocab().find(u.location.symbol);
    if (f && f->is_static) {
      throw StructuralError("update of static symbol '" + u.location.symbol +
                            "' is illegal");
    }
    if (f && f->is_predicate && !u.value.is_boolean()) {
      throw TypeError("predicate '" + u.location.symbol +
                      "' may only hold true or false");
    }
  }
  if (!is_consistent(updates)) {
    return {s, false};
  }
  FireResult result{s, true};
  for (const Update& u : updates) {
    result.state.write(u.location, u.value);
  }
  return result;
}

}  // namespace ea
