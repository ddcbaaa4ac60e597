#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ea/value.hpp"

namespace ea {

struct FunctionSymbol {
  std::string name;
  int arity = 0;
  bool is_predicate = false;
  bool is_external = false;
  bool is_static = false;

  friend bool operator==(const FunctionSymbol& a, const FunctionSymbol& b) {
    return a.name == b.name && a.arity == b.arity &&
           a.is_predicate == b.is_predicate && a.is_external == b.is_external &&
           a.is_static == b.is_static;
  }
};

// A finite collection of function names. The logic symbols (true, false,
// undef, Bool, equality, the Boolean connectives and the interpreted
// arithmetic) are present in every vocabulary.
class Vocabulary {
 public:
  Vocabulary();

  void add(FunctionSymbol symbol);
  bool has(const std::string& name) const;
  const FunctionSymbol& at(const std::string& name) const;
  const FunctionSymbol* find(const std::string& name) const;

  const std::map<std::string, FunctionSymbol>& symbols() const {
    return symbols_;
  }

  // True for the interpreted logic/arithmetic names handled by the
  // evaluator rather than by state lookup.
  static bool is_builtin(const std::string& name);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::map<std::string, FunctionSymbol> symbols_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

// A pair (function name, argument tuple): the unit of mutation.
struct Location {
  std::string symbol;
  std::vector<Value> args;

  friend bool operator==(const Location& a, const Location& b) {
    return a.symbol == b.symbol && a.args == b.args;
  }
  friend bool operator<(const Location& a, const Location& b);

  std::string text() const;
};

struct LocationHash {
  std::size_t operator()(const Location& loc) const;
};

struct Update {
  Location location;
  Value value;

  friend bool operator==(const Update& a, const Update& b) {
    return a.location == b.location && a.value == b.value;
  }
};

// A set of updates; membership is set-like by (location, value).
class UpdateSet {
 public:
  void insert(Update u);
  bool contains(const Update& u) const;
  bool empty() const { return updates_.empty(); }
  std::size_t size() const { return updates_.size(); }

  auto begin() const { return updates_.begin(); }
  auto end() const { return updates_.end(); }

  friend bool operator==(const UpdateSet& a, const UpdateSet& b);

 private:
  std::vector<Update> updates_;
};

// A state: interpretations of all vocabulary symbols over the
// superuniverse, plus the named universes used by var/choose rules.
// Off-domain reads produce undef (false for predicates), so the
// interpretation is total. Reading never mutates. Immutable in spirit:
// all semantic operations return fresh states.
class State {
 public:
  State() : vocab_(std::make_shared<Vocabulary>()) {}
  explicit State(VocabularyPtr vocab) : vocab_(std::move(vocab)) {}

  const Vocabulary& vocab() const { return *vocab_; }
  const VocabularyPtr& vocab_ptr() const { return vocab_; }

  // Universe contents keep their declaration order; enumeration order of
  // var/choose rules is exactly this order.
  void declare_universe(const std::string& name, std::vector<Value> elems);
  bool has_universe(const std::string& name) const;
  const std::vector<Value>& universe(const std::string& name) const;
  const std::map<std::string, std::vector<Value>>& universes() const {
    return universes_;
  }

  const Value& read(const Location& loc) const;
  // Interprets a location. Writing the default content (undef, or false
  // for predicates) erases the entry, so states never differ by
  // explicit-versus-implicit defaults.
  void write(const Location& loc, const Value& v);

  const std::unordered_map<Location, Value, LocationHash>& interp() const {
    return interp_;
  }

  // All interpreted locations of one symbol.
  std::vector<std::pair<Location, Value>> entries_of(
      const std::string& symbol) const;
  void erase_symbol(const std::string& symbol);

  // Stable text encoding: universes, then "f(args)=value" lines sorted by
  // symbol name and arguments, integers in signed decimal.
  std::string canonical_text() const;

  friend bool operator==(const State& a, const State& b);
  friend bool operator!=(const State& a, const State& b) { return !(a == b); }

 private:
  VocabularyPtr vocab_;
  std::map<std::string, std::vector<Value>> universes_;
  std::unordered_map<Location, Value, LocationHash> interp_;
};

bool is_consistent(const UpdateSet& updates);

struct FireResult {
  State state;
  bool applied = false;  // false when the update set was inconsistent
};

// Fires an update set: applies all members simultaneously when consistent,
// otherwise returns the state unchanged with applied=false. Updates
// targeting static symbols are illegal.
FireResult fire(const State& s, const UpdateSet& updates);

}  // namespace ea
