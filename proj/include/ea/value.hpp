#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "ea/errors.hpp"

namespace ea {

// Sorts of elements of the superuniverse.
enum class Tag : std::uint8_t {
  Boolean,
  Undef,
  Integer,
  Datum,
  Agent,
  Mode,
  Opaque,
};

// An element of the superuniverse. Immutable value type; equality is the
// interpretation of the equality sign, and values of different tags are
// always distinct elements.
class Value {
 public:
  Value() : tag_(Tag::Undef) {}

  static Value boolean(bool b);
  static Value undef();
  static Value integer(long long v);
  static Value datum(std::string name);
  static Value agent(std::string name);
  static Value mode(std::string name);
  static Value opaque(std::string name);

  Tag tag() const { return tag_; }
  bool is_boolean() const { return tag_ == Tag::Boolean; }
  bool is_undef() const { return tag_ == Tag::Undef; }
  bool is_integer() const { return tag_ == Tag::Integer; }

  bool truth() const;
  long long as_int() const;
  const std::string& name() const { return name_; }

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b);

  // Display form, as it appears in traces and rendered state files.
  std::string text() const;
  // Canonical tag-disambiguated form used for hashing and graph export.
  std::string key() const;

  std::size_t hash() const;

 private:
  Tag tag_;
  bool bool_ = false;
  long long int_ = 0;
  std::string name_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

}  // namespace ea
