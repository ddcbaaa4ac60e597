#include "ea/value.hpp"

#include <tuple>

namespace ea {

Value Value::boolean(bool b) {
  Value v;
  v.tag_ = Tag::Boolean;
  v.bool_ = b;
  return v;
}

Value Value::undef() { return Value(); }

Value Value::integer(long long i) {
  Value v;
  v.tag_ = Tag::Integer;
  v.int_ = i;
  return v;
}

Value Value::datum(std::string name) {
  Value v;
  v.tag_ = Tag::Datum;
  v.name_ = std::move(name);
  return v;
}

Value Value::agent(std::string name) {
  Value v;
  v.tag_ = Tag::Agent;
  v.name_ = std::move(name);
  return v;
}

Value Value::mode(std::string name) {
  Value v;
  v.tag_ = Tag::Mode;
  v.name_ = std::move(name);
  return v;
}

Value Value::opaque(std::string name) {
  Value v;
  v.tag_ = Tag::Opaque;
  v.name_ = std::move(name);
  return v;
}

bool Value::truth() const {
  if (tag_ != Tag::Boolean) throw TypeError("expected a boolean, got " + key());
  return bool_;
}

long long Value::as_int() const {
  if (tag_ != Tag::Integer) throw TypeError("expected an integer, got " + key());
  return int_;
}

bool operator==(const Value& a, const Value& b) {
  if (a.tag_ != b.tag_) return false;
  switch (a.tag_) {
    case Tag::Boolean:
      return a.bool_ == b.bool_;
    case Tag::Undef:
      return true;
    case Tag::Integer:
      return a.int_ == b.int_;
    default:
      return a.name_ == b.name_;
  }
}

bool operator<(const Value& a, const Value& b) {
  if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
  switch (a.tag_) {
    case Tag::Boolean:
      return a.bool_ < b.bool_;
    case Tag::Undef:
      return false;
    case Tag::Integer:
      return a.int_ < b.int_;
    default:
      return a.name_ < b.name_;
  }
}

std::string Value::text() const {
  switch (tag_) {
    case Tag::Boolean:
      return bool_ ? "true" : "false";
    case Tag::Undef:
      return "undef";
    case Tag::Integer:
      return std::to_string(int_);
    default:
      return name_;
  }
}

std::string Value::key() const {
  switch (tag_) {
    case Tag::Boolean:
      return bool_ ? "b:1" : "b:0";
    case Tag::Undef:
      return "u";
    case Tag::Integer:
      return "i:" + std::to_string(int_);
    case Tag::Datum:
      return "d:" + name_;
    case Tag::Agent:
      return "a:" + name_;
    case Tag::Mode:
      return "m:" + name_;
    case Tag::Opaque:
      return "o:" + name_;
  }
  return "?";
}

std::size_t Value::hash() const {
  std::size_t h = static_cast<std::size_t>(tag_) * 0x9e3779b97f4a7c15ull;
  switch (tag_) {
    case Tag::Boolean:
      h ^= bool_ ? 0x1234567 : 0x89abcde;
      break;
    case Tag::Undef:
      break;
    case Tag::Integer:
      h ^= std::hash<long long>()(int_);
      break;
    default:
      h ^= std::hash<std::string>()(name_);
  }
  return h;
}

}  // namespace ea
