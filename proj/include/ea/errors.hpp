#pragma once

#include <stdexcept>
#include <string>

namespace ea {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A term or rule does not fit the vocabulary (unknown symbol, arity clash).
struct StructuralError : Error {
  using Error::Error;
};

// A value of the wrong sort reached an operation (non-boolean guard, etc.).
struct TypeError : Error {
  using Error::Error;
};

// Unbound variable or similar failure while evaluating a term.
struct EvalError : Error {
  using Error::Error;
};

// An operation was called outside its contract (firing a disabled agent,
// update_set on an unresolved choice, ...).
struct ContractError : Error {
  using Error::Error;
};

}  // namespace ea
