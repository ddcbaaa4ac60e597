#pragma once

#include <string>

#include "ea/distributed.hpp"

namespace ea::dsl {

// Parse or render failure; what() is "file:line:col: message".
struct DslError : Error {
  DslError(const std::string& file, int line, int col,
           const std::string& message)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
              ": " + message),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Parses a program in the .ea syntax: universe/function/abbrev
// declarations followed by modules. Symbols may also be introduced by
// use; arities must stay consistent. Abbreviations expand at parse time.
DistributedProgram parse_program(const std::string& text,
                                 const std::string& filename = "<input>");

// Parses an initial-state description in the .eas syntax against a
// companion program (vocabulary checking, module names for agents).
GlobalState parse_state(const std::string& text,
                        const DistributedProgram& program,
                        const std::string& filename = "<input>");

// Canonical text; parse(render(x)) is structurally equal to x.
std::string render(const DistributedProgram& program);
std::string render(const GlobalState& state);

// An environment script: one "step" per move, each holding external
// assignments ("step InSendBit = 1, InputDatum = d0"; a bare "step" leaves
// the environment silent). Names resolve against the reference state's
// universes.
std::vector<EnvAssignment> parse_script(const std::string& text,
                                        const DistributedProgram& program,
                                        const GlobalState& reference,
                                        const std::string& filename = "<script>");

std::string read_file(const std::string& path);

}  // namespace ea::dsl
