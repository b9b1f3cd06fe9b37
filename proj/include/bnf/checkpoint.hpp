#pragma once

#include <iosfwd>
#include <string>

#include "bnf/normalform.hpp"

namespace bnf {

// Text serialization of S^(r). Every binary64 is written as a hex-float
// literal, so reading back gives a bit-identical state.
void write_state(std::ostream& os, const HamiltonianState& h);
// Throws ParseError (with the line number) on malformed or truncated input.
HamiltonianState read_state(std::istream& is);

std::string state_to_text(const HamiltonianState& h);
HamiltonianState state_from_text(const std::string& s);

// File variants; save writes to a temporary name and renames it into place.
void save_state(const std::string& path, const HamiltonianState& h);
HamiltonianState load_state(const std::string& path);

}  // namespace bnf
