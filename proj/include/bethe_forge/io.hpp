#pragma once

// JSON encoding of Hamiltonians. Complex numbers are [re, im] pairs (a bare
// number is read as a real value).
//
// Two input shapes are accepted:
//   {"p": [re, im], ..., "sp": [re, im], "v": [[..3..], [..3..], [..3..]]}
//   {"family": "gZF", "branch": 0, "free": {"p": [re, im], ...}}
// Off-diagonal keys that are absent default to zero; "v" defaults to zeros.
// A "name" string is allowed in either shape and ignored.

#include <string>

#include <json.hpp>

#include "bethe_forge/families.hpp"
#include "bethe_forge/hamiltonian.hpp"

namespace bethe {

nlohmann::json to_json(cplx value);
nlohmann::json to_json(const HamiltonianParams& params);
nlohmann::json to_json(const Matrix9& matrix);

// Throws ParseError naming the offending key path.
cplx complex_from_json(const nlohmann::json& j, const std::string& where);
HamiltonianParams hamiltonian_from_json(const nlohmann::json& j);

// Parses text; syntax errors report line and column.
HamiltonianParams parse_hamiltonian(const std::string& text);
HamiltonianParams load_hamiltonian(const std::string& path);

}  // namespace bethe
