#include "bethe_forge/io.hpp"

#include <fstream>
#include <sstream>

#include "bethe_forge/errors.hpp"

namespace bethe {

using nlohmann::json;

json to_json(cplx value) { return json::array({value.real(), value.imag()}); }

json to_json(const HamiltonianParams& params) {
  json out = json::object();
  for (const auto& field : kOffDiagonalFields) out[std::string(field.name)] = to_json(params.*field.member);
  json v = json::array();
  for (const auto& row : params.v) {
    json r = json::array();
    for (cplx entry : row) r.push_back(to_json(entry));
    v.push_back(r);
  }
  out["v"] = v;
  return out;
}

json to_json(const Matrix9& matrix) {
  json out = json::array();
  for (int r = 0; r < 9; ++r) {
    json row = json::array();
    for (int c = 0; c < 9; ++c) row.push_back(to_json(matrix(r, c)));
    out.push_back(row);
  }
  return out;
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(where + ": expected a number or a [re, im] pair, got " + j.dump());
}

namespace {

HamiltonianParams from_preset(const json& j) {
  if (!j.at("family").is_string()) throw ParseError("/family: expected a string");
  const Family family = family_from_string(j.at("family").get<std::string>());
  int branch = 0;
  if (j.contains("branch")) {
    if (!j["branch"].is_number_integer()) throw ParseError("/branch: expected -1, 0 or +1");
    branch = j["branch"].get<int>();
  }
  FreeParams free;
  if (!j.contains("free") || !j["free"].is_object()) throw ParseError("/free: expected an object");
  for (const auto& [name, value] : j["free"].items()) free[name] = complex_from_json(value, "/free/" + name);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "family" && key != "branch" && key != "free" && key != "name")
      throw ParseError("/" + key + ": unknown key in preset");
  }
  try {
    return construct({family, branch}, free);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("/free: ") + e.what());
  } catch (const SingularError& e) {
    throw ParseError(std::string("/free: ") + e.what());
  }
}

}  // namespace

HamiltonianParams hamiltonian_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("/: expected a JSON object");
  if (j.contains("family")) return from_preset(j);

  HamiltonianParams h;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (key == "v") {
      if (!value.is_array() || value.size() != 3) throw ParseError("/v: expected a 3x3 array");
      for (int i = 0; i < 3; ++i) {
        if (!value[i].is_array() || value[i].size() != 3) throw ParseError("/v/" + std::to_string(i) + ": expected 3 entries");
        for (int k = 0; k < 3; ++k)
          h.v[i][k] = complex_from_json(value[i][k], "/v/" + std::to_string(i) + "/" + std::to_string(k));
      }
      continue;
    }
    bool known = false;
    for (const auto& field : kOffDiagonalFields) {
      if (key == field.name) {
        h.*field.member = complex_from_json(value, "/" + key);
        known = true;
      }
    }
    if (!known) throw ParseError("/" + key + ": unknown key");
  }
  return h;
}

HamiltonianParams parse_hamiltonian(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column));
  }
  return hamiltonian_from_json(j);
}

HamiltonianParams load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_hamiltonian(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace bethe
