#include "varlex/serde.hpp"

#include <fstream>

#include "varlex/errors.hpp"

namespace varlex {

using nlohmann::json;

json exponent_to_json(const Exponent& e) {
  if (e.is_infinite()) return json("inf");
  return json(e.value());
}

Exponent exponent_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return Exponent::infinity();
    throw validation_error("exponent string must be \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw validation_error("exponent must be a number or \"inf\"");
  return Exponent(j.get<double>());
}

json space_to_json(const SpaceSpec& space) {
  json cells = json::array();
  for (const Cell& c : space.cells) {
    cells.push_back({{"w", c.weight},
                     {"p", exponent_to_json(c.exponent)},
                     {"kind", c.kind == CellKind::atom ? "atom" : "diffuse"}});
  }
  json out{{"cells", cells}};
  if (space.tail) {
    json t{{"family", "shifted"},
           {"base", space.tail->base()},
           {"scale", space.tail->scale()}};
    if (space.tail->conjugated()) t["conjugated"] = true;
    out["tail"] = t;
  }
  return out;
}

SpaceSpec space_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("space config must be a JSON object");
  SpaceSpec space;
  if (j.contains("cells")) {
    const json& cells = j.at("cells");
    if (!cells.is_array()) throw validation_error("\"cells\" must be an array");
    for (const json& c : cells) {
      Cell cell;
      if (!c.contains("w") || !c.contains("p"))
        throw validation_error("cell needs fields \"w\" and \"p\"");
      cell.weight = c.at("w").get<double>();
      cell.exponent = exponent_from_json(c.at("p"));
      std::string kind = c.value("kind", std::string("atom"));
      if (kind == "atom")
        cell.kind = CellKind::atom;
      else if (kind == "diffuse")
        cell.kind = CellKind::diffuse;
      else
        throw validation_error("cell kind must be \"atom\" or \"diffuse\", got \"" +
                               kind + "\"");
      space.cells.push_back(cell);
    }
  }
  if (j.contains("tail") && !j.at("tail").is_null()) {
    const json& t = j.at("tail");
    const std::string family = t.value("family", std::string("shifted"));
    if (family != "shifted")
      throw validation_error("unknown tail family \"" + family + "\"");
    if (!t.contains("base")) throw validation_error("tail needs field \"base\"");
    space.tail = TailSpec(t.at("base").get<double>(), t.value("scale", 1.0),
                          t.value("conjugated", false));
  }
  space.validate();
  return space;
}

SpaceSpec space_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("malformed JSON: ") + e.what());
  }
  return space_from_json(j);
}

std::string space_to_string(const SpaceSpec& space) {
  return space_to_json(space).dump();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace varlex
