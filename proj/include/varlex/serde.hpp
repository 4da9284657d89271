#ifndef VARLEX_SERDE_HPP
#define VARLEX_SERDE_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "varlex/space.hpp"

namespace varlex {

// Config schema (documented in the README):
//   {"cells":[{"w":1.0,"p":2.0,"kind":"atom"}],
//    "tail":{"family":"shifted","base":1.2,"scale":1.0}}
// The string "inf" denotes the infinite exponent. "kind" is "atom" or
// "diffuse". A tail may carry "conjugated":true, which is how conjugated
// spaces round-trip.

nlohmann::json exponent_to_json(const Exponent& e);
Exponent exponent_from_json(const nlohmann::json& j);

nlohmann::json space_to_json(const SpaceSpec& space);
SpaceSpec space_from_json(const nlohmann::json& j);

SpaceSpec space_from_string(const std::string& text);
std::string space_to_string(const SpaceSpec& space);

/// Parses a JSON document from a file, rethrowing parse failures as
/// validation_error with line context.
nlohmann::json load_json_file(const std::string& path);

}  // namespace varlex

#endif
