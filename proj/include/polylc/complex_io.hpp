#pragma once
#include <string>

#include <json.hpp>

#include "polylc/complex.hpp"

namespace polylc {

using json = nlohmann::json;

json complex_to_json(const PolyComplex& C);
PolyComplex complex_from_json(const json& j);  // ParseError on malformed input

json point_to_json(const Point& p);
Point point_from_json(const json& j);

json read_json_file(const std::string& path);  // ParseError
void write_json_file(const std::string& path, const json& j);

}  // namespace polylc
