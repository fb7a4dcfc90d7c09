#pragma once

#include "convmeasure/geometry.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace convmeasure {

/// Malformed body specification. The message names the line (syntax errors)
/// or the offending field as a path such as "$.balls[2].radius".
class BodyParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"type":"ball_hull","balls":[{"center":[...],"radius":r},...]}
/// {"type":"polytope","vertices":[[...],...]}
/// {"type":"transformed","rotation":[[...],...],"scale":a,"base":{...}}
Body body_from_json(const nlohmann::json& spec, const std::string& path = "$");

nlohmann::json body_to_json(const Body& body);

Body parse_body(const std::string& text);

Body read_body_file(const std::string& filename);

} // namespace convmeasure
