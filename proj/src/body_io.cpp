#include "convmeasure/body_io.hpp"

#include <fstream>
#include <sstream>

namespace convmeasure {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw BodyParseError("field " + path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

Vec vector(const json& v, const std::string& path)
{
    if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array of numbers");
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

json vector_json(const Vec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json ball_hull_json(const BallHullBody& body)
{
    json balls = json::array();
    for (std::size_t i = 0; i < body.size(); ++i)
        balls.push_back({{"center", vector_json(body.center(i))}, {"radius", body.radius(i)}});
    return {{"type", "ball_hull"}, {"balls", balls}};
}

} // namespace

Body body_from_json(const json& spec, const std::string& path)
{
    const auto& type = field(spec, "type", path);
    if (!type.is_string()) fail(path + ".type", "expected a string");
    const auto kind = type.get<std::string>();
    try {
        if (kind == "ball_hull") {
            const auto& list = field(spec, "balls", path);
            if (!list.is_array() || list.empty()) fail(path + ".balls", "expected a nonempty array");
            std::vector<Ball> balls;
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto at = path + ".balls[" + std::to_string(i) + "]";
                balls.push_back({vector(field(list[i], "center", at), at + ".center"),
                                 number(field(list[i], "radius", at), at + ".radius")});
                if (!(balls.back().radius >= 0.0)) fail(at + ".radius", "must be >= 0");
            }
            return BallHullBody(balls);
        }
        if (kind == "polytope") {
            const auto& list = field(spec, "vertices", path);
            if (!list.is_array() || list.empty()) fail(path + ".vertices", "expected a nonempty array");
            std::vector<Vec> vertices;
            for (std::size_t i = 0; i < list.size(); ++i)
                vertices.push_back(vector(list[i], path + ".vertices[" + std::to_string(i) + "]"));
            return PolytopeBody(vertices);
        }
        if (kind == "transformed") {
            const auto& rows = field(spec, "rotation", path);
            if (!rows.is_array() || rows.empty()) fail(path + ".rotation", "expected a square matrix");
            const auto n = static_cast<Eigen::Index>(rows.size());
            Mat rotation(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto at = path + ".rotation[" + std::to_string(i) + "]";
                const Vec row = vector(rows[static_cast<std::size_t>(i)], at);
                if (row.size() != n) fail(at, "expected " + std::to_string(n) + " entries");
                rotation.row(i) = row.transpose();
            }
            const double scale = number(field(spec, "scale", path), path + ".scale");
            const auto base = body_from_json(field(spec, "base", path), path + ".base");
            return TransformedBody(rotation, scale, as_ball_hull(base));
        }
    } catch (const GeometryError& e) {
        fail(path, e.what());
    }
    fail(path + ".type", "unknown body type '" + kind + "'");
}

json body_to_json(const Body& body)
{
    if (const auto* hull = std::get_if<BallHullBody>(&body)) return ball_hull_json(*hull);
    if (const auto* poly = std::get_if<PolytopeBody>(&body)) {
        json vertices = json::array();
        for (const auto& v : poly->vertices()) vertices.push_back(vector_json(v));
        return {{"type", "polytope"}, {"vertices", vertices}};
    }
    const auto& t = std::get<TransformedBody>(body);
    json rows = json::array();
    for (Eigen::Index i = 0; i < t.rotation().rows(); ++i) rows.push_back(vector_json(t.rotation().row(i).transpose()));
    return {{"type", "transformed"}, {"rotation", rows}, {"scale", t.scale()}, {"base", ball_hull_json(t.base())}};
}

Body parse_body(const std::string& text)
{
    json spec;
    try {
        spec = json::parse(text);
    } catch (const json::parse_error& e) {
        // the library message already carries "line L, column C"
        throw BodyParseError(e.what());
    }
    return body_from_json(spec);
}

Body read_body_file(const std::string& filename)
{
    std::ifstream in(filename);
    if (!in) throw BodyParseError("cannot open " + filename);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_body(buffer.str());
    } catch (const BodyParseError& e) {
        throw BodyParseError(filename + ": " + e.what());
    }
}

} // namespace convmeasure
