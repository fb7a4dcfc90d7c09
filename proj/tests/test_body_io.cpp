#include "doctest.h"
#include "test_util.hpp"

#include "convmeasure/body_io.hpp"

#include <string>

using namespace convmeasure;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_body(text);
    } catch (const BodyParseError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("bodies round trip through JSON")
{
    Mat q = Mat::Identity(3, 3);
    q.topLeftCorner(2, 2) << 0.6, -0.8, 0.8, 0.6;
    const std::vector<Body> bodies{cap_body(3, 0.25), PolytopeBody({Vec::Zero(2), Vec::Ones(2), testutil::e(2, 0)}),
                                   TransformedBody(q, 1.5, unit_ball(3))};
    Rng rng(1);
    for (const auto& body : bodies) {
        const auto text = body_to_json(body).dump();
        const Body back = parse_body(text);
        CHECK(back.index() == body.index());
        CHECK(body_to_json(back).dump() == text);
        CHECK(testutil::sampled_support_gap(back, body, dimension(body), 100, rng) == 0.0);
    }
}

TEST_CASE("unit ball from literal text")
{
    const Body ball = parse_body(R"({"type":"ball_hull","balls":[{"center":[0,0,0],"radius":1}]})");
    CHECK(dimension(ball) == 3);
    CHECK(support(ball, testutil::e(3, 1)) == 1.0);
}

TEST_CASE("malformed bodies name the offending field or line")
{
    CHECK(contains(error_of(R"({"type":"ball_hull","balls":[{"center":[0,0,0],"radius":1},{"center":[1,0,0]}]})"),
                   "$.balls[1].radius: missing"));
    CHECK(contains(error_of(R"({"type":"ball_hull","balls":[{"center":[0,0,0],"radius":-1}]})"),
                   "$.balls[0].radius: must be >= 0"));
    CHECK(contains(error_of(R"({"type":"ball_hull","balls":[{"center":[0,"x",0],"radius":1}]})"),
                   "$.balls[0].center[1]"));
    CHECK(contains(error_of(R"({"type":"sphere"})"), "$.type: unknown body type 'sphere'"));
    CHECK(contains(error_of(R"({"balls":[]})"), "$.type: missing"));
    CHECK(contains(error_of(R"({"type":"polytope","vertices":[]})"), "$.vertices"));
    CHECK(contains(error_of(R"({"type":"transformed","rotation":[[1,0],[0]],"scale":1,"base":{}})"), "$.rotation[1]"));
    CHECK(contains(error_of(R"({"type":"transformed","rotation":[[1,0,0],[0,1,0],[0,0,1]],"scale":1,"base":{"type":"ball_hull"}})"),
                   "$.base.balls: missing"));
    CHECK(contains(error_of(R"({"type":"transformed","rotation":[[-1,0,0],[0,1,0],[0,0,1]],"scale":1,)"
                            R"("base":{"type":"ball_hull","balls":[{"center":[0,0,0],"radius":1}]}})"),
                   "rotation must be orthogonal"));
    CHECK(contains(error_of("{\n  \"type\": \"ball_hull\",\n  \"balls\": [\n}"), "line 4"));
}

TEST_CASE("files")
{
    CHECK_THROWS_AS(read_body_file("/nonexistent/body.json"), BodyParseError);
}
