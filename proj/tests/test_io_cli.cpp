#include <json.hpp>

#include <sstream>

#include "curveorbit/cli.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace testing;
using json = nlohmann::ordered_json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("scalar and polynomial parsing") {
    TowerContext ctx;
    Form f = parse_form("3/2*x^2*y - 2 x z^2 + (y - z)^2*x", ctx);
    CHECK(f.coeff({2, 1, 0}) == ExactScalar(Rational(3, 2)));
    CHECK(f.coeff({1, 0, 2}) == ExactScalar(-1));
    CHECK(f.coeff({1, 1, 1}) == ExactScalar(-2));
    CHECK(parse_form(to_string(f), ctx) == f);

    Form g = parse_form("x^2 + i*y^2 - (2 + 3*i)*x*z", ctx);
    CHECK(parse_form(to_string(g), ctx) == g);

    TowerContext r;
    PlaneCurve c = parse_curve("radical s^2 = 2\nfactor: x^2 - s*y^2\nfactor: (y - z)^3\n", r);
    CHECK(c.degree() == 5);
    CHECK(c.factors()[1].second == 3);
    ExactScalar s = -c.factors()[0].first.coeff({0, 2, 0});
    CHECK(s * s == ExactScalar(2));
    CHECK(parse_form(to_string(c.factors()[0].first), r) == c.factors()[0].first);

    Line l = parse_line("y - 2*z", ctx);
    CHECK(l == Line{0, 1, -2});
    Point p = parse_point("(1 : -4 : -8)", ctx);
    CHECK(same_point(p, pt(1, -4, -8)));
    CHECK(parse_series("t^3 - 1/2*t", ctx) == TPoly(std::vector<ExactScalar>{0, Rational(-1, 2), 0, 1}));
}

TEST_CASE("parse errors carry line and column") {
    TowerContext ctx;
    try {
        parse_germ(read_text_file(data_path("bad.germ")), ctx);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 35);
    }
    try {
        parse_curve("factor: x^2 + y*z\nfactor: x^2 + y\n", ctx);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_germ("1, 0, 0, 0, t, 0, 0, 0", ctx), ParseError);
    CHECK_THROWS_AS(parse_form("x^y", ctx), ParseError);
    CHECK_THROWS_AS(parse_form("x/y", ctx), ParseError);
    CHECK_THROWS_AS(parse_form("sqrt3*x", ctx), ParseError);
}

TEST_CASE("points and contributions files") {
    TowerContext ctx;
    PointsInput pts = parse_points(read_text_file(data_path("septic.points")), ctx);
    REQUIRE(pts.points.size() == 4);
    REQUIRE(pts.points[0].tangent.has_value());
    CHECK(*pts.points[0].tangent == Line{0, 0, 1});
    CHECK(!pts.points[1].tangent.has_value());

    AppInput in = parse_contributions(read_text_file(data_path("septic.contrib")));
    CHECK(in.n == 7);
    CHECK(in.dim == 8);
    CHECK(in.stabilizer == 1);
    REQUIRE(in.contributions.size() == 5);
    CHECK(in.contributions[2].value == contribution_node(1, 1).scaled(2));
    CHECK(parse_contribution("typeI(2, 5, 3)").value == contribution_type_I(2, {3}, 5));
    CHECK(parse_contribution("star(4)").value == contribution_star_typeIII(4));
    CHECK_THROWS_AS(parse_contribution("bogus(1)"), ParseError);
}

TEST_CASE("cli limit") {
    Run r = cli({"limit", "--curve", data_path("septic.curve"), "--germ", data_path("septic.germ")});
    CHECK(r.code == 0);
    CHECK(r.out.find("weight: 52") != std::string::npos);

    Run q = cli({"limit", "--curve", data_path("quintic.curve"), "--germ", data_path("quintic_typeIV.germ"), "--format", "json"});
    REQUIRE(q.code == 0);
    json j = json::parse(q.out);
    TowerContext ctx;
    CHECK(projectively_equal(parse_form(j["result"]["limit"].get<std::string>(), ctx), form("y*(y^2 + x*z)^2")));

    Run bad = cli({"limit", "--curve", data_path("septic.curve"), "--germ", data_path("bad.germ")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 1, column 35") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"limit", "--curve", data_path("septic.curve")}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"newton", "--curve", data_path("septic.curve"), "--point", "(1:1:1)"}).code == 2);
    CHECK(cli({"limit", "--curve", data_path("missing.curve"), "--germ", data_path("septic.germ")}).code == 1);
    CHECK(cli({"app", "--add", "flex(1)"}).code == 1);
    CHECK(cli({"app", "--n", "2", "--dim", "5", "--add", "typeI(1,2,1)", "--add", "typeI(1,2,1)"}).code == 2);
}

TEST_CASE("cli json round trip") {
    std::vector<std::vector<std::string>> runs = {
        {"--format", "json", "pnc", "--curve", data_path("septic.curve"), "--points", data_path("septic.points")},
        {"--format", "json", "newton", "--curve", data_path("quintic.curve"), "--point", "(1:0:0)", "--tangent", "z"},
        {"--format", "json", "branches", "--curve", data_path("septic.curve"), "--point", "(1:0:0)", "--tangent", "z"},
        {"--format", "json", "classify", "--curve", data_path("septic.curve"), "--germ", data_path("septic.germ")},
        {"--format", "json", "app", "--contrib", data_path("septic.contrib")},
    };
    for (const auto& args : runs) {
        Run r = cli(args);
        REQUIRE(r.code == 0);
        json j = json::parse(r.out);
        CHECK(j["schema"] == 1);
        CHECK(j.dump(2) + "\n" == r.out);
        CHECK(!j.contains("timing_ms"));
        CHECK(cli(args).out == r.out);
    }
    Run pnc = cli(runs[0]);
    json j = json::parse(pnc.out);
    CHECK(j["result"]["total"] == "96");
    Run app = cli(runs[4]);
    CHECK(json::parse(app.out)["result"]["degree"] == "435417");
    Run timed = cli({"--format", "json", "--timing", "app", "--contrib", data_path("septic.contrib")});
    CHECK(json::parse(timed.out).contains("timing_ms"));
}

TEST_CASE("cli newton picture") {
    Run r = cli({"newton", "--curve", data_path("quintic.curve"), "--point", "(1:0:0)", "--tangent", "z"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("side (1,2)-(5,0)") != std::string::npos);
    CHECK(r.out.find("o") != std::string::npos);
    NewtonPolygonData np = newton_polygon(quintic(), Flag{pt(1, 0, 0), Line{0, 0, 1}});
    std::string pic = ascii_polygon(np);
    CHECK(r.out.find(pic) != std::string::npos);
    CHECK(std::count(pic.begin(), pic.end(), '\n') == 5);
}

TEST_CASE("cli pnc without points warns") {
    Run r = cli({"pnc", "--curve", data_path("quintic.curve")});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("cli branches need a tangent at a node") {
    Run r = cli({"branches", "--curve", data_path("septic.curve"), "--point", "(1:-4:-8)"});
    CHECK(r.code == 2);
    CHECK(r.err.find("TangentRequired") != std::string::npos);
}

TEST_CASE("cli max-order bound") {
    Run r = cli({"--max-order", "4", "pnc", "--curve", data_path("septic.curve"), "--points", data_path("septic.points")});
    CHECK(r.code == 2);
    CHECK(r.out.find("RootOrderBound") != std::string::npos);
}
