#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "jetflow/cli.hpp"
#include "jetflow/jet.hpp"
#include "support.hpp"

using namespace jetflow;
using namespace jetflow::cli;
using namespace testing;

namespace {

const std::vector<std::string> xy{"x", "y"};

struct Outcome {
    int code;
    std::string out, err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream o, e;
    int code = run(args, o, e);
    return {code, o.str(), e.str()};
}

std::size_t parse_offset(const std::string& text) {
    try {
        (void)parse_poly(text, xy);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        auto at = e.detail().find("offset ");
        REQUIRE(at != std::string::npos);
        return std::stoul(e.detail().substr(at + 7));
    }
    FAIL("expected a parse error for " << text);
    return 0;
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/jetflow_test_" + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("parser examples") {
    CHECK(parse_poly("-4*x^3*y^3", xy) == poly(2, {{{3, 3}, -4}}));
    CHECK(parse_poly("(x^2+y^2)*(x^2+2*y^2)", xy) == poly(2, {{{4, 0}, 1}, {{2, 2}, 3}, {{0, 4}, 2}}));
    CHECK(parse_poly("-x^2", xy) == poly(2, {{{2, 0}, -1}}));
    CHECK(parse_poly("1/2*x - 3/6", xy) == poly(2, {{{1, 0}, 1, 2}, {{0, 0}, -1, 2}}));
    CHECK(parse_poly("0.25 + 1e-2*y", xy) == poly(2, {{{0, 0}, 1, 4}, {{0, 1}, 1, 100}}));
    CHECK(parse_poly("x - x", xy).is_zero());
    CHECK(parse_poly("010 + 07/010", xy) == cst(2, 107, 10));
    CHECK(parse_poly("--x", xy) == var(2, 0));
    CHECK(parse_poly("(x+y)^3", xy) == (var(2, 0) + var(2, 1)).pow(3));
    auto f = parse_poly("0.1*x", xy, ScalarMode::floating);
    CHECK(f.mode() == ScalarMode::floating);
    CHECK(f.terms()[0].coef.to_double() == 0.1);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK(parse_offset("x^(2)") == 2);
    CHECK(parse_offset("x + w") == 4);
    CHECK(parse_offset("x + ") == 4);
    CHECK(parse_offset("1/0*x") == 2);
    CHECK(parse_offset("x/2") == 1);
    CHECK(parse_offset("(x + y") == 6);
    CHECK(parse_offset("") == 0);
    CHECK(parse_offset("2 x") == 2);
    try {
        (void)parse_map("x, y^", xy);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.detail().rfind("offset 5:", 0) == 0);
    }
}

TEST_CASE("maps, lists and matrices") {
    CHECK(parse_map("(x, y)", xy) == PolyMap::identity(2));
    CHECK(parse_map("x, y", xy) == PolyMap::identity(2));
    CHECK(parse_map("(x + y)", xy).ncoords() == 1);
    CHECK(parse_list("x; y; x*y", xy).size() == 3);
    auto L = parse_matrix("0,-1; 1,0");
    CHECK(L(0, 1) == Scalar(-1));
    CHECK(L(1, 0) == Scalar(1));
    CHECK_THROWS_AS(parse_matrix("1,2;3"), Error);
    CHECK(parse_number("-2/6") == Scalar::rational(-1, 3));
}

TEST_CASE("variable inference") {
    CHECK(infer_vars({"x^2 + y"}) == std::vector<std::string>{"x", "y"});
    CHECK(infer_vars({"x"}, 2) == std::vector<std::string>{"x", "y"});
    CHECK(infer_vars({"z"}) == std::vector<std::string>{"x", "y", "z"});
    CHECK(infer_vars({"x1 + x4"}) == std::vector<std::string>{"x1", "x2", "x3", "x4"});
    CHECK(infer_vars({"1e-5*x"}) == std::vector<std::string>{"x"});
}

TEST_CASE("parse then print then parse is the identity") {
    Rng rng(31);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
        const auto vars = default_variable_names(n);
        for (int k = 0; k < 20; ++k) {
            auto p = rng.polynomial(n, 0, 4);
            auto text = to_string(p, vars);
            auto back = parse_poly(text, vars);
            CHECK(back == p);
            CHECK(to_string(back, vars) == text);
            auto pf = p.to_mode(ScalarMode::floating);
            CHECK(parse_poly(to_string(pf, vars), vars, ScalarMode::floating) == pf);
        }
    }
}

TEST_CASE("JSON round trip") {
    Rng rng(32);
    for (int k = 0; k < 20; ++k) {
        auto p = rng.polynomial(2, 0, 5);
        CHECK(poly_from_json(json::parse(to_json(p).dump()), 2) == p);
        auto pf = p.to_mode(ScalarMode::floating);
        CHECK(poly_from_json(to_json(pf), 2, ScalarMode::floating) == pf);
        PolyMap F({p, rng.polynomial(2, 1, 3)});
        CHECK(map_from_json(to_json(F), 2) == F);
    }
    CHECK(poly_from_json(json::array(), 3).is_zero());
    CHECK_THROWS_AS(poly_from_json(json::parse(R"([{"exps":[1],"num":"1","den":"1"}])"), 2), Error);
}

TEST_CASE("reduce-ham example") {
    auto r = call({"reduce-ham", "-g", "x^3*y^4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("x^2*y^3") != std::string::npos);
    CHECK(r.out.find("(-4*x, 3*y)") != std::string::npos);
    auto j = json::parse(call({"--json", "reduce-ham", "-g", "x^3*y^4"}).out);
    CHECK(j["ok"] == true);
    CHECK(j["command"] == "reduce-ham");
    CHECK(map_from_json(j["result"]["field"], 2) == PolyMap({var(2, 0) * Scalar(-4), var(2, 1) * Scalar(3)}));
}

TEST_CASE("check-star on a visibly divisible field") {
    auto r = call({"--json", "check-star", "-F", "x, x"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["result"]["nondivisible"] == "no");
    CHECK(poly_from_json(j["result"]["witness"], 2) == var(2, 0));
}

TEST_CASE("recover on a forward-synthesized shift") {
    const std::string F = "-3*x^2*y - 4*y^3, 2*x^3 + 3*x*y^2";
    const std::string alpha = "1/3 - x + 2*x*y + y^3 - 5*x^4*y";
    auto h = call({"--json", "shift-jet", "-F", F, "-a", alpha, "-K", "8"});
    REQUIRE(h.code == 0);
    // The JSON document is accepted wherever a map is expected.
    auto r = call({"--json", "recover", "-F", F, "-h", h.out, "-K", "8"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j["result"]["omegas"].size() == 6);
    MultiPoly sum(2);
    for (const auto& w : j["result"]["omegas"]) sum += poly_from_json(w, 2);
    CHECK(sum == parse_poly(alpha, xy));
    CHECK(j["result"]["residual_ok"] == true);
    // Same through a file argument and the text form.
    auto path = temp_file("h.json", h.out);
    auto t = call({"recover", "-F", F, "-h", "@" + path, "-K", "8"});
    CHECK(t.code == 0);
    CHECK(t.out.find("omega0       1/3") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 1);
    CHECK(call({"no-such-command"}).code == 1);
    CHECK(call({"reduce-ham"}).code == 1);
    CHECK(call({"reduce-ham", "-g", "x^(2)"}).code == 2);
    CHECK(call({"reduce-ham", "-g", "x + "}).code == 2);
    auto bad = call({"recover", "-F", "-3*x^2*y - 4*y^3, 2*x^3 + 3*x*y^2", "-h", "x + x^3, y", "-K", "6"});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("Inconsistent") != std::string::npos);
    auto j = json::parse(call({"--json", "integral-rep", "-F", "x, y", "-f", "x^2+y^2"}).out);
    CHECK(j["ok"] == false);
    CHECK(j["error"]["kind"] == "NoSuchFactor");
    CHECK(call({"--help"}).code == 0);
    CHECK(call({"recover", "--help"}).code == 0);
}

TEST_CASE("remaining subcommands") {
    auto cls = json::parse(call({"--json", "classify-exp", "-L", "0,-1,0,0;1,0,0,0;0,0,0,-2;0,0,1,0"}).out);
    CHECK(cls["result"]["class"] == "DenseLine");
    auto st = json::parse(call({"--json", "stab", "-f", "x^4+3*x^2*y^2+2*y^4"}).out);
    CHECK(st["result"]["dimension"] == 0);
    auto pr = json::parse(call({"--json", "profile", "-g", "x*y*(x^2+y^2)"}).out);
    CHECK(pr["result"]["l"] == 2);
    CHECK(pr["result"]["q"] == 1);
    auto cr = json::parse(call({"--json", "cross", "-f", "x^2+y^2"}).out);
    CHECK(map_from_json(cr["result"]["field"], 2) == PolyMap({var(2, 1) * Scalar(-2), var(2, 0) * Scalar(2)}));
    auto fl = json::parse(call({"--json", "flow-jet", "-F", "x^2", "-N", "3", "-K", "5"}).out);
    CHECK(poly_from_json(fl["result"]["coefficients"][2][0], 1) == poly(1, {{{4}, 6}}));
    auto hs = call({"hatted-shift", "-F", "x^2", "-h", "x", "-b", "x", "-K", "4"});
    CHECK(hs.code == 0);
    CHECK(hs.out.find("x + x^3 + x^5") == std::string::npos);
    CHECK(hs.out.find("x + x^3") != std::string::npos);
}

TEST_CASE("borel subcommand") {
    auto path = temp_file("jets.txt", "1\nx\nx^2\n0\nx^4\n");
    auto r = json::parse(call({"--json", "borel", "--jets", path, "--eval", "0.001", "--fd-order", "4"}).out);
    REQUIRE(r["ok"] == true);
    CHECK(r["result"]["radii"].size() == 5);
    CHECK(r["result"]["value"].get<double>() == doctest::Approx(1.001001000001));
    const double want[] = {1, 1, 1, 0, 1};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(r["result"]["taylor"][i]["value"].get<double>() - want[i]) < 1e-4);
    auto bad = temp_file("jets_bad.txt", "1\nx^2\n");
    CHECK(call({"borel", "--jets", bad}).code == 1);
    CHECK(call({"borel", "--jets", path, "--fd-order", "4", "--step", "1"}).code == 3);
}

TEST_CASE("batch mode keeps line order") {
    std::string lines;
    for (int k = 1; k <= 8; ++k) lines += "reduce-ham -g \"x^" + std::to_string(k) + "*y\"\n";
    lines += "# comment\nreduce-ham -g 'x^(2)'\n";
    auto path = temp_file("batch.txt", lines);
    auto r = call({"--batch", path});
    CHECK(r.code == 2);
    std::size_t prev = 0;
    for (int k = 1; k <= 8; ++k) {
        // F = (-x, k*y) for g = x^k*y
        auto at = r.out.find("(-x, " + (k == 1 ? std::string("y") : std::to_string(k) + "*y") + ")");
        REQUIRE(at != std::string::npos);
        CHECK(at >= prev);
        prev = at;
    }
    CHECK(r.err.find("Parse") != std::string::npos);
}

}
