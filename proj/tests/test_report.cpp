#include <catch_amalgamated.hpp>

#include <random>

#include "pscb/errors.hpp"
#include "pscb/report.hpp"
#include "xml_check.hpp"

using namespace pscb;

namespace {

Aggregate random_aggregate(std::mt19937_64& rng, int horizon, int curves) {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    Aggregate agg;
    agg.horizon = horizon;
    for (int c = 0; c < curves; ++c) {
        PolicyCurve curve;
        curve.label = "algo" + std::to_string(c);
        double acc = 0.0;
        for (int t = 0; t < horizon; ++t) {
            acc += u(rng);
            curve.mean.push_back(acc);
            curve.std.push_back(u(rng) / 7.0);
        }
        agg.curves.push_back(curve);
    }
    return agg;
}

}  // namespace

TEST_CASE("results CSV layout", "[report]") {
    Aggregate agg;
    agg.horizon = 2;
    agg.curves.push_back({"glr", {0.5, 1.25}, {0.0, 0.1}, 0.0});
    CHECK(export_csv(agg) == "t,glr_mean,glr_std\n1,0.5,0\n2,1.25,0.1\n");

    Aggregate empty;
    empty.horizon = 3;
    CHECK(export_csv(empty) == "t\n");
}

TEST_CASE("results CSV round-trips exactly", "[report][property]") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto agg = random_aggregate(rng, 1 + trial * 7, 1 + trial % 4);
        const auto text = export_csv(agg);
        const auto back = parse_results_csv(text);
        REQUIRE(back.horizon == agg.horizon);
        REQUIRE(back.curves.size() == agg.curves.size());
        for (std::size_t i = 0; i < agg.curves.size(); ++i) {
            REQUIRE(back.curves[i].label == agg.curves[i].label);
            REQUIRE(back.curves[i].mean == agg.curves[i].mean);
            REQUIRE(back.curves[i].std == agg.curves[i].std);
        }
        REQUIRE(export_csv(back) == text);
    }
}

TEST_CASE("results CSV parse errors", "[report]") {
    CHECK_THROWS_AS(parse_results_csv(""), ParseError);
    CHECK_THROWS_AS(parse_results_csv("t,a_mean\n"), ParseError);
    CHECK_THROWS_AS(parse_results_csv("t,a_mean,b_std\n"), ParseError);
    CHECK_THROWS_AS(parse_results_csv("t,a_mean,a_std\n1,0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_results_csv("t,a_mean,a_std\n2,0.5,0\n"), ParseError);
    CHECK_THROWS_AS(parse_results_csv("t,a_mean,a_std\n1,x,0\n"), ParseError);
}

TEST_CASE("SVG chart is well formed", "[report]") {
    std::mt19937_64 rng(43);
    const auto agg = random_aggregate(rng, 5000, 7);
    const auto svg = emit_svg(agg);
    CHECK(testing::xml_problem(svg).empty());
    CHECK(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    std::size_t polylines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++polylines;
    CHECK(polylines == 7);
    for (const auto& c : agg.curves) CHECK(svg.find(">" + c.label + "<") != std::string::npos);

    SvgOptions no_band;
    no_band.std_band = false;
    CHECK(emit_svg(agg, no_band).find("<polygon") == std::string::npos);
    CHECK_THROWS_AS(emit_svg(Aggregate{}), InvalidArgument);
}

TEST_CASE("SVG escapes labels", "[report]") {
    Aggregate agg;
    agg.horizon = 3;
    agg.curves.push_back({"a<b>&\"c\"", {0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}, 0.0});
    SvgOptions opt;
    opt.title = "R & D <test>";
    const auto svg = emit_svg(agg, opt);
    CHECK(testing::xml_problem(svg).empty());
    CHECK(svg.find("a&lt;b&gt;&amp;") != std::string::npos);
}

TEST_CASE("well-formedness checker rejects broken documents", "[report]") {
    CHECK(testing::xml_problem("<svg><g></svg>") != "");
    CHECK(testing::xml_problem("<svg></svg><svg></svg>") != "");
    CHECK(testing::xml_problem("<svg a=\"1></svg>") != "");
    CHECK(testing::xml_problem("<svg>&</svg>") != "");
    CHECK(testing::xml_problem("<?xml version=\"1.0\"?>\n<svg><g/></svg>\n").empty());
}
