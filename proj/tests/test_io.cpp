#include "catch_amalgamated.hpp"

#include <clocale>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "nlosc/io.hpp"
#include "nlosc/model.hpp"

using namespace nlosc;

TEST_CASE("format_double round-trips with 17 significant digits", "[io]") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(-2.0) == "-2");
    CHECK(io::format_double(1e-300) == "1e-300");  // %.17g drops the trailing zeros
    CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(io::format_double(NAN) == "nan");
    CHECK(io::format_double(INFINITY) == "inf");
    CHECK(io::format_double(-INFINITY) == "-inf");
    for (double v : {M_PI, -1.0 / 3.0, 6.02214076e23, 5e-324}) {
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);  // stod rejects denormals
    }
}

TEST_CASE("output ignores the C locale", "[io]") {
    const char* previous = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = previous ? previous : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8")) {
        CHECK(io::format_double(0.5) == "0.5");
    }
    std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("trajectory CSV layout", "[io]") {
    std::ostringstream out;
    io::write_trajectory_csv(out, {{0.0, 1.0, -0.5, 0.25}, {0.5, 0.75, -0.25, 0.25}});
    CHECK(out.str() == "t,x,xdot,E\n0,1,-0.5,0.25\n0.5,0.75,-0.25,0.25\n");
}

TEST_CASE("generic CSV and JSON emission", "[io]") {
    std::ostringstream csv;
    io::write_csv(csv, {"x", "V"}, {{0.0, 1.0}, {0.5, -0.5}});
    CHECK(csv.str() == "x,V\n0,0.5\n1,-0.5\n");
    std::ostringstream js;
    io::write_json(js, nlohmann::json{{"a", 1}});
    CHECK(js.str() == "{\n  \"a\": 1\n}\n");
}

TEST_CASE("grid specs", "[io]") {
    const io::GridSpec n = io::parse_grid("201");
    CHECK(n.n == 201);
    CHECK_FALSE(n.lo);
    const io::GridSpec full = io::parse_grid("-1.5:2:11");
    CHECK(*full.lo == -1.5);
    CHECK(*full.hi == 2.0);
    CHECK(full.n == 11);
    for (const char* bad : {"", "0", "abc", "1:2", "2:1:5", "1:2:3:4", "0:1:2.5", "0:nan:3"}) {
        INFO(bad);
        CHECK_THROWS_AS(io::parse_grid(bad), DomainError);
    }
}

TEST_CASE("linspace endpoints are exact", "[io]") {
    const std::vector<double> xs = io::linspace(0.1, 0.7, 7);
    CHECK(xs.size() == 7);
    CHECK(xs.front() == 0.1);
    CHECK(xs.back() == 0.7);
    CHECK(io::linspace(3.0, 4.0, 1) == std::vector<double>{3.0});
    CHECK(io::linspace(3.0, 4.0, 0).empty());
}
