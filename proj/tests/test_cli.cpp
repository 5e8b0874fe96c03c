#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rbc/cli.hpp"
#include "rbc/polytope.hpp"

using namespace rbc;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Single-cell pmf over the scheme-1 variables: every atom evaluates to zero.
std::string point_mass_pmf_json() {
    nlohmann::json vars = nlohmann::json::array();
    for (const char* n : {"U0", "U1", "U2", "X1", "Y1", "Y2", "Yh1"})
        vars.push_back({{"name", n}, {"size", 1}});
    nlohmann::json j{{"variables", vars}, {"probs", {1.0}}};
    return j.dump();
}

}  // namespace

TEST_CASE("parse_config accepts the reference table configuration") {
    auto out = parse_config(
        R"({"command":"table1","d":[0.73,0.74,0.75,0.76],"P":5,"P1":1})");
    REQUIRE(out.config.has_value());
    CHECK(out.errors.empty());
    CHECK(out.config->d.size() == 4);
    CHECK(out.config->P == 5.0);
}

TEST_CASE("parse_config rejects singular positions") {
    auto out = parse_config(R"({"command":"table1","d":[1.0]})");
    CHECK(!out.config.has_value());
    bool found = false;
    for (const auto& e : out.errors)
        if (e.find("differ from 0 and 1") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("parse_config lists every problem in an empty document") {
    auto out = parse_config("{}");
    CHECK(!out.config.has_value());
    REQUIRE(!out.errors.empty());
    CHECK(out.errors[0].find("command") != std::string::npos);
}

TEST_CASE("parse_config accumulates multiple errors") {
    auto out = parse_config(
        R"({"command":"table1","d":[1.0],"P":-3,"mystery":1,"format":"xml"})");
    CHECK(!out.config.has_value());
    CHECK(out.errors.size() >= 4);
}

TEST_CASE("parse_config rejects malformed JSON and unknown scheme ids") {
    CHECK(!parse_config("{not json").config.has_value());
    auto out = parse_config(R"({"command":"verify","scheme":"scheme9"})");
    CHECK(!out.config.has_value());
}

TEST_CASE("parse_config understands infinite feedback rates") {
    auto out = parse_config(
        R"({"command":"corner","bound":"scheme1","d":0.74,"rfb1":"inf"})");
    REQUIRE(out.config.has_value());
    CHECK(std::isinf(out.config->rfb1));
    auto bad = parse_config(
        R"({"command":"corner","bound":"scheme1","d":0.74,"rfb1":-2})");
    CHECK(!bad.config.has_value());
}

TEST_CASE("region subcommand on a point-mass pmf pins the origin") {
    auto pmf_path = temp_path("zero_pmf.json");
    auto out_path = temp_path("region_out.json");
    write_file(pmf_path, point_mass_pmf_json());
    auto parsed = parse_config(R"({"command":"region","region":"theorem1","pmf":")" +
                               pmf_path + R"("})");
    REQUIRE(parsed.config.has_value());
    CliOverrides ov;
    ov.output_path = out_path;
    REQUIRE(dispatch(*parsed.config, ov) == 0);

    auto j = nlohmann::json::parse(read_file(out_path));
    CHECK(j.at("feasible") == true);
    REQUIRE(j.at("vertices").at("points").size() == 1);
    for (double c : j.at("vertices").at("points")[0])
        CHECK(c == doctest::Approx(0.0));

    // Emitted polytope JSON round-trips through the system serializer.
    auto sys = system_from_json(j.at("polytope"));
    CHECK(to_json(sys) == j.at("polytope"));
    std::remove(pmf_path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("project subcommand emits a polytope for a structured pmf") {
    auto pmf_path = temp_path("proj_pmf.json");
    auto out_path = temp_path("proj_out.json");
    StructuredFamilySpec f;
    f.scheme = Scheme::Scheme1;
    f.seed = 5;
    write_file(pmf_path, to_json(random_structured_pmf(f)).dump());
    auto parsed = parse_config(R"({"command":"project","scheme":"scheme1","pmf":")" +
                               pmf_path + R"("})");
    REQUIRE(parsed.config.has_value());
    CliOverrides ov;
    ov.output_path = out_path;
    REQUIRE(dispatch(*parsed.config, ov) == 0);
    auto j = nlohmann::json::parse(read_file(out_path));
    CHECK(j.at("scheme") == "scheme1");
    CHECK(j.at("polytope").at("variables") ==
          nlohmann::json::array({"R0", "R1", "R2"}));
    std::remove(pmf_path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("verify subcommand writes a report and repeat runs are identical") {
    auto out1 = temp_path("verify1.json");
    auto out2 = temp_path("verify2.json");
    auto parsed = parse_config(
        R"({"command":"verify","scheme":"scheme1","trials":6,"seed":11})");
    REQUIRE(parsed.config.has_value());
    CliOverrides ov;
    ov.output_path = out1;
    int rc1 = dispatch(*parsed.config, ov);
    ov.output_path = out2;
    int rc2 = dispatch(*parsed.config, ov);
    CHECK(rc1 == rc2);
    CHECK((rc1 == 0 || rc1 == 2));
    CHECK(read_file(out1) == read_file(out2));
    auto j = nlohmann::json::parse(read_file(out1));
    CHECK(j.at("trials") == 6);
    CHECK((rc1 == 2) == !j.at("mismatches").empty());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("corner subcommand emits csv when asked") {
    auto out_path = temp_path("corner.csv");
    auto parsed = parse_config(
        R"({"command":"corner","bound":"wu","d":0.74,"P":5,"P1":1,"format":"csv"})");
    REQUIRE(parsed.config.has_value());
    CliOverrides ov;
    ov.output_path = out_path;
    REQUIRE(dispatch(*parsed.config, ov) == 0);
    auto text = read_file(out_path);
    CHECK(text.find("bound,rate") == 0);
    CHECK(text.find("wu,1.2925") != std::string::npos);
    std::remove(out_path.c_str());
}

TEST_CASE("dispatch surfaces missing input files with path context") {
    auto parsed = parse_config(
        R"({"command":"region","region":"liang","pmf":"no_such_file.json"})");
    REQUIRE(parsed.config.has_value());
    CHECK(dispatch(*parsed.config) == 1);
}

TEST_CASE("corner accepts explicit gains and the wyner-ziv flag") {
    auto out_path = temp_path("corner_gains.json");
    auto parsed = parse_config(
        R"({"command":"corner","bound":"scheme1","g01":1.3333,"g02":1.0,)"
        R"("g12":4.0,"P":5,"P1":1,"rfb1":0.2,"wyner_ziv":true})");
    REQUIRE(parsed.config.has_value());
    CHECK(parsed.config->explicit_gains);
    CliOverrides ov;
    ov.output_path = out_path;
    REQUIRE(dispatch(*parsed.config, ov) == 0);
    auto j = nlohmann::json::parse(read_file(out_path));
    CHECK(j.at("rate").get<double>() > 0.0);
    std::remove(out_path.c_str());
    auto partial = parse_config(R"({"command":"corner","bound":"wu","g01":1.0})");
    CHECK(!partial.config.has_value());
}
