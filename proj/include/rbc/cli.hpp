#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbc/common.hpp"
#include "rbc/prob.hpp"
#include "rbc/regions.hpp"

namespace rbc {

enum class OutputFormat { Csv, Json };

// Validated run description. parse_config reports every validation problem,
// not just the first.
struct RunConfig {
    std::string command;  // table1 | corner | region | project | verify
    std::vector<double> d;
    double P = 5.0, P1 = 1.0;
    double g01 = 0.0, g02 = 0.0, g12 = 0.0;  // explicit gains (corner/table1)
    bool explicit_gains = false;
    double rfb1 = kInf, rfb2 = kInf;
    std::string bound;                 // corner: liang | scheme1 | wu | cf
    bool wyner_ziv = false;            // corner scheme1: relaxed feedback atom
    std::optional<RegionId> region;    // region subcommand
    std::string pmf_path;              // region / project input
    Scheme scheme = Scheme::Scheme1;   // project / verify
    int trials = 100;
    std::uint64_t seed = 0;
    std::string output_path;           // empty: stdout
    OutputFormat format = OutputFormat::Json;
};

struct ParseOutcome {
    std::optional<RunConfig> config;
    std::vector<std::string> errors;  // all problems found
};

ParseOutcome parse_config(const std::string& text);

struct CliOverrides {
    std::optional<std::string> output_path;
    std::optional<OutputFormat> format;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
};

// Runs the configured command and writes its artifact. Exit status:
// 0 success, 2 verification mismatches found, 1 error.
int dispatch(RunConfig cfg, const CliOverrides& overrides = {});

}  // namespace rbc
