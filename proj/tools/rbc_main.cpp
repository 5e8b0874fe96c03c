#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rbc/cli.hpp"
#include "rbc/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
    CLI::App app{"Achievable rate regions for cooperative relay broadcast "
                 "channels with rate-limited feedback"};
    std::string config_path, output_path, format;
    std::uint64_t seed = 0;
    int trials = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--output", output_path, "output file (default: stdout)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed, "base RNG seed");
    auto* trials_opt = app.add_option("--trials", trials, "verification trials");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    omp_set_num_threads(rbc::max_threads());
#endif

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config file: " << config_path << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    auto parsed = rbc::parse_config(buf.str());
    if (!parsed.config) {
        for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
        return 1;
    }

    rbc::CliOverrides ov;
    if (!output_path.empty()) ov.output_path = output_path;
    if (!format.empty())
        ov.format = format == "csv" ? rbc::OutputFormat::Csv : rbc::OutputFormat::Json;
    if (seed_opt->count() > 0) ov.seed = seed;
    if (trials_opt->count() > 0) ov.trials = trials;
    return rbc::dispatch(*parsed.config, ov);
}
