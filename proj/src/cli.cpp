#include "rbc/cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rbc/bounds.hpp"
#include "rbc/prefme.hpp"

namespace rbc {
namespace {

using nlohmann::json;

const std::set<std::string> kCommands = {"table1", "corner", "region", "project",
                                         "verify"};
const std::set<std::string> kKnownKeys = {
    "command", "d",      "P",      "P1",    "g01",    "g02",   "g12",
    "rfb1",    "rfb2",   "bound",  "wyner_ziv", "region", "pmf",   "scheme",
    "trials",  "seed",   "output", "format"};

double parse_rate(const json& v, const std::string& key,
                  std::vector<std::string>& errors) {
    if (v.is_number()) {
        double x = v.get<double>();
        if (x < 0) errors.push_back(key + " must be nonnegative");
        return x;
    }
    if (v.is_string() && (v == "inf" || v == "infinity")) return kInf;
    errors.push_back(key + " must be a nonnegative number or \"inf\"");
    return kInf;
}

Scheme parse_scheme(const std::string& s, std::vector<std::string>& errors) {
    if (s == "scheme1") return Scheme::Scheme1;
    if (s == "scheme2a") return Scheme::Scheme2A;
    if (s == "scheme2b") return Scheme::Scheme2B;
    errors.push_back("unknown scheme id: " + s);
    return Scheme::Scheme1;
}

void write_artifact(const RunConfig& cfg, const std::string& text) {
    if (cfg.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + cfg.output_path);
    out << text;
    if (!out) throw DomainError("write failed: " + cfg.output_path);
}

JointPmf load_pmf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open pmf file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError("pmf file " + path + ": " + e.what());
    }
    return pmf_from_json(j);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int run_table1(const RunConfig& cfg) {
    GaussianRbcParams base;
    base.P = cfg.P;
    base.P1 = cfg.P1;
    base.rfb1 = cfg.rfb1;
    base.rfb2 = cfg.rfb2;
    auto rows = table1(cfg.d, base);
    write_artifact(cfg, cfg.format == OutputFormat::Csv ? table1_csv(rows)
                                                        : dump(to_json(rows)));
    return 0;
}

int run_corner(const RunConfig& cfg) {
    GaussianRbcParams p;
    if (cfg.explicit_gains) {
        p.g01 = cfg.g01;
        p.g02 = cfg.g02;
        p.g12 = cfg.g12;
        p.P = cfg.P;
        p.P1 = cfg.P1;
        p.rfb1 = cfg.rfb1;
        p.rfb2 = cfg.rfb2;
    } else {
        p = GaussianRbcParams::from_distance(cfg.d.at(0), cfg.P, cfg.P1, cfg.rfb1,
                                             cfg.rfb2);
    }
    BoundResult r;
    if (cfg.bound == "wu") r = wu_rate(p);
    else if (cfg.bound == "liang") r = liang_pdf_rate(p);
    else if (cfg.bound == "cf") r = cf_rate(p);
    else r = scheme1_rate(p, cfg.wyner_ziv);
    json j = to_json(r);
    j["bound"] = cfg.bound;
    if (cfg.format == OutputFormat::Csv) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s,%.4f\n", cfg.bound.c_str(), r.rate);
        write_artifact(cfg, "bound,rate\n" + std::string(buf));
    } else {
        write_artifact(cfg, dump(j));
    }
    return 0;
}

int run_region(const RunConfig& cfg) {
    JointPmf pmf = load_pmf(cfg.pmf_path);
    RegionSpec spec = build_region(*cfg.region);
    MIAssignment a = MIAssignment::from_pmf(pmf, spec.atoms());
    InstantiatedRegion inst = instantiate_region(spec, a, cfg.rfb1, cfg.rfb2);
    json j;
    j["region"] = region_name(*cfg.region);
    j["feasible"] = inst.feasible;
    j["template"] = to_json(spec);
    auto reduced = remove_redundant(inst.polytope);
    j["polytope"] = to_json(reduced);
    j["vertices"] = to_json(enumerate_vertices(reduced));
    j["assignment"] = to_json(a);
    write_artifact(cfg, dump(j));
    return 0;
}

int run_project(const RunConfig& cfg) {
    JointPmf pmf = load_pmf(cfg.pmf_path);
    std::set<MIAtom> atoms = scheme_atoms(cfg.scheme);
    MIAssignment a = MIAssignment::from_pmf(pmf, atoms);
    SchemeSystem sys = build_scheme_system(cfg.scheme, a, cfg.rfb1, cfg.rfb2);
    HalfspaceSystem proj = project_to_rates(sys);
    json j;
    j["scheme"] = scheme_name(cfg.scheme);
    j["polytope"] = to_json(proj);
    j["vertices"] = to_json(enumerate_vertices(proj));
    write_artifact(cfg, dump(j));
    return 0;
}

int run_verify(const RunConfig& cfg) {
    VerifyReport rep =
        verify_theorem(cfg.scheme, cfg.trials, cfg.seed, cfg.rfb1, cfg.rfb2);
    write_artifact(cfg, dump(to_json(rep)));
    return rep.mismatches.empty() ? 0 : 2;
}

}  // namespace

ParseOutcome parse_config(const std::string& text) {
    ParseOutcome out;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        out.errors.push_back(std::string("malformed JSON: ") + e.what());
        return out;
    }
    if (!j.is_object()) {
        out.errors.push_back("config must be a JSON object");
        return out;
    }
    auto& errors = out.errors;
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.count(key)) errors.push_back("unknown key: " + key);
    }

    RunConfig cfg;
    if (!j.contains("command")) {
        errors.push_back("missing required field: command");
    } else if (!j["command"].is_string() || !kCommands.count(j["command"])) {
        errors.push_back("command must be one of table1|corner|region|project|verify");
    } else {
        cfg.command = j["command"];
    }

    if (j.contains("d")) {
        if (j["d"].is_number()) {
            cfg.d = {j["d"].get<double>()};
        } else if (j["d"].is_array()) {
            for (const auto& v : j["d"]) {
                if (v.is_number()) cfg.d.push_back(v.get<double>());
                else errors.push_back("d entries must be numbers");
            }
        } else {
            errors.push_back("d must be a number or an array of numbers");
        }
        for (double d : cfg.d) {
            if (d == 0.0 || d == 1.0) errors.push_back("d must differ from 0 and 1");
        }
    }
    if (j.contains("P")) {
        cfg.P = j["P"].is_number() ? j["P"].get<double>() : -1.0;
        if (cfg.P < 0) errors.push_back("P must be a nonnegative number");
    }
    if (j.contains("P1")) {
        cfg.P1 = j["P1"].is_number() ? j["P1"].get<double>() : -1.0;
        if (cfg.P1 < 0) errors.push_back("P1 must be a nonnegative number");
    }
    int gains = 0;
    for (const char* g : {"g01", "g02", "g12"}) {
        if (j.contains(g)) {
            ++gains;
            if (!j[g].is_number()) errors.push_back(std::string(g) + " must be a number");
        }
    }
    if (gains == 3) {
        cfg.explicit_gains = true;
        cfg.g01 = j["g01"].get<double>();
        cfg.g02 = j["g02"].get<double>();
        cfg.g12 = j["g12"].get<double>();
    } else if (gains != 0) {
        errors.push_back("gains g01,g02,g12 must be given together");
    }
    if (j.contains("rfb1")) cfg.rfb1 = parse_rate(j["rfb1"], "rfb1", errors);
    if (j.contains("rfb2")) cfg.rfb2 = parse_rate(j["rfb2"], "rfb2", errors);
    if (j.contains("bound")) {
        cfg.bound = j["bound"].is_string() ? j["bound"].get<std::string>() : "";
        if (cfg.bound != "liang" && cfg.bound != "scheme1" && cfg.bound != "wu" &&
            cfg.bound != "cf")
            errors.push_back("bound must be one of liang|scheme1|wu|cf");
    }
    if (j.contains("wyner_ziv")) {
        if (j["wyner_ziv"].is_boolean()) cfg.wyner_ziv = j["wyner_ziv"];
        else errors.push_back("wyner_ziv must be a boolean");
    }
    if (j.contains("region")) {
        try {
            cfg.region = region_from_name(j["region"].get<std::string>());
        } catch (const std::exception&) {
            errors.push_back("unknown region id");
        }
    }
    if (j.contains("pmf")) {
        if (j["pmf"].is_string()) cfg.pmf_path = j["pmf"];
        else errors.push_back("pmf must be a file path string");
    }
    if (j.contains("scheme")) {
        if (j["scheme"].is_string()) cfg.scheme = parse_scheme(j["scheme"], errors);
        else errors.push_back("scheme must be a string");
    }
    if (j.contains("trials")) {
        cfg.trials = j["trials"].is_number_integer() ? j["trials"].get<int>() : 0;
        if (cfg.trials < 1) errors.push_back("trials must be a positive integer");
    }
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned() || j["seed"].is_number_integer())
            cfg.seed = j["seed"].get<std::uint64_t>();
        else
            errors.push_back("seed must be an unsigned integer");
    }
    if (j.contains("output")) {
        if (j["output"].is_string()) cfg.output_path = j["output"];
        else errors.push_back("output must be a file path string");
    }
    if (j.contains("format")) {
        std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
        if (f == "csv") cfg.format = OutputFormat::Csv;
        else if (f == "json") cfg.format = OutputFormat::Json;
        else errors.push_back("format must be csv or json");
    }

    // Per-command requirements.
    if (cfg.command == "table1" && cfg.d.empty())
        errors.push_back("table1 requires a nonempty d list");
    if (cfg.command == "corner") {
        if (cfg.bound.empty()) errors.push_back("corner requires bound");
        if (cfg.d.empty() && !cfg.explicit_gains)
            errors.push_back("corner requires d or explicit gains");
    }
    if (cfg.command == "region") {
        if (!cfg.region) errors.push_back("region requires a region id");
        if (cfg.pmf_path.empty()) errors.push_back("region requires a pmf file");
    }
    if (cfg.command == "project" && cfg.pmf_path.empty())
        errors.push_back("project requires a pmf file");

    if (errors.empty()) out.config = std::move(cfg);
    return out;
}

int dispatch(RunConfig cfg, const CliOverrides& overrides) {
    if (overrides.output_path) cfg.output_path = *overrides.output_path;
    if (overrides.format) cfg.format = *overrides.format;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.trials) cfg.trials = *overrides.trials;
    try {
        if (cfg.command == "table1") return run_table1(cfg);
        if (cfg.command == "corner") return run_corner(cfg);
        if (cfg.command == "region") return run_region(cfg);
        if (cfg.command == "project") return run_project(cfg);
        if (cfg.command == "verify") return run_verify(cfg);
        std::cerr << "unknown command: " << cfg.command << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rbc
