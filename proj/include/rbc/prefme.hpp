#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rbc/common.hpp"
#include "rbc/parallel.hpp"
#include "rbc/polytope.hpp"
#include "rbc/prob.hpp"
#include "rbc/regions.hpp"

namespace rbc {

// Pre-elimination achievability system of one scheme: all auxiliary rate
// variables, the message-split equalities R_k = Rc_k + Rp_k, and
// nonnegativity for every variable.
struct SchemeSystem {
    Scheme scheme = Scheme::Scheme1;
    HalfspaceSystem sys;
    MIAssignment assignment;
    double rfb1 = kInf, rfb2 = kInf;
};

// Atoms referenced by the scheme's constraint rows.
std::set<MIAtom> scheme_atoms(Scheme s);

// Region template validated by each scheme's projection.
RegionId scheme_region(Scheme s);

// Auxiliary variables in the fixed elimination order.
std::vector<RateVar> elimination_order(Scheme s);

SchemeSystem build_scheme_system(Scheme s, const MIAssignment& a,
                                 double rfb1, double rfb2);

// Eliminate every auxiliary variable (redundancy removal interleaved) and
// restrict to the nonnegative orthant of (R0,R1,R2).
HalfspaceSystem project_to_rates(const SchemeSystem& s);

enum class Verdict { Equal, ProjectionLarger, TheoremLarger, Mixed };

const char* verdict_name(Verdict v);

struct Mismatch {
    int trial = 0;
    std::uint64_t pmf_seed = 0;
    Verdict direction = Verdict::Equal;
    bool sound = true;  // theorem region contained in projection
    std::optional<std::vector<double>> witness;
    double support_gap = 0.0;
    std::string explanation;
    std::string error;             // set when the trial itself failed
    double covering_excess = 0.0;  // > 0 when the scheme system is infeasible
                                   // because the covering row cannot be met
    // Facet certificate for containment violations with a feasible
    // projection: the projection inequality most violated at the witness.
    std::vector<double> violated_coeffs;
    double violated_rhs = 0.0;
    double violation = 0.0;
};

struct VerifyReport {
    Scheme scheme = Scheme::Scheme1;
    int trials = 0;
    std::uint64_t seed = 0;
    double rfb1 = kInf, rfb2 = kInf;
    std::vector<Verdict> verdicts;   // per trial
    std::vector<Mismatch> mismatches;
    int equal_count = 0;
    bool all_sound = true;

    bool unexplained() const;  // any mismatch without an explanation
};

// Draw `trials` structured pmfs (per-trial seed = seed + index), project each
// scheme system, compare against the instantiated theorem region at 1e-8, and
// certify containment. Mismatches are findings, not failures.
VerifyReport verify_theorem(Scheme s, int trials, std::uint64_t seed,
                            double rfb1 = kInf, double rfb2 = kInf,
                            Exec exec = Exec::Parallel);

nlohmann::json to_json(const VerifyReport& r);

}  // namespace rbc
