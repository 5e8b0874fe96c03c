#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rbc/gauss.hpp"
#include "rbc/polytope.hpp"
#include "rbc/prob.hpp"

namespace rbc {

// Numeric values for a set of MI atoms, the bridge between a distribution
// and a rate polytope.
struct MIAssignment {
    std::map<MIAtom, double> values;  // bits, all >= 0
    std::string source;               // "pmf" or "gaussian"

    double at(const MIAtom& a) const;
    static MIAssignment from_pmf(const JointPmf& p, const std::set<MIAtom>& atoms);
    static MIAssignment from_gaussian(const GaussianSystem& g,
                                      const std::set<MIAtom>& atoms);
};

// Affine expression over atoms with optional feedback-rate slots:
// sum(coef * atom) + coef_rfb1 * rfb1 + coef_rfb2 * rfb2 + constant.
struct AffineAtoms {
    std::vector<std::pair<double, MIAtom>> terms;
    double coef_rfb1 = 0.0, coef_rfb2 = 0.0;
    double constant = 0.0;

    double eval(const MIAssignment& a, double rfb1, double rfb2) const;
    void collect_atoms(std::set<MIAtom>& out) const;
};

// base + sum of min{0, m_i} pieces (the Delta / I1 / I2 shapes).
struct MIExpr {
    AffineAtoms base;
    std::vector<AffineAtoms> min_terms;

    double eval(const MIAssignment& a, double rfb1, double rfb2) const;
    void collect_atoms(std::set<MIAtom>& out) const;
};

enum class RegionId { Theorem1, Theorem2, Theorem3v1, Theorem3v2, Liang, Wu };

const char* region_name(RegionId id);
RegionId region_from_name(const std::string& name);

struct RateRow {
    std::vector<double> rate_coeffs;  // over the region's rate variables
    MIExpr rhs;
};

struct FeasibilityRow {
    AffineAtoms lhs;
    int which_rfb = 1;  // lhs <= rfb{which}
};

// Symbolic inequality template for one achievable region.
struct RegionSpec {
    RegionId id = RegionId::Liang;
    std::vector<RateVar> rate_vars;  // (R0,R1,R2), or (R1,R2) for Wu
    std::vector<RateRow> rows;
    std::vector<FeasibilityRow> feasibility;

    std::set<MIAtom> atoms() const;
};

struct InstantiatedRegion {
    HalfspaceSystem polytope;  // rate rows + nonnegativity
    bool feasible = true;      // all feedback constraints satisfied
};

RegionSpec build_region(RegionId id);

// Swap the theorem1 feasibility atom for its Wyner-Ziv relaxation
// (conditioning additionally on Y2). Idempotent.
RegionSpec relaxed_feedback_constraint(const RegionSpec& spec);

InstantiatedRegion instantiate_region(const RegionSpec& spec,
                                      const MIAssignment& a,
                                      double rfb1, double rfb2);

nlohmann::json to_json(const RegionSpec& spec);
nlohmann::json to_json(const MIAssignment& a);

}  // namespace rbc
