#include "rbc/regions.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rbc/common.hpp"

namespace rbc {
namespace {

using V = std::vector<VariableId>;

MIAtom atom(V l, V r, V c = {}) { return MIAtom(std::move(l), std::move(r), std::move(c)); }

AffineAtoms lin(std::vector<std::pair<double, MIAtom>> terms, double constant = 0.0) {
    AffineAtoms a;
    a.terms = std::move(terms);
    a.constant = constant;
    return a;
}

MIExpr expr(AffineAtoms base, std::vector<AffineAtoms> mins = {}) {
    MIExpr e;
    e.base = std::move(base);
    e.min_terms = std::move(mins);
    return e;
}

VariableId swap12(const VariableId& v) {
    if (v == "U1") return "U2";
    if (v == "U2") return "U1";
    if (v == "X1") return "X2";
    if (v == "X2") return "X1";
    if (v == "Y1") return "Y2";
    if (v == "Y2") return "Y1";
    if (v == "Yh1") return "Yh2";
    if (v == "Yh2") return "Yh1";
    return v;
}

MIAtom swap12(const MIAtom& a) {
    auto m = [](const V& in) {
        V out;
        out.reserve(in.size());
        for (const auto& v : in) out.push_back(swap12(v));
        return out;
    };
    return MIAtom(m(a.left), m(a.right), m(a.cond));
}

AffineAtoms swap12(const AffineAtoms& a) {
    AffineAtoms out;
    for (const auto& [c, at] : a.terms) out.terms.emplace_back(c, swap12(at));
    out.coef_rfb1 = a.coef_rfb2;
    out.coef_rfb2 = a.coef_rfb1;
    out.constant = a.constant;
    return out;
}

}  // namespace

double MIAssignment::at(const MIAtom& a) const {
    auto it = values.find(a);
    if (it == values.end()) throw DomainError("MIAssignment: missing atom " + a.str());
    return it->second;
}

MIAssignment MIAssignment::from_pmf(const JointPmf& p, const std::set<MIAtom>& atoms) {
    MIAssignment out;
    out.source = "pmf";
    for (const auto& a : atoms) out.values[a] = cond_mutual_information(p, a);
    return out;
}

MIAssignment MIAssignment::from_gaussian(const GaussianSystem& g,
                                         const std::set<MIAtom>& atoms) {
    MIAssignment out;
    out.source = "gaussian";
    for (const auto& a : atoms) out.values[a] = gaussian_cond_mi(g, a);
    return out;
}

double AffineAtoms::eval(const MIAssignment& a, double rfb1, double rfb2) const {
    double v = constant;
    for (const auto& [c, at] : terms) v += c * a.at(at);
    if (coef_rfb1 != 0.0) v += coef_rfb1 * rfb1;
    if (coef_rfb2 != 0.0) v += coef_rfb2 * rfb2;
    return v;
}

void AffineAtoms::collect_atoms(std::set<MIAtom>& out) const {
    for (const auto& [c, at] : terms) out.insert(at);
}

double MIExpr::eval(const MIAssignment& a, double rfb1, double rfb2) const {
    double v = base.eval(a, rfb1, rfb2);
    for (const auto& m : min_terms) v += std::min(0.0, m.eval(a, rfb1, rfb2));
    return v;
}

void MIExpr::collect_atoms(std::set<MIAtom>& out) const {
    base.collect_atoms(out);
    for (const auto& m : min_terms) m.collect_atoms(out);
}

const char* region_name(RegionId id) {
    switch (id) {
        case RegionId::Theorem1: return "theorem1";
        case RegionId::Theorem2: return "theorem2";
        case RegionId::Theorem3v1: return "theorem3v1";
        case RegionId::Theorem3v2: return "theorem3v2";
        case RegionId::Liang: return "liang";
        case RegionId::Wu: return "wu";
    }
    return "?";
}

RegionId region_from_name(const std::string& name) {
    for (RegionId id : {RegionId::Theorem1, RegionId::Theorem2, RegionId::Theorem3v1,
                        RegionId::Theorem3v2, RegionId::Liang, RegionId::Wu}) {
        if (name == region_name(id)) return id;
    }
    throw DomainError("unknown region id: " + name);
}

std::set<MIAtom> RegionSpec::atoms() const {
    std::set<MIAtom> out;
    for (const auto& r : rows) r.rhs.collect_atoms(out);
    for (const auto& f : feasibility) f.lhs.collect_atoms(out);
    return out;
}

RegionSpec build_region(RegionId id) {
    RegionSpec spec;
    spec.id = id;
    spec.rate_vars = {"R0", "R1", "R2"};

    switch (id) {
        case RegionId::Theorem1: {
            MIAtom B1 = atom({"U0", "U1"}, {"Y1"}, {"X1"});
            MIAtom A2 = atom({"U0", "U2", "X1"}, {"Y2"});
            MIAtom A3 = atom({"Yh1"}, {"Y1"}, {"U0", "U2", "X1", "Y2"});
            MIAtom b1 = atom({"U1"}, {"Y1"}, {"U0", "X1"});
            MIAtom a = atom({"U1"}, {"U2"}, {"U0", "X1"});
            MIAtom d2 = atom({"U2"}, {"Yh1", "Y2"}, {"U0", "X1"});
            spec.rows = {
                {{1, 1, 0}, expr(lin({{1, B1}}))},
                {{1, 0, 1}, expr(lin({{1, A2}, {-1, A3}}))},
                {{1, 1, 1}, expr(lin({{1, b1}, {1, A2}, {-1, A3}, {-1, a}}))},
                {{1, 1, 1}, expr(lin({{1, B1}, {1, d2}, {-1, a}}))},
                {{2, 1, 1}, expr(lin({{1, B1}, {1, A2}, {-1, A3}, {-1, a}}))},
            };
            spec.feasibility = {{lin({{1, atom({"Yh1"}, {"Y1"}, {"U0", "X1"})}}), 1}};
            break;
        }
        case RegionId::Liang: {
            MIAtom B1 = atom({"U0", "U1"}, {"Y1"}, {"X1"});
            MIAtom A2 = atom({"U0", "U2", "X1"}, {"Y2"});
            MIAtom b1 = atom({"U1"}, {"Y1"}, {"U0", "X1"});
            MIAtom a = atom({"U1"}, {"U2"}, {"U0", "X1"});
            MIAtom c2 = atom({"U2"}, {"Y2"}, {"U0", "X1"});
            spec.rows = {
                {{1, 1, 0}, expr(lin({{1, B1}}))},
                {{1, 0, 1}, expr(lin({{1, A2}}))},
                {{1, 1, 1}, expr(lin({{1, b1}, {1, A2}, {-1, a}}))},
                {{1, 1, 1}, expr(lin({{1, B1}, {1, c2}, {-1, a}}))},
                {{2, 1, 1}, expr(lin({{1, B1}, {1, A2}, {-1, a}}))},
            };
            break;
        }
        case RegionId::Theorem2: {
            V c12 = {"X1", "X2"};
            MIAtom B1 = atom({"U0", "U1"}, {"Yh2", "Y1"}, c12);
            MIAtom B2 = atom({"U0", "U2"}, {"Yh1", "Y2"}, c12);
            MIAtom C1 = atom({"U2"}, {"Y2", "Yh1"}, {"U0", "X1", "X2"});
            MIAtom C2 = atom({"U1"}, {"Y1", "Yh2"}, {"U0", "X1", "X2"});
            MIAtom M = atom({"U1"}, {"U2"}, {"U0", "X1", "X2"});
            AffineAtoms d1 = lin({{1, atom({"X2"}, {"Y1"}, {"X1"})},
                                  {-1, atom({"Yh2"}, {"Y2"}, {"X1", "X2", "Y1"})}});
            AffineAtoms d2 = lin({{1, atom({"X1"}, {"Y2"}, {"X2"})},
                                  {-1, atom({"Yh1"}, {"Y1"}, {"X1", "X2", "Y2"})}});
            spec.rows = {
                {{1, 1, 0}, expr(lin({{1, B1}}), {d1})},
                {{1, 0, 1}, expr(lin({{1, B2}}), {d2})},
                {{1, 1, 1}, expr(lin({{1, B1}, {1, C1}, {-1, M}}), {d1})},
                {{1, 1, 1}, expr(lin({{1, B2}, {1, C2}, {-1, M}}), {d2})},
                {{2, 1, 1}, expr(lin({{1, B1}, {1, B2}, {-1, M}}), {d1, d2})},
            };
            spec.feasibility = {{lin({{1, atom({"Yh1"}, {"Y1"}, {"X1"})}}), 1},
                                {lin({{1, atom({"Yh2"}, {"Y2"}, {"X2"})}}), 2}};
            break;
        }
        case RegionId::Theorem3v1: {
            V u012 = {"U0", "X1", "X2"};
            MIAtom T0 = atom({"U0"}, {"Y1"}, {"X1", "X2"});
            MIAtom TB = atom({"U0", "U2", "X1"}, {"Y2"}, {"X2"});
            MIAtom TC = atom({"Yh1"}, {"Y1"}, {"U0", "U2", "X1", "X2", "Y2"});
            MIAtom M = atom({"U1"}, {"U2"}, {"U0", "X1", "X2"});
            MIAtom I1b = atom({"U1"}, {"Yh2", "Y1"}, u012);
            MIAtom I2b = atom({"U2"}, {"Yh1", "Y2"}, u012);
            MIAtom fb1 = atom({"Yh1"}, {"Y1"}, {"U0", "X1", "X2", "Y2"});
            MIAtom fb2 = atom({"Yh2"}, {"Y2"}, {"U0", "X1", "X2", "Y1"});
            AffineAtoms delta = lin({{1, atom({"X2"}, {"Y1"}, {"X1"})}, {-1, fb2}});
            // I1 and I2 carry a min{0, rfb - .} correction each.
            AffineAtoms i1corr = lin({{-1, fb2}});
            i1corr.coef_rfb2 = 1.0;
            AffineAtoms i2corr = lin({{-1, fb1}});
            i2corr.coef_rfb1 = 1.0;
            spec.rows = {
                {{1, 0, 0}, expr(lin({{1, T0}}), {delta})},
                {{1, 1, 0}, expr(lin({{1, T0}, {1, I1b}}), {delta, i1corr})},
                {{1, 0, 1}, expr(lin({{1, T0}, {1, I2b}}), {delta, i2corr})},
                {{1, 0, 1}, expr(lin({{1, TB}, {-1, TC}}))},
                {{1, 1, 1}, expr(lin({{1, T0}, {1, TB}, {-1, TC}, {-1, M}}), {delta})},
                {{1, 1, 1},
                 expr(lin({{1, T0}, {1, I1b}, {1, I2b}, {-1, M}}), {delta, i1corr, i2corr})},
            };
            spec.feasibility = {{lin({{1, fb1}}), 1}, {lin({{1, fb2}}), 2}};
            break;
        }
        case RegionId::Theorem3v2: {
            RegionSpec v1 = build_region(RegionId::Theorem3v1);
            spec.rows.reserve(v1.rows.size());
            for (const auto& row : v1.rows) {
                RateRow r;
                // Swap the R1 and R2 coefficients along with the indices.
                r.rate_coeffs = {row.rate_coeffs[0], row.rate_coeffs[2],
                                 row.rate_coeffs[1]};
                r.rhs.base = swap12(row.rhs.base);
                for (const auto& m : row.rhs.min_terms)
                    r.rhs.min_terms.push_back(swap12(m));
                spec.rows.push_back(std::move(r));
            }
            for (const auto& f : v1.feasibility)
                spec.feasibility.push_back({swap12(f.lhs), f.which_rfb == 1 ? 2 : 1});
            break;
        }
        case RegionId::Wu: {
            spec.rate_vars = {"R1", "R2"};
            MIAtom W1 = atom({"U0", "U1"}, {"Y1", "Yh2"});
            MIAtom W2 = atom({"U0", "U2"}, {"Y2", "Yh1"});
            MIAtom w1 = atom({"Yh2"}, {"Y2"}, {"Y1"});
            MIAtom w2 = atom({"Yh1"}, {"Y1"}, {"Y2"});
            MIAtom WC1 = atom({"U2"}, {"Y2", "Yh1"}, {"U0"});
            MIAtom WC2 = atom({"U1"}, {"Y1", "Yh2"}, {"U0"});
            MIAtom WM = atom({"U1"}, {"U2"}, {"U0"});
            spec.rows = {
                {{1, 0}, expr(lin({{1, W1}, {-1, w1}}))},
                {{0, 1}, expr(lin({{1, W2}, {-1, w2}}))},
                {{1, 1}, expr(lin({{1, W1}, {-1, w1}, {1, WC1}, {-1, WM}}))},
                {{1, 1}, expr(lin({{1, W2}, {-1, w2}, {1, WC2}, {-1, WM}}))},
                {{1, 1}, expr(lin({{1, W1}, {-1, w1}, {1, W2}, {-1, w2}, {-1, WM}}))},
            };
            spec.feasibility = {{lin({{1, w2}}), 1}, {lin({{1, w1}}), 2}};
            break;
        }
    }
    return spec;
}

RegionSpec relaxed_feedback_constraint(const RegionSpec& spec) {
    if (spec.id != RegionId::Theorem1)
        throw DomainError("relaxed_feedback_constraint: only theorem1 supported");
    RegionSpec out = spec;
    out.feasibility = {{lin({{1, atom({"Yh1"}, {"Y1"}, {"U0", "X1", "Y2"})}}), 1}};
    return out;
}

InstantiatedRegion instantiate_region(const RegionSpec& spec, const MIAssignment& a,
                                      double rfb1, double rfb2) {
    InstantiatedRegion out;
    out.polytope.vars = spec.rate_vars;
    const std::size_t d = spec.rate_vars.size();
    for (const auto& row : spec.rows) {
        out.polytope.add(row.rate_coeffs, Rel::Le, row.rhs.eval(a, rfb1, rfb2));
    }
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> c(d, 0.0);
        c[j] = -1.0;
        out.polytope.add(std::move(c), Rel::Le, 0.0);
    }
    out.polytope.canonicalize();
    for (const auto& f : spec.feasibility) {
        double cap = f.which_rfb == 1 ? rfb1 : rfb2;
        if (std::isinf(cap)) continue;
        if (f.lhs.eval(a, rfb1, rfb2) > cap) out.feasible = false;
    }
    return out;
}

nlohmann::json to_json(const MIAtom& a) {
    return {{"left", a.left}, {"right", a.right}, {"cond", a.cond}};
}

static nlohmann::json affine_json(const AffineAtoms& a) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [c, at] : a.terms) terms.push_back({{"coef", c}, {"atom", to_json(at)}});
    nlohmann::json j{{"terms", terms}};
    if (a.coef_rfb1 != 0.0) j["coef_rfb1"] = a.coef_rfb1;
    if (a.coef_rfb2 != 0.0) j["coef_rfb2"] = a.coef_rfb2;
    if (a.constant != 0.0) j["constant"] = a.constant;
    return j;
}

nlohmann::json to_json(const RegionSpec& spec) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : spec.rows) {
        nlohmann::json mins = nlohmann::json::array();
        for (const auto& m : r.rhs.min_terms) mins.push_back(affine_json(m));
        rows.push_back({{"rate_coeffs", r.rate_coeffs},
                        {"rhs", affine_json(r.rhs.base)},
                        {"min_terms", mins}});
    }
    nlohmann::json feas = nlohmann::json::array();
    for (const auto& f : spec.feasibility)
        feas.push_back({{"lhs", affine_json(f.lhs)}, {"rfb", f.which_rfb}});
    return {{"region", region_name(spec.id)},
            {"rate_vars", spec.rate_vars},
            {"rows", rows},
            {"feasibility", feas}};
}

nlohmann::json to_json(const MIAssignment& a) {
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [at, v] : a.values) values[at.str()] = v;
    return {{"source", a.source}, {"values", values}};
}

}  // namespace rbc
