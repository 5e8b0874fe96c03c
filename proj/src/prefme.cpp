#include "rbc/prefme.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rbc/common.hpp"
#include "rbc/lp.hpp"

namespace rbc {
namespace {

using V = std::vector<VariableId>;
using Lhs = std::vector<std::pair<RateVar, double>>;

MIAtom atom(V l, V r, V c = {}) {
    return MIAtom(std::move(l), std::move(r), std::move(c));
}

// One achievability constraint: sum(lhs) <= sum(coef*atom), or >= when ge.
struct RowSpec {
    Lhs lhs;
    std::vector<std::pair<double, MIAtom>> rhs;
    bool ge = false;
};

Lhs plus(Lhs base, const Lhs& extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

// Common-message aggregate Rc = R0 + Rc1 + Rc2, substituted into every row
// that the schemes state in terms of Rc.
const Lhs kRc = {{"R0", 1}, {"Rc1", 1}, {"Rc2", 1}};

std::vector<RateVar> scheme_vars(Scheme s) {
    std::vector<RateVar> v = {"R0", "Rc1", "Rc2", "Rp1", "Rp2", "Rpr1", "Rpr2", "Rh1"};
    if (s != Scheme::Scheme1) v.push_back("Rh2");
    if (s == Scheme::Scheme2B) {
        v.push_back("Rt1");
        v.push_back("Rt2");
    }
    v.push_back("R1");
    v.push_back("R2");
    return v;
}

std::vector<RowSpec> scheme_rows(Scheme s) {
    std::vector<RowSpec> rows;
    switch (s) {
        case Scheme::Scheme1: {
            // Marton covering, then Receiver 1's decode/compress rows and
            // Receiver 2's backward-decoding rows.
            rows.push_back({{{"Rpr1", 1}, {"Rpr2", 1}},
                            {{1, atom({"U1"}, {"U2"}, {"U0", "X1"})}},
                            true});
            rows.push_back({{{"Rp1", 1}, {"Rpr1", 1}},
                            {{1, atom({"U1"}, {"Y1"}, {"U0", "X1"})}}});
            rows.push_back({plus({{"Rp1", 1}, {"Rpr1", 1}}, kRc),
                            {{1, atom({"U0", "U1"}, {"Y1"}, {"X1"})}}});
            rows.push_back({{{"Rh1", 1}},
                            {{1, atom({"Yh1"}, {"Y1"}, {"U0", "X1"})}},
                            true});
            rows.push_back({{{"Rp2", 1}, {"Rpr2", 1}},
                            {{1, atom({"U2"}, {"Y2", "Yh1"}, {"U0", "X1"})}}});
            rows.push_back({plus({{"Rp2", 1}, {"Rpr2", 1}, {"Rh1", 1}}, kRc),
                            {{1, atom({"U0", "U2", "X1"}, {"Y2"})},
                             {1, atom({"Yh1"}, {"U2", "Y2"}, {"U0", "X1"})}}});
            break;
        }
        case Scheme::Scheme2A: {
            V c12 = {"U0", "X1", "X2"};
            rows.push_back({{{"Rpr1", 1}, {"Rpr2", 1}},
                            {{1, atom({"U1"}, {"U2"}, {"U0", "X1", "X2"})}},
                            true});
            rows.push_back({{{"Rh1", 1}}, {{1, atom({"Yh1"}, {"Y1"}, {"X1"})}}, true});
            rows.push_back({{{"Rh2", 1}}, {{1, atom({"Yh2"}, {"Y2"}, {"X2"})}}, true});
            rows.push_back({{{"Rp1", 1}, {"Rpr1", 1}},
                            {{1, atom({"U1"}, {"Y1", "Yh2"}, c12)}}});
            rows.push_back({{{"Rp2", 1}, {"Rpr2", 1}},
                            {{1, atom({"U2"}, {"Y2", "Yh1"}, c12)}}});
            rows.push_back({plus({{"Rp1", 1}, {"Rpr1", 1}}, kRc),
                            {{1, atom({"U0", "U1"}, {"Yh2", "Y1"}, {"X1", "X2"})}}});
            rows.push_back({plus({{"Rp2", 1}, {"Rpr2", 1}}, kRc),
                            {{1, atom({"U0", "U2"}, {"Yh1", "Y2"}, {"X1", "X2"})}}});
            rows.push_back({plus({{"Rp1", 1}, {"Rpr1", 1}, {"Rh2", 1}}, kRc),
                            {{1, atom({"U0", "U1", "X2"}, {"Y1"}, {"X1"})},
                             {1, atom({"Yh2"}, {"U0", "U1", "Y1", "X1"}, {"X2"})}}});
            rows.push_back({plus({{"Rp2", 1}, {"Rpr2", 1}, {"Rh1", 1}}, kRc),
                            {{1, atom({"U0", "U2", "X1"}, {"Y2"}, {"X2"})},
                             {1, atom({"Yh1"}, {"U0", "U2", "Y2", "X2"}, {"X1"})}}});
            break;
        }
        case Scheme::Scheme2B: {
            V c12 = {"U0", "X1", "X2"};
            rows.push_back({{{"Rpr1", 1}, {"Rpr2", 1}},
                            {{1, atom({"U1"}, {"U2"}, {"U0", "X1", "X2"})}},
                            true});
            // Receiver 1: sliding-window cloud decoding plus compression.
            rows.push_back({kRc, {{1, atom({"U0"}, {"Y1"}, {"X1", "X2"})}}});
            rows.push_back({plus({{"Rh2", 1}}, kRc),
                            {{1, atom({"U0", "X2"}, {"Y1"}, {"X1"})}}});
            rows.push_back({{{"Rt2", 1}},
                            {{1, atom({"Yh2"}, {"U0", "X1", "Y1"}, {"X2"})}}});
            rows.push_back({{{"Rp1", 1}, {"Rpr1", 1}},
                            {{1, atom({"U1"}, {"Y1", "Yh2"}, c12)}}});
            rows.push_back({{{"Rp1", 1}, {"Rpr1", 1}, {"Rt2", 1}},
                            {{1, atom({"U1"}, {"Y1", "Yh2"}, c12)},
                             {1, atom({"Yh2"}, {"U0", "X1", "Y1"}, {"X2"})}}});
            rows.push_back({{{"Rh1", 1}, {"Rt1", 1}},
                            {{1, atom({"Yh1"}, {"Y1"}, c12)}},
                            true});
            // Receiver 2: backward decoding with the forwarded compression.
            rows.push_back({{{"Rt1", 1}}, {{1, atom({"Yh1"}, {"Y2", "U2"}, c12)}}});
            rows.push_back({{{"Rp2", 1}, {"Rpr2", 1}},
                            {{1, atom({"U2"}, {"Y2", "Yh1"}, c12)}}});
            rows.push_back({{{"Rp2", 1}, {"Rpr2", 1}, {"Rt1", 1}},
                            {{1, atom({"U2"}, {"Y2", "Yh1"}, c12)},
                             {1, atom({"Yh1"}, {"Y2"}, c12)}}});
            rows.push_back({plus({{"Rh1", 1}, {"Rp2", 1}, {"Rpr2", 1}, {"Rt1", 1}}, kRc),
                            {{1, atom({"Yh1"}, {"Y2", "U2"}, c12)},
                             {1, atom({"U0", "U2", "X1"}, {"Y2"}, {"X2"})}}});
            rows.push_back({{{"Rh2", 1}, {"Rt2", 1}},
                            {{1, atom({"Yh2"}, {"Y2"}, {"X2"})}},
                            true});
            break;
        }
    }
    return rows;
}

HalfspaceSystem empty_rate_system(const std::vector<RateVar>& vars) {
    HalfspaceSystem s;
    s.vars = vars;
    s.rows.push_back({std::vector<double>(vars.size(), 0.0), Rel::Le, -1.0});
    return s;
}

// Max achievable Rpr1 + Rpr2 under every row except the covering bound;
// quantifies by how much the covering requirement overshoots.
double covering_budget(const SchemeSystem& s) {
    std::vector<lp::Constraint> cons;
    int ipr1 = s.sys.index_of("Rpr1"), ipr2 = s.sys.index_of("Rpr2");
    for (const auto& r : s.sys.rows) {
        // The covering row is the unique >= row over (Rpr1, Rpr2).
        if (r.rel == Rel::Le && r.coeffs[ipr1] < 0 && r.coeffs[ipr2] < 0) {
            bool only_pr = true;
            for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
                if (static_cast<int>(j) != ipr1 && static_cast<int>(j) != ipr2 &&
                    r.coeffs[j] != 0.0)
                    only_pr = false;
            }
            if (only_pr && r.rhs < 0) continue;
        }
        cons.push_back({r.coeffs, r.rel == Rel::Eq, r.rhs});
    }
    std::vector<double> obj(s.sys.vars.size(), 0.0);
    obj[ipr1] = obj[ipr2] = 1.0;
    auto res = lp::maximize(obj, cons, -1024.0, 1024.0);
    return res.status == lp::Status::Optimal ? res.value : 0.0;
}

}  // namespace

std::set<MIAtom> scheme_atoms(Scheme s) {
    std::set<MIAtom> out;
    for (const auto& r : scheme_rows(s)) {
        for (const auto& [coef, at] : r.rhs) out.insert(at);
    }
    return out;
}

RegionId scheme_region(Scheme s) {
    switch (s) {
        case Scheme::Scheme1: return RegionId::Theorem1;
        case Scheme::Scheme2A: return RegionId::Theorem2;
        case Scheme::Scheme2B: return RegionId::Theorem3v1;
    }
    throw DomainError("unknown scheme");
}

std::vector<RateVar> elimination_order(Scheme s) {
    std::vector<RateVar> order = {"Rpr1", "Rpr2", "Rh1"};
    if (s != Scheme::Scheme1) order.push_back("Rh2");
    if (s == Scheme::Scheme2B) {
        order.push_back("Rt1");
        order.push_back("Rt2");
    }
    for (const char* v : {"Rc1", "Rc2", "Rp1", "Rp2"}) order.push_back(v);
    return order;
}

SchemeSystem build_scheme_system(Scheme s, const MIAssignment& a,
                                 double rfb1, double rfb2) {
    SchemeSystem out;
    out.scheme = s;
    out.assignment = a;
    out.rfb1 = rfb1;
    out.rfb2 = rfb2;
    out.sys.vars = scheme_vars(s);
    const std::size_t n = out.sys.vars.size();

    auto coeffs_of = [&](const Lhs& lhs, double sign) {
        std::vector<double> c(n, 0.0);
        for (const auto& [name, coef] : lhs) {
            int i = out.sys.index_of(name);
            if (i < 0) throw DomainError("scheme system: unknown variable " + name);
            c[static_cast<std::size_t>(i)] += sign * coef;
        }
        return c;
    };

    for (const auto& r : scheme_rows(s)) {
        double rhs = 0.0;
        for (const auto& [coef, at] : r.rhs) rhs += coef * a.at(at);
        if (r.ge)
            out.sys.add(coeffs_of(r.lhs, -1.0), Rel::Le, -rhs);
        else
            out.sys.add(coeffs_of(r.lhs, 1.0), Rel::Le, rhs);
    }
    // Feedback caps; infinite rates are omitted, not stored.
    if (std::isfinite(rfb1)) out.sys.add(coeffs_of({{"Rh1", 1}}, 1.0), Rel::Le, rfb1);
    if (s != Scheme::Scheme1 && std::isfinite(rfb2))
        out.sys.add(coeffs_of({{"Rh2", 1}}, 1.0), Rel::Le, rfb2);
    // Message split: R_k = Rc_k + Rp_k.
    out.sys.add(coeffs_of({{"R1", 1}, {"Rc1", -1}, {"Rp1", -1}}, 1.0), Rel::Eq, 0.0);
    out.sys.add(coeffs_of({{"R2", 1}, {"Rc2", -1}, {"Rp2", -1}}, 1.0), Rel::Eq, 0.0);
    for (const auto& v : out.sys.vars)
        out.sys.add(coeffs_of({{v, -1}}, 1.0), Rel::Le, 0.0);
    return out;
}

HalfspaceSystem project_to_rates(const SchemeSystem& s) {
    HalfspaceSystem cur = s.sys;
    for (const auto& v : elimination_order(s.scheme)) {
        cur = fme_eliminate(cur, v);
        cur = remove_redundant(cur);
    }
    if (cur.vars != std::vector<RateVar>{"R0", "R1", "R2"})
        throw NumericalError("project_to_rates: unexpected residual variables");
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> c(3, 0.0);
        c[j] = -1.0;
        cur.add(std::move(c), Rel::Le, 0.0);
    }
    return remove_redundant(cur);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Equal: return "equal";
        case Verdict::ProjectionLarger: return "projection_larger";
        case Verdict::TheoremLarger: return "theorem_larger";
        case Verdict::Mixed: return "mixed";
    }
    return "?";
}

bool VerifyReport::unexplained() const {
    return std::any_of(mismatches.begin(), mismatches.end(), [](const Mismatch& m) {
        return m.explanation.empty() || !m.error.empty();
    });
}

VerifyReport verify_theorem(Scheme s, int trials, std::uint64_t seed,
                            double rfb1, double rfb2, Exec exec) {
    if (trials < 1) throw DomainError("verify_theorem: trials must be >= 1");
    VerifyReport report;
    report.scheme = s;
    report.trials = trials;
    report.seed = seed;
    report.rfb1 = rfb1;
    report.rfb2 = rfb2;
    report.verdicts.assign(trials, Verdict::Equal);

    std::set<MIAtom> atoms = scheme_atoms(s);
    RegionSpec region = build_region(scheme_region(s));
    for (const auto& at : region.atoms()) atoms.insert(at);

    std::vector<Mismatch> found(trials);
    std::vector<char> has_mismatch(trials, 0);

    auto run_trial_impl = [&](int t) {
        StructuredFamilySpec fam;
        fam.scheme = s;
        fam.seed = seed + static_cast<std::uint64_t>(t);
        JointPmf pmf = random_structured_pmf(fam);
        MIAssignment a = MIAssignment::from_pmf(pmf, atoms);
        SchemeSystem sys = build_scheme_system(s, a, rfb1, rfb2);
        HalfspaceSystem projection = project_to_rates(sys);
        InstantiatedRegion inst = instantiate_region(region, a, rfb1, rfb2);
        HalfspaceSystem expected =
            inst.feasible ? inst.polytope : empty_rate_system(inst.polytope.vars);

        CompareResult cmp = polytopes_equal(projection, expected, 1e-8);
        std::optional<std::vector<double>> witness;
        bool sound = contains(projection, expected, 1e-8, &witness);
        if (cmp.outcome == CompareOutcome::Equal) return;

        Mismatch m;
        m.trial = t;
        m.pmf_seed = fam.seed;
        m.sound = sound;
        m.support_gap = cmp.max_support_gap;
        m.witness = witness ? witness : cmp.witness;
        bool proj_feasible = is_feasible(projection);
        bool expected_feasible = is_feasible(expected);
        if (!sound) {
            m.direction = Verdict::TheoremLarger;
            if (!proj_feasible && expected_feasible) {
                double budget = covering_budget(sys);
                MIAtom cover = s == Scheme::Scheme1
                                   ? MIAtom({"U1"}, {"U2"}, {"U0", "X1"})
                                   : MIAtom({"U1"}, {"U2"}, {"U0", "X1", "X2"});
                double need = a.at(cover);
                if (need > budget + 1e-9) {
                    m.covering_excess = need - budget;
                    m.explanation =
                        "scheme system infeasible: covering rate exceeds the "
                        "decodable satellite budget by " +
                        std::to_string(m.covering_excess) +
                        " bits while every stated region bound stays nonnegative";
                }
            } else if (proj_feasible && m.witness) {
                // Certify with the projection facet most violated by the
                // witness point of the stated region.
                const Row* worst = nullptr;
                double worst_slack = 0.0;
                for (const auto& r : projection.rows) {
                    double lhs = 0.0;
                    for (std::size_t j = 0; j < r.coeffs.size(); ++j)
                        lhs += r.coeffs[j] * (*m.witness)[j];
                    double slack = lhs - r.rhs;
                    if (slack > worst_slack) {
                        worst_slack = slack;
                        worst = &r;
                    }
                }
                if (worst) {
                    m.violated_coeffs = worst->coeffs;
                    m.violated_rhs = worst->rhs;
                    m.violation = worst_slack;
                    m.explanation =
                        "stated region keeps a point beyond the projection "
                        "facet (violation " +
                        std::to_string(worst_slack) +
                        " bits): the stated bound is not a consequence of the "
                        "scheme's constraint system at this pmf";
                }
            }
        } else {
            m.direction = Verdict::ProjectionLarger;
            m.explanation =
                "projection strictly contains the stated region (max support gap " +
                std::to_string(cmp.max_support_gap) + " bits)";
        }
        report.verdicts[t] = m.direction;
        found[t] = std::move(m);
        has_mismatch[t] = 1;
    };
    auto run_trial = [&](int t) {
        try {
            run_trial_impl(t);
        } catch (const std::exception& e) {
            Mismatch m;
            m.trial = t;
            m.pmf_seed = seed + static_cast<std::uint64_t>(t);
            m.direction = Verdict::Mixed;
            m.sound = false;
            m.error = e.what();
            report.verdicts[t] = Verdict::Mixed;
            found[t] = std::move(m);
            has_mismatch[t] = 1;
        }
    };

    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
#endif
        for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
        for (int t = 0; t < trials; ++t) run_trial(t);
    }

    for (int t = 0; t < trials; ++t) {
        if (has_mismatch[t]) {
            report.all_sound = report.all_sound && found[t].sound;
            report.mismatches.push_back(std::move(found[t]));
        } else {
            ++report.equal_count;
        }
    }
    return report;
}

nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (auto v : r.verdicts) verdicts.push_back(verdict_name(v));
    nlohmann::json mism = nlohmann::json::array();
    for (const auto& m : r.mismatches) {
        nlohmann::json gap = std::isinf(m.support_gap)
                                 ? nlohmann::json("inf")
                                 : nlohmann::json(m.support_gap);
        nlohmann::json j{{"trial", m.trial},
                         {"pmf_seed", m.pmf_seed},
                         {"direction", verdict_name(m.direction)},
                         {"sound", m.sound},
                         {"support_gap", gap},
                         {"explanation", m.explanation}};
        if (m.witness) j["witness"] = *m.witness;
        if (!m.error.empty()) j["error"] = m.error;
        if (m.covering_excess > 0) j["covering_excess"] = m.covering_excess;
        if (!m.violated_coeffs.empty()) {
            j["violated_row"] = {{"coeffs", m.violated_coeffs},
                                 {"rhs", m.violated_rhs},
                                 {"violation", m.violation}};
        }
        mism.push_back(std::move(j));
    }
    nlohmann::json j{{"scheme", scheme_name(r.scheme)},
                     {"trials", r.trials},
                     {"seed", r.seed},
                     {"equal", r.equal_count},
                     {"all_sound", r.all_sound},
                     {"verdicts", verdicts},
                     {"mismatches", mism}};
    if (std::isfinite(r.rfb1)) j["rfb1"] = r.rfb1;
    if (std::isfinite(r.rfb2)) j["rfb2"] = r.rfb2;
    return j;
}

}  // namespace rbc
