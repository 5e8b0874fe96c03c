#include "rbc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "rbc/common.hpp"
#include "rbc/lp.hpp"

namespace rbc {
namespace {

constexpr double kZeroCoeff = 1e-9;   // coefficient classified as zero
constexpr double kCertTol = 1e-9;     // redundancy certification tolerance
constexpr double kBox = 1024.0;       // guard box half-width for internal LPs

std::vector<lp::Constraint> to_constraints(const HalfspaceSystem& sys) {
    std::vector<lp::Constraint> cons;
    cons.reserve(sys.rows.size());
    for (const auto& r : sys.rows) cons.push_back({r.coeffs, r.rel == Rel::Eq, r.rhs});
    return cons;
}

// Scale so the largest |coefficient| is 1; pure-constant rows are kept as-is.
Row normalized(Row r) {
    double m = 0.0;
    for (double c : r.coeffs) m = std::max(m, std::fabs(c));
    if (m > kZeroCoeff) {
        for (double& c : r.coeffs) {
            c /= m;
            if (std::fabs(c) < kZeroCoeff) c = 0.0;
        }
        r.rhs /= m;
    } else {
        std::fill(r.coeffs.begin(), r.coeffs.end(), 0.0);
    }
    return r;
}

bool row_less(const Row& a, const Row& b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.rhs < b.rhs;
}

bool row_same(const Row& a, const Row& b) {
    if (a.rel != b.rel || a.coeffs.size() != b.coeffs.size()) return false;
    for (std::size_t j = 0; j < a.coeffs.size(); ++j) {
        if (std::fabs(a.coeffs[j] - b.coeffs[j]) > kZeroCoeff) return false;
    }
    return std::fabs(a.rhs - b.rhs) <= kZeroCoeff;
}

}  // namespace

int HalfspaceSystem::index_of(const RateVar& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == v) return static_cast<int>(i);
    }
    return -1;
}

void HalfspaceSystem::add(std::vector<double> coeffs, Rel rel, double rhs) {
    if (coeffs.size() != vars.size()) throw DomainError("row width != |vars|");
    if (!std::isfinite(rhs)) throw DomainError("row rhs must be finite");
    rows.push_back({std::move(coeffs), rel, rhs});
}

void HalfspaceSystem::canonicalize() {
    for (auto& r : rows) r = normalized(std::move(r));
    std::sort(rows.begin(), rows.end(), row_less);
    rows.erase(std::unique(rows.begin(), rows.end(), row_same), rows.end());
}

bool HalfspaceSystem::satisfied(const std::vector<double>& point,
                                double tol) const {
    if (point.size() != vars.size()) throw DomainError("point width != |vars|");
    for (const auto& r : rows) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < point.size(); ++j) lhs += r.coeffs[j] * point[j];
        if (r.rel == Rel::Eq ? std::fabs(lhs - r.rhs) > tol : lhs > r.rhs + tol)
            return false;
    }
    return true;
}

HalfspaceSystem fme_eliminate(const HalfspaceSystem& sys, const RateVar& v) {
    int vi = sys.index_of(v);
    if (vi < 0) throw DomainError("fme_eliminate: unknown variable " + v);
    const std::size_t k = static_cast<std::size_t>(vi);

    HalfspaceSystem out;
    out.vars = sys.vars;
    out.vars.erase(out.vars.begin() + vi);

    auto drop = [&](std::vector<double> c) {
        c.erase(c.begin() + vi);
        return c;
    };

    // An equality carrying v acts as a substitution.
    const Row* subst = nullptr;
    for (const auto& r : sys.rows) {
        if (r.rel == Rel::Eq && std::fabs(r.coeffs[k]) > kZeroCoeff) {
            if (!subst || std::fabs(r.coeffs[k]) > std::fabs(subst->coeffs[k]))
                subst = &r;
        }
    }
    if (subst) {
        for (const auto& r : sys.rows) {
            if (&r == subst) continue;
            if (std::fabs(r.coeffs[k]) <= kZeroCoeff) {
                out.rows.push_back({drop(r.coeffs), r.rel, r.rhs});
                continue;
            }
            double f = r.coeffs[k] / subst->coeffs[k];
            std::vector<double> c(r.coeffs.size());
            for (std::size_t j = 0; j < c.size(); ++j)
                c[j] = r.coeffs[j] - f * subst->coeffs[j];
            out.rows.push_back({drop(std::move(c)), r.rel, r.rhs - f * subst->rhs});
        }
        out.canonicalize();
        return out;
    }

    std::vector<Row> uppers, lowers;
    for (const auto& r : sys.rows) {
        double cv = r.coeffs[k];
        if (std::fabs(cv) <= kZeroCoeff) {
            out.rows.push_back({drop(r.coeffs), r.rel, r.rhs});
            continue;
        }
        Row n = r;
        double s = std::fabs(cv);
        for (double& c : n.coeffs) c /= s;
        n.rhs /= s;
        (cv > 0 ? uppers : lowers).push_back(std::move(n));
    }
    for (const auto& u : uppers) {
        for (const auto& l : lowers) {
            std::vector<double> c(u.coeffs.size());
            for (std::size_t j = 0; j < c.size(); ++j) c[j] = u.coeffs[j] + l.coeffs[j];
            out.rows.push_back({drop(std::move(c)), Rel::Le, u.rhs + l.rhs});
        }
    }
    out.canonicalize();
    return out;
}

HalfspaceSystem fix_variable(const HalfspaceSystem& sys, const RateVar& v,
                             double value) {
    int vi = sys.index_of(v);
    if (vi < 0) throw DomainError("fix_variable: unknown variable " + v);
    HalfspaceSystem out;
    out.vars = sys.vars;
    out.vars.erase(out.vars.begin() + vi);
    for (const auto& r : sys.rows) {
        std::vector<double> c = r.coeffs;
        double cv = c[vi];
        c.erase(c.begin() + vi);
        out.rows.push_back({std::move(c), r.rel, r.rhs - cv * value});
    }
    out.canonicalize();
    return out;
}

bool is_feasible(const HalfspaceSystem& sys) {
    std::vector<double> zero(sys.vars.size(), 0.0);
    auto res = lp::maximize(zero, to_constraints(sys), -kBox, kBox);
    return res.status == lp::Status::Optimal;
}

std::optional<double> support_value(const HalfspaceSystem& sys,
                                    const std::vector<double>& direction) {
    auto res = lp::maximize(direction, to_constraints(sys), -kBox, kBox);
    if (res.status != lp::Status::Optimal) return std::nullopt;
    return res.value;
}

HalfspaceSystem remove_redundant(const HalfspaceSystem& sys) {
    HalfspaceSystem cur = sys;
    cur.canonicalize();
    if (!is_feasible(cur)) {
        HalfspaceSystem empty;
        empty.vars = sys.vars;
        empty.rows.push_back({std::vector<double>(sys.vars.size(), 0.0), Rel::Le, -1.0});
        return empty;
    }
    std::vector<Row> rows = std::move(cur.rows);
    std::vector<bool> alive(rows.size(), true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].rel == Rel::Eq) continue;
        std::vector<lp::Constraint> others;
        others.reserve(rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == i || !alive[j]) continue;
            others.push_back({rows[j].coeffs, rows[j].rel == Rel::Eq, rows[j].rhs});
        }
        auto res = lp::maximize(rows[i].coeffs, others, -kBox, kBox);
        if (res.status == lp::Status::Optimal && res.value <= rows[i].rhs + kCertTol)
            alive[i] = false;
    }
    HalfspaceSystem out;
    out.vars = sys.vars;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (alive[i]) out.rows.push_back(std::move(rows[i]));
    }
    out.canonicalize();
    return out;
}

VertexSet enumerate_vertices(const HalfspaceSystem& sys, double tol) {
    const std::size_t d = sys.vars.size();
    if (d == 0 || d > 3) throw DomainError("enumerate_vertices: dimension must be 1..3");
    VertexSet vs;
    vs.tol = tol;
    const auto& rows = sys.rows;
    const std::size_t n = rows.size();

    auto try_point = [&](const std::vector<std::size_t>& pick) {
        // Solve the d x d active-row system by Gaussian elimination.
        double a[3][4] = {};
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) a[i][j] = rows[pick[i]].coeffs[j];
            a[i][d] = rows[pick[i]].rhs;
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) scale = std::max(scale, std::fabs(a[i][j]));
        if (scale == 0.0) return;
        for (std::size_t col = 0; col < d; ++col) {
            std::size_t piv = col;
            for (std::size_t i = col + 1; i < d; ++i)
                if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
            if (std::fabs(a[piv][col]) < 1e-9 * scale) return;  // singular subset
            if (piv != col) std::swap(a[piv], a[col]);
            for (std::size_t i = 0; i < d; ++i) {
                if (i == col) continue;
                double f = a[i][col] / a[col][col];
                for (std::size_t j = col; j <= d; ++j) a[i][j] -= f * a[col][j];
            }
        }
        std::vector<double> x(d);
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = a[i][d] / a[i][i];
            if (x[i] == 0.0) x[i] = 0.0;  // normalize -0
        }
        if (!sys.satisfied(x, tol)) return;
        for (const auto& p : vs.points) {
            double dist = 0.0;
            for (std::size_t j = 0; j < d; ++j) dist = std::max(dist, std::fabs(p[j] - x[j]));
            if (dist <= tol) return;  // duplicate
        }
        vs.points.push_back(std::move(x));
    };

    std::vector<std::size_t> pick(d);
    if (d == 1) {
        for (std::size_t i = 0; i < n; ++i) { pick = {i}; try_point(pick); }
    } else if (d == 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) { pick = {i, j}; try_point(pick); }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) { pick = {i, j, k}; try_point(pick); }
    }
    std::sort(vs.points.begin(), vs.points.end());
    return vs;
}

std::vector<std::vector<double>> comparison_directions(std::size_t dim,
                                                       std::size_t count) {
    std::vector<std::vector<double>> dirs;
    for (std::size_t j = 0; j < dim && dirs.size() < count; ++j) {
        std::vector<double> e(dim, 0.0);
        e[j] = 1.0;
        dirs.push_back(std::move(e));
    }
    if (dirs.size() < count) dirs.push_back(std::vector<double>(dim, 1.0));
    // Deterministic fill from a fixed multiplicative recurrence.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next01 = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    while (dirs.size() < count) {
        std::vector<double> v(dim);
        double norm = 0.0;
        for (auto& c : v) {
            c = 0.05 + next01();
            norm += c * c;
        }
        norm = std::sqrt(norm);
        for (auto& c : v) c /= norm;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

CompareResult polytopes_equal(const HalfspaceSystem& a,
                              const HalfspaceSystem& b, double tol) {
    if (a.vars != b.vars) throw DomainError("polytopes_equal: variable lists differ");
    CompareResult res;
    bool fa = is_feasible(a), fb = is_feasible(b);
    if (!fa && !fb) return res;
    if (fa != fb) {
        res.outcome = fa ? CompareOutcome::ANotInB : CompareOutcome::BNotInA;
        auto vs = enumerate_vertices(fa ? a : b, tol);
        if (!vs.points.empty()) res.witness = vs.points.front();
        res.max_support_gap = kInf;
        return res;
    }
    auto va = enumerate_vertices(a, tol);
    for (const auto& p : va.points) {
        if (!b.satisfied(p, tol)) {
            res.outcome = CompareOutcome::ANotInB;
            res.witness = p;
        }
    }
    auto vb = enumerate_vertices(b, tol);
    for (const auto& p : vb.points) {
        if (!a.satisfied(p, tol)) {
            res.outcome = CompareOutcome::BNotInA;
            res.witness = p;
        }
    }
    for (const auto& d : comparison_directions(a.vars.size())) {
        auto sa = support_value(a, d), sb = support_value(b, d);
        double gap = *sa - *sb;
        res.max_support_gap = std::max(res.max_support_gap, std::fabs(gap));
        if (res.outcome == CompareOutcome::Equal && std::fabs(gap) > tol)
            res.outcome = gap > 0 ? CompareOutcome::ANotInB : CompareOutcome::BNotInA;
    }
    return res;
}

bool contains(const HalfspaceSystem& outer, const HalfspaceSystem& inner,
              double tol, std::optional<std::vector<double>>* witness) {
    if (outer.vars != inner.vars) throw DomainError("contains: variable lists differ");
    if (!is_feasible(inner)) return true;
    if (!is_feasible(outer)) {
        if (witness) {
            auto vs = enumerate_vertices(inner, tol);
            if (!vs.points.empty()) *witness = vs.points.front();
        }
        return false;
    }
    for (const auto& p : enumerate_vertices(inner, tol).points) {
        if (!outer.satisfied(p, tol)) {
            if (witness) *witness = p;
            return false;
        }
    }
    for (const auto& d : comparison_directions(outer.vars.size())) {
        auto so = support_value(outer, d), si = support_value(inner, d);
        if (*si > *so + tol) return false;
    }
    return true;
}

nlohmann::json to_json(const HalfspaceSystem& sys) {
    nlohmann::json j;
    j["variables"] = sys.vars;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : sys.rows) {
        j["rows"].push_back({{"coeffs", r.coeffs},
                             {"rel", r.rel == Rel::Eq ? "=" : "<="},
                             {"rhs", r.rhs}});
    }
    return j;
}

HalfspaceSystem system_from_json(const nlohmann::json& j) {
    HalfspaceSystem sys;
    sys.vars = j.at("variables").get<std::vector<RateVar>>();
    for (const auto& r : j.at("rows")) {
        Rel rel = r.at("rel").get<std::string>() == "=" ? Rel::Eq : Rel::Le;
        sys.add(r.at("coeffs").get<std::vector<double>>(), rel,
                r.at("rhs").get<double>());
    }
    return sys;
}

nlohmann::json to_json(const VertexSet& vs) {
    return {{"points", vs.points}, {"tol", vs.tol}};
}

}  // namespace rbc
