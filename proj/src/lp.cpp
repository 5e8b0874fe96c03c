#include "rbc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rbc/common.hpp"

namespace rbc::lp {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

// Dense simplex tableau over variables shifted to y = x - lo >= 0.
// Rows: A'y (<=|=) b'; upper bounds y <= hi - lo appended as plain rows.
struct Tableau {
    std::size_t m = 0, n = 0;        // rows, columns (excl. rhs)
    std::vector<double> t;           // (m+1) x (n+1), last row = objective
    std::vector<std::size_t> basis;  // basic column per row

    double& at(std::size_t i, std::size_t j) { return t[i * (n + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (n + 1) + j]; }
    double& rhs(std::size_t i) { return t[i * (n + 1) + n]; }
    double rhs(std::size_t i) const { return t[i * (n + 1) + n]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double piv = at(pr, pc);
        for (std::size_t j = 0; j <= n; ++j) at(pr, j) /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == pr) continue;
            double f = at(i, pc);
            if (std::fabs(f) < kPivotTol) continue;
            for (std::size_t j = 0; j <= n; ++j) at(i, j) -= f * at(pr, j);
        }
        basis[pr] = pc;
    }

    // Bland's rule; returns false when no entering column (optimal).
    bool step() {
        std::size_t pc = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (at(m, j) > kCostTol) { pc = j; break; }
        }
        if (pc == n) return false;
        std::size_t pr = m;
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double a = at(i, pc);
            if (a <= kPivotTol) continue;
            double r = rhs(i) / a;
            if (pr == m || r < best - 1e-12 ||
                (r < best + 1e-12 && basis[i] < basis[pr])) {
                pr = i;
                best = r;
            }
        }
        if (pr == m) throw NumericalError("lp: unbounded pivot column");
        pivot(pr, pc);
        return true;
    }

    void run() {
        for (int iter = 0; iter < 20000; ++iter) {
            if (!step()) return;
        }
        throw NumericalError("lp: simplex iteration limit");
    }
};

}  // namespace

Result maximize(const std::vector<double>& obj,
                const std::vector<Constraint>& cons,
                double lo, double hi) {
    const std::size_t nx = obj.size();
    const double span = hi - lo;

    // Assemble rows in y-space: structural rows then upper-bound rows.
    struct Row { std::vector<double> a; double b; bool eq; };
    std::vector<Row> rows;
    rows.reserve(cons.size() + nx);
    for (const auto& c : cons) {
        double shift = 0.0;
        for (std::size_t j = 0; j < nx; ++j) shift += c.coeffs[j] * lo;
        rows.push_back({c.coeffs, c.rhs - shift, c.equality});
    }
    for (std::size_t j = 0; j < nx; ++j) {
        std::vector<double> a(nx, 0.0);
        a[j] = 1.0;
        rows.push_back({std::move(a), span, false});
    }

    const std::size_t m = rows.size();
    // Columns: y (nx) | slacks (one per <= row) | artificials (as needed).
    std::size_t n_slack = 0;
    for (const auto& r : rows) n_slack += r.eq ? 0 : 1;

    // Normalize rhs >= 0; decide artificial columns.
    std::vector<int> sign(m, 1);
    std::vector<bool> needs_art(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].b < 0) sign[i] = -1;
        // After sign flip a <= row's slack coefficient becomes -1.
        needs_art[i] = rows[i].eq || sign[i] < 0;
    }
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i) n_art += needs_art[i] ? 1 : 0;

    Tableau tb;
    tb.m = m;
    tb.n = nx + n_slack + n_art;
    tb.t.assign((m + 1) * (tb.n + 1), 0.0);
    tb.basis.assign(m, 0);

    std::size_t slack_at = nx, art_at = nx + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nx; ++j) tb.at(i, j) = sign[i] * rows[i].a[j];
        tb.rhs(i) = sign[i] * rows[i].b;
        if (!rows[i].eq) {
            tb.at(i, slack_at) = sign[i] * 1.0;
            if (sign[i] > 0) tb.basis[i] = slack_at;
            ++slack_at;
        }
        if (needs_art[i]) {
            tb.at(i, art_at) = 1.0;
            tb.basis[i] = art_at;
            ++art_at;
        }
    }

    // Phase 1: maximize -sum(artificials).
    if (n_art > 0) {
        for (std::size_t i = 0; i < m; ++i) {
            if (tb.basis[i] >= nx + n_slack) {
                for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) += tb.at(i, j);
            }
        }
        for (std::size_t k = nx + n_slack; k < tb.n; ++k) tb.at(m, k) = 0.0;
        tb.run();
        if (tb.rhs(m) > 1e-7) return {Status::Infeasible, 0.0, {}};
        // Drive remaining artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (tb.basis[i] < nx + n_slack) continue;
            std::size_t pc = tb.n;
            for (std::size_t j = 0; j < nx + n_slack; ++j) {
                if (std::fabs(tb.at(i, j)) > 1e-8) { pc = j; break; }
            }
            if (pc == tb.n) continue;  // degenerate zero row
            tb.pivot(i, pc);
        }
        // Freeze artificial columns at zero.
        for (std::size_t i = 0; i <= m; ++i) {
            for (std::size_t k = nx + n_slack; k < tb.n; ++k) tb.at(i, k) = 0.0;
        }
    }

    // Phase 2: real objective, expressed in the current basis.
    for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) = 0.0;
    for (std::size_t j = 0; j < nx; ++j) tb.at(m, j) = obj[j];
    for (std::size_t i = 0; i < m; ++i) {
        double c = tb.basis[i] < nx ? obj[tb.basis[i]] : 0.0;
        if (c == 0.0) continue;
        for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) -= c * tb.at(i, j);
    }
    tb.run();

    Result res;
    res.status = Status::Optimal;
    res.point.assign(nx, lo);
    for (std::size_t i = 0; i < m; ++i) {
        if (tb.basis[i] < nx) res.point[tb.basis[i]] = lo + tb.rhs(i);
    }
    res.value = 0.0;
    for (std::size_t j = 0; j < nx; ++j) res.value += obj[j] * res.point[j];
    return res;
}

}  // namespace rbc::lp
