#include "rbc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "rbc/common.hpp"

namespace rbc {
namespace {

struct Objective {
    double rate = -kInf;
    int branch = 0;
    bool feasible = true;
};

struct Candidate {
    GaussianParamPoint point;
    Objective obj;
};

// Deterministic argmax: best feasible rate, ties to the lexicographically
// smallest parameter point. The evaluation loop is the parallel kernel; the
// reduction is a serial scan over the results array, so the outcome does not
// depend on the schedule.
template <typename F>
Candidate grid_argmax(const std::vector<GaussianParamPoint>& pts, F&& eval, Exec exec) {
    std::vector<Objective> vals(pts.size());
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i)
            vals[i] = eval(pts[i]);
    } else {
        for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);
    }
    Candidate best;
    bool have = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!vals[i].feasible) continue;
        if (!have || vals[i].rate > best.obj.rate ||
            (vals[i].rate == best.obj.rate && pts[i] < best.point)) {
            best = {pts[i], vals[i]};
            have = true;
        }
    }
    if (!have) throw NumericalError("grid search: no feasible parameter point");
    return best;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

std::vector<double> refine_unit(double center, double halfwidth) {
    double lo = std::max(0.0, center - halfwidth);
    double hi = std::min(1.0, center + halfwidth);
    return linspace(lo, hi, 21);
}

constexpr int kNhatGrid = 40;
constexpr double kNhatLo = 1e-3, kNhatHi = 1e3;

std::vector<double> nhat_coarse() {
    std::vector<double> v = linspace(std::log10(kNhatLo), std::log10(kNhatHi), kNhatGrid);
    for (double& x : v) x = std::pow(10.0, x);
    v.push_back(kInf);
    return v;
}

std::vector<double> nhat_refine(double center, double log_halfwidth) {
    if (std::isinf(center)) return {kInf};
    std::vector<double> v =
        linspace(std::log10(center) - log_halfwidth, std::log10(center) + log_halfwidth, 21);
    for (double& x : v) x = std::pow(10.0, x);
    return v;
}

std::vector<GaussianParamPoint> cross(const std::vector<double>& betas,
                                      const std::vector<double>& gammas,
                                      const std::vector<double>& nhats) {
    std::vector<GaussianParamPoint> pts;
    pts.reserve(betas.size() * gammas.size() * nhats.size());
    for (double b : betas)
        for (double g : gammas)
            for (double n : nhats) pts.push_back({b, g, n});
    return pts;
}

// Coarse scan plus two local refinements shrinking steps by 10x.
template <typename F>
BoundResult optimize(const F& eval, bool with_bg, bool with_nhat, Exec exec) {
    const double coarse_step = 0.02;
    std::vector<double> betas = with_bg ? linspace(0, 1, 51) : std::vector<double>{0.0};
    std::vector<double> gammas = betas;
    std::vector<double> nhats = with_nhat ? nhat_coarse() : std::vector<double>{kInf};
    Candidate best = grid_argmax(cross(betas, gammas, nhats), eval, exec);

    const double log_step = (std::log10(kNhatHi) - std::log10(kNhatLo)) / (kNhatGrid - 1);
    double bw = coarse_step, lw = log_step;
    for (int round = 0; round < 2; ++round) {
        std::vector<double> rb = with_bg ? refine_unit(best.point.beta, bw)
                                         : std::vector<double>{0.0};
        std::vector<double> rg = with_bg ? refine_unit(best.point.gamma, bw)
                                         : std::vector<double>{0.0};
        std::vector<double> rn = with_nhat ? nhat_refine(best.point.nhat, lw)
                                           : std::vector<double>{kInf};
        Candidate cand = grid_argmax(cross(rb, rg, rn), eval, exec);
        if (cand.obj.rate > best.obj.rate) best = cand;
        bw /= 10.0;
        lw /= 10.0;
    }
    return {best.obj.rate, best.point, best.obj.branch};
}

Objective min_of(double b0, double b1) {
    Objective o;
    o.rate = std::min(b0, b1);
    o.branch = b0 <= b1 ? 0 : 1;
    return o;
}

}  // namespace

GaussianSystem corner_family_system(const GaussianRbcParams& p,
                                    const GaussianParamPoint& q) {
    Eigen::MatrixXd base(1, 1);
    base(0, 0) = p.P1;
    GaussianSystem sys({"X1"}, base);
    double a = p.P1 > 0 ? std::sqrt(q.beta * p.P / p.P1) : 0.0;
    sys = extend_linear(sys, "U0", {{"X1", a}}, q.gamma * (1 - q.beta) * p.P);
    sys = extend_linear(sys, "X", {{"U0", 1.0}}, (1 - q.gamma) * (1 - q.beta) * p.P);
    sys = extend_linear(sys, "Y1", {{"X", p.g01}}, 1.0);
    sys = extend_linear(sys, "Y2", {{"X", p.g02}, {"X1", p.g12}}, 1.0);
    if (std::isfinite(q.nhat)) sys = extend_linear(sys, "Yh1", {{"Y1", 1.0}}, q.nhat);
    return sys;
}

BoundResult wu_rate(const GaussianRbcParams& p) {
    Eigen::MatrixXd base(1, 1);
    base(0, 0) = p.P;
    GaussianSystem sys({"X"}, base);
    sys = extend_linear(sys, "Y2", {{"X", p.g02}}, 1.0);
    double r = gaussian_cond_mi(sys, MIAtom({"X"}, {"Y2"}));
    return {r, {0.0, 0.0, kInf}, 0};
}

BoundResult liang_pdf_rate(const GaussianRbcParams& p, Exec exec) {
    const MIAtom direct({"X", "X1"}, {"Y2"});
    const MIAtom cloud({"U0"}, {"Y1"}, {"X1"});
    const MIAtom resid({"X"}, {"Y2"}, {"U0", "X1"});
    auto eval = [&](const GaussianParamPoint& q) {
        GaussianSystem sys = corner_family_system(p, q);
        return min_of(gaussian_cond_mi(sys, direct),
                      gaussian_cond_mi(sys, cloud) + gaussian_cond_mi(sys, resid));
    };
    return optimize(eval, /*with_bg=*/true, /*with_nhat=*/false, exec);
}

BoundResult cf_rate(const GaussianRbcParams& p, Exec exec) {
    const MIAtom both({"X"}, {"Y2", "Yh1"}, {"X1"});
    const MIAtom only({"X"}, {"Y2"}, {"X1"});
    const MIAtom direct({"X", "X1"}, {"Y2"});
    const MIAtom cost({"Yh1"}, {"Y1"}, {"X", "X1", "Y2"});
    auto eval = [&](const GaussianParamPoint& q) {
        GaussianSystem sys = corner_family_system(p, q);
        if (std::isinf(q.nhat))
            return min_of(gaussian_cond_mi(sys, only), gaussian_cond_mi(sys, direct));
        return min_of(gaussian_cond_mi(sys, both),
                      gaussian_cond_mi(sys, direct) - gaussian_cond_mi(sys, cost));
    };
    return optimize(eval, /*with_bg=*/false, /*with_nhat=*/true, exec);
}

BoundResult scheme1_rate(const GaussianRbcParams& p, bool use_wyner_ziv, Exec exec) {
    const MIAtom direct({"X", "X1"}, {"Y2"});
    const MIAtom cost({"Yh1"}, {"Y1"}, {"U0", "X", "X1", "Y2"});
    const MIAtom cloud({"U0"}, {"Y1"}, {"X1"});
    const MIAtom resid_fb({"X"}, {"Yh1", "Y2"}, {"U0", "X1"});
    const MIAtom resid({"X"}, {"Y2"}, {"U0", "X1"});
    const MIAtom fb({"Yh1"}, {"Y1"}, {"U0", "X1"});
    const MIAtom fb_wz({"Yh1"}, {"Y1"}, {"U0", "X1", "Y2"});
    auto eval = [&](const GaussianParamPoint& q) {
        GaussianSystem sys = corner_family_system(p, q);
        Objective o;
        if (std::isinf(q.nhat)) {
            o = min_of(gaussian_cond_mi(sys, direct),
                       gaussian_cond_mi(sys, cloud) + gaussian_cond_mi(sys, resid));
            return o;  // no compression: feedback constraint is vacuous
        }
        o = min_of(gaussian_cond_mi(sys, direct) - gaussian_cond_mi(sys, cost),
                   gaussian_cond_mi(sys, cloud) + gaussian_cond_mi(sys, resid_fb));
        if (std::isfinite(p.rfb1))
            o.feasible = gaussian_cond_mi(sys, use_wyner_ziv ? fb_wz : fb) <= p.rfb1;
        return o;
    };
    return optimize(eval, /*with_bg=*/true, /*with_nhat=*/true, exec);
}

std::vector<TableRow> table1(const std::vector<double>& ds,
                             const GaussianRbcParams& base, Exec exec) {
    if (ds.empty()) throw DomainError("table1: empty distance list");
    std::vector<TableRow> rows;
    rows.reserve(ds.size());
    for (double d : ds) {
        GaussianRbcParams p =
            GaussianRbcParams::from_distance(d, base.P, base.P1, base.rfb1, base.rfb2);
        TableRow row;
        row.d = d;
        row.liang = liang_pdf_rate(p, exec);
        row.scheme1 = scheme1_rate(p, false, exec);
        row.wu = wu_rate(p);
        row.cf = cf_rate(p, exec);
        rows.push_back(row);
    }
    return rows;
}

std::string table1_csv(const std::vector<TableRow>& rows) {
    std::string out = "d,liang,scheme1,wu,cf\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,%.4f\n", r.d,
                      r.liang.rate, r.scheme1.rate, r.wu.rate, r.cf.rate);
        out += buf;
    }
    return out;
}

nlohmann::json to_json(const BoundResult& r) {
    nlohmann::json j{{"rate", r.rate}, {"active_constraint", r.active_constraint}};
    j["beta"] = r.argmax.beta;
    j["gamma"] = r.argmax.gamma;
    j["nhat"] = std::isinf(r.argmax.nhat) ? nlohmann::json("inf")
                                          : nlohmann::json(r.argmax.nhat);
    return j;
}

nlohmann::json to_json(const std::vector<TableRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"d", r.d},
                       {"liang", to_json(r.liang)},
                       {"scheme1", to_json(r.scheme1)},
                       {"wu", to_json(r.wu)},
                       {"cf", to_json(r.cf)}});
    }
    return {{"rows", arr}};
}

}  // namespace rbc
