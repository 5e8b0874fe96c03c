#include "rbc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "rbc/common.hpp"

namespace rbc {
namespace {

// Compensated accumulator for entropy sums over up to ~512 terms.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

std::vector<VariableId> sorted_unique(std::vector<VariableId> v,
                                      const char* what) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw DomainError(std::string(what) + ": duplicate variable");
    return v;
}

std::string join(const std::vector<VariableId>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i];
    }
    return s;
}

// Uniform doubles in [0,1) from raw engine output, so draws do not depend
// on the standard library's distribution implementations.
double next01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Dirichlet(1,...,1): normalized exponentials.
void dirichlet_fill(std::mt19937_64& rng, double* out, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = -std::log1p(-next01(rng));
        out[i] = e;
        total += e;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= total;
}

}  // namespace

MIAtom::MIAtom(std::vector<VariableId> l, std::vector<VariableId> r,
               std::vector<VariableId> c)
    : left(sorted_unique(std::move(l), "MIAtom.left")),
      right(sorted_unique(std::move(r), "MIAtom.right")),
      cond(sorted_unique(std::move(c), "MIAtom.cond")) {
    if (left.empty() || right.empty())
        throw DomainError("MIAtom: left and right must be nonempty");
    auto overlap = [](const std::vector<VariableId>& a,
                      const std::vector<VariableId>& b) {
        std::vector<VariableId> inter;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(inter));
        return !inter.empty();
    };
    if (overlap(left, right) || overlap(left, cond) || overlap(right, cond))
        throw DomainError("MIAtom: variable sets must be pairwise disjoint");
}

std::string MIAtom::str() const {
    std::string s = "I(" + join(left) + ";" + join(right);
    if (!cond.empty()) s += "|" + join(cond);
    return s + ")";
}

JointPmf::JointPmf(std::vector<Variable> vars, std::vector<double> probs)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
    std::size_t cells = 1;
    for (const auto& v : vars_) {
        if (v.size < 1) throw DomainError("JointPmf: alphabet size must be >= 1");
        for (const auto& w : vars_) {
            if (&v != &w && v.name == w.name)
                throw DomainError("JointPmf: duplicate variable " + v.name);
        }
        cells *= static_cast<std::size_t>(v.size);
    }
    if (probs_.size() != cells) throw DomainError("JointPmf: tensor size mismatch");
    Kahan total;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw DomainError("JointPmf: negative entry");
        total.add(p);
    }
    if (std::fabs(total.sum - 1.0) > 1e-12)
        throw DomainError("JointPmf: entries sum to " + std::to_string(total.sum));
}

int JointPmf::index_of(const VariableId& v) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].name == v) return static_cast<int>(i);
    }
    return -1;
}

JointPmf JointPmf::marginalize(const std::set<VariableId>& keep) const {
    for (const auto& v : keep) {
        if (!has(v)) throw DomainError("marginalize: unknown variable " + v);
    }
    std::vector<Variable> kept;
    std::vector<std::size_t> kept_axes;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (keep.count(vars_[i].name)) {
            kept.push_back(vars_[i]);
            kept_axes.push_back(i);
        }
    }
    std::size_t out_cells = 1;
    for (const auto& v : kept) out_cells *= static_cast<std::size_t>(v.size);
    std::vector<double> out(out_cells, 0.0);

    // Row-major strides of the source and of the kept axes in the target.
    std::vector<std::size_t> stride(vars_.size(), 1);
    for (std::size_t i = vars_.size(); i-- > 1;)
        stride[i - 1] = stride[i] * static_cast<std::size_t>(vars_[i].size);
    std::vector<std::size_t> out_stride(kept_axes.size(), 1);
    for (std::size_t i = kept_axes.size(); i-- > 1;)
        out_stride[i - 1] = out_stride[i] * static_cast<std::size_t>(kept[i].size);

    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
        std::size_t dst = 0;
        for (std::size_t a = 0; a < kept_axes.size(); ++a) {
            std::size_t ax = kept_axes[a];
            std::size_t digit = (flat / stride[ax]) %
                                static_cast<std::size_t>(vars_[ax].size);
            dst += digit * out_stride[a];
        }
        out[dst] += probs_[flat];
    }
    return JointPmf(std::move(kept), std::move(out));
}

double JointPmf::entropy() const {
    Kahan h;
    for (double p : probs_) {
        if (p > 0.0) h.add(-p * std::log2(p));
    }
    return h.sum;
}

double cond_mutual_information(const JointPmf& p, const MIAtom& atom) {
    for (const auto& list : {atom.left, atom.right, atom.cond}) {
        for (const auto& v : list) {
            if (!p.has(v)) throw DomainError("cond_mutual_information: unknown variable " + v);
        }
    }
    std::set<VariableId> L(atom.left.begin(), atom.left.end());
    std::set<VariableId> R(atom.right.begin(), atom.right.end());
    std::set<VariableId> C(atom.cond.begin(), atom.cond.end());
    std::set<VariableId> LC = L, RC = R, LRC = L;
    LC.insert(C.begin(), C.end());
    RC.insert(C.begin(), C.end());
    LRC.insert(R.begin(), R.end());
    LRC.insert(C.begin(), C.end());

    double h_c = C.empty() ? 0.0 : p.marginalize(C).entropy();
    double mi = p.marginalize(LC).entropy() + p.marginalize(RC).entropy() -
                h_c - p.marginalize(LRC).entropy();
    if (mi < -1e-9)
        throw NumericalError("conditional MI " + atom.str() + " = " +
                             std::to_string(mi) + " below clamp window");
    return mi < 0.0 ? 0.0 : mi;
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Scheme1: return "scheme1";
        case Scheme::Scheme2A: return "scheme2a";
        case Scheme::Scheme2B: return "scheme2b";
    }
    return "?";
}

void StructuredFamilySpec::validate() const {
    for (int sz : {u0, u1, u2, x, x1, x2, y1, y2, yh1, yh2}) {
        if (sz < 1) throw DomainError("StructuredFamilySpec: alphabet sizes must be >= 1");
    }
}

JointPmf random_structured_pmf(const StructuredFamilySpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const bool two_sided = spec.scheme != Scheme::Scheme1;

    auto draws = [&](std::size_t rows, std::size_t cols) {
        std::vector<double> t(rows * cols);
        for (std::size_t r = 0; r < rows; ++r) dirichlet_fill(rng, &t[r * cols], cols);
        return t;
    };

    const std::size_t nu = static_cast<std::size_t>(spec.u0) * spec.u1 * spec.u2;

    // Source factor, X lookup, channel, compressions; fixed draw order.
    std::vector<double> source;  // Scheme1: P(u0,u1,u2,x1); 2A/2B: P(x1)P(x2)P(u|x1,x2)
    std::vector<double> px1, px2;
    if (!two_sided) {
        source = draws(1, nu * spec.x1);
    } else {
        px1 = draws(1, spec.x1);
        px2 = draws(1, spec.x2);
        source = draws(static_cast<std::size_t>(spec.x1) * spec.x2, nu);
    }
    std::vector<int> f(nu);
    for (auto& v : f) v = static_cast<int>(rng() % static_cast<std::uint64_t>(spec.x));
    const std::size_t nch_in = static_cast<std::size_t>(spec.x) * spec.x1 *
                               (two_sided ? spec.x2 : 1);
    std::vector<double> channel =
        draws(nch_in, static_cast<std::size_t>(spec.y1) * spec.y2);
    std::size_t comp1_rows = static_cast<std::size_t>(spec.x1) * spec.y1;
    if (spec.scheme == Scheme::Scheme1)
        comp1_rows = static_cast<std::size_t>(spec.u0) * spec.x1 * spec.y1;
    else if (spec.scheme == Scheme::Scheme2B)
        comp1_rows = static_cast<std::size_t>(spec.u0) * spec.x1 * spec.x2 * spec.y1;
    std::vector<double> comp1 = draws(comp1_rows, spec.yh1);
    std::vector<double> comp2;
    if (two_sided) comp2 = draws(static_cast<std::size_t>(spec.x2) * spec.y2, spec.yh2);

    std::vector<Variable> vars;
    vars.push_back({"U0", spec.u0});
    vars.push_back({"U1", spec.u1});
    vars.push_back({"U2", spec.u2});
    vars.push_back({"X1", spec.x1});
    if (two_sided) vars.push_back({"X2", spec.x2});
    vars.push_back({"Y1", spec.y1});
    vars.push_back({"Y2", spec.y2});
    vars.push_back({"Yh1", spec.yh1});
    if (two_sided) vars.push_back({"Yh2", spec.yh2});

    std::size_t cells = 1;
    for (const auto& v : vars) cells *= static_cast<std::size_t>(v.size);
    std::vector<double> t(cells);

    std::size_t flat = 0;
    for (int u0 = 0; u0 < spec.u0; ++u0)
    for (int u1 = 0; u1 < spec.u1; ++u1)
    for (int u2 = 0; u2 < spec.u2; ++u2) {
        const std::size_t ui = (static_cast<std::size_t>(u0) * spec.u1 + u1) * spec.u2 + u2;
        const int x = f[ui];
        for (int x1 = 0; x1 < spec.x1; ++x1)
        for (int x2 = 0; x2 < (two_sided ? spec.x2 : 1); ++x2) {
            double ps;
            if (!two_sided) {
                ps = source[ui * spec.x1 + x1];
            } else {
                ps = px1[x1] * px2[x2] *
                     source[(static_cast<std::size_t>(x1) * spec.x2 + x2) * nu + ui];
            }
            const std::size_t ch_row =
                two_sided ? (static_cast<std::size_t>(x) * spec.x1 + x1) * spec.x2 + x2
                          : static_cast<std::size_t>(x) * spec.x1 + x1;
            for (int y1 = 0; y1 < spec.y1; ++y1)
            for (int y2 = 0; y2 < spec.y2; ++y2) {
                const double pch =
                    channel[ch_row * (static_cast<std::size_t>(spec.y1) * spec.y2) +
                            static_cast<std::size_t>(y1) * spec.y2 + y2];
                std::size_t c1_row;
                if (spec.scheme == Scheme::Scheme1)
                    c1_row = (static_cast<std::size_t>(u0) * spec.x1 + x1) * spec.y1 + y1;
                else if (spec.scheme == Scheme::Scheme2A)
                    c1_row = static_cast<std::size_t>(x1) * spec.y1 + y1;
                else
                    c1_row = ((static_cast<std::size_t>(u0) * spec.x1 + x1) * spec.x2 + x2) *
                                 spec.y1 + y1;
                for (int yh1 = 0; yh1 < spec.yh1; ++yh1) {
                    const double p1 = ps * pch * comp1[c1_row * spec.yh1 + yh1];
                    if (!two_sided) {
                        t[flat++] = p1;
                        continue;
                    }
                    const std::size_t c2_row = static_cast<std::size_t>(x2) * spec.y2 + y2;
                    for (int yh2 = 0; yh2 < spec.yh2; ++yh2)
                        t[flat++] = p1 * comp2[c2_row * spec.yh2 + yh2];
                }
            }
        }
    }
    return JointPmf(std::move(vars), std::move(t));
}

nlohmann::json to_json(const JointPmf& p) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : p.variables())
        vars.push_back({{"name", v.name}, {"size", v.size}});
    return {{"variables", vars}, {"probs", p.probs()}};
}

JointPmf pmf_from_json(const nlohmann::json& j) {
    std::vector<Variable> vars;
    for (const auto& v : j.at("variables"))
        vars.push_back({v.at("name").get<std::string>(), v.at("size").get<int>()});
    return JointPmf(std::move(vars), j.at("probs").get<std::vector<double>>());
}

}  // namespace rbc
