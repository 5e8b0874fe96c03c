#pragma once

// Shared test oracles: deterministic raw-uniform RNG helpers and the Monte
// Carlo conditional-MI estimator used to cross-check the closed form.

#include <doctest.h>

#include <cmath>
#include <random>

#include "rbc/gauss.hpp"

namespace rbc::testing {


double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gauss01(std::mt19937_64& rng) {
    // Box-Muller on raw uniforms keeps draws implementation-independent.
    double u = 1.0 - u01(rng);
    double v = u01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

GaussianSystem random_pd_system(std::mt19937_64& rng, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 2.0 * u01(rng) - 1.0;
    Eigen::MatrixXd cov = a * a.transpose() + 0.25 * Eigen::MatrixXd::Identity(n, n);
    std::vector<VariableId> names;
    for (int i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
    return GaussianSystem(std::move(names), std::move(cov));
}

// Monte Carlo estimate of I(A;B|C): sample the joint through a Cholesky
// factor and average the log-density ratio, with every density evaluated
// from plain submatrix inverses (no Schur-complement path).
double mc_cond_mi(const GaussianSystem& sys, const MIAtom& atom, int n_samples,
                  std::uint64_t seed) {
    auto indices = [&](const std::vector<VariableId>& names) {
        std::vector<int> out;
        for (const auto& v : names) out.push_back(sys.index_of(v));
        return out;
    };
    std::vector<int> A = indices(atom.left), B = indices(atom.right),
                     C = indices(atom.cond);
    std::vector<int> AC = A, BC = B, ABC = A;
    AC.insert(AC.end(), C.begin(), C.end());
    BC.insert(BC.end(), C.begin(), C.end());
    ABC.insert(ABC.end(), B.begin(), B.end());
    ABC.insert(ABC.end(), C.begin(), C.end());

    auto sub = [&](const std::vector<int>& s) {
        Eigen::MatrixXd m(s.size(), s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) m(i, j) = sys.cov(s[i], s[j]);
        return m;
    };
    struct Block {
        Eigen::MatrixXd inv;
        double log2det;
    };
    auto block = [&](const std::vector<int>& s) {
        Eigen::MatrixXd m = sub(s);
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        REQUIRE(llt.info() == Eigen::Success);
        double ld = 0.0;
        for (int i = 0; i < m.rows(); ++i) ld += 2.0 * std::log2(llt.matrixL()(i, i));
        return Block{m.inverse(), ld};
    };
    Block bAC = block(AC), bBC = block(BC), bABC = block(ABC);
    Block bC{Eigen::MatrixXd(0, 0), 0.0};
    if (!C.empty()) bC = block(C);

    Eigen::LLT<Eigen::MatrixXd> llt(sys.cov);
    REQUIRE(llt.info() == Eigen::Success);
    Eigen::MatrixXd L = llt.matrixL();

    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(sys.vars.size());
    Eigen::VectorXd z(n);
    double acc = 0.0;
    auto quad = [&](const Eigen::VectorXd& x, const std::vector<int>& s,
                    const Block& b) {
        Eigen::VectorXd v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) v(i) = x(s[i]);
        return v.dot(b.inv * v);
    };
    const double log2e = 1.0 / std::log(2.0);
    for (int k = 0; k < n_samples; ++k) {
        for (int i = 0; i < n; ++i) z(i) = gauss01(rng);
        Eigen::VectorXd x = L * z;
        // log2 p = -0.5 log2 det(2 pi Sigma) - 0.5 q log2(e); dimension terms
        // cancel in the ratio, so only dets and quadratic forms remain.
        double val = 0.5 * (bAC.log2det + bBC.log2det - bABC.log2det - bC.log2det);
        double q = quad(x, AC, bAC) + quad(x, BC, bBC) - quad(x, ABC, bABC);
        if (!C.empty()) q -= quad(x, C, bC);
        val += 0.5 * log2e * q;
        acc += val;
    }
    return acc / n_samples;
}

}  // namespace rbc::testing
