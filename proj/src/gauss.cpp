#include "rbc/gauss.hpp"

#include <cmath>

#include "rbc/common.hpp"

namespace rbc {
namespace {

constexpr double kDropVar = 1e-12;   // conditional variance treated as absent
constexpr double kMaxCond = 1e12;

// log2 pseudo-determinant of a symmetric PSD block: eigenvalues below the
// drop threshold are excluded. The drop cut carries a relative component
// because the symmetric conditioning regularization leaves noise eigenvalues
// around 1e-11 on exactly-degenerate directions.
double log2_pdet(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw NumericalError("gaussian_cond_mi: eigensolver failed");
    double lmax = es.eigenvalues().maxCoeff();
    double cut = std::max(kDropVar, 1e-9 * std::max(1.0, lmax));
    double acc = 0.0;
    int kept = 0;
    double lmin_kept = kInf;
    for (int i = 0; i < m.rows(); ++i) {
        double l = es.eigenvalues()(i);
        if (l < -1e-9 * std::max(1.0, lmax))
            throw NumericalError("gaussian_cond_mi: block not PSD");
        if (l <= cut) continue;
        acc += std::log2(l);
        lmin_kept = std::min(lmin_kept, l);
        ++kept;
    }
    if (kept > 0 && lmax / lmin_kept > kMaxCond)
        throw NumericalError("gaussian_cond_mi: ill-conditioned block");
    return acc;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

}  // namespace

GaussianSystem::GaussianSystem(std::vector<VariableId> names, Eigen::MatrixXd c)
    : vars(std::move(names)), cov(std::move(c)) {
    if (cov.rows() != cov.cols() ||
        cov.rows() != static_cast<Eigen::Index>(vars.size()))
        throw DomainError("GaussianSystem: covariance shape mismatch");
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
            if (vars[i] == vars[j])
                throw DomainError("GaussianSystem: duplicate variable " + vars[i]);
            if (std::fabs(cov(i, j) - cov(j, i)) > 1e-10)
                throw DomainError("GaussianSystem: covariance not symmetric");
        }
    }
    if (cov.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw DomainError("GaussianSystem: covariance not PSD");
    }
}

int GaussianSystem::index_of(const VariableId& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == v) return static_cast<int>(i);
    }
    return -1;
}

GaussianRbcParams GaussianRbcParams::from_distance(double d, double P, double P1,
                                                   double rfb1, double rfb2) {
    if (d == 0.0 || d == 1.0)
        throw DomainError("GaussianRbcParams: d must differ from 0 and 1");
    if (P < 0 || P1 < 0) throw DomainError("GaussianRbcParams: negative power");
    GaussianRbcParams p;
    p.g01 = 1.0 / d;
    p.g02 = 1.0;
    p.g12 = 1.0 / std::fabs(1.0 - d);
    p.P = P;
    p.P1 = P1;
    p.rfb1 = rfb1;
    p.rfb2 = rfb2;
    return p;
}

GaussianSystem extend_linear(const GaussianSystem& sys, const VariableId& new_var,
                             const std::map<VariableId, double>& coeffs,
                             double noise_var) {
    if (noise_var < 0) throw DomainError("extend_linear: negative noise variance");
    if (sys.has(new_var)) throw DomainError("extend_linear: variable exists: " + new_var);
    const Eigen::Index n = sys.cov.rows();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (const auto& [name, c] : coeffs) {
        int i = sys.index_of(name);
        if (i < 0) throw DomainError("extend_linear: unknown variable " + name);
        w(i) = c;
    }
    Eigen::MatrixXd out(n + 1, n + 1);
    out.topLeftCorner(n, n) = sys.cov;
    Eigen::VectorXd cross = sys.cov * w;
    out.block(0, n, n, 1) = cross;
    out.block(n, 0, 1, n) = cross.transpose();
    out(n, n) = w.dot(cross) + noise_var;
    std::vector<VariableId> names = sys.vars;
    names.push_back(new_var);
    return GaussianSystem(std::move(names), std::move(out));
}

double gaussian_cond_mi(const GaussianSystem& sys, const MIAtom& atom) {
    std::vector<int> A, B, C;
    auto lookup = [&](const std::vector<VariableId>& names, std::vector<int>& out) {
        for (const auto& v : names) {
            int i = sys.index_of(v);
            if (i < 0) throw DomainError("gaussian_cond_mi: unknown variable " + v);
            out.push_back(i);
        }
    };
    lookup(atom.left, A);
    lookup(atom.right, B);
    lookup(atom.cond, C);

    // Conditional covariance of S given C by Schur complement.
    Eigen::MatrixXd cc = submatrix(sys.cov, C, C);
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    if (!C.empty()) {
        // Symmetric regularization keeps the Schur step defined when the
        // conditioning block is singular; the perturbation is below 1e-9 bits.
        cc.diagonal().array() += kDropVar;
        ldlt.compute(cc);
        if (ldlt.info() != Eigen::Success)
            throw NumericalError("gaussian_cond_mi: conditioning block factorization failed");
    }
    auto cond_cov = [&](const std::vector<int>& s) {
        Eigen::MatrixXd ss = submatrix(sys.cov, s, s);
        if (C.empty()) return ss;
        Eigen::MatrixXd sc = submatrix(sys.cov, s, C);
        return Eigen::MatrixXd(ss - sc * ldlt.solve(sc.transpose()));
    };

    std::vector<int> AB = A;
    AB.insert(AB.end(), B.begin(), B.end());
    double mi = 0.5 * (log2_pdet(cond_cov(A)) + log2_pdet(cond_cov(B)) -
                       log2_pdet(cond_cov(AB)));
    if (!std::isfinite(mi))
        throw NumericalError("gaussian_cond_mi: non-finite result for " + atom.str());
    if (mi < -1e-9)
        throw NumericalError("gaussian_cond_mi: " + atom.str() + " = " +
                             std::to_string(mi));
    return mi < 0.0 ? 0.0 : mi;
}

}  // namespace rbc
