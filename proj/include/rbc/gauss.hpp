#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rbc/common.hpp"
#include "rbc/prob.hpp"

namespace rbc {

// Jointly Gaussian zero-mean variables identified by name, carried as a
// covariance matrix (units: power). Immutable in use; extend_linear returns
// a new system.
struct GaussianSystem {
    std::vector<VariableId> vars;
    Eigen::MatrixXd cov;

    GaussianSystem() : cov(0, 0) {}
    GaussianSystem(std::vector<VariableId> names, Eigen::MatrixXd c);

    int index_of(const VariableId& v) const;
    bool has(const VariableId& v) const { return index_of(v) >= 0; }
};

// Channel gains and powers of the scalar Gaussian relay broadcast example:
// Y1 = g01 X + Z1, Y2 = g02 X + g12 X1 + Z2, unit noise variances.
struct GaussianRbcParams {
    double g01 = 1.0, g02 = 1.0, g12 = 1.0;
    double P = 5.0, P1 = 1.0;
    double rfb1 = kInf, rfb2 = kInf;

    // Position form: g01 = 1/d, g02 = 1, g12 = 1/|1-d|; d outside {0,1}.
    static GaussianRbcParams from_distance(double d, double P, double P1,
                                           double rfb1 = kInf,
                                           double rfb2 = kInf);
};

// Append new_var = sum(coeffs[v] * v) + fresh noise of variance noise_var.
GaussianSystem extend_linear(const GaussianSystem& sys, const VariableId& new_var,
                             const std::map<VariableId, double>& coeffs,
                             double noise_var);

// I(left; right | cond) in bits via Schur-complement conditional covariances
// and log-determinants. Degenerate directions (conditional variance below
// 1e-12) are dropped from the determinant computations; remaining blocks with
// condition number above 1e12 raise NumericalError.
double gaussian_cond_mi(const GaussianSystem& sys, const MIAtom& atom);

}  // namespace rbc
