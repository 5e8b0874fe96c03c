#pragma once

#include <vector>

namespace rbc::lp {

enum class Status { Optimal, Infeasible };

struct Result {
    Status status = Status::Infeasible;
    double value = 0.0;             // objective at optimum
    std::vector<double> point;      // maximizer
};

struct Constraint {
    std::vector<double> coeffs;
    bool equality = false;          // false: coeffs.x <= rhs, true: ==
    double rhs = 0.0;
};

// Maximize obj.x subject to the constraints and the box lo <= x_j <= hi.
// The box keeps every certification LP bounded; callers pick it wide enough
// that it never cuts the region of interest. Dense two-phase simplex with
// Bland's rule; suited to the small systems produced by elimination
// (tens of variables, a few hundred rows).
Result maximize(const std::vector<double>& obj,
                const std::vector<Constraint>& cons,
                double lo, double hi);

}  // namespace rbc::lp
