#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rbc/gauss.hpp"
#include "rbc/parallel.hpp"

namespace rbc {

// Free parameters of the jointly Gaussian family used for the corner-point
// bounds: beta splits transmit power onto the relay-correlated component,
// gamma splits the residual onto the decodable cloud component, nhat is the
// compression noise variance (infinite = no compression).
struct GaussianParamPoint {
    double beta = 0.0;
    double gamma = 0.0;
    double nhat = kInf;

    auto operator<=>(const GaussianParamPoint&) const = default;
};

struct BoundResult {
    double rate = 0.0;  // bits per channel use
    GaussianParamPoint argmax;
    int active_constraint = 0;  // which min branch binds (0-based)
};

// The jointly Gaussian system behind one parameter point:
//   X1, U0 = sqrt(beta P/P1) X1 + V0, X = U0 + V2, Y1, Y2, and Yh1 = Y1 + Zh
// when nhat is finite. Power accounting keeps var(X) = P exactly.
GaussianSystem corner_family_system(const GaussianRbcParams& p,
                                    const GaussianParamPoint& q);

// R2 corner points of the Gaussian relay broadcast example. All branch
// values go through gaussian_cond_mi on an explicitly built system.
BoundResult wu_rate(const GaussianRbcParams& p);
BoundResult liang_pdf_rate(const GaussianRbcParams& p, Exec exec = Exec::Parallel);
BoundResult cf_rate(const GaussianRbcParams& p, Exec exec = Exec::Parallel);
// use_wyner_ziv swaps the feedback-constraint atom for its relaxed form.
BoundResult scheme1_rate(const GaussianRbcParams& p, bool use_wyner_ziv = false,
                         Exec exec = Exec::Parallel);

struct TableRow {
    double d = 0.0;
    BoundResult liang, scheme1, wu, cf;
};

std::vector<TableRow> table1(const std::vector<double>& ds,
                             const GaussianRbcParams& base,
                             Exec exec = Exec::Parallel);

std::string table1_csv(const std::vector<TableRow>& rows);
nlohmann::json to_json(const std::vector<TableRow>& rows);
nlohmann::json to_json(const BoundResult& r);

}  // namespace rbc
