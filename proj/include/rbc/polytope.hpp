#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rbc {

using RateVar = std::string;

enum class Rel { Le, Eq };

struct Row {
    std::vector<double> coeffs;  // one per system variable
    Rel rel = Rel::Le;
    double rhs = 0.0;            // bits; always finite
};

// Linear inequality system over named rate variables. Rows are kept in a
// canonical order (normalized, lexicographically sorted) so that any two
// construction schedules of the same system compare equal.
struct HalfspaceSystem {
    std::vector<RateVar> vars;
    std::vector<Row> rows;

    int index_of(const RateVar& v) const;  // -1 when absent
    void add(std::vector<double> coeffs, Rel rel, double rhs);
    void canonicalize();
    bool satisfied(const std::vector<double>& point, double tol) const;
};

struct VertexSet {
    std::vector<std::vector<double>> points;
    double tol = 0.0;
};

enum class CompareOutcome { Equal, ANotInB, BNotInA };

struct CompareResult {
    CompareOutcome outcome = CompareOutcome::Equal;
    std::optional<std::vector<double>> witness;  // point in one, not the other
    double max_support_gap = 0.0;
};

// Exact projection dropping variable v. Equalities involving v are applied
// as substitutions; otherwise rows are split by the sign of v's coefficient,
// normalized to +/-1, and combined pairwise.
HalfspaceSystem fme_eliminate(const HalfspaceSystem& sys, const RateVar& v);

// Equivalent system with every retained inequality certified irredundant by
// maximizing its left side against the remaining rows (LP, tolerance 1e-9).
// An infeasible input collapses to the canonical infeasible row 0 <= -1.
HalfspaceSystem remove_redundant(const HalfspaceSystem& sys);

// Substitute v = value and drop its column.
HalfspaceSystem fix_variable(const HalfspaceSystem& sys, const RateVar& v,
                             double value);

bool is_feasible(const HalfspaceSystem& sys);

// Support function max d.x over the system (inside the internal guard box).
// nullopt when the system is infeasible.
std::optional<double> support_value(const HalfspaceSystem& sys,
                                    const std::vector<double>& direction);

// All basic feasible points from rank-|vars| row subsets; |vars| <= 3.
VertexSet enumerate_vertices(const HalfspaceSystem& sys, double tol = 1e-8);

// Mutual vertex membership plus support-function comparison on 64 fixed
// nonnegative directions. Requires identical variable lists.
CompareResult polytopes_equal(const HalfspaceSystem& a,
                              const HalfspaceSystem& b, double tol);

// True when inner is contained in outer within tol (vertex membership plus
// support comparison). On failure, witness receives a point of inner that
// lies outside outer.
bool contains(const HalfspaceSystem& outer, const HalfspaceSystem& inner,
              double tol, std::optional<std::vector<double>>* witness = nullptr);

// Fixed direction set used by polytopes_equal (unit vectors, all-ones,
// then a deterministic low-discrepancy fill).
std::vector<std::vector<double>> comparison_directions(std::size_t dim,
                                                       std::size_t count = 64);

nlohmann::json to_json(const HalfspaceSystem& sys);
HalfspaceSystem system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VertexSet& vs);

}  // namespace rbc
