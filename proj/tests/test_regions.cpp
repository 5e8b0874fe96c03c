#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "rbc/regions.hpp"

using namespace rbc;

namespace {

bool mentions_yh1(const RegionSpec& spec) {
    for (const auto& at : spec.atoms()) {
        for (const auto& list : {at.left, at.right, at.cond}) {
            for (const auto& v : list) {
                if (v == "Yh1") return true;
            }
        }
    }
    return false;
}

MIAssignment zeros_for(const RegionSpec& spec) {
    MIAssignment a;
    a.source = "pmf";
    for (const auto& at : spec.atoms()) a.values[at] = 0.0;
    return a;
}

JointPmf structured(Scheme s, std::uint64_t seed,
                    int yh1 = 2, int x1 = 2, int x2 = 2) {
    StructuredFamilySpec f;
    f.scheme = s;
    f.seed = seed;
    f.yh1 = yh1;
    f.x1 = x1;
    f.x2 = x2;
    return random_structured_pmf(f);
}

}  // namespace

TEST_CASE("liang template has five rows and no compression atoms") {
    auto spec = build_region(RegionId::Liang);
    CHECK(spec.rows.size() == 5);
    CHECK(spec.feasibility.empty());
    CHECK(!mentions_yh1(spec));
}

TEST_CASE("theorem1 template shape") {
    auto spec = build_region(RegionId::Theorem1);
    CHECK(spec.rows.size() == 5);
    CHECK(spec.feasibility.size() == 1);
    CHECK(mentions_yh1(spec));
}

TEST_CASE("theorem2 rows carry min-term corrections") {
    auto spec = build_region(RegionId::Theorem2);
    CHECK(spec.rows.size() == 5);
    CHECK(spec.feasibility.size() == 2);
    CHECK(spec.rows[0].rhs.min_terms.size() == 1);   // R0+R1 row: Delta1
    CHECK(spec.rows[4].rhs.min_terms.size() == 2);   // 2R0+R1+R2 row: both
}

TEST_CASE("wu template is two-dimensional with five rows") {
    auto spec = build_region(RegionId::Wu);
    CHECK(spec.rate_vars == std::vector<RateVar>{"R1", "R2"});
    CHECK(spec.rows.size() == 5);
    CHECK(spec.feasibility.size() == 2);
}

TEST_CASE("theorem3v2 is the index swap of theorem3v1") {
    auto v1 = build_region(RegionId::Theorem3v1);
    auto v2 = build_region(RegionId::Theorem3v2);
    REQUIRE(v1.rows.size() == v2.rows.size());
    // Instantiating both on an index-symmetric assignment must agree after
    // swapping the rate axes.
    auto pmf = structured(Scheme::Scheme2B, 5);
    std::set<MIAtom> atoms = v1.atoms();
    for (const auto& at : v2.atoms()) atoms.insert(at);
    auto a = MIAssignment::from_pmf(pmf, atoms);
    auto i1 = instantiate_region(v1, a, 0.3, 0.7);
    auto i2 = instantiate_region(v2, a, 0.7, 0.3);
    // v2 instantiated with swapped feedback caps, swapped axes: same polytope
    // as v1 with R1 and R2 exchanged.
    auto swapped = i2.polytope;
    for (auto& row : swapped.rows) std::swap(row.coeffs[1], row.coeffs[2]);
    swapped.canonicalize();
    auto cmp = polytopes_equal(i1.polytope, swapped, 1e-10);
    CHECK(cmp.outcome == CompareOutcome::Equal);
}

TEST_CASE("instantiate with all-zero atoms pins the origin") {
    for (RegionId id : {RegionId::Theorem1, RegionId::Theorem2, RegionId::Liang}) {
        auto spec = build_region(id);
        auto inst = instantiate_region(spec, zeros_for(spec), kInf, kInf);
        auto vs = enumerate_vertices(inst.polytope);
        REQUIRE(vs.points.size() == 1);
        for (double c : vs.points[0]) CHECK(c == doctest::Approx(0.0));
    }
}

TEST_CASE("liang instantiation rows match re-evaluated atom sums") {
    auto pmf = structured(Scheme::Scheme1, 31, /*yh1=*/1);
    auto spec = build_region(RegionId::Liang);
    auto a = MIAssignment::from_pmf(pmf, spec.atoms());
    auto inst = instantiate_region(spec, a, kInf, kInf);
    for (const auto& p : enumerate_vertices(inst.polytope).points) {
        for (const auto& row : spec.rows) {
            double lhs = 0.0;
            for (int j = 0; j < 3; ++j) lhs += row.rate_coeffs[j] * p[j];
            CHECK(lhs <= row.rhs.eval(a, kInf, kInf) + 1e-9);
        }
    }
}

TEST_CASE("theorem2 delta with constant relay inputs") {
    auto pmf = structured(Scheme::Scheme2A, 8, 2, /*x1=*/1, /*x2=*/1);
    auto spec = build_region(RegionId::Theorem2);
    auto a = MIAssignment::from_pmf(pmf, spec.atoms());
    // Delta1 = min{0, I(X2;Y1|X1) - I(Yh2;Y2|X1,X2,Y1)} = -I(Yh2;Y2|Y1).
    double direct = cond_mutual_information(
        pmf, MIAtom({"Yh2"}, {"Y2"}, {"X1", "X2", "Y1"}));
    double d1 = spec.rows[0].rhs.min_terms[0].eval(a, kInf, kInf);
    CHECK(std::min(0.0, d1) == doctest::Approx(-direct).epsilon(1e-12));
}

TEST_CASE("relaxed feedback constraint swaps the atom and is idempotent") {
    auto spec = build_region(RegionId::Theorem1);
    auto relaxed = relaxed_feedback_constraint(spec);
    REQUIRE(relaxed.feasibility.size() == 1);
    const auto& at = relaxed.feasibility[0].lhs.terms[0].second;
    CHECK(at.cond == std::vector<VariableId>{"U0", "X1", "Y2"});
    auto twice = relaxed_feedback_constraint(relaxed);
    CHECK(twice.feasibility[0].lhs.terms[0].second == at);
    CHECK_THROWS(relaxed_feedback_constraint(build_region(RegionId::Wu)));
}

TEST_CASE("relaxed constraint value never exceeds the original") {
    auto spec = build_region(RegionId::Theorem1);
    auto relaxed = relaxed_feedback_constraint(spec);
    std::set<MIAtom> atoms = spec.atoms();
    for (const auto& at : relaxed.atoms()) atoms.insert(at);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto pmf = structured(Scheme::Scheme1, 100 + seed);
        auto a = MIAssignment::from_pmf(pmf, atoms);
        double orig = spec.feasibility[0].lhs.eval(a, kInf, kInf);
        double relx = relaxed.feasibility[0].lhs.eval(a, kInf, kInf);
        CHECK(relx <= orig + 1e-10);
    }
}

TEST_CASE("delta terms are never positive and I1 is capped by its base") {
    auto spec = build_region(RegionId::Theorem3v1);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto pmf = structured(Scheme::Scheme2B, 300 + seed);
        auto a = MIAssignment::from_pmf(pmf, spec.atoms());
        for (const auto& row : spec.rows) {
            for (const auto& m : row.rhs.min_terms)
                CHECK(std::min(0.0, m.eval(a, 0.1, 0.2)) <= 0.0);
        }
        // R0+R1 row: base T0 + I1b; with finite rfb2 the min correction only
        // lowers it.
        double with_cap = spec.rows[1].rhs.eval(a, kInf, 0.05);
        double without = spec.rows[1].rhs.eval(a, kInf, kInf);
        CHECK(with_cap <= without + 1e-12);
    }
}

TEST_CASE("feasibility verdict is monotone in the feedback rates") {
    auto spec = build_region(RegionId::Theorem2);
    auto pmf = structured(Scheme::Scheme2A, 17);
    auto a = MIAssignment::from_pmf(pmf, spec.atoms());
    bool prev = false;
    for (double r : {0.0, 0.05, 0.2, 1.0, 4.0}) {
        bool f = instantiate_region(spec, a, r, r).feasible;
        if (prev) CHECK(f);  // once feasible, stays feasible
        prev = f;
    }
    CHECK(instantiate_region(spec, a, kInf, kInf).feasible);
}

TEST_CASE("missing atoms are reported by name") {
    auto spec = build_region(RegionId::Liang);
    MIAssignment empty;
    empty.source = "pmf";
    CHECK_THROWS_WITH_AS(instantiate_region(spec, empty, kInf, kInf),
                         doctest::Contains("I("), DomainError);
}

TEST_CASE("region templates serialize with structured atoms") {
    auto j = to_json(build_region(RegionId::Theorem2));
    CHECK(j.at("region") == "theorem2");
    CHECK(j.at("rows").size() == 5);
    const auto& atom0 = j.at("rows")[0].at("rhs").at("terms")[0].at("atom");
    CHECK(atom0.contains("left"));
    CHECK(atom0.contains("right"));
    CHECK(atom0.contains("cond"));
}
