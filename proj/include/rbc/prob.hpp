#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rbc {

using VariableId = std::string;

struct Variable {
    VariableId name;
    int size = 2;  // alphabet cardinality, >= 1
};

// Conditional mutual information term I(left ; right | cond). The three
// sets are pairwise disjoint; left and right are nonempty.
struct MIAtom {
    std::vector<VariableId> left, right, cond;

    MIAtom() = default;
    MIAtom(std::vector<VariableId> l, std::vector<VariableId> r,
           std::vector<VariableId> c = {});

    std::string str() const;  // "I(A;B|C)" used in messages and JSON keys
    auto operator<=>(const MIAtom&) const = default;
};

// Dense joint probability tensor over named finite variables (row-major,
// last variable fastest). Immutable after construction.
class JointPmf {
public:
    JointPmf(std::vector<Variable> vars, std::vector<double> probs);

    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<double>& probs() const { return probs_; }
    int index_of(const VariableId& v) const;  // -1 when absent
    bool has(const VariableId& v) const { return index_of(v) >= 0; }

    JointPmf marginalize(const std::set<VariableId>& keep) const;
    double entropy() const;  // bits, over all variables

private:
    std::vector<Variable> vars_;
    std::vector<double> probs_;
};

// I(left; right | cond) in bits: H(left|cond) + H(right|cond) - H(left,right|cond).
// Values within 1e-12 below zero clamp to zero; anything more negative is an
// internal consistency failure.
double cond_mutual_information(const JointPmf& p, const MIAtom& atom);

enum class Scheme { Scheme1, Scheme2A, Scheme2B };

const char* scheme_name(Scheme s);

// Alphabet sizes and seed for one draw from a scheme's pmf family. The input
// X = f(U0,U1,U2) is a seeded lookup table and is not kept as a tensor axis;
// the channel factor consumes it directly.
struct StructuredFamilySpec {
    Scheme scheme = Scheme::Scheme1;
    int u0 = 2, u1 = 2, u2 = 2;
    int x = 2, x1 = 2, x2 = 2;
    int y1 = 2, y2 = 2;
    int yh1 = 2, yh2 = 2;
    std::uint64_t seed = 0;

    void validate() const;
};

// Joint pmf over the scheme's variables whose factorization matches the
// scheme's coding distribution: Dirichlet(1,..,1) factors, deterministic X,
// random channel. Deterministic given the seed.
//   Scheme1:  (U0,U1,U2,X1,Y1,Y2,Yh1)
//   Scheme2A: (U0,U1,U2,X1,X2,Y1,Y2,Yh1,Yh2), Yh1 ~ P(.|X1,Y1)
//   Scheme2B: same variables, Yh1 ~ P(.|U0,X1,X2,Y1)
JointPmf random_structured_pmf(const StructuredFamilySpec& spec);

nlohmann::json to_json(const JointPmf& p);
JointPmf pmf_from_json(const nlohmann::json& j);

}  // namespace rbc
