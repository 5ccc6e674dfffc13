#pragma once

#include "mpecv/cone.hpp"
#include "mpecv/expr.hpp"
#include "mpecv/subdifferential.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mpecv {

/// Hand-supplied ∂ᵀf(k) for a function whose set the rules cannot derive.
/// `value` replaces f(k) where the formula is undefined at k.
struct ManualEntry {
    std::string function;
    RationalVector point;
    std::vector<RationalVector> vertices;
    std::optional<Rational> value;
};

/// A claimed subdifferential to compare against the computed one.
struct ReferenceSet {
    std::string function;
    RationalVector point;
    std::vector<RationalVector> points;
};

struct LabeledPoint {
    std::string label;
    RationalVector coords;
};

/// min J(k) s.t. ℓ(k) ≤ 0, h(k) = 0, G(k) ≥ 0, H(k) ≥ 0, GᵀH = 0.
struct MPECProblem {
    std::string name;
    Index dimension = 0;
    Expr objective = constant(0L);
    std::vector<Expr> inequalities;
    std::vector<Expr> equalities;
    std::vector<Expr> g;
    std::vector<Expr> h;
    std::vector<ManualEntry> manual;
    std::vector<ReferenceSet> references;
    std::vector<LabeledPoint> points;

    std::size_t pairs() const { return g.size(); }

    /// Throws ValidationError.
    void validate() const;
};

/// Function ids are "J", "l<i>", "h<j>", "G<i>", "H<i>" (1-based), optionally
/// prefixed with "-" for the negation. Throws ValidationError on unknown ids.
Expr function_expr(const MPECProblem& p, const std::string& id);

const ManualEntry* find_manual(const MPECProblem& p, const std::string& id, const RationalVector& k);

/// f(k), taken from a matching manual entry when it carries a value.
/// Throws DomainError when the formula is undefined at k.
Number function_value(const MPECProblem& p, const std::string& id, const RationalVector& k);

inline constexpr double default_zero_tolerance = 1e-9;

struct Violation {
    std::string constraint;
    std::string residual;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<Violation> violations;
};

/// Exact on rational values; floating values are compared with `tol`.
FeasibilityReport check_feasible(const MPECProblem& p, const RationalVector& k, double tol = default_zero_tolerance);

/// 0-based indices.
struct IndexSets {
    std::vector<std::size_t> active;  ///< I_ℓ
    std::vector<std::size_t> theta;   ///< G = 0 < H
    std::vector<std::size_t> omega;   ///< G = 0 = H
    std::vector<std::size_t> upsilon; ///< G > 0 = H
};

/// Throws FeasibilityError when k is infeasible.
IndexSets compute_index_sets(const MPECProblem& p, const RationalVector& k, double tol = default_zero_tolerance);

/// Memoized ∂ᵀ of named functions at one point; manual entries win.
class SubdifferentialProvider {
public:
    SubdifferentialProvider(const MPECProblem& p, RationalVector k) : problem_(p), point_(std::move(k)) {}

    /// Throws RuleFailure or DomainError.
    const Subdifferential& get(const std::string& id);

    const RationalVector& point() const { return point_; }

private:
    const MPECProblem& problem_;
    RationalVector point_;
    std::map<std::string, Subdifferential> cache_;
};

enum class Pool { Ineq, Eq, GTheta, GOmega, HUpsilon, HOmega, GHOmega };

std::string pool_name(Pool pool);

/// Vertices of one ∂ᵀ(±f)(k*) contributing to a pool.
struct PoolTerm {
    std::string function;
    Pool pool;
    std::vector<RationalVector> vertices;
};

struct GeneratorFamilies {
    Index dimension = 0;
    std::vector<PoolTerm> terms;

    /// Deduplicated union of the pool's vertices.
    std::vector<RationalVector> pool(Pool which) const;
    bool empty(Pool which) const;
};

/// Throws RuleFailure naming the first function whose set is unavailable.
GeneratorFamilies assemble_families(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider);

/// Polar of the union of the ℓ, h, G_Θ, H_Υ and (GH)_Ω pools.
/// Throws AllPoolsEmpty.
HalfspaceCone build_pi(const GeneratorFamilies& f);

/// Ψ = branch_g ∪ branch_h; kept as a union, never convexified.
struct PsiCone {
    HalfspaceCone branch_g;
    HalfspaceCone branch_h;
};

/// Throws AllPoolsEmpty when all seven pools are empty.
PsiCone build_psi(const GeneratorFamilies& f);

GeneratedCone build_delta(const GeneratorFamilies& f);
GeneratedCone build_lambda(const GeneratorFamilies& f);

} // namespace mpecv
