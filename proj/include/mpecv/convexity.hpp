#pragma once

#include "mpecv/stationarity.hpp"
#include "mpecv/subdifferential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpecv {

/// Sample region for the falsification checks: k ± e_i, then the grid
/// k + step·ℤⁿ inside the ball (only when n ≤ grid_max_dimension), then
/// seeded random dyadic points of the ball.
struct SampleConfig {
    std::uint64_t seed = 1;
    std::size_t random_count = 10000;
    Rational radius = 2;
    Rational grid_step = Rational(1, 4);
    Index grid_max_dimension = 3;
    /// Floating comparisons only count f(t) < f(k) when f(t) < f(k) − tolerance.
    double tolerance = 1e-12;
};

std::vector<RationalVector> sample_points(const RationalVector& k, const SampleConfig& cfg);
std::string describe_region(const RationalVector& k, const SampleConfig& cfg);

enum class ConvexityStatus { NoViolation, Refuted };

/// A failed directional-derivative convexity test: ∂ᵀ does not exist at k.
struct PremiseWitness {
    RationalVector d1;
    RationalVector d2;
    Rational lambda;
};

struct ConvexityVerdict {
    std::string property;
    std::string function;
    ConvexityStatus status = ConvexityStatus::NoViolation;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    std::uint64_t seed = 1;
    std::string region;
    std::optional<RationalVector> witness_point;
    std::optional<RationalVector> witness_subgradient;
    std::optional<PremiseWitness> premise;
    std::string note;

    bool refuted() const { return status == ConvexityStatus::Refuted; }
};

/// f(t) < f(k) ⇒ ⟨ξ, t − k⟩ < 0 for every vertex ξ of s.
ConvexityVerdict check_pseudoconvex(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                    const SampleConfig& cfg = {}, const std::string& function = {});
/// f(t) ≤ f(k) ⇒ ⟨ξ, t − k⟩ ≤ 0 for every vertex ξ of s.
ConvexityVerdict check_quasiconvex(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                   const SampleConfig& cfg = {}, const std::string& function = {});

/// Concave sides run the convex checks on −e with `negated` = ∂ᵀ(−e)(k).
ConvexityVerdict check_pseudoconcave(const Expr& e, const RationalVector& k, const Subdifferential& negated,
                                     const SampleConfig& cfg = {}, const std::string& function = {});
ConvexityVerdict check_quasiconcave(const Expr& e, const RationalVector& k, const Subdifferential& negated,
                                    const SampleConfig& cfg = {}, const std::string& function = {});
/// Pseudoconvex and pseudoconcave; the first refutation is reported.
ConvexityVerdict check_pseudoaffine(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                    const Subdifferential& negated, const SampleConfig& cfg = {},
                                    const std::string& function = {});

/// Overloads deriving ∂ᵀ(−e)(k) by the rules. Throw RuleFailure.
ConvexityVerdict check_pseudoconcave(const Expr& e, const RationalVector& k, const SampleConfig& cfg = {});
ConvexityVerdict check_quasiconcave(const Expr& e, const RationalVector& k, const SampleConfig& cfg = {});
ConvexityVerdict check_pseudoaffine(const Expr& e, const RationalVector& k, const SampleConfig& cfg = {});

struct MuIndexSets {
    std::vector<std::size_t> omega_g;      ///< i ∈ Ω, μ^H_i = 0 < μ^G_i
    std::vector<std::size_t> omega_h;      ///< i ∈ Ω, μ^G_i = 0 < μ^H_i
    std::vector<std::size_t> theta_plus;   ///< i ∈ Θ, μ^G_i > 0
    std::vector<std::size_t> upsilon_plus; ///< i ∈ Υ, μ^H_i > 0

    bool empty() const { return omega_g.empty() && omega_h.empty() && theta_plus.empty() && upsilon_plus.empty(); }
};

MuIndexSets mu_index_sets(const StationarityCertificate& cert, const IndexSets& sets);

enum class SufficiencyStatus { Certified, HypothesisFailed, IndexSetsNonempty };

std::string sufficiency_status_name(SufficiencyStatus s);

struct SufficiencyVerdict {
    SufficiencyStatus status = SufficiencyStatus::Certified;
    MuIndexSets mu;
    /// Failing hypothesis or nonempty index set, e.g. "J pseudoconvex" or "Omega_mu^G".
    std::string which;
    std::vector<ConvexityVerdict> checks;
};

/// Requires the four μ index sets empty, J pseudoconvex, and ℓ_i (I_ℓ), ±h_j,
/// −G_i (Θ ∪ Ω), −H_i (Υ ∪ Ω) quasiconvex at k*, checked in that order.
/// Certified means no sample refuted a hypothesis; it is not a proof.
SufficiencyVerdict sufficiency_check(const MPECProblem& p, const IndexSets& sets, const StationarityCertificate& cert,
                                     SubdifferentialProvider& provider, const SampleConfig& cfg = {});

} // namespace mpecv
