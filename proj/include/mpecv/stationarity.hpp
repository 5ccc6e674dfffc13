#pragma once

#include "mpecv/mpec.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mpecv {

enum class StationarityKind { GA, GS };

std::string kind_name(StationarityKind kind);

/// Multiplier families of the stationarity system, each paired with the
/// function whose subdifferential it scales:
///   λ^ℓ ↔ ℓ_i, λ^h ↔ h_j, μ^h ↔ −h_j, λ^G ↔ −G_i, λ^H ↔ −H_i, μ^G ↔ G_i, μ^H ↔ H_i.
enum class Multiplier { LambdaEll, LambdaEq, MuEq, LambdaG, LambdaH, MuG, MuH };

inline constexpr std::array<Multiplier, 7> all_multipliers = {Multiplier::LambdaEll, Multiplier::LambdaEq,
                                                              Multiplier::MuEq,      Multiplier::LambdaG,
                                                              Multiplier::LambdaH,   Multiplier::MuG,
                                                              Multiplier::MuH};

/// "lambda_ell", "mu_G", ...
std::string multiplier_name(Multiplier m);
/// Function id scaled by the multiplier at 0-based index i.
std::string multiplier_function(Multiplier m, std::size_t i);

/// Full multiplier table; entries outside the allowed pattern are zero.
struct MultiplierVector {
    std::array<std::vector<Rational>, 7> values;

    static MultiplierVector zeros(const MPECProblem& p);

    std::vector<Rational>& operator[](Multiplier m) { return values[static_cast<std::size_t>(m)]; }
    const std::vector<Rational>& operator[](Multiplier m) const { return values[static_cast<std::size_t>(m)]; }
};

/// A point of conv(vertices) with the weights that produce it.
struct SelectedSubgradient {
    std::string function;
    std::vector<RationalVector> vertices;
    RationalVector weights;
    RationalVector point;
};

/// For i ∈ Ω under GA: which μ may be nonzero.
enum class OmegaChoice { NeitherMu, MuGOnly, MuHOnly };

std::string omega_choice_name(OmegaChoice c);

struct StationarityCertificate {
    StationarityKind kind = StationarityKind::GS;
    MultiplierVector multipliers;
    SelectedSubgradient objective;
    /// One entry per nonzero multiplier; absent terms carry no subgradient.
    std::vector<std::pair<std::pair<Multiplier, std::size_t>, SelectedSubgradient>> terms;
    /// Parallel to IndexSets::omega.
    std::vector<OmegaChoice> omega_branch;
};

struct StationarityConfig {
    std::size_t branch_cap = 20;
};

struct StationarityResult {
    StationarityKind kind = StationarityKind::GS;
    std::optional<StationarityCertificate> certificate;
    std::size_t branches_tried = 0;
};

/// One exact LP over cone(vertices) per allowed term.
/// Throws RuleFailure, DomainError, FeasibilityError.
StationarityResult check_gs_stationary(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider);

/// All-zero Ω branch first, then the 2^|Ω| alternatives in mask order; first
/// feasible branch wins. Throws BranchCapExceeded, RuleFailure.
StationarityResult check_ga_stationary(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                                       const StationarityConfig& cfg = {});

struct CertificateCheck {
    bool ok = true;
    std::vector<std::string> reasons;
};

/// Independent re-check of the zero sum, signs, zero pattern, Ω rule and
/// convex weights against freshly obtained subdifferentials.
CertificateCheck verify_certificate(const StationarityCertificate& cert, const MPECProblem& p, const IndexSets& sets,
                                    SubdifferentialProvider& provider);

} // namespace mpecv
