#pragma once

#include "mpecv/cone.hpp"
#include "mpecv/expr.hpp"

#include <cstdint>
#include <optional>

namespace mpecv {

enum class Provenance { RuleDerived, Manual };

/// Tangential subdifferential ∂ᵀf(k): the compact convex set whose support
/// function is the directional derivative f′(k, ·).
struct Subdifferential {
    RationalVector base_point;
    VertexPolytope polytope;
    Provenance provenance = Provenance::RuleDerived;
    /// False when a floating value (exp) entered the vertices; they are then
    /// the exact dyadic images of the computed doubles.
    bool exact = true;
    /// Function value at the base point when supplied alongside a manual set.
    std::optional<Number> base_value;
};

/// Bottom-up rules: smooth subtree → {∇}; |u| at u = 0 → conv{±∇u}; max of
/// smooth children → conv of active gradients; sums → Minkowski sums; factors
/// with a nonnegative value scale the set. A manual override wins
/// unconditionally. Throws RuleFailure (naming `function_id`, also when a
/// denominator vanishes at k) or DomainError.
Subdifferential build_subdifferential(const Expr& e, const RationalVector& k,
                                      const std::optional<VertexPolytope>& manual_override = std::nullopt,
                                      const std::optional<Rational>& manual_value = std::nullopt,
                                      const std::string& function_id = {});

struct DirectionSampleConfig {
    std::size_t planar_count = 360;
    std::size_t random_count = 1000;
    std::uint64_t seed = 1;
    /// Skip directions with a (numerically) zero coordinate.
    bool exclude_axes = false;
    LimitConfig limit;
};

struct SupportReport {
    double max_deviation = 0.0;
    std::optional<Vector<double>> worst_direction;
    std::size_t checked = 0;
    std::size_t divergent = 0;
    std::size_t inevaluable = 0;
    std::size_t skipped_axes = 0;
};

inline constexpr double support_tolerance = 1e-6;

/// Compares max_v ⟨v, d⟩ with the numeric f′(k, d) on sampled unit directions.
SupportReport support_consistency(const Subdifferential& s, const Expr& e, const DirectionSampleConfig& cfg = {});

struct ConvexityProbeConfig {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    double tolerance = 1e-6;
    LimitConfig limit;
};

struct TangentialConvexityWitness {
    RationalVector d1;
    RationalVector d2;
    Rational lambda;
    double combined = 0.0; ///< f′(k, λd₁ + (1−λ)d₂)
    double bound = 0.0;    ///< λf′(k, d₁) + (1−λ)f′(k, d₂)
};

struct TangentialConvexityVerdict {
    bool refuted = false;
    std::size_t samples = 0;
    std::size_t excluded = 0;
    std::optional<TangentialConvexityWitness> witness;
};

/// Tests convexity of d ↦ f′(k, d) on the pairs (e_i, −e_i, ½) first and then
/// on seeded random pairs. Non-converging directions are excluded and counted.
TangentialConvexityVerdict tangential_convexity_probe(const Expr& e, const RationalVector& k,
                                                      const ConvexityProbeConfig& cfg = {},
                                                      const std::optional<Number>& base_value = std::nullopt);

} // namespace mpecv
