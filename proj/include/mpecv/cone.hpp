#pragma once

#include "mpecv/lp.hpp"
#include "mpecv/rational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mpecv {

/// conv(vertices); nonempty, so always compact and convex. Redundant
/// (non-vertex) points are allowed: consumers only use the list as generators.
class VertexPolytope {
public:
    explicit VertexPolytope(std::vector<RationalVector> vertices);

    static VertexPolytope singleton(RationalVector point);

    Index dimension() const { return vertices_.front().size(); }
    const std::vector<RationalVector>& vertices() const { return vertices_; }

    /// max over vertices of ⟨v, d⟩.
    Rational support(const RationalVector& d) const;

private:
    std::vector<RationalVector> vertices_;
};

/// {Σ β_g g : β ≥ 0}; the empty generator list is the origin.
struct GeneratedCone {
    Index dimension = 0;
    std::vector<RationalVector> generators;
};

/// {d : ⟨g, d⟩ ≤ 0 for every normal g}; no normals means the whole space.
struct HalfspaceCone {
    Index dimension = 0;
    std::vector<RationalVector> normals;

    bool contains(const RationalVector& d) const;
};

/// Negative polar {u : ⟨u, g⟩ ≤ 0 ∀g}.
HalfspaceCone polar(std::span<const RationalVector> generators, Index dimension);

/// True iff ⟨u, g⟩ < 0 for every generator (vacuously true for none).
bool strict_polar_member(std::span<const RationalVector> generators, const RationalVector& u);

struct ConeMembership {
    bool member = false;
    std::optional<RationalVector> weights;
};

ConeMembership cone_member(const GeneratedCone& cone, const RationalVector& x);

/// Convex weights when x ∈ conv(points).
std::optional<RationalVector> convex_weights(std::span<const RationalVector> points, const RationalVector& x);

/// Drops duplicates and every point lying in the hull of the remaining ones.
std::vector<RationalVector> reduce_to_vertices(std::vector<RationalVector> points);

/// conv{v + w}; hull reduction is applied at dimension ≤ 3 only.
VertexPolytope minkowski_sum(const VertexPolytope& p, const VertexPolytope& q);

inline constexpr Index max_enumeration_dimension = 8;

/// Generators of a halfspace cone by double description: extreme rays of the
/// pointed part plus ± pairs spanning the lineality space. Rays are returned
/// as primitive integer vectors. Throws DimensionTooLarge above dimension 8.
std::vector<RationalVector> extreme_rays(const HalfspaceCone& cone);

GeneratedCone generated_by(const HalfspaceCone& cone);

/// True iff the cone is {0}.
bool is_trivial(const HalfspaceCone& cone);

struct SubsetResult {
    bool subset = true;
    std::optional<RationalVector> witness;
};

/// Generator-wise test of a ⊆ b; a violating generator is the witness.
SubsetResult cone_subset(const GeneratedCone& a, const HalfspaceCone& b);

} // namespace mpecv
