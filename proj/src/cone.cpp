#include "mpecv/cone.hpp"

#include "mpecv/errors.hpp"

#include <algorithm>

namespace mpecv {

namespace {

void require_dimension(const RationalVector& v, Index n, const char* where)
{
    if (v.size() != n)
        throw DimensionMismatch(std::string(where) + ": expected dimension " + std::to_string(n) + ", got " +
                                std::to_string(v.size()));
}

} // namespace

// ---------------------------------------------------------------------------
// VertexPolytope

VertexPolytope::VertexPolytope(std::vector<RationalVector> vertices) : vertices_(std::move(vertices))
{
    if (vertices_.empty())
        throw ValidationError("a vertex polytope needs at least one vertex");
    for (const auto& v : vertices_)
        require_dimension(v, vertices_.front().size(), "VertexPolytope");
}

VertexPolytope VertexPolytope::singleton(RationalVector point)
{
    return VertexPolytope(std::vector<RationalVector>{std::move(point)});
}

Rational VertexPolytope::support(const RationalVector& d) const
{
    require_dimension(d, dimension(), "support");
    Rational best = vertices_.front().dot(d);
    for (std::size_t i = 1; i < vertices_.size(); ++i)
        best = std::max(best, Rational(vertices_[i].dot(d)));
    return best;
}

// ---------------------------------------------------------------------------
// Polars and membership

bool HalfspaceCone::contains(const RationalVector& d) const
{
    require_dimension(d, dimension, "HalfspaceCone::contains");
    return std::all_of(normals.begin(), normals.end(), [&](const RationalVector& g) { return g.dot(d) <= 0; });
}

HalfspaceCone polar(std::span<const RationalVector> generators, Index dimension)
{
    HalfspaceCone cone{dimension, {}};
    for (const auto& g : generators) {
        require_dimension(g, dimension, "polar");
        cone.normals.push_back(g);
    }
    return cone;
}

bool strict_polar_member(std::span<const RationalVector> generators, const RationalVector& u)
{
    for (const auto& g : generators) {
        require_dimension(g, u.size(), "strict_polar_member");
        if (g.dot(u) >= 0)
            return false;
    }
    return true;
}

ConeMembership cone_member(const GeneratedCone& cone, const RationalVector& x)
{
    require_dimension(x, cone.dimension, "cone_member");
    if (cone.generators.empty()) {
        if (is_zero(x))
            return {true, RationalVector(0)};
        return {false, std::nullopt};
    }
    RationalMatrix a(cone.dimension, static_cast<Index>(cone.generators.size()));
    for (std::size_t j = 0; j < cone.generators.size(); ++j) {
        require_dimension(cone.generators[j], cone.dimension, "cone_member");
        a.col(static_cast<Index>(j)) = cone.generators[j];
    }
    auto cert = lp_feasible(a, x, std::vector<bool>(cone.generators.size(), true));
    if (!cert.feasible)
        return {false, std::nullopt};
    return {true, cert.solution};
}

std::optional<RationalVector> convex_weights(std::span<const RationalVector> points, const RationalVector& x)
{
    if (points.empty())
        return std::nullopt;
    RationalMatrix a(x.size(), static_cast<Index>(points.size()));
    std::vector<Index> group;
    for (std::size_t j = 0; j < points.size(); ++j) {
        require_dimension(points[j], x.size(), "convex_weights");
        a.col(static_cast<Index>(j)) = points[j];
        group.push_back(static_cast<Index>(j));
    }
    auto cert = lp_feasible(a, x, std::vector<bool>(points.size(), true), {group});
    if (!cert.feasible)
        return std::nullopt;
    return cert.solution;
}

std::vector<RationalVector> reduce_to_vertices(std::vector<RationalVector> points)
{
    sort_unique(points);
    for (std::size_t i = 0; i < points.size() && points.size() > 1;) {
        std::vector<RationalVector> others;
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i)
                others.push_back(points[j]);
        if (convex_weights(others, points[i]))
            points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return points;
}

VertexPolytope minkowski_sum(const VertexPolytope& p, const VertexPolytope& q)
{
    if (p.dimension() != q.dimension())
        throw DimensionMismatch("minkowski_sum: dimensions differ");
    std::vector<RationalVector> sums;
    sums.reserve(p.vertices().size() * q.vertices().size());
    for (const auto& v : p.vertices())
        for (const auto& w : q.vertices())
            sums.push_back(v + w);
    if (p.dimension() <= 3)
        return VertexPolytope(reduce_to_vertices(std::move(sums)));
    sort_unique(sums);
    return VertexPolytope(std::move(sums));
}

// ---------------------------------------------------------------------------
// Double description

namespace {

bool adjacent(const RationalVector& p, const RationalVector& q, const std::vector<RationalVector>& rays,
              const std::vector<RationalVector>& processed)
{
    std::vector<const RationalVector*> common;
    for (const auto& c : processed)
        if (c.dot(p) == 0 && c.dot(q) == 0)
            common.push_back(&c);
    for (const auto& r : rays) {
        if (&r == &p || &r == &q)
            continue;
        if (std::all_of(common.begin(), common.end(), [&](const RationalVector* c) { return c->dot(r) == 0; }))
            return false;
    }
    return true;
}

} // namespace

std::vector<RationalVector> extreme_rays(const HalfspaceCone& cone)
{
    const Index n = cone.dimension;
    if (n > max_enumeration_dimension)
        throw DimensionTooLarge("extreme ray enumeration is limited to dimension " +
                                std::to_string(max_enumeration_dimension));

    std::vector<RationalVector> lineality;
    for (Index i = 0; i < n; ++i) {
        RationalVector e = RationalVector::Zero(n);
        e[i] = 1;
        lineality.push_back(e);
    }
    std::vector<RationalVector> rays;
    std::vector<RationalVector> processed;

    for (const auto& a : cone.normals) {
        require_dimension(a, n, "extreme_rays");
        if (is_zero(a))
            continue;

        auto hit = std::find_if(lineality.begin(), lineality.end(), [&](const RationalVector& l) { return a.dot(l) != 0; });
        if (hit != lineality.end()) {
            RationalVector l = *hit;
            lineality.erase(hit);
            if (a.dot(l) > 0)
                l = -l;
            const Rational al = a.dot(l);
            for (auto& other : lineality)
                other -= (Rational(a.dot(other)) / al) * l;
            for (auto& r : rays)
                r = primitive(RationalVector(r - (Rational(a.dot(r)) / al) * l));
            rays.push_back(primitive(l));
            sort_unique(rays);
            processed.push_back(a);
            continue;
        }

        std::vector<RationalVector> next;
        std::vector<const RationalVector*> positive, negative;
        for (const auto& r : rays) {
            const Rational s = a.dot(r);
            if (s > 0)
                positive.push_back(&r);
            else {
                next.push_back(r);
                if (s < 0)
                    negative.push_back(&r);
            }
        }
        for (const RationalVector* p : positive)
            for (const RationalVector* q : negative)
                if (adjacent(*p, *q, rays, processed)) {
                    RationalVector combined = Rational(a.dot(*p)) * (*q) - Rational(a.dot(*q)) * (*p);
                    next.push_back(primitive(combined));
                }
        sort_unique(next);
        rays = std::move(next);
        processed.push_back(a);
    }

    std::vector<RationalVector> out = rays;
    for (const auto& l : lineality) {
        RationalVector base = primitive(l);
        out.push_back(base);
        out.push_back(-base);
    }
    return out;
}

GeneratedCone generated_by(const HalfspaceCone& cone) { return {cone.dimension, extreme_rays(cone)}; }

bool is_trivial(const HalfspaceCone& cone) { return extreme_rays(cone).empty(); }

SubsetResult cone_subset(const GeneratedCone& a, const HalfspaceCone& b)
{
    if (a.dimension != b.dimension)
        throw DimensionMismatch("cone_subset: dimensions differ");
    for (const auto& g : a.generators) {
        require_dimension(g, a.dimension, "cone_subset");
        if (!b.contains(g))
            return {false, g};
    }
    return {true, std::nullopt};
}

} // namespace mpecv
