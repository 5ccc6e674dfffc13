#include "mpecv/errors.hpp"
#include "mpecv/subdifferential.hpp"

#include "doctest.h"

#include <random>

using namespace mpecv;

namespace {

using Vs = std::vector<RationalVector>;

RationalVector v2(long a, long b) { return make_vector({a, b}); }

Vs vertices_of(const Subdifferential& s) { return reduce_to_vertices(s.polytope.vertices()); }

ConvexityProbeConfig quick_probe()
{
    ConvexityProbeConfig cfg;
    cfg.samples = 2000;
    return cfg;
}

} // namespace

TEST_CASE("rule-derived sets")
{
    const RationalVector origin = v2(0, 0);
    CHECK(vertices_of(build_subdifferential(abs(var(0)) + pow(var(1), 2), origin)) == Vs{v2(-1, 0), v2(1, 0)});

    const Subdifferential e3 = build_subdifferential(-exp(var(0) + var(1)), origin);
    REQUIRE(e3.polytope.vertices().size() == 1);
    CHECK(e3.polytope.vertices().front() == v2(-1, -1));

    CHECK(vertices_of(build_subdifferential(abs(var(1)), origin)) == Vs{v2(0, -1), v2(0, 1)});
    CHECK(vertices_of(build_subdifferential(max({var(0), var(1), constant(-1L)}), origin)) == Vs{v2(0, 1), v2(1, 0)});
    // Sum rule: the sum's set is the Minkowski sum of the parts.
    CHECK(vertices_of(build_subdifferential(abs(var(0)) + abs(var(1)), origin)) ==
          Vs{v2(-1, -1), v2(-1, 1), v2(1, -1), v2(1, 1)});
    // A nonnegative factor scales the set.
    CHECK(vertices_of(build_subdifferential(constant(3L) * abs(var(0)), origin)) == Vs{v2(-3, 0), v2(3, 0)});
}

TEST_CASE("manual override wins")
{
    const Expr e1 = pow(var(0), 3) / var(1) + var(0);
    CHECK_THROWS_AS(build_subdifferential(e1, v2(0, 0), std::nullopt, std::nullopt, "J"), RuleFailure);
    try {
        build_subdifferential(e1, v2(0, 0), std::nullopt, std::nullopt, "J");
    } catch (const RuleFailure& e) {
        CHECK(e.function() == "J");
    }
    const Subdifferential s =
        build_subdifferential(e1, v2(0, 0), VertexPolytope({v2(1, 0)}), Rational(0), "J");
    CHECK(s.provenance == Provenance::Manual);
    CHECK(vertices_of(s) == Vs{v2(1, 0)});
}

TEST_CASE("support consistency")
{
    const Expr e2 = abs(var(0)) + pow(var(1), 2);
    const RationalVector origin = v2(0, 0);
    const SupportReport good = support_consistency(build_subdifferential(e2, origin), e2);
    CHECK(good.checked == 360);
    CHECK(good.max_deviation <= support_tolerance);

    // A wrong hand set is caught.
    Subdifferential wrong = build_subdifferential(e2, origin);
    wrong.polytope = VertexPolytope({v2(1, 0)});
    const SupportReport bad = support_consistency(wrong, e2);
    CHECK(bad.max_deviation > 0.5);
    REQUIRE(bad.worst_direction.has_value());
    CHECK((*bad.worst_direction)[0] < 0);

    DirectionSampleConfig off_axes;
    off_axes.exclude_axes = true;
    const Expr e1 = pow(var(0), 3) / var(1) + var(0);
    const Subdifferential s1 = build_subdifferential(e1, origin, VertexPolytope({v2(1, 0)}), Rational(0));
    const SupportReport r1 = support_consistency(s1, e1, off_axes);
    CHECK(r1.skipped_axes > 0);
    CHECK(r1.max_deviation <= support_tolerance);
}

TEST_CASE("sum rule against numeric support")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Rational a(static_cast<long>(rng() % 5) + 1, 2), b(static_cast<long>(rng() % 7) - 3, 3);
        const Expr f = constant(a) * abs(var(0) - var(1)) + max({constant(b) * var(0), var(1)}) + pow(var(0), 2);
        const Subdifferential s = build_subdifferential(f, v2(0, 0));
        DirectionSampleConfig cfg;
        cfg.planar_count = 72;
        CHECK(support_consistency(s, f, cfg).max_deviation <= support_tolerance);
    }
}

TEST_CASE("tangential convexity probe")
{
    const RationalVector origin = v2(0, 0);
    CHECK_FALSE(tangential_convexity_probe(abs(var(0)) + pow(var(1), 2), origin, quick_probe()).refuted);
    CHECK_FALSE(tangential_convexity_probe(-exp(var(0) + var(1)), origin, quick_probe()).refuted);

    const TangentialConvexityVerdict v = tangential_convexity_probe(-abs(var(0)), origin, quick_probe());
    REQUIRE(v.refuted);
    REQUIRE(v.witness.has_value());
    // The witness literally violates convexity of d ↦ f'(k, d).
    CHECK(v.witness->combined > v.witness->bound);
    const Rational lam = v.witness->lambda;
    const RationalVector mid = lam * v.witness->d1 + (1 - lam) * v.witness->d2;
    const double lhs = -std::abs(mid[0].convert_to<double>());
    const double rhs = lam.convert_to<double>() * -std::abs(v.witness->d1[0].convert_to<double>()) +
                       (1 - lam).convert_to<double>() * -std::abs(v.witness->d2[0].convert_to<double>());
    CHECK(lhs > rhs);
}
