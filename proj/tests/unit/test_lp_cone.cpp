#include "mpecv/cone.hpp"
#include "mpecv/errors.hpp"
#include "mpecv/lp.hpp"

#include "oracles/fourier_motzkin.hpp"

#include "doctest.h"

#include <random>

using namespace mpecv;

namespace {

using Vs = std::vector<RationalVector>;

RationalVector v2(long a, long b) { return make_vector({a, b}); }

RationalVector random_vector(std::mt19937_64& rng, Index n, int span = 3)
{
    RationalVector v(n);
    for (Index i = 0; i < n; ++i)
        v[i] = Rational(static_cast<long>(rng() % (2 * span + 1)) - span, static_cast<long>(rng() % 3) + 1);
    return v;
}

bool in_cone_of(const Vs& gens, const RationalVector& x, Index n)
{
    return cone_member({n, gens}, x).member;
}

} // namespace

TEST_CASE("polar")
{
    const Vs gh{v2(-1, 0), v2(0, -1)};
    const HalfspaceCone orthant = polar(gh, 2);
    CHECK(orthant.contains(v2(2, 3)));
    CHECK(orthant.contains(v2(0, 0)));
    CHECK_FALSE(orthant.contains(v2(-1, 3)));

    const HalfspaceCone all = polar(Vs{}, 2);
    CHECK(all.normals.empty());
    CHECK(all.contains(v2(-5, 7)));

    const HalfspaceCone axis = polar(Vs{v2(0, 1), v2(0, -1)}, 2);
    CHECK(axis.contains(v2(-4, 0)));
    CHECK_FALSE(axis.contains(v2(0, 1)));

    CHECK_THROWS_AS(polar(Vs{make_vector({1, 0, 0})}, 2), DimensionMismatch);
}

TEST_CASE("strict polar membership")
{
    CHECK(strict_polar_member(Vs{v2(1, 0)}, v2(-1, 5)));
    CHECK_FALSE(strict_polar_member(Vs{v2(1, 0), v2(-1, 0)}, v2(0, 1)));
    CHECK_FALSE(strict_polar_member(Vs{v2(1, 1)}, v2(0, 0)));
    CHECK(strict_polar_member(Vs{}, v2(3, 3)));
}

TEST_CASE("lp_feasible")
{
    SUBCASE("origin")
    {
        RationalMatrix a(1, 2);
        a << 1, 1;
        const auto c = lp_feasible(a, make_vector({0}), {true, true});
        REQUIRE(c.feasible);
        CHECK(c.solution == v2(0, 0));
    }
    SUBCASE("x1 = 1 and x1 + s = 0 with x, s >= 0")
    {
        RationalMatrix a(2, 2);
        a << 1, 0, 1, 1;
        const RationalVector b = make_vector({1, 0});
        CHECK_FALSE(lp_feasible(a, b, {true, true}).feasible);
        CHECK_FALSE(oracle::fm_feasible(a, b, {true, true}));
    }
    SUBCASE("free variables")
    {
        RationalMatrix a(1, 2);
        a << 1, 1;
        const auto c = lp_feasible(a, make_vector({-3}), {false, true});
        REQUIRE(c.feasible);
        CHECK(c.solution[0] + c.solution[1] == -3);
        CHECK(c.solution[1] >= 0);
    }
    SUBCASE("convex group")
    {
        // x0 + 2 x1 = 3/2 on the simplex x0 + x1 = 1.
        RationalMatrix a(1, 2);
        a << 1, 2;
        const auto c = lp_feasible(a, make_vector({Rational(3, 2)}), {false, false}, {{0, 1}});
        REQUIRE(c.feasible);
        CHECK(c.solution == make_vector({Rational(1, 2), Rational(1, 2)}));
        CHECK_FALSE(lp_feasible(a, make_vector({3}), {false, false}, {{0, 1}}).feasible);
    }
    SUBCASE("dimension mismatch")
    {
        RationalMatrix a(2, 2);
        a.setZero();
        CHECK_THROWS_AS(lp_feasible(a, make_vector({0}), {true, true}), DimensionMismatch);
    }
}

TEST_CASE("cone membership")
{
    const auto m = cone_member({2, {v2(1, 0), v2(0, 1)}}, v2(2, 3));
    REQUIRE(m.member);
    CHECK(*m.weights == v2(2, 3));
    CHECK(cone_member({2, {v2(1, 1)}}, v2(0, 0)).member);
    CHECK(cone_member({2, {}}, v2(0, 0)).member);
    CHECK_FALSE(cone_member({2, {v2(1, 0)}}, v2(-1, 0)).member);
    CHECK_FALSE(cone_member({2, {}}, v2(1, 0)).member);
}

TEST_CASE("convex weights and hull reduction")
{
    const Vs seg{v2(1, 0), v2(-1, 0)};
    const auto w = convex_weights(seg, v2(0, 0));
    REQUIRE(w.has_value());
    CHECK((*w)[0] == Rational(1, 2));
    CHECK_FALSE(convex_weights(seg, v2(0, 1)).has_value());
    CHECK(reduce_to_vertices({v2(1, 0), v2(-1, 0), v2(0, 0), v2(1, 0)}) == Vs{v2(-1, 0), v2(1, 0)});
}

TEST_CASE("minkowski sums")
{
    const VertexPolytope seg({v2(1, 0), v2(-1, 0)});
    auto sorted = [](const VertexPolytope& p) {
        Vs v = reduce_to_vertices(p.vertices());
        return v;
    };
    CHECK(sorted(minkowski_sum(seg, VertexPolytope::singleton(v2(0, 0)))) == Vs{v2(-1, 0), v2(1, 0)});
    CHECK(sorted(minkowski_sum(seg, VertexPolytope({v2(0, 1), v2(0, -1)}))) ==
          Vs{v2(-1, -1), v2(-1, 1), v2(1, -1), v2(1, 1)});
    CHECK(sorted(minkowski_sum(VertexPolytope::singleton(v2(1, 0)), VertexPolytope::singleton(v2(0, -1)))) ==
          Vs{v2(1, -1)});
    CHECK(seg.support(v2(-3, 5)) == 3);
}

TEST_CASE("minkowski sum contains sums of convex combinations")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 2 + trial % 2;
        Vs pv, qv;
        for (int i = 0; i < 3; ++i) {
            pv.push_back(random_vector(rng, n));
            qv.push_back(random_vector(rng, n));
        }
        const VertexPolytope sum = minkowski_sum(VertexPolytope(pv), VertexPolytope(qv));
        for (int s = 0; s < 10; ++s) {
            auto combo = [&](const Vs& vs) {
                RationalVector x = RationalVector::Zero(n);
                Rational total = 0;
                std::vector<Rational> w;
                for (std::size_t i = 0; i < vs.size(); ++i) {
                    w.push_back(static_cast<long>(rng() % 4));
                    total += w.back();
                }
                if (total == 0)
                    return vs.front();
                for (std::size_t i = 0; i < vs.size(); ++i)
                    x += (w[i] / total) * vs[i];
                return x;
            };
            const RationalVector x = combo(pv) + combo(qv);
            CHECK(convex_weights(sum.vertices(), x).has_value());
        }
    }
}

TEST_CASE("extreme rays")
{
    const HalfspaceCone pi{2, {v2(0, 1), v2(0, -1), v2(-1, 0), v2(0, -1)}};
    CHECK(extreme_rays(pi) == Vs{v2(1, 0)});

    Vs full = extreme_rays(HalfspaceCone{2, {}});
    sort_unique(full);
    CHECK(full == Vs{v2(-1, 0), v2(0, -1), v2(0, 1), v2(1, 0)});

    Vs line = extreme_rays(HalfspaceCone{2, {v2(1, 0), v2(-1, 0)}});
    sort_unique(line);
    CHECK(line == Vs{v2(0, -1), v2(0, 1)});

    CHECK(extreme_rays(HalfspaceCone{2, {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)}}).empty());
    CHECK(is_trivial(HalfspaceCone{2, {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)}}));
    CHECK_THROWS_AS(extreme_rays(HalfspaceCone{9, {}}), DimensionTooLarge);
}

TEST_CASE("double polar regenerates the cone")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + trial % 3;
        Vs gens;
        const int count = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < count; ++i)
            gens.push_back(random_vector(rng, n));
        // polar(polar(cone)) = cone; its generators span the same set.
        const HalfspaceCone dual = polar(gens, n);
        const Vs dual_rays = extreme_rays(dual);
        const Vs regenerated = extreme_rays(polar(dual_rays, n));
        for (int probe = 0; probe < 50; ++probe) {
            const RationalVector x = random_vector(rng, n, 4);
            CHECK(in_cone_of(gens, x, n) == in_cone_of(regenerated, x, n));
        }
        for (const auto& g : gens)
            CHECK(in_cone_of(regenerated, g, n));
    }
}

TEST_CASE("cone membership is monotone under generator addition")
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 2 + trial % 2;
        Vs gens{random_vector(rng, n), random_vector(rng, n)};
        const RationalVector x = random_vector(rng, n);
        const bool before = in_cone_of(gens, x, n);
        gens.push_back(random_vector(rng, n));
        if (before)
            CHECK(in_cone_of(gens, x, n));
    }
}

TEST_CASE("cone subset")
{
    CHECK(cone_subset({2, {v2(1, 0)}}, {2, {v2(0, 1), v2(0, -1)}}).subset);
    const auto r = cone_subset({2, {v2(1, 1)}}, {2, {v2(0, 1)}});
    CHECK_FALSE(r.subset);
    REQUIRE(r.witness.has_value());
    CHECK(*r.witness == v2(1, 1));
    CHECK(cone_subset({2, {v2(1, 0), v2(0, 1)}}, polar(Vs{v2(-1, 0), v2(0, -1)}, 2)).subset);
}

TEST_CASE("lp_feasible agrees with elimination on random systems")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 1 + static_cast<Index>(rng() % 6);
        const Index m = 1 + static_cast<Index>(rng() % 10);
        RationalMatrix a(m, n);
        for (Index i = 0; i < m; ++i)
            a.row(i) = random_vector(rng, n).transpose();
        const RationalVector b = random_vector(rng, m);
        std::vector<bool> nonneg(static_cast<std::size_t>(n));
        for (auto&& x : nonneg)
            x = rng() % 2 == 0;
        CHECK(lp_feasible(a, b, nonneg).feasible == oracle::fm_feasible(a, b, nonneg));
    }
}
