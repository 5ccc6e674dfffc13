// The oracles are checked on hand-solved cases before they judge the library.

#include "oracles/fourier_motzkin.hpp"
#include "oracles/grid.hpp"
#include "oracles/kkt.hpp"
#include "oracles/smooth_instances.hpp"

#include "doctest.h"

using namespace mpecv;

namespace {

oracle::Row row(std::initializer_list<long> a, long b)
{
    oracle::Row r;
    for (long c : a)
        r.a.push_back(c);
    r.b = b;
    return r;
}

} // namespace

TEST_CASE("Fourier-Motzkin on hand systems")
{
    // x ≤ 1, −x ≤ −2 (x ≥ 2): empty.
    CHECK_FALSE(oracle::fm_feasible({}, {row({1}, 1), row({-1}, -2)}));
    // x + y ≤ 1, x ≥ 0, y ≥ 0: nonempty.
    CHECK(oracle::fm_feasible({}, {row({1, 1}, 1), row({-1, 0}, 0), row({0, -1}, 0)}));
    // x + y = 3, x − y = 1, x ≤ 1: forces x = 2.
    CHECK_FALSE(oracle::fm_feasible({row({1, 1}, 3), row({1, -1}, 1)}, {row({1, 0}, 1)}));
    CHECK(oracle::fm_feasible({row({1, 1}, 3), row({1, -1}, 1)}, {row({1, 0}, 2)}));
    // 0 = 1.
    CHECK_FALSE(oracle::fm_feasible({row({0, 0}, 1)}, {}));
    // Triangle x ≥ 0, y ≥ 0, x + y ≤ −1: empty after two eliminations.
    CHECK_FALSE(oracle::fm_feasible({}, {row({-1, 0}, 0), row({0, -1}, 0), row({1, 1}, -1)}));
}

TEST_CASE("KKT elimination on hand systems")
{
    const RationalVector e1 = make_vector({1, 0}), e2 = make_vector({0, 1});
    CHECK(oracle::kkt_feasible(make_vector({0, 0}), {}, {}));
    CHECK_FALSE(oracle::kkt_feasible(e1, {}, {}));
    // ∇J = (1, 0) cancelled by λ ∇ℓ with ∇ℓ = (−1, 0).
    CHECK(oracle::kkt_feasible(e1, {RationalVector(-e1)}, {}));
    CHECK_FALSE(oracle::kkt_feasible(e1, {e1}, {}));
    // Equality gradients take either sign.
    CHECK(oracle::kkt_feasible(e1, {}, {e1}));
    // Two inequality gradients spanning the target's negation.
    CHECK(oracle::kkt_feasible(make_vector({1, 1}), {RationalVector(-e1), RationalVector(-e2)}, {}));
    CHECK_FALSE(oracle::kkt_feasible(make_vector({1, -1}), {RationalVector(-e1), RationalVector(-e2)}, {}));
}

TEST_CASE("grid search")
{
    MPECProblem p;
    p.dimension = 2;
    p.objective = var(0) + var(1);
    p.g = {var(0)};
    p.h = {var(1)};
    const auto at_origin = oracle::grid_local_min(p, make_vector({0, 0}), Rational(1, 4), 1);
    CHECK(at_origin.decided);
    CHECK_FALSE(at_origin.better);
    CHECK(at_origin.feasible_points == 9);

    p.objective = -var(0);
    const auto descent = oracle::grid_local_min(p, make_vector({0, 0}), Rational(1, 4), 1);
    REQUIRE(descent.better.has_value());
    CHECK((*descent.better)[0] > 0);

    std::size_t count = 0;
    oracle::for_each_grid_point(make_vector({0, 0}), 1, 1, [&](const RationalVector&) { ++count; });
    CHECK(count == 5);
}

TEST_CASE("smooth instances are feasible at their base point")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const oracle::SmoothInstance s = oracle::smooth_instance(seed);
        CHECK(oracle::feasible_at(s.problem, s.point));
        if (s.planted)
            CHECK(oracle::kkt_feasible(s.grad_j, s.grad_active, s.grad_eq));
    }
}
