#include "mpecv/cq.hpp"
#include "mpecv/errors.hpp"
#include "mpecv/piecewise.hpp"

#include "doctest.h"

using namespace mpecv;

namespace {

RationalVector v2(long a, long b) { return make_vector({a, b}); }

MPECProblem example4()
{
    MPECProblem p;
    p.dimension = 2;
    p.objective = abs(var(0)) + pow(var(1), 3);
    p.inequalities = {abs(var(1))};
    p.g = {var(0)};
    p.h = {var(1)};
    return p;
}

struct Verdicts {
    CQVerdict gs_acq, mpec_acq, zangwill, wrc;
};

Verdicts all_cqs(const MPECProblem& p, const RationalVector& k)
{
    const IndexSets sets = compute_index_sets(p, k);
    SubdifferentialProvider provider(p, k);
    CQConfig cfg;
    cfg.sampling.random_count = 1000;
    return {check_gs_acq(p, sets, provider, cfg), check_mpec_acq(p, sets, provider, cfg),
            check_zangwill(p, sets, provider, cfg), check_weak_reverse_convex(p, sets, provider, cfg)};
}

} // namespace

TEST_CASE("tangent probe on Example 4")
{
    const MPECProblem p = example4();
    CHECK(tangent_cone_member(p, v2(0, 0), v2(1, 0)).outcome == ProbeOutcome::Member);
    const TangentProbe up = tangent_cone_member(p, v2(0, 0), v2(0, 1));
    CHECK(up.outcome == ProbeOutcome::NonMember);
    CHECK(up.trace.size() == 20);
    CHECK(tangent_cone_member(p, v2(0, 0), v2(-1, 0)).outcome == ProbeOutcome::NonMember);
    CHECK_THROWS_AS(tangent_cone_member(p, v2(1, 1), v2(1, 0)), FeasibilityError);
}

TEST_CASE("tangent probe follows curved sets")
{
    MPECProblem p;
    p.dimension = 2;
    p.objective = var(1);
    p.equalities = {var(1) - pow(var(0), 2)};
    CHECK(tangent_cone_member(p, v2(0, 0), v2(1, 0)).outcome == ProbeOutcome::Member);
    CHECK(tangent_cone_member(p, v2(0, 0), v2(-1, 0)).outcome == ProbeOutcome::Member);
    CHECK(tangent_cone_member(p, v2(0, 0), v2(1, 1)).outcome == ProbeOutcome::NonMember);
}

TEST_CASE("polyhedral tangent cone of Example 4")
{
    const MPECProblem p = example4();
    const IndexSets sets = compute_index_sets(p, v2(0, 0));
    const auto t = polyhedral_tangent_cone(p, v2(0, 0), sets);
    REQUIRE(t.has_value());
    auto in_union = [&](const RationalVector& d) {
        return std::any_of(t->begin(), t->end(), [&](const HalfspaceCone& c) { return c.contains(d); });
    };
    CHECK(in_union(v2(2, 0)));
    CHECK_FALSE(in_union(v2(0, 1)));
    CHECK_FALSE(in_union(v2(-1, 0)));
}

TEST_CASE("local pieces and union coverage")
{
    const auto pieces = local_pieces(abs(var(0)) - var(1), v2(0, 0));
    REQUIRE(pieces.has_value());
    CHECK(pieces->size() == 2);
    CHECK_FALSE(local_pieces(pow(var(0), 2), v2(0, 0)).has_value());

    const HalfspaceCone all{2, {}};
    const std::vector<HalfspaceCone> halves{{2, {v2(1, 0)}}, {2, {v2(-1, 0)}}};
    CHECK(covered_by_union(all, halves));
    std::optional<RationalVector> witness;
    CHECK_FALSE(covered_by_union(all, {halves.front()}, &witness));
    REQUIRE(witness.has_value());
    CHECK((*witness)[0] > 0);
}

TEST_CASE("constraint qualifications at Example 4")
{
    const Verdicts v = all_cqs(example4(), v2(0, 0));
    CHECK(v.gs_acq.status == CQStatus::HoldsExact);
    CHECK(v.mpec_acq.status == CQStatus::HoldsExact);
    CHECK(v.zangwill.status == CQStatus::HoldsExact);
    // |k2| is not pseudoconcave at 0.
    REQUIRE(v.wrc.status == CQStatus::Refuted);
    bool found = false;
    for (const auto& item : v.wrc.items)
        if (item.refuted() && item.witness_point && (*item.witness_point)[0] == 0)
            found = true;
    CHECK(found);
}

TEST_CASE("refutations carry a witness direction")
{
    MPECProblem p;
    p.dimension = 2;
    p.objective = var(0);
    p.g = {var(0)};
    p.h = {var(1)};
    const Verdicts v = all_cqs(p, v2(0, 0));
    REQUIRE(v.gs_acq.status == CQStatus::Refuted);
    REQUIRE(v.gs_acq.witness.has_value());
    CHECK(*v.gs_acq.witness == v2(1, 1));
    CHECK(v.mpec_acq.status == CQStatus::HoldsExact);
    // Zangwill ⇒ MPEC-ACQ.
    CHECK(v.zangwill.holds());
    CHECK(v.wrc.holds());
}

TEST_CASE("non-polyhedral Abadie instance")
{
    // l1 = −k1, l2 = k1 − k2²: K near 0 hugs the k2-axis, T(K, 0) = Π = {d1 = 0}.
    MPECProblem p;
    p.dimension = 2;
    p.objective = var(1);
    p.inequalities = {-var(0), var(0) - pow(var(1), 2)};
    const Verdicts v = all_cqs(p, v2(0, 0));
    CHECK(v.gs_acq.status == CQStatus::HoldsOnSamples);
    CHECK(v.gs_acq.method == "probe");
}

TEST_CASE("a refuted Abadie condition")
{
    // l = k2², J = k1² + k2: Π = all of ℝ² but K = {k2 = 0}.
    MPECProblem p;
    p.dimension = 2;
    p.objective = pow(var(0), 2) + var(1);
    p.inequalities = {pow(var(1), 2)};
    const Verdicts v = all_cqs(p, v2(0, 0));
    REQUIRE(v.gs_acq.refuted());
    REQUIRE(v.gs_acq.witness.has_value());
    CHECK((*v.gs_acq.witness)[1] != 0);
    CHECK_FALSE(v.gs_acq.evidence.empty());
}

TEST_CASE("discontinuous inactive constraint")
{
    MPECProblem p;
    p.dimension = 2;
    p.objective = var(0);
    p.inequalities = {pow(var(0), 3) / var(1) + var(0) - constant(1L), -var(0)};
    p.manual.push_back({"l1", v2(0, 0), {v2(1, 0)}, Rational(-1)});
    const Verdicts v = all_cqs(p, v2(0, 0));
    CHECK(v.wrc.status == CQStatus::Inconclusive);
    CHECK(v.wrc.reason.find("continuity") != std::string::npos);
}

TEST_CASE("affine instance satisfies the weak reverse convex condition")
{
    MPECProblem p;
    p.dimension = 2;
    p.objective = var(0) + var(1);
    p.inequalities = {var(0) + var(1) - constant(2L)};
    p.g = {var(0)};
    p.h = {var(1)};
    const Verdicts v = all_cqs(p, v2(0, 0));
    CHECK(v.wrc.status == CQStatus::HoldsOnSamples);
    CHECK_FALSE(v.zangwill.refuted());
}
