#pragma once

#include "mpecv/convexity.hpp"
#include "mpecv/mpec.hpp"
#include "mpecv/piecewise.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpecv {

enum class CQStatus { HoldsExact, HoldsOnSamples, Refuted, Undefined, Inconclusive };

std::string cq_status_name(CQStatus s);

struct CQVerdict {
    std::string name;
    CQStatus status = CQStatus::Inconclusive;
    /// "polyhedral", "probe" or "sampled convexity".
    std::string method;
    std::size_t rays_tested = 0;
    int probe_depth = 0;
    std::optional<RationalVector> witness;
    std::vector<std::string> evidence;
    std::string reason;
    /// Weak reverse convex inventory.
    std::vector<ConvexityVerdict> items;

    bool holds() const { return status == CQStatus::HoldsExact || status == CQStatus::HoldsOnSamples; }
    bool refuted() const { return status == CQStatus::Refuted; }
};

/// Contingent-cone probe: steps t_z = 2^-1 … 2^-steps, each searching for a
/// feasible point within radius_scale·t_z² of k* + t_z d (capped at t_z/2).
struct TangentProbeConfig {
    int steps = 20;
    /// Membership is judged on the last `decisive` steps.
    int decisive = 12;
    double radius_scale = 10.0;
    std::size_t random_rays = 8;
    std::uint64_t seed = 1;
};

struct CQConfig {
    TangentProbeConfig probe;
    SampleConfig sampling;
    ConvexityProbeConfig tangential{2000, 1, 1e-6, {}};
    std::size_t piece_cap = default_piece_cap;
};

enum class ProbeOutcome { Member, NonMember, Inconclusive };

std::string probe_outcome_name(ProbeOutcome o);

struct TangentProbe {
    ProbeOutcome outcome = ProbeOutcome::Inconclusive;
    /// One character per step: '+' feasible point found, '-' none, '?' inevaluable.
    std::string trace;
    double last_residual = 0.0;
};

/// Throws FeasibilityError when k is infeasible.
TangentProbe tangent_cone_member(const MPECProblem& p, const RationalVector& k, const RationalVector& d,
                                 const TangentProbeConfig& cfg = {});

/// Exact T(K, k*) as a union of polyhedral cones when every constraint is
/// piecewise affine; absent otherwise or above the piece cap.
std::optional<std::vector<HalfspaceCone>> polyhedral_tangent_cone(const MPECProblem& p, const RationalVector& k,
                                                                  const IndexSets& sets,
                                                                  std::size_t cap = default_piece_cap);

CQVerdict check_gs_acq(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                       const CQConfig& cfg = {});
CQVerdict check_mpec_acq(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                         const CQConfig& cfg = {});
CQVerdict check_zangwill(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                         const CQConfig& cfg = {});
CQVerdict check_weak_reverse_convex(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                                    const CQConfig& cfg = {});

} // namespace mpecv
