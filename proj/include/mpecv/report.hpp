#pragma once

#include "mpecv/convexity.hpp"
#include "mpecv/cq.hpp"
#include "mpecv/mpec.hpp"
#include "mpecv/stationarity.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpecv {

inline constexpr const char* tool_version = "0.1.0";

struct PipelineOptions {
    std::uint64_t seed = 1;
    bool run_stationarity = true;
    bool run_cq = true;
    bool run_convexity = true;
    bool run_sufficiency = true;
    /// Restricts the stationarity stage to one kind.
    std::optional<StationarityKind> kind;
    std::size_t branch_cap = 20;
    int probe_depth = 20;
    std::size_t convexity_samples = 10000;
};

/// How a claimed point relates to the computed set.
enum class ReferenceClass { Vertex, Interior, Outside };

std::string reference_class_name(ReferenceClass c);

struct ReferenceCheck {
    std::string function;
    std::vector<std::pair<RationalVector, ReferenceClass>> points;
    /// Set when the claimed points do not span the computed set.
    bool hull_matches = true;
};

struct SubdifferentialEntry {
    std::string function;
    std::vector<RationalVector> vertices;
    Provenance provenance = Provenance::RuleDerived;
    bool exact = true;
    std::optional<SupportReport> support;
    bool axes_excluded = false;
    std::vector<std::string> warnings;
};

struct ConeDescription {
    std::string name;
    std::vector<RationalVector> normals;
    std::vector<RationalVector> generators;
};

struct StationarityStage {
    StationarityKind kind = StationarityKind::GS;
    std::optional<StationarityResult> result;
    std::optional<CertificateCheck> check;
    std::string error;
};

enum class ImplicationStatus { Consistent, Vacuous, Violated };

std::string implication_status_name(ImplicationStatus s);

struct ImplicationCheck {
    std::string name;
    ImplicationStatus status = ImplicationStatus::Vacuous;
    std::string detail;
};

struct PointReport {
    std::string label;
    RationalVector point;
    FeasibilityReport feasibility;
    std::optional<IndexSets> sets;
    std::vector<SubdifferentialEntry> subdifferentials;
    std::vector<ReferenceCheck> references;
    std::vector<PoolTerm> families;
    std::vector<ConeDescription> cones;
    /// Per-stage failures that did not stop the pipeline.
    std::vector<std::string> errors;
    std::vector<StationarityStage> stationarity;
    std::vector<CQVerdict> cqs;
    std::vector<ImplicationCheck> implications;
    std::vector<ConvexityVerdict> convexity;
    std::optional<SufficiencyVerdict> sufficiency;
    std::string sufficiency_error;
};

struct VerificationReport {
    std::string tool = tool_version;
    std::string problem;
    Index dimension = 0;
    PipelineOptions options;
    std::vector<PointReport> points;
};

/// Never throws on component failures; each appears in its stage.
PointReport run_point(const MPECProblem& p, const std::string& label, const RationalVector& k,
                      const PipelineOptions& opts = {});

/// Runs every labeled point of the file, or `explicit_point` when given.
VerificationReport run_pipeline(const MPECProblem& p, const PipelineOptions& opts = {},
                                const std::optional<LabeledPoint>& explicit_point = std::nullopt);

nlohmann::ordered_json report_to_json(const VerificationReport& r);
std::string emit_json(const VerificationReport& r);
std::string emit_text(const VerificationReport& r);

/// "λ_ell=1, λ_G=1, λ_H=1"; nonzero families only.
std::string multiplier_summary(const MultiplierVector& m);

} // namespace mpecv
