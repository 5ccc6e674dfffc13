// Command line front end: mpecv <check|stationarity|cq|convexity> problem.json [options]

#include "mpecv/errors.hpp"
#include "mpecv/problem_io.hpp"
#include "mpecv/report.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

struct Arguments {
    std::string problem;
    std::string point;
    std::string kind;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::size_t branch_cap = 20;
    int probe_depth = 20;
    std::size_t samples = 10000;
    bool skip_stationarity = false;
    bool skip_cq = false;
    bool skip_convexity = false;
    bool skip_sufficiency = false;
};

void add_common(CLI::App* cmd, Arguments& a)
{
    cmd->add_option("problem", a.problem, "problem file (JSON, format 1)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--point", a.point, "comma separated coordinates or a point label from the file");
    cmd->add_option("--seed", a.seed, "seed for every sampled check")->capture_default_str();
    cmd->add_option("--format", a.format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--samples", a.samples, "sample count for convexity checks")->capture_default_str();
}

std::optional<mpecv::LabeledPoint> resolve_point(const mpecv::MPECProblem& p, const std::string& spec)
{
    if (spec.empty())
        return std::nullopt;
    for (const auto& pt : p.points)
        if (pt.label == spec)
            return pt;
    mpecv::RationalVector k = mpecv::parse_point(spec);
    if (k.size() != p.dimension)
        throw mpecv::ValidationError("--point has dimension " + std::to_string(k.size()) + ", expected " +
                                     std::to_string(p.dimension));
    return mpecv::LabeledPoint{"cli", k};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verification of stationarity, constraint qualifications and sufficiency for nonsmooth MPECs"};
    app.set_version_flag("--version", std::string(mpecv::tool_version));
    app.require_subcommand(1);
    Arguments a;

    auto* check = app.add_subcommand("check", "run the full pipeline");
    add_common(check, a);
    check->add_option("--branch-cap", a.branch_cap, "largest |Omega| for GA branch enumeration")->capture_default_str();
    check->add_option("--probe-depth", a.probe_depth, "tangent probe steps")->check(CLI::Range(12, 60))->capture_default_str();
    check->add_flag("--skip-stationarity", a.skip_stationarity);
    check->add_flag("--skip-cq", a.skip_cq);
    check->add_flag("--skip-convexity", a.skip_convexity);
    check->add_flag("--skip-sufficiency", a.skip_sufficiency);

    auto* stationarity = app.add_subcommand("stationarity", "GS/GA stationarity with certificates");
    add_common(stationarity, a);
    stationarity->add_option("--kind", a.kind, "restrict to one kind")->check(CLI::IsMember({"gs", "ga"}));
    stationarity->add_option("--branch-cap", a.branch_cap, "largest |Omega| for GA branch enumeration")
        ->capture_default_str();

    auto* cq = app.add_subcommand("cq", "constraint qualifications");
    add_common(cq, a);
    cq->add_option("--probe-depth", a.probe_depth, "tangent probe steps")->check(CLI::Range(12, 60))->capture_default_str();

    auto* convexity = app.add_subcommand("convexity", "generalized convexity of the objective");
    add_common(convexity, a);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    mpecv::PipelineOptions opts;
    opts.seed = a.seed;
    opts.branch_cap = a.branch_cap;
    opts.probe_depth = a.probe_depth;
    opts.convexity_samples = a.samples;
    if (check->parsed()) {
        opts.run_stationarity = !a.skip_stationarity;
        opts.run_cq = !a.skip_cq;
        opts.run_convexity = !a.skip_convexity;
        opts.run_sufficiency = !a.skip_sufficiency;
    } else {
        opts.run_stationarity = stationarity->parsed();
        opts.run_cq = cq->parsed();
        opts.run_convexity = convexity->parsed();
        opts.run_sufficiency = false;
        if (a.kind == "gs")
            opts.kind = mpecv::StationarityKind::GS;
        else if (a.kind == "ga")
            opts.kind = mpecv::StationarityKind::GA;
    }

    mpecv::MPECProblem problem;
    std::optional<mpecv::LabeledPoint> point;
    try {
        problem = mpecv::load_problem(a.problem);
        point = resolve_point(problem, a.point);
        if (!point && problem.points.empty())
            throw mpecv::ValidationError("no --point given and the file lists no points");
    } catch (const mpecv::Error& e) {
        std::cerr << a.problem << ": " << e.what() << "\n";
        return 1;
    }

    try {
        const mpecv::VerificationReport report = mpecv::run_pipeline(problem, opts, point);
        std::cout << (a.format == "json" ? mpecv::emit_json(report) : mpecv::emit_text(report));
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
