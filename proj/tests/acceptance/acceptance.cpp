// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "mpecv/cone.hpp"
#include "mpecv/convexity.hpp"
#include "mpecv/cq.hpp"
#include "mpecv/errors.hpp"
#include "mpecv/lp.hpp"
#include "mpecv/problem_io.hpp"
#include "mpecv/report.hpp"
#include "mpecv/stationarity.hpp"

#include "oracles/fourier_motzkin.hpp"
#include "oracles/grid.hpp"
#include "oracles/kkt.hpp"
#include "oracles/smooth_instances.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace mpecv;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Checker {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass_ = false;
            if (!failures_.empty())
                failures_ += "; ";
            failures_ += what;
        }
    }
    Outcome done(std::string detail) const
    {
        return {pass_, pass_ ? std::move(detail) : failures_};
    }

private:
    bool pass_ = true;
    std::string failures_;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path problems_dir() { return MPECV_PROBLEMS_DIR; }

MPECProblem load(const std::string& name) { return load_problem(problems_dir() / (name + ".json")); }

std::vector<std::filesystem::path> corpus()
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(problems_dir()))
        if (entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

const CQVerdict* find_cq(const PointReport& r, const std::string& name)
{
    for (const auto& v : r.cqs)
        if (v.name == name)
            return &v;
    return nullptr;
}

const StationarityStage* find_stage(const PointReport& r, StationarityKind kind)
{
    for (const auto& s : r.stationarity)
        if (s.kind == kind)
            return &s;
    return nullptr;
}

bool has_certificate(const StationarityStage* s) { return s && s->result && s->result->certificate; }

Outcome example4_end_to_end()
{
    Checker c;
    const MPECProblem p = load("example4");
    const RationalVector origin = make_vector({0, 0});
    const auto start = std::chrono::steady_clock::now();
    const PointReport r = run_point(p, "origin", origin);
    const double elapsed = seconds_since(start);

    c.require(r.feasibility.feasible, "origin reported infeasible");
    c.require(r.sets.has_value(), "no index sets");
    if (r.sets) {
        c.require(r.sets->active == std::vector<std::size_t>{0}, "I_l != {1}");
        c.require(r.sets->theta.empty() && r.sets->upsilon.empty(), "Theta or Upsilon nonempty");
        c.require(r.sets->omega == std::vector<std::size_t>{0}, "Omega != {1}");
    }
    const CQVerdict* acq = find_cq(r, "GS-ACQ");
    c.require(acq && acq->status == CQStatus::HoldsExact, "GS-ACQ not holds-exact");

    // Π(0) must be exactly the nonnegative d1-axis.
    const IndexSets sets = compute_index_sets(p, origin);
    SubdifferentialProvider provider(p, origin);
    const HalfspaceCone pi = build_pi(assemble_families(p, sets, provider));
    c.require(extreme_rays(pi) == std::vector<RationalVector>{make_vector({1, 0})}, "Pi rays != {(1,0)}");
    c.require(pi.contains(make_vector({3, 0})) && !pi.contains(make_vector({-1, 0})) &&
                  !pi.contains(make_vector({0, 1})) && !pi.contains(make_vector({0, -1})),
              "Pi membership differs from the nonnegative d1-axis");

    const StationarityStage* gs = find_stage(r, StationarityKind::GS);
    c.require(has_certificate(gs), "no GS certificate");
    std::string summary;
    if (has_certificate(gs)) {
        const auto& m = gs->result->certificate->multipliers;
        summary = multiplier_summary(m);
        const bool hand_written = m[Multiplier::LambdaEll] == std::vector<Rational>{1} &&
                                  m[Multiplier::LambdaG] == std::vector<Rational>{1} &&
                                  m[Multiplier::LambdaH] == std::vector<Rational>{1} &&
                                  m[Multiplier::MuG] == std::vector<Rational>{0} &&
                                  m[Multiplier::MuH] == std::vector<Rational>{0};
        SubdifferentialProvider fresh(p, origin);
        const bool verified = verify_certificate(*gs->result->certificate, p, sets, fresh).ok;
        c.require(verified, "certificate rejected by verify_certificate");
        c.require(hand_written || verified, "certificate neither hand-written nor valid");
    }
    c.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s >= 1 s");
    std::ostringstream d;
    d << "GS certificate " << summary << ", runtime " << elapsed << " s";
    return c.done(d.str());
}

Outcome example1_support()
{
    Checker c;
    const MPECProblem p = load("example1");
    const RationalVector origin = make_vector({0, 0});
    SubdifferentialProvider provider(p, origin);
    const Subdifferential& s = provider.get("J");
    c.require(s.provenance == Provenance::Manual, "J set is not the manual one");
    c.require(s.polytope.vertices() == std::vector<RationalVector>{make_vector({1, 0})}, "manual set != {(1,0)}");
    DirectionSampleConfig cfg;
    cfg.planar_count = 360;
    cfg.exclude_axes = true;
    const SupportReport rep = support_consistency(s, p.objective, cfg);
    c.require(rep.max_deviation <= 1e-6, "max deviation " + std::to_string(rep.max_deviation));
    c.require(rep.checked + rep.skipped_axes == 360, "direction count differs from 360");
    c.require(rep.divergent == 0 && rep.inevaluable == 0, "divergent or inevaluable directions");
    std::ostringstream d;
    d << rep.checked << " directions, " << rep.skipped_axes << " on axes skipped, max deviation " << rep.max_deviation;
    return c.done(d.str());
}

Outcome example2_hull()
{
    Checker c;
    const MPECProblem p = load("example2");
    const RationalVector origin = make_vector({0, 0});
    const Subdifferential s = build_subdifferential(p.objective, origin);
    c.require(s.provenance == Provenance::RuleDerived, "set is not rule-derived");
    c.require(reduce_to_vertices(s.polytope.vertices()) ==
                  std::vector<RationalVector>{make_vector({-1, 0}), make_vector({1, 0})},
              "vertices != {(-1,0),(1,0)}");
    DirectionSampleConfig cfg;
    cfg.planar_count = 360;
    const SupportReport rep = support_consistency(s, p.objective, cfg);
    c.require(rep.max_deviation <= 1e-6, "max deviation " + std::to_string(rep.max_deviation));

    const PointReport r = run_point(p, "origin", origin);
    bool flagged = false;
    for (const auto& ref : r.references)
        for (const auto& [pt, cls] : ref.points)
            if (is_zero(pt) && cls == ReferenceClass::Interior)
                flagged = true;
    c.require(flagged, "listed point (0,0) not flagged as interior");
    c.require(emit_text({tool_version, p.name, p.dimension, {}, {r}}).find("(0, 0) is interior") != std::string::npos,
              "text report lacks the interior note");
    std::ostringstream d;
    d << "conv{(-1,0),(1,0)}, max deviation " << rep.max_deviation << ", (0,0) flagged interior";
    return c.done(d.str());
}

Outcome example3_convexity()
{
    Checker c;
    const MPECProblem p = load("example3");
    const RationalVector origin = make_vector({0, 0});
    const auto start = std::chrono::steady_clock::now();
    ConvexityProbeConfig probe;
    probe.samples = 10000;
    const TangentialConvexityVerdict tv = tangential_convexity_probe(p.objective, origin, probe);
    const Subdifferential s = build_subdifferential(p.objective, origin);
    SampleConfig cfg;
    cfg.random_count = 10000;
    cfg.radius = 2;
    const ConvexityVerdict pv = check_pseudoconvex(p.objective, origin, s, cfg, "J");
    const double elapsed = seconds_since(start);
    c.require(!tv.refuted, "tangential convexity refuted");
    c.require(tv.samples >= 10000, "tangential probe used " + std::to_string(tv.samples) + " samples");
    c.require(!pv.refuted(), "pseudoconvexity refuted");
    c.require(pv.samples >= 10000, "pseudoconvexity used " + std::to_string(pv.samples) + " samples");
    c.require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s >= 5 s");
    std::ostringstream d;
    d << tv.samples << " direction pairs, " << pv.samples << " points in " << pv.region << ", runtime " << elapsed
      << " s";
    return c.done(d.str());
}

Outcome sufficiency_pair()
{
    Checker c;
    const RationalVector origin = make_vector({0, 0});
    auto verdict = [&](const MPECProblem& p) {
        const IndexSets sets = compute_index_sets(p, origin);
        SubdifferentialProvider provider(p, origin);
        const StationarityResult gs = check_gs_stationary(p, sets, provider);
        if (!gs.certificate)
            throw std::runtime_error(p.name + ": no GS certificate");
        return sufficiency_check(p, sets, *gs.certificate, provider);
    };
    const MPECProblem sq = load("example4_sq");
    const MPECProblem cube = load("example4");
    const SufficiencyVerdict good = verdict(sq);
    const SufficiencyVerdict bad = verdict(cube);
    c.require(good.status == SufficiencyStatus::Certified, "squared variant not certified");
    c.require(bad.status == SufficiencyStatus::HypothesisFailed && bad.which == "J pseudoconvex",
              "cubic objective did not fail on J pseudoconvexity");
    bool witness = false;
    for (const auto& v : bad.checks)
        if (v.refuted() && v.witness_point && *v.witness_point == make_vector({0, -1}))
            witness = true;
    c.require(witness, "witness t = (0,-1) not reported");

    const oracle::GridSearch grid = oracle::grid_local_min(sq, origin, Rational(1, 8), 2);
    c.require(grid.decided && !grid.better, "grid point beats J(k*) = 0");
    std::ostringstream d;
    d << "certified vs hypothesis-failed (J pseudoconvex, t = (0, -1)); " << grid.feasible_points
      << " feasible grid points, none below 0";
    return c.done(d.str());
}

Outcome lp_vs_fourier_motzkin()
{
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
    std::size_t agree = 0, feasible = 0, planted = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = pick(1, 6);
        std::vector<bool> nonneg(static_cast<std::size_t>(n));
        for (auto&& b : nonneg)
            b = pick(0, 3) != 0;
        std::vector<std::vector<Index>> groups;
        if (n >= 2 && pick(0, 3) == 0) {
            std::vector<Index> g;
            for (Index j = 0; j < n; ++j)
                if (pick(0, 1) == 1)
                    g.push_back(j);
            if (!g.empty())
                groups.push_back(g);
        }
        const int m = pick(1, 10 - static_cast<int>(groups.size()));
        RationalMatrix a(m, n);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j)
                a(i, j) = Rational(pick(-3, 3), pick(1, 2));
        RationalVector b(m);
        const bool plant = trial % 2 == 0;
        if (plant) {
            RationalVector x(n);
            for (Index j = 0; j < n; ++j)
                x[j] = Rational(nonneg[static_cast<std::size_t>(j)] ? pick(0, 4) : pick(-4, 4), pick(1, 3));
            for (const auto& g : groups) {
                Rational total = 0;
                for (Index j : g) {
                    x[j] = pick(1, 3);
                    total += x[j];
                }
                for (Index j : g)
                    x[j] /= total;
            }
            b = a * x;
        } else {
            for (Index i = 0; i < m; ++i)
                b[i] = pick(-4, 4);
        }
        const LPCertificate lp = lp_feasible(a, b, nonneg, groups);
        const bool fm = oracle::fm_feasible(a, b, nonneg, groups);
        if (lp.feasible == fm)
            ++agree;
        else
            c.require(false, "trial " + std::to_string(trial) + " disagrees");
        if (plant)
            ++planted, c.require(fm, "planted system rejected by the oracle");
        if (lp.feasible) {
            ++feasible;
            bool exact = (a * lp.solution - b).isZero(0);
            for (Index j = 0; j < n; ++j)
                if (nonneg[static_cast<std::size_t>(j)] && lp.solution[j] < 0)
                    exact = false;
            for (const auto& g : groups) {
                Rational total = 0;
                for (Index j : g) {
                    total += lp.solution[j];
                    exact = exact && lp.solution[j] >= 0;
                }
                exact = exact && total == 1;
            }
            c.require(exact, "trial " + std::to_string(trial) + " certificate does not satisfy the system");
        }
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s >= 60 s");
    std::ostringstream d;
    d << agree << "/500 agree (" << feasible << " feasible, " << planted << " planted), runtime " << elapsed << " s";
    return c.done(d.str());
}

/// Reports for every labeled point of the corpus.
struct CorpusPoint {
    std::string file;
    MPECProblem problem;
    PointReport report;
};

const std::vector<CorpusPoint>& corpus_reports()
{
    static const std::vector<CorpusPoint> reports = [] {
        std::vector<CorpusPoint> out;
        for (const auto& path : corpus()) {
            const MPECProblem p = load_problem(path);
            for (const auto& pt : p.points)
                out.push_back({path.stem().string(), p, run_point(p, pt.label, pt.coords)});
        }
        return out;
    }();
    return reports;
}

Outcome implication_suite()
{
    Checker c;
    std::set<std::string> files;
    std::size_t checks = 0, rays = 0, literal_counterexamples = 0;
    for (const auto& cp : corpus_reports()) {
        files.insert(cp.file);
        const PointReport& r = cp.report;
        if (!r.sets)
            continue;
        const std::string where = cp.file + "@" + r.label;
        const StationarityStage* gs = find_stage(r, StationarityKind::GS);
        const StationarityStage* ga = find_stage(r, StationarityKind::GA);
        if (has_certificate(gs)) {
            ++checks;
            c.require(has_certificate(ga), where + ": GS-stationary but not GA-stationary");
        }
        auto holds = [&](const char* name) {
            const CQVerdict* v = find_cq(r, name);
            return v && v->holds();
        };
        auto refuted = [&](const char* name) {
            const CQVerdict* v = find_cq(r, name);
            return v && v->refuted();
        };
        if (holds("MPEC-WRC"))
            ++checks, c.require(!refuted("MPEC-Zangwill"), where + ": WRC holds, Zangwill refuted");
        if (holds("MPEC-Zangwill"))
            ++checks, c.require(!refuted("MPEC-ACQ"), where + ": Zangwill holds, MPEC-ACQ refuted");
        if (holds("GS-ACQ"))
            ++checks, c.require(!refuted("MPEC-ACQ"), where + ": GS-ACQ holds, MPEC-ACQ refuted");
        if ((holds("MPEC-WRC") || holds("MPEC-Zangwill")) && refuted("GS-ACQ"))
            ++literal_counterexamples;

        // Ψ ⊆ Π, generator by generator, with the inequalities evaluated here.
        try {
            SubdifferentialProvider provider(cp.problem, r.point);
            const GeneratorFamilies f = assemble_families(cp.problem, *r.sets, provider);
            const HalfspaceCone pi = build_pi(f);
            const PsiCone psi = build_psi(f);
            for (const HalfspaceCone* branch : {&psi.branch_g, &psi.branch_h})
                for (const auto& ray : extreme_rays(*branch)) {
                    ++rays;
                    for (const auto& g : branch->normals)
                        c.require(g.dot(ray) <= 0, where + ": extreme ray outside its branch");
                    for (const auto& g : pi.normals)
                        c.require(g.dot(ray) <= 0, where + ": Psi ray " + to_string(ray) + " outside Pi");
                }
        } catch (const Error&) {
            // Blocked families (no subdifferential) have no cones to compare.
        }
    }
    c.require(files.size() >= 12, "corpus has " + std::to_string(files.size()) + " instances");
    for (const char* needed : {"example1", "example2", "example3", "example4"})
        c.require(files.count(needed) == 1, std::string("corpus lacks ") + needed);
    std::ostringstream d;
    d << files.size() << " instances, " << checks << " implication checks, " << rays
      << " Psi rays inside Pi; GS-ACQ refuted beside WRC/Zangwill at " << literal_counterexamples
      << " points (not implied, see README)";
    return c.done(d.str());
}

Outcome necessity_cross_check()
{
    Checker c;
    std::size_t minimizers = 0, gs_checks = 0, ga_checks = 0;
    for (const auto& cp : corpus_reports()) {
        const PointReport& r = cp.report;
        if (!r.sets)
            continue;
        const oracle::GridSearch grid = oracle::grid_local_min(cp.problem, r.point, Rational(1, 32), Rational(1, 4));
        if (!grid.decided || grid.better)
            continue;
        ++minimizers;
        const std::string where = cp.file + "@" + r.label;
        SubdifferentialProvider provider(cp.problem, r.point);
        const CQVerdict* gs_acq = find_cq(r, "GS-ACQ");
        const CQVerdict* mpec_acq = find_cq(r, "MPEC-ACQ");
        if (gs_acq && gs_acq->status == CQStatus::HoldsExact) {
            ++gs_checks;
            c.require(check_gs_stationary(cp.problem, *r.sets, provider).certificate.has_value(),
                      where + ": GS-ACQ holds-exact at a local minimizer without GS certificate");
        }
        if (mpec_acq && mpec_acq->status == CQStatus::HoldsExact) {
            ++ga_checks;
            c.require(check_ga_stationary(cp.problem, *r.sets, provider).certificate.has_value(),
                      where + ": MPEC-ACQ holds-exact at a local minimizer without GA certificate");
        }
    }
    c.require(gs_checks + ga_checks > 0, "no instance exercised the cross-check");
    std::ostringstream d;
    d << minimizers << " grid-confirmed local minimizers, " << gs_checks << " GS and " << ga_checks
      << " GA necessity checks";
    return c.done(d.str());
}

Outcome smooth_reduction()
{
    Checker c;
    std::size_t stationary = 0, planted = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const oracle::SmoothInstance s = oracle::smooth_instance(seed);
        const std::string where = "seed " + std::to_string(seed);
        const IndexSets sets = compute_index_sets(s.problem, s.point);
        c.require(sets.active.size() == s.grad_active.size(), where + ": active set size");
        SubdifferentialProvider provider(s.problem, s.point);
        auto singleton = [&](const std::string& id, const RationalVector& grad) {
            const auto& verts = provider.get(id).polytope.vertices();
            c.require(verts.size() == 1, where + ": " + id + " set is not a singleton");
            if (verts.size() == 1) {
                c.require(verts.front() == grad, where + ": " + id + " differs from its gradient");
                worst = std::max(worst, (to_double(verts.front()) - to_double(grad)).lpNorm<Eigen::Infinity>());
            }
        };
        singleton("J", s.grad_j);
        for (std::size_t i = 0; i < sets.active.size(); ++i)
            singleton("l" + std::to_string(sets.active[i] + 1), s.grad_active[i]);
        for (std::size_t j = 0; j < s.grad_eq.size(); ++j)
            singleton("h" + std::to_string(j + 1), s.grad_eq[j]);

        const StationarityResult gs = check_gs_stationary(s.problem, sets, provider);
        const bool kkt = oracle::kkt_feasible(s.grad_j, s.grad_active, s.grad_eq);
        c.require(gs.certificate.has_value() == kkt, where + ": GS-stationarity differs from the KKT oracle");
        if (s.planted)
            ++planted, c.require(kkt, where + ": planted multipliers rejected by the oracle");
        if (gs.certificate) {
            ++stationary;
            SubdifferentialProvider fresh(s.problem, s.point);
            c.require(verify_certificate(*gs.certificate, s.problem, sets, fresh).ok, where + ": certificate rejected");
        }
    }
    c.require(worst <= 1e-8, "gradient mismatch " + std::to_string(worst));
    std::ostringstream d;
    d << "50 instances agree with the KKT oracle (" << stationary << " stationary, " << planted
      << " planted), gradient deviation " << worst;
    return c.done(d.str());
}

Outcome determinism()
{
    Checker c;
    std::size_t bytes = 0;
    auto run_all = [&]() {
        std::string all;
        for (const auto& path : corpus()) {
            const MPECProblem p = load_problem(path);
            const VerificationReport r = run_pipeline(p);
            all += emit_json(r);
            all += emit_text(r);
        }
        return all;
    };
    const std::string first = run_all();
    const std::string second = run_all();
    bytes = first.size();
    c.require(first == second, "reports differ between runs");
    return c.done(std::to_string(corpus().size()) + " instances, " + std::to_string(bytes) +
                  " report bytes identical over two runs");
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Example 4 end-to-end", example4_end_to_end},
        {"Example 1 manual set support", example1_support},
        {"Example 2 convex hull", example2_hull},
        {"Example 3 generalized convexity", example3_convexity},
        {"sufficiency pair", sufficiency_pair},
        {"LP vs Fourier-Motzkin", lp_vs_fourier_motzkin},
        {"implication suite", implication_suite},
        {"necessity cross-check", necessity_cross_check},
        {"smooth reduction", smooth_reduction},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " " << criteria[i].first << ": "
                  << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
