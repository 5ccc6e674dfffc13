#include "mpecv/report.hpp"

#include "mpecv/errors.hpp"

#include <algorithm>
#include <sstream>

namespace mpecv {

using nlohmann::ordered_json;

namespace {

std::string blocked(const RuleFailure& e)
{
    return "blocked: supply manual subdifferential for " + (e.function().empty() ? std::string("?") : e.function());
}

std::string indexed(const char* prefix, std::size_t i) { return prefix + std::to_string(i + 1); }

/// Functions whose sets enter the generator families, J first.
std::vector<std::string> family_functions(const MPECProblem& p, const IndexSets& sets)
{
    std::vector<std::string> ids{"J"};
    for (std::size_t i : sets.active)
        ids.push_back(indexed("l", i));
    for (std::size_t j = 0; j < p.equalities.size(); ++j) {
        ids.push_back(indexed("h", j));
        ids.push_back("-" + indexed("h", j));
    }
    std::vector<std::size_t> g_side = sets.theta, h_side = sets.upsilon;
    g_side.insert(g_side.end(), sets.omega.begin(), sets.omega.end());
    h_side.insert(h_side.end(), sets.omega.begin(), sets.omega.end());
    std::sort(g_side.begin(), g_side.end());
    std::sort(h_side.begin(), h_side.end());
    for (std::size_t i : g_side) {
        ids.push_back(indexed("G", i));
        ids.push_back("-" + indexed("G", i));
    }
    for (std::size_t i : h_side) {
        ids.push_back(indexed("H", i));
        ids.push_back("-" + indexed("H", i));
    }
    return ids;
}

ReferenceCheck classify(const ReferenceSet& ref, const Subdifferential& s)
{
    ReferenceCheck out;
    out.function = ref.function;
    const std::vector<RationalVector> vertices = reduce_to_vertices(s.polytope.vertices());
    for (const auto& q : ref.points) {
        ReferenceClass c = ReferenceClass::Outside;
        if (std::any_of(vertices.begin(), vertices.end(), [&](const RationalVector& v) { return v == q; }))
            c = ReferenceClass::Vertex;
        else if (convex_weights(vertices, q))
            c = ReferenceClass::Interior;
        out.points.emplace_back(q, c);
    }
    for (const auto& v : vertices)
        if (!convex_weights(ref.points, v))
            out.hull_matches = false;
    return out;
}

ConeDescription describe(const std::string& name, const HalfspaceCone& c)
{
    ConeDescription d{name, c.normals, {}};
    if (c.dimension <= max_enumeration_dimension)
        d.generators = extreme_rays(c);
    return d;
}

ConeDescription describe(const std::string& name, const GeneratedCone& c)
{
    std::vector<RationalVector> g = c.generators;
    sort_unique(g);
    return {name, {}, g};
}

void run_families(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider, PointReport& r)
{
    GeneratorFamilies fams;
    try {
        fams = assemble_families(p, sets, provider);
    } catch (const RuleFailure& e) {
        r.errors.push_back("families " + blocked(e));
        return;
    } catch (const Error& e) {
        r.errors.push_back(std::string("families: ") + e.what());
        return;
    }
    r.families = fams.terms;
    try {
        r.cones.push_back(describe("Pi", build_pi(fams)));
    } catch (const AllPoolsEmpty& e) {
        r.errors.push_back(std::string("Pi: ") + e.what());
    }
    try {
        const PsiCone psi = build_psi(fams);
        r.cones.push_back(describe("Psi_G", psi.branch_g));
        r.cones.push_back(describe("Psi_H", psi.branch_h));
    } catch (const AllPoolsEmpty& e) {
        r.errors.push_back(std::string("Psi: ") + e.what());
    }
    r.cones.push_back(describe("Delta", build_delta(fams)));
    r.cones.push_back(describe("Lambda", build_lambda(fams)));
}

void run_subdifferentials(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                          const PipelineOptions& opts, PointReport& r)
{
    for (const auto& id : family_functions(p, sets)) {
        const Subdifferential* s = nullptr;
        try {
            s = &provider.get(id);
        } catch (const RuleFailure& e) {
            r.errors.push_back("subdifferential " + blocked(e));
            continue;
        } catch (const Error& e) {
            r.errors.push_back("subdifferential of " + id + ": " + e.what());
            continue;
        }
        SubdifferentialEntry entry{id, s->polytope.vertices(), s->provenance, s->exact, {}, false, {}};
        if (id == "J" || s->provenance == Provenance::Manual) {
            DirectionSampleConfig cfg;
            cfg.seed = opts.seed;
            // Hand-supplied sets usually stand in for a definition that is
            // special on the coordinate axes.
            cfg.exclude_axes = s->provenance == Provenance::Manual;
            entry.axes_excluded = cfg.exclude_axes;
            try {
                entry.support = support_consistency(*s, function_expr(p, id), cfg);
                if (entry.support->max_deviation > support_tolerance)
                    entry.warnings.push_back("support function deviates from the directional derivative");
                if (entry.support->divergent > 0)
                    entry.warnings.push_back("directional derivative did not converge on some directions");
                if (entry.support->inevaluable > 0)
                    entry.warnings.push_back("function inevaluable near the point on some directions");
            } catch (const Error& e) {
                entry.warnings.push_back(std::string("support check failed: ") + e.what());
            }
        }
        r.subdifferentials.push_back(std::move(entry));
    }
    for (const auto& ref : p.references) {
        if (ref.point != r.point)
            continue;
        try {
            r.references.push_back(classify(ref, provider.get(ref.function)));
        } catch (const RuleFailure& e) {
            r.errors.push_back("reference " + blocked(e));
        } catch (const Error& e) {
            r.errors.push_back("reference for " + ref.function + ": " + e.what());
        }
    }
}

void run_stationarity(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                      const PipelineOptions& opts, PointReport& r)
{
    for (StationarityKind kind : {StationarityKind::GS, StationarityKind::GA}) {
        if (opts.kind && *opts.kind != kind)
            continue;
        StationarityStage stage;
        stage.kind = kind;
        try {
            stage.result = kind == StationarityKind::GS
                               ? check_gs_stationary(p, sets, provider)
                               : check_ga_stationary(p, sets, provider, StationarityConfig{opts.branch_cap});
            if (stage.result->certificate)
                stage.check = verify_certificate(*stage.result->certificate, p, sets, provider);
        } catch (const RuleFailure& e) {
            stage.error = blocked(e);
        } catch (const Error& e) {
            stage.error = e.what();
        }
        r.stationarity.push_back(std::move(stage));
    }
}

ImplicationCheck implication(const std::string& name, bool premise, bool conclusion_violated)
{
    if (!premise)
        return {name, ImplicationStatus::Vacuous, ""};
    if (conclusion_violated)
        return {name, ImplicationStatus::Violated, "premise holds but the conclusion fails"};
    return {name, ImplicationStatus::Consistent, ""};
}

void run_cqs(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
             const PipelineOptions& opts, PointReport& r)
{
    CQConfig cfg;
    cfg.probe.steps = opts.probe_depth;
    cfg.probe.decisive = std::min(cfg.probe.decisive, opts.probe_depth);
    cfg.probe.seed = opts.seed;
    cfg.sampling.seed = opts.seed;
    cfg.sampling.random_count = opts.convexity_samples;
    cfg.tangential.seed = opts.seed;

    auto run = [&](auto check, const char* name) {
        try {
            return check(p, sets, provider, cfg);
        } catch (const Error& e) {
            CQVerdict v;
            v.name = name;
            v.status = CQStatus::Inconclusive;
            v.reason = e.what();
            return v;
        }
    };
    r.cqs.push_back(run(check_gs_acq, "GS-ACQ"));
    r.cqs.push_back(run(check_mpec_acq, "MPEC-ACQ"));
    r.cqs.push_back(run(check_zangwill, "Zangwill"));
    r.cqs.push_back(run(check_weak_reverse_convex, "MPEC-WRC"));
    const CQVerdict &gs = r.cqs[0], &mpec = r.cqs[1], &zangwill = r.cqs[2], &wrc = r.cqs[3];

    r.implications.push_back(implication("MPEC-WRC => Zangwill not refuted", wrc.holds(), zangwill.refuted()));
    r.implications.push_back(implication("Zangwill => MPEC-ACQ not refuted", zangwill.holds(), mpec.refuted()));
    r.implications.push_back(implication("GS-ACQ => MPEC-ACQ not refuted", gs.holds(), mpec.refuted()));

    const ConeDescription* pi = nullptr;
    std::vector<const ConeDescription*> psi;
    for (const auto& c : r.cones) {
        if (c.name == "Pi")
            pi = &c;
        if (c.name == "Psi_G" || c.name == "Psi_H")
            psi.push_back(&c);
    }
    if (pi && psi.size() == 2) {
        HalfspaceCone pi_cone{r.point.size(), pi->normals};
        ImplicationCheck check{"Psi subset of Pi on extreme rays", ImplicationStatus::Consistent, ""};
        for (const ConeDescription* branch : psi)
            for (const auto& ray : branch->generators)
                if (!pi_cone.contains(ray)) {
                    check.status = ImplicationStatus::Violated;
                    check.detail = "ray " + to_string(ray) + " of " + branch->name + " is outside Pi";
                }
        r.implications.push_back(std::move(check));
    } else {
        r.implications.push_back({"Psi subset of Pi on extreme rays", ImplicationStatus::Vacuous, "cones unavailable"});
    }

    bool gs_found = false, ga_ran = false, ga_found = false;
    for (const auto& s : r.stationarity) {
        const bool found = s.result && s.result->certificate;
        if (s.kind == StationarityKind::GS)
            gs_found = found;
        else {
            ga_ran = s.error.empty();
            ga_found = found;
        }
    }
    if (ga_ran || !gs_found)
        r.implications.push_back(implication("GS-stationary => GA-stationary", gs_found, !ga_found));
}

void run_convexity(const MPECProblem& p, SubdifferentialProvider& provider, const PipelineOptions& opts,
                   PointReport& r)
{
    SampleConfig cfg;
    cfg.seed = opts.seed;
    cfg.random_count = opts.convexity_samples;
    bool rule_derived = false;
    try {
        const Subdifferential& s = provider.get("J");
        rule_derived = s.provenance == Provenance::RuleDerived;
        r.convexity.push_back(check_pseudoconvex(p.objective, r.point, s, cfg, "J"));
        r.convexity.push_back(check_quasiconvex(p.objective, r.point, s, cfg, "J"));
    } catch (const RuleFailure& e) {
        r.errors.push_back("convexity " + blocked(e));
    } catch (const Error& e) {
        r.errors.push_back(std::string("convexity: ") + e.what());
    }
    if (rule_derived) {
        // The rules only succeed when f'(k, .) is the support function of the
        // derived polytope, which is convex.
        ConvexityVerdict v;
        v.property = "tangentially convex";
        v.function = "J";
        v.seed = opts.seed;
        v.note = "implied by the rule-derived subdifferential";
        r.convexity.push_back(std::move(v));
        return;
    }
    // The tangential probe needs no set, so it runs even when the rules fail.
    ConvexityProbeConfig probe;
    probe.seed = opts.seed;
    probe.samples = opts.convexity_samples;
    try {
        const auto base = function_value(p, "J", r.point);
        const TangentialConvexityVerdict t = tangential_convexity_probe(p.objective, r.point, probe, base);
        ConvexityVerdict v;
        v.property = "tangentially convex";
        v.function = "J";
        v.status = t.refuted ? ConvexityStatus::Refuted : ConvexityStatus::NoViolation;
        v.samples = t.samples;
        v.skipped = t.excluded;
        v.seed = opts.seed;
        v.region = "direction pairs in the unit cube";
        if (t.witness) {
            v.premise = PremiseWitness{t.witness->d1, t.witness->d2, t.witness->lambda};
            v.witness_point = r.point + t.witness->d1;
        }
        v.note = "sampled; not a proof";
        r.convexity.push_back(std::move(v));
    } catch (const Error& e) {
        r.errors.push_back(std::string("tangential convexity: ") + e.what());
    }
}

void run_sufficiency(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                     const PipelineOptions& opts, PointReport& r)
{
    const StationarityCertificate* cert = nullptr;
    for (const auto& s : r.stationarity)
        if (!cert && s.result && s.result->certificate)
            cert = &*s.result->certificate;
    if (!cert) {
        r.sufficiency_error = "no stationarity certificate";
        return;
    }
    SampleConfig cfg;
    cfg.seed = opts.seed;
    cfg.random_count = opts.convexity_samples;
    try {
        r.sufficiency = sufficiency_check(p, sets, *cert, provider, cfg);
    } catch (const RuleFailure& e) {
        r.sufficiency_error = blocked(e);
    } catch (const Error& e) {
        r.sufficiency_error = e.what();
    }
}

} // namespace

std::string reference_class_name(ReferenceClass c)
{
    switch (c) {
    case ReferenceClass::Vertex: return "vertex";
    case ReferenceClass::Interior: return "interior";
    case ReferenceClass::Outside: return "outside";
    }
    return "?";
}

std::string implication_status_name(ImplicationStatus s)
{
    switch (s) {
    case ImplicationStatus::Consistent: return "consistent";
    case ImplicationStatus::Vacuous: return "vacuous";
    case ImplicationStatus::Violated: return "violated";
    }
    return "?";
}

PointReport run_point(const MPECProblem& p, const std::string& label, const RationalVector& k,
                      const PipelineOptions& opts)
{
    PointReport r;
    r.label = label;
    r.point = k;
    try {
        r.feasibility = check_feasible(p, k);
        if (!r.feasibility.feasible)
            return r;
        r.sets = compute_index_sets(p, k);
    } catch (const Error& e) {
        r.feasibility.feasible = false;
        r.errors.push_back(std::string("feasibility: ") + e.what());
        return r;
    }
    SubdifferentialProvider provider(p, k);
    run_subdifferentials(p, *r.sets, provider, opts, r);
    run_families(p, *r.sets, provider, r);
    if (opts.run_stationarity)
        run_stationarity(p, *r.sets, provider, opts, r);
    if (opts.run_cq)
        run_cqs(p, *r.sets, provider, opts, r);
    if (opts.run_convexity)
        run_convexity(p, provider, opts, r);
    if (opts.run_sufficiency && opts.run_stationarity)
        run_sufficiency(p, *r.sets, provider, opts, r);
    return r;
}

VerificationReport run_pipeline(const MPECProblem& p, const PipelineOptions& opts,
                                const std::optional<LabeledPoint>& explicit_point)
{
    VerificationReport r;
    r.problem = p.name;
    r.dimension = p.dimension;
    r.options = opts;
    if (explicit_point)
        r.points.push_back(run_point(p, explicit_point->label, explicit_point->coords, opts));
    else
        for (const auto& pt : p.points)
            r.points.push_back(run_point(p, pt.label, pt.coords, opts));
    return r;
}

std::string multiplier_summary(const MultiplierVector& m)
{
    static const char* names[] = {"λ_ell", "λ_h", "μ_h", "λ_G", "λ_H", "μ_G", "μ_H"};
    std::vector<std::string> parts;
    for (std::size_t f = 0; f < all_multipliers.size(); ++f) {
        const auto& values = m.values[f];
        if (std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 0; }))
            continue;
        std::string text = std::string(names[f]) + "=";
        if (values.size() == 1) {
            text += to_string(values.front());
        } else {
            text += "(";
            for (std::size_t i = 0; i < values.size(); ++i)
                text += (i ? ", " : "") + to_string(values[i]);
            text += ")";
        }
        parts.push_back(text);
    }
    if (parts.empty())
        return "all multipliers zero";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? ", " : "") + parts[i];
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {

ordered_json vec(const RationalVector& v)
{
    ordered_json a = ordered_json::array();
    for (Index i = 0; i < v.size(); ++i)
        a.push_back(to_string(v[i]));
    return a;
}

ordered_json vecs(const std::vector<RationalVector>& vs)
{
    ordered_json a = ordered_json::array();
    for (const auto& v : vs)
        a.push_back(vec(v));
    return a;
}

ordered_json one_based(const std::vector<std::size_t>& idx)
{
    ordered_json a = ordered_json::array();
    for (std::size_t i : idx)
        a.push_back(i + 1);
    return a;
}

ordered_json strings(const std::vector<std::string>& s)
{
    ordered_json a = ordered_json::array();
    for (const auto& x : s)
        a.push_back(x);
    return a;
}

ordered_json selection_json(const SelectedSubgradient& s)
{
    return {{"function", s.function}, {"vertices", vecs(s.vertices)}, {"weights", vec(s.weights)},
            {"point", vec(s.point)}};
}

ordered_json certificate_json(const StationarityCertificate& c)
{
    ordered_json m;
    for (Multiplier which : all_multipliers) {
        ordered_json a = ordered_json::array();
        for (const auto& v : c.multipliers[which])
            a.push_back(to_string(v));
        m[multiplier_name(which)] = std::move(a);
    }
    ordered_json terms = ordered_json::array();
    for (const auto& [key, sel] : c.terms) {
        ordered_json t = selection_json(sel);
        t["multiplier"] = multiplier_name(key.first);
        t["index"] = key.second + 1;
        terms.push_back(std::move(t));
    }
    ordered_json branch = ordered_json::array();
    for (OmegaChoice o : c.omega_branch)
        branch.push_back(omega_choice_name(o));
    return {{"kind", kind_name(c.kind)},
            {"multipliers", std::move(m)},
            {"objective", selection_json(c.objective)},
            {"terms", std::move(terms)},
            {"omega_branch", std::move(branch)}};
}

ordered_json convexity_json(const ConvexityVerdict& v)
{
    ordered_json j{{"function", v.function},     {"property", v.property}, {"status", v.refuted() ? "refuted" : "no-violation"},
                   {"samples", v.samples},       {"skipped", v.skipped},   {"seed", v.seed},
                   {"region", v.region},         {"note", v.note}};
    if (v.witness_point)
        j["witness_point"] = vec(*v.witness_point);
    if (v.witness_subgradient)
        j["witness_subgradient"] = vec(*v.witness_subgradient);
    if (v.premise)
        j["premise"] = {{"d1", vec(v.premise->d1)}, {"d2", vec(v.premise->d2)}, {"lambda", to_string(v.premise->lambda)}};
    return j;
}

ordered_json cq_json(const CQVerdict& v)
{
    ordered_json j{{"name", v.name},
                   {"status", cq_status_name(v.status)},
                   {"method", v.method},
                   {"rays_tested", v.rays_tested},
                   {"probe_depth", v.probe_depth}};
    j["witness"] = v.witness ? vec(*v.witness) : ordered_json(nullptr);
    j["evidence"] = strings(v.evidence);
    j["reason"] = v.reason;
    if (!v.items.empty()) {
        ordered_json items = ordered_json::array();
        for (const auto& i : v.items)
            items.push_back(convexity_json(i));
        j["items"] = std::move(items);
    }
    return j;
}

ordered_json point_json(const PointReport& r)
{
    ordered_json j;
    j["label"] = r.label;
    j["point"] = vec(r.point);
    ordered_json violations = ordered_json::array();
    for (const auto& v : r.feasibility.violations)
        violations.push_back({{"constraint", v.constraint}, {"residual", v.residual}});
    j["feasibility"] = {{"feasible", r.feasibility.feasible}, {"violations", std::move(violations)}};
    if (r.sets)
        j["index_sets"] = {{"I_ell", one_based(r.sets->active)},
                           {"Theta", one_based(r.sets->theta)},
                           {"Omega", one_based(r.sets->omega)},
                           {"Upsilon", one_based(r.sets->upsilon)}};
    ordered_json subs = ordered_json::array();
    for (const auto& s : r.subdifferentials) {
        ordered_json e{{"function", s.function},
                       {"vertices", vecs(s.vertices)},
                       {"provenance", s.provenance == Provenance::Manual ? "manual" : "rule-derived"},
                       {"exact", s.exact}};
        if (s.support)
            e["support_check"] = {{"directions", s.support->checked},
                                  {"max_deviation", s.support->max_deviation},
                                  {"divergent", s.support->divergent},
                                  {"inevaluable", s.support->inevaluable},
                                  {"axes_excluded", s.axes_excluded},
                                  {"provenance", "sampled"}};
        e["warnings"] = strings(s.warnings);
        subs.push_back(std::move(e));
    }
    j["subdifferentials"] = std::move(subs);
    ordered_json refs = ordered_json::array();
    for (const auto& ref : r.references) {
        ordered_json pts = ordered_json::array();
        for (const auto& [q, c] : ref.points)
            pts.push_back({{"point", vec(q)}, {"class", reference_class_name(c)}});
        refs.push_back({{"function", ref.function}, {"points", std::move(pts)}, {"hull_matches", ref.hull_matches}});
    }
    j["reference_checks"] = std::move(refs);
    ordered_json fams = ordered_json::array();
    for (const auto& t : r.families)
        fams.push_back({{"pool", pool_name(t.pool)}, {"function", t.function}, {"vertices", vecs(t.vertices)}});
    j["families"] = std::move(fams);
    ordered_json cones = ordered_json::array();
    for (const auto& c : r.cones)
        cones.push_back({{"name", c.name}, {"normals", vecs(c.normals)}, {"generators", vecs(c.generators)}});
    j["cones"] = std::move(cones);
    ordered_json stat = ordered_json::array();
    for (const auto& s : r.stationarity) {
        ordered_json e{{"kind", kind_name(s.kind)}};
        if (s.result) {
            e["stationary"] = s.result->certificate.has_value();
            e["branches_tried"] = s.result->branches_tried;
            e["certificate"] = s.result->certificate ? certificate_json(*s.result->certificate) : ordered_json(nullptr);
        }
        if (s.check)
            e["verified"] = {{"ok", s.check->ok}, {"reasons", strings(s.check->reasons)}, {"provenance", "exact"}};
        e["error"] = s.error;
        stat.push_back(std::move(e));
    }
    j["stationarity"] = std::move(stat);
    ordered_json cqs = ordered_json::array();
    for (const auto& v : r.cqs)
        cqs.push_back(cq_json(v));
    j["constraint_qualifications"] = std::move(cqs);
    ordered_json imps = ordered_json::array();
    for (const auto& i : r.implications)
        imps.push_back({{"name", i.name}, {"status", implication_status_name(i.status)}, {"detail", i.detail}});
    j["implications"] = std::move(imps);
    ordered_json conv = ordered_json::array();
    for (const auto& v : r.convexity)
        conv.push_back(convexity_json(v));
    j["convexity"] = std::move(conv);
    if (r.sufficiency) {
        const auto& s = *r.sufficiency;
        ordered_json checks = ordered_json::array();
        for (const auto& c : s.checks)
            checks.push_back(convexity_json(c));
        j["sufficiency"] = {{"status", sufficiency_status_name(s.status)},
                            {"which", s.which},
                            {"Omega_mu^G", one_based(s.mu.omega_g)},
                            {"Omega_mu^H", one_based(s.mu.omega_h)},
                            {"Theta_mu^+", one_based(s.mu.theta_plus)},
                            {"Upsilon_mu^+", one_based(s.mu.upsilon_plus)},
                            {"checks", std::move(checks)}};
    } else {
        j["sufficiency"] = {{"status", "not-run"}, {"reason", r.sufficiency_error}};
    }
    j["errors"] = strings(r.errors);
    return j;
}

} // namespace

ordered_json report_to_json(const VerificationReport& r)
{
    ordered_json j;
    j["tool"] = "mpecv";
    j["version"] = r.tool;
    j["problem"] = r.problem;
    j["dimension"] = r.dimension;
    j["settings"] = {{"seed", r.options.seed},
                     {"zero_tolerance", default_zero_tolerance},
                     {"support_tolerance", support_tolerance},
                     {"branch_cap", r.options.branch_cap},
                     {"probe_depth", r.options.probe_depth},
                     {"convexity_samples", r.options.convexity_samples}};
    ordered_json points = ordered_json::array();
    for (const auto& p : r.points)
        points.push_back(point_json(p));
    j["points"] = std::move(points);
    return j;
}

std::string emit_json(const VerificationReport& r) { return report_to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------- text

namespace {

std::string set_text(const std::vector<std::size_t>& idx)
{
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i)
        s += (i ? ", " : "") + std::to_string(idx[i] + 1);
    return s + "}";
}

std::string hull_text(const std::vector<RationalVector>& vs)
{
    if (vs.size() == 1)
        return "{" + to_string(vs.front()) + "}";
    std::string s = "conv{";
    for (std::size_t i = 0; i < vs.size(); ++i)
        s += (i ? ", " : "") + to_string(vs[i]);
    return s + "}";
}

std::string list_text(const std::vector<RationalVector>& vs)
{
    if (vs.empty())
        return "none";
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i)
        s += (i ? ", " : "") + to_string(vs[i]);
    return s;
}

void convexity_text(std::ostringstream& out, const ConvexityVerdict& v, const char* indent)
{
    out << indent << v.function << " " << v.property << ": " << (v.refuted() ? "REFUTED" : "no violation");
    if (v.samples > 0)
        out << " (" << v.samples << " samples, seed " << v.seed << ")";
    else
        out << " (" << v.note << ")";
    if (v.witness_point)
        out << " witness t = " << to_string(*v.witness_point);
    if (v.witness_subgradient)
        out << " with xi = " << to_string(*v.witness_subgradient);
    if (v.premise)
        out << " derivative not convex on d1 = " << to_string(v.premise->d1) << ", d2 = " << to_string(v.premise->d2)
            << ", lambda = " << to_string(v.premise->lambda);
    out << "\n";
}

} // namespace

std::string emit_text(const VerificationReport& r)
{
    std::ostringstream out;
    out << "mpecv " << r.tool << "\n";
    out << "problem: " << r.problem << " (n = " << r.dimension << ")\n";
    out << "seed: " << r.options.seed << ", probe depth: " << r.options.probe_depth
        << ", convexity samples: " << r.options.convexity_samples << "\n";
    for (const auto& p : r.points) {
        out << "\n== point " << p.label << " " << to_string(p.point) << "\n";
        out << "feasible: " << (p.feasibility.feasible ? "yes" : "no") << "\n";
        for (const auto& v : p.feasibility.violations)
            out << "  violated " << v.constraint << ": " << v.residual << "\n";
        if (p.sets)
            out << "I_ell = " << set_text(p.sets->active) << ", Theta = " << set_text(p.sets->theta)
                << ", Omega = " << set_text(p.sets->omega) << ", Upsilon = " << set_text(p.sets->upsilon) << "\n";
        for (const auto& s : p.subdifferentials) {
            out << "subdifferential " << s.function << ": " << hull_text(s.vertices) << " ["
                << (s.provenance == Provenance::Manual ? "manual" : "rule-derived") << (s.exact ? ", exact" : ", floating")
                << "]";
            if (s.support)
                out << " support deviation " << s.support->max_deviation << " over " << s.support->checked
                    << " directions" << (s.axes_excluded ? " (axes excluded)" : "");
            out << "\n";
            for (const auto& w : s.warnings)
                out << "  warning: " << w << "\n";
        }
        for (const auto& ref : p.references) {
            out << "reference set for " << ref.function << ":";
            for (const auto& [q, c] : ref.points)
                out << " " << to_string(q) << " " << reference_class_name(c) << ";";
            out << (ref.hull_matches ? " hull matches" : " hull differs") << "\n";
            for (const auto& [q, c] : ref.points)
                if (c == ReferenceClass::Interior)
                    out << "  note: listed point " << to_string(q) << " is interior, not a vertex\n";
        }
        for (const auto& c : p.cones) {
            if (c.name == "Delta" || c.name == "Lambda")
                out << c.name << " generators: " << list_text(c.generators) << "\n";
            else
                out << c.name << " extreme rays: " << list_text(c.generators) << "\n";
        }
        for (const auto& s : p.stationarity) {
            out << kind_name(s.kind) << "-stationary: ";
            if (!s.error.empty())
                out << s.error << "\n";
            else if (s.result && s.result->certificate) {
                out << "YES (" << multiplier_summary(s.result->certificate->multipliers) << ")\n";
                if (s.check)
                    out << "  certificate " << (s.check->ok ? "verified exactly" : "FAILED verification") << "\n";
                for (const auto& reason : s.check ? s.check->reasons : std::vector<std::string>{})
                    out << "    " << reason << "\n";
            } else {
                const std::size_t tried = s.result ? s.result->branches_tried : 0;
                out << "NO (" << tried << (tried == 1 ? " branch" : " branches") << " tried)\n";
            }
        }
        for (const auto& v : p.cqs) {
            out << v.name << ": " << cq_status_name(v.status);
            if (!v.method.empty())
                out << " [" << v.method << "]";
            if (v.witness)
                out << " witness " << to_string(*v.witness);
            if (!v.reason.empty())
                out << " (" << v.reason << ")";
            out << "\n";
            for (const auto& e : v.evidence)
                out << "  " << e << "\n";
            for (const auto& i : v.items)
                if (i.refuted())
                    convexity_text(out, i, "  ");
        }
        for (const auto& i : p.implications)
            out << "check " << i.name << ": " << implication_status_name(i.status)
                << (i.detail.empty() ? "" : " (" + i.detail + ")") << "\n";
        for (const auto& v : p.convexity)
            convexity_text(out, v, "");
        if (p.sufficiency) {
            out << "sufficiency: " << sufficiency_status_name(p.sufficiency->status);
            if (!p.sufficiency->which.empty())
                out << " (" << p.sufficiency->which << ")";
            out << "\n";
            for (const auto& c : p.sufficiency->checks)
                if (c.refuted())
                    convexity_text(out, c, "  ");
        } else if (!p.sufficiency_error.empty()) {
            out << "sufficiency: not run (" << p.sufficiency_error << ")\n";
        }
        for (const auto& e : p.errors)
            out << "error: " << e << "\n";
    }
    return out.str();
}

} // namespace mpecv
