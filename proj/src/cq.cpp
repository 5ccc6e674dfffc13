#include "mpecv/cq.hpp"

#include "mpecv/errors.hpp"
#include "mpecv/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpecv {

std::string cq_status_name(CQStatus s)
{
    switch (s) {
    case CQStatus::HoldsExact: return "holds-exact";
    case CQStatus::HoldsOnSamples: return "holds-on-samples";
    case CQStatus::Refuted: return "refuted";
    case CQStatus::Undefined: return "undefined";
    case CQStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string probe_outcome_name(ProbeOutcome o)
{
    switch (o) {
    case ProbeOutcome::Member: return "member";
    case ProbeOutcome::NonMember: return "non-member";
    case ProbeOutcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::string id_of(const char* family, std::size_t i) { return family + std::to_string(i + 1); }

bool exactly_feasible(const MPECProblem& p, const RationalVector& x)
{
    try {
        return check_feasible(p, x).feasible;
    } catch (const DomainError&) {
        return false;
    }
}

/// L1 constraint violation; complementarity enters as |min(G⁺, H⁺)|.
std::optional<double> violation(const MPECProblem& p, const Vector<double>& x)
{
    try {
        double v = 0.0;
        for (const auto& e : p.inequalities)
            v += std::max(eval(e, x), 0.0);
        for (const auto& e : p.equalities)
            v += std::fabs(eval(e, x));
        for (std::size_t i = 0; i < p.pairs(); ++i) {
            const double g = eval(p.g[i], x);
            const double h = eval(p.h[i], x);
            v += std::max(-g, 0.0) + std::max(-h, 0.0) + std::min(std::max(g, 0.0), std::max(h, 0.0));
        }
        if (!std::isfinite(v))
            return std::nullopt;
        return v;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<Vector<double>> search_directions(Index n)
{
    std::vector<Vector<double>> dirs;
    if (n <= 4) {
        std::vector<int> z(static_cast<std::size_t>(n), -1);
        while (true) {
            Vector<double> d(n);
            for (Index i = 0; i < n; ++i)
                d[i] = z[static_cast<std::size_t>(i)];
            if (d.squaredNorm() > 0)
                dirs.push_back(d / d.norm());
            Index i = 0;
            while (i < n && z[static_cast<std::size_t>(i)] == 1)
                z[static_cast<std::size_t>(i++)] = -1;
            if (i == n)
                break;
            ++z[static_cast<std::size_t>(i)];
        }
        return dirs;
    }
    for (Index i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
            Vector<double> d = Vector<double>::Zero(n);
            d[i] = s;
            dirs.push_back(d);
        }
    return dirs;
}

/// Deterministic compass search for a point of violation ≤ tol within the
/// ball of the given radius around the target.
bool local_feasible(const MPECProblem& p, const Vector<double>& target, double radius, double tol, double& residual)
{
    const auto dirs = search_directions(target.size());
    Vector<double> x = target;
    double best = violation(p, x).value_or(std::numeric_limits<double>::infinity());
    double step = radius / 2;
    const double floor = radius * std::ldexp(1.0, -40);
    for (int iter = 0; iter < 20000 && best > tol && step > floor; ++iter) {
        // Best improvement; first improvement crawls along curved ridges.
        std::optional<Vector<double>> next;
        for (const auto& d : dirs) {
            Vector<double> y = x + step * d;
            if ((y - target).norm() > radius)
                continue;
            auto v = violation(p, y);
            if (v && *v < best) {
                best = *v;
                next = std::move(y);
            }
        }
        if (next)
            x = *next;
        else
            step /= 2;
    }
    residual = best;
    return best <= tol;
}

ProbeOutcome judge(const std::string& trace, int decisive)
{
    const std::size_t n = std::min(trace.size(), static_cast<std::size_t>(std::max(decisive, 1)));
    const std::string tail = trace.substr(trace.size() - n);
    if (tail.find_first_not_of('+') == std::string::npos)
        return ProbeOutcome::Member;
    if (tail.find_first_not_of('-') == std::string::npos)
        return ProbeOutcome::NonMember;
    return ProbeOutcome::Inconclusive;
}

struct RaySet {
    std::vector<RationalVector> extreme;
    std::vector<RationalVector> all;
};

RaySet test_rays(const std::vector<HalfspaceCone>& cones, const TangentProbeConfig& cfg)
{
    RaySet rays;
    for (const auto& c : cones) {
        auto r = extreme_rays(c);
        rays.extreme.insert(rays.extreme.end(), r.begin(), r.end());
    }
    sort_unique(rays.extreme);
    rays.all = rays.extreme;
    Sampler sampler(cfg.seed);
    for (const auto& c : cones) {
        auto r = extreme_rays(c);
        if (r.size() < 2)
            continue;
        for (std::size_t j = 0; j < cfg.random_rays; ++j) {
            RationalVector combo = RationalVector::Zero(c.dimension);
            for (const auto& g : r)
                combo += sampler.uniform(Rational(0), Rational(1), 8) * g;
            if (!is_zero(combo))
                rays.all.push_back(primitive(combo));
        }
    }
    return rays;
}

/// Dcon membership: k + λd ∈ K on the grid λ = δ·j/64, j = 1..64, for some δ.
bool dcon_direct(const MPECProblem& p, const RationalVector& k, const RationalVector& d)
{
    for (const Rational& delta : {Rational(1), Rational(1, 4), Rational(1, 16)}) {
        bool all = true;
        for (int j = 1; j <= 64 && all; ++j)
            all = exactly_feasible(p, RationalVector(k + delta * Rational(j, 64) * d));
        if (all)
            return true;
    }
    return false;
}

ProbeOutcome dcon_member(const MPECProblem& p, const RationalVector& k, const RationalVector& d, std::string& trace)
{
    if (is_zero(d) || dcon_direct(p, k, d)) {
        trace = "direct";
        return ProbeOutcome::Member;
    }
    // Closure: d must be approximable by members at every perturbation scale.
    trace = "closure";
    bool all_scales = true;
    for (const Rational& eps : {Rational(1, 16), Rational(1, 256), Rational(1, 4096)}) {
        bool hit = false;
        for (Index i = 0; i < d.size() && !hit; ++i)
            for (int s : {1, -1}) {
                RationalVector q = d;
                q[i] += s * eps;
                if (dcon_direct(p, k, q)) {
                    hit = true;
                    break;
                }
            }
        trace += hit ? '+' : '-';
        all_scales = all_scales && hit;
    }
    return all_scales ? ProbeOutcome::Member : ProbeOutcome::NonMember;
}

enum class Target { Tangent, FeasibleDirections };

CQVerdict cone_inclusion(std::string name, const std::vector<HalfspaceCone>& cones, const MPECProblem& p,
                         const IndexSets& sets, const RationalVector& k, const CQConfig& cfg, Target target)
{
    CQVerdict v;
    v.name = std::move(name);
    v.probe_depth = cfg.probe.steps;

    if (auto pieces = polyhedral_tangent_cone(p, k, sets, cfg.piece_cap)) {
        // Locally K − k* is the union of the pieces, so cl Dcon = T and both
        // inclusions are decided exactly.
        v.method = "polyhedral";
        v.evidence.push_back("T(K, k*) is the union of " + std::to_string(pieces->size()) + " linearized cones");
        for (const auto& c : cones) {
            v.rays_tested += extreme_rays(c).size();
            std::optional<RationalVector> witness;
            if (!covered_by_union(c, *pieces, &witness)) {
                v.status = CQStatus::Refuted;
                v.witness = witness;
                if (witness) {
                    v.evidence.push_back("direction " + to_string(*witness) + " lies in the cone but in none of the " +
                                         std::to_string(pieces->size()) + " tangent pieces");
                    const TangentProbe probe = tangent_cone_member(p, k, *witness, cfg.probe);
                    v.evidence.push_back("tangent probe " + probe_outcome_name(probe.outcome) + " trace " + probe.trace);
                } else {
                    v.reason = "inclusion fails but no witness direction was isolated";
                }
                return v;
            }
        }
        v.status = CQStatus::HoldsExact;
        return v;
    }

    v.method = "probe";
    RaySet rays;
    try {
        rays = test_rays(cones, cfg.probe);
    } catch (const DimensionTooLarge& e) {
        v.status = CQStatus::Inconclusive;
        v.reason = e.what();
        return v;
    }
    if (rays.extreme.empty()) {
        v.status = CQStatus::HoldsExact;
        v.evidence.push_back("the cone is {0}");
        return v;
    }
    std::vector<std::string> unsettled;
    for (const auto& d : rays.all) {
        ++v.rays_tested;
        ProbeOutcome outcome;
        std::string trace;
        try {
            if (target == Target::Tangent) {
                TangentProbe probe = tangent_cone_member(p, k, d, cfg.probe);
                outcome = probe.outcome;
                trace = probe.trace;
            } else {
                outcome = dcon_member(p, k, d, trace);
            }
        } catch (const DomainError& e) {
            outcome = ProbeOutcome::Inconclusive;
            trace = e.what();
        }
        v.evidence.push_back(to_string(d) + ": " + probe_outcome_name(outcome) + " [" + trace + "]");
        if (outcome == ProbeOutcome::NonMember) {
            v.status = CQStatus::Refuted;
            v.witness = d;
            return v;
        }
        if (outcome == ProbeOutcome::Inconclusive)
            unsettled.push_back(to_string(d));
    }
    if (!unsettled.empty()) {
        v.status = CQStatus::Inconclusive;
        v.reason = "mixed probe evidence for " + std::to_string(unsettled.size()) + " ray(s), first " + unsettled.front();
        return v;
    }
    v.status = CQStatus::HoldsOnSamples;
    return v;
}

template <typename Body>
CQVerdict guarded(const std::string& name, Body body)
{
    try {
        return body();
    } catch (const AllPoolsEmpty& e) {
        CQVerdict v;
        v.name = name;
        v.status = CQStatus::Undefined;
        v.reason = e.what();
        return v;
    } catch (const RuleFailure& e) {
        CQVerdict v;
        v.name = name;
        v.status = CQStatus::Inconclusive;
        v.reason = std::string("blocked: supply manual subdifferential for ") + e.function();
        return v;
    }
}

} // namespace

TangentProbe tangent_cone_member(const MPECProblem& p, const RationalVector& k, const RationalVector& d,
                                 const TangentProbeConfig& cfg)
{
    if (!check_feasible(p, k).feasible)
        throw FeasibilityError("tangent probe needs a feasible base point");
    TangentProbe probe;
    if (is_zero(d)) {
        probe.outcome = ProbeOutcome::Member;
        return probe;
    }
    const double k_norm = to_double(k).lpNorm<Eigen::Infinity>();
    for (int z = 1; z <= cfg.steps; ++z) {
        const Rational t = Rational(1) / Rational(boost::multiprecision::pow(boost::multiprecision::mpz_int(2), z));
        const RationalVector target = k + t * d;
        if (exactly_feasible(p, target)) {
            probe.trace += '+';
            probe.last_residual = 0.0;
            continue;
        }
        const double td = std::ldexp(1.0, -z);
        const double radius = std::min(cfg.radius_scale * td * td, td / 2);
        const double tol = td * td * td + 1e-14 * (1.0 + k_norm);
        double residual = 0.0;
        const bool found = local_feasible(p, to_double(target), radius, tol, residual);
        probe.last_residual = residual;
        if (found)
            probe.trace += '+';
        else
            probe.trace += std::isfinite(residual) ? '-' : '?';
    }
    probe.outcome = judge(probe.trace, cfg.decisive);
    return probe;
}

std::optional<std::vector<HalfspaceCone>> polyhedral_tangent_cone(const MPECProblem& p, const RationalVector& k,
                                                                  const IndexSets& sets, std::size_t cap)
{
    auto pieces_of = [&](const Expr& e) { return local_pieces(e, k, cap); };
    auto has = [](const std::vector<std::size_t>& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); };

    // Each group lists alternative normal sets; T is the union over one
    // choice per group.
    using Alternative = std::vector<RationalVector>;
    std::vector<std::vector<Alternative>> groups;

    auto with = [](const LinearPiece& piece, std::initializer_list<RationalVector> extra) {
        Alternative a = piece.region;
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };

    for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
        auto pieces = pieces_of(p.inequalities[i]);
        if (!pieces)
            return std::nullopt;
        if (!has(sets.active, i))
            continue;
        std::vector<Alternative> alts;
        for (const auto& piece : *pieces)
            alts.push_back(with(piece, {piece.gradient}));
        groups.push_back(std::move(alts));
    }
    for (const auto& e : p.equalities) {
        auto pieces = pieces_of(e);
        if (!pieces)
            return std::nullopt;
        std::vector<Alternative> alts;
        for (const auto& piece : *pieces)
            alts.push_back(with(piece, {piece.gradient, RationalVector(-piece.gradient)}));
        groups.push_back(std::move(alts));
    }
    for (std::size_t i = 0; i < p.pairs(); ++i) {
        auto gp = pieces_of(p.g[i]);
        auto hp = pieces_of(p.h[i]);
        if (!gp || !hp)
            return std::nullopt;
        std::vector<Alternative> alts;
        if (has(sets.theta, i)) {
            for (const auto& piece : *gp)
                alts.push_back(with(piece, {piece.gradient, RationalVector(-piece.gradient)}));
        } else if (has(sets.upsilon, i)) {
            for (const auto& piece : *hp)
                alts.push_back(with(piece, {piece.gradient, RationalVector(-piece.gradient)}));
        } else {
            for (const auto& g : *gp)
                for (const auto& h : *hp) {
                    Alternative shared = g.region;
                    shared.insert(shared.end(), h.region.begin(), h.region.end());
                    Alternative g_zero = shared;
                    g_zero.insert(g_zero.end(), {g.gradient, RationalVector(-g.gradient), RationalVector(-h.gradient)});
                    Alternative h_zero = shared;
                    h_zero.insert(h_zero.end(), {h.gradient, RationalVector(-h.gradient), RationalVector(-g.gradient)});
                    alts.push_back(std::move(g_zero));
                    alts.push_back(std::move(h_zero));
                }
        }
        groups.push_back(std::move(alts));
    }

    std::size_t total = 1;
    for (const auto& g : groups) {
        total *= g.size();
        if (total > cap)
            return std::nullopt;
    }
    std::vector<HalfspaceCone> cones;
    std::vector<std::size_t> choice(groups.size(), 0);
    while (true) {
        HalfspaceCone c{p.dimension, {}};
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& alt = groups[gi][choice[gi]];
            c.normals.insert(c.normals.end(), alt.begin(), alt.end());
        }
        c.normals.erase(std::remove_if(c.normals.begin(), c.normals.end(), [](const RationalVector& a) { return is_zero(a); }),
                        c.normals.end());
        sort_unique(c.normals);
        cones.push_back(std::move(c));
        std::size_t gi = 0;
        while (gi < groups.size() && ++choice[gi] == groups[gi].size())
            choice[gi++] = 0;
        if (gi == groups.size())
            break;
    }
    return cones;
}

CQVerdict check_gs_acq(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                       const CQConfig& cfg)
{
    return guarded("GS-ACQ", [&] {
        const auto fams = assemble_families(p, sets, provider);
        return cone_inclusion("GS-ACQ", {build_pi(fams)}, p, sets, provider.point(), cfg, Target::Tangent);
    });
}

CQVerdict check_mpec_acq(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                         const CQConfig& cfg)
{
    return guarded("MPEC-ACQ", [&] {
        const auto psi = build_psi(assemble_families(p, sets, provider));
        return cone_inclusion("MPEC-ACQ", {psi.branch_g, psi.branch_h}, p, sets, provider.point(), cfg,
                              Target::Tangent);
    });
}

CQVerdict check_zangwill(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                         const CQConfig& cfg)
{
    return guarded("MPEC-Zangwill", [&] {
        const auto psi = build_psi(assemble_families(p, sets, provider));
        return cone_inclusion("MPEC-Zangwill", {psi.branch_g, psi.branch_h}, p, sets, provider.point(), cfg,
                              Target::FeasibleDirections);
    });
}

namespace {

/// ∂ᵀ of `id` when available; otherwise a tangential-convexity refutation of
/// the same function, or nothing.
struct SetOrRefutation {
    const Subdifferential* set = nullptr;
    std::optional<TangentialConvexityVerdict> refutation;
    std::string blocked;
};

SetOrRefutation obtain(const MPECProblem& p, SubdifferentialProvider& provider, const std::string& id,
                       const CQConfig& cfg)
{
    SetOrRefutation out;
    try {
        out.set = &provider.get(id);
        return out;
    } catch (const RuleFailure&) {
    }
    std::optional<Number> base;
    try {
        base = function_value(p, id, provider.point());
    } catch (const DomainError&) {
    }
    auto probe = tangential_convexity_probe(function_expr(p, id), provider.point(), cfg.tangential, base);
    if (probe.refuted)
        out.refutation = probe;
    else
        out.blocked = id;
    return out;
}

ConvexityVerdict not_tangentially_convex(const std::string& property, const std::string& function,
                                         const std::string& negated_id, const RationalVector& k,
                                         const TangentialConvexityVerdict& probe, const CQConfig& cfg)
{
    ConvexityVerdict v;
    v.property = property;
    v.function = function;
    v.status = ConvexityStatus::Refuted;
    v.samples = probe.samples;
    v.skipped = probe.excluded;
    v.seed = cfg.tangential.seed;
    v.region = "directional derivative pairs";
    const auto& w = *probe.witness;
    v.premise = PremiseWitness{w.d1, w.d2, w.lambda};
    v.witness_point = RationalVector(k + w.d1);
    v.note = negated_id + " is not tangentially convex at k: f'(k, " + to_string(RationalVector(w.lambda * w.d1 + (Rational(1) - w.lambda) * w.d2)) +
             ") = " + Number(w.combined).str() + " exceeds the convex bound " + Number(w.bound).str();
    return v;
}

struct Continuity {
    bool ok = false;
    std::string detail;
};

Continuity continuity_probe(const MPECProblem& p, const std::string& id, const RationalVector& k, std::uint64_t seed)
{
    const Expr e = function_expr(p, id);
    Number fk;
    try {
        fk = function_value(p, id, k);
    } catch (const DomainError& err) {
        return {false, err.what()};
    }
    std::vector<RationalVector> dirs;
    for (Index i = 0; i < k.size(); ++i)
        for (int s : {1, -1}) {
            RationalVector d = RationalVector::Zero(k.size());
            d[i] = s;
            dirs.push_back(d);
        }
    Sampler sampler(seed);
    for (int j = 0; j < 8; ++j)
        dirs.push_back(sampler.cube_direction(k.size()));
    double worst = 0.0;
    for (const auto& d : dirs)
        for (int j = 4; j <= 30; ++j) {
            const Rational r = Rational(1) / Rational(boost::multiprecision::pow(boost::multiprecision::mpz_int(2), j));
            const RationalVector x = k + r * d;
            Number fx;
            try {
                fx = eval(e, x);
            } catch (const Error&) {
                return {false, "continuity probe failed: " + id + " is inevaluable at " + to_string(x)};
            }
            if (j >= 23)
                worst = std::max(worst, std::fabs((fx - fk).to_double()));
        }
    if (worst > 1e-6)
        return {false, "continuity probe failed: " + id + " jumps by " + Number(worst).str() + " near k"};
    return {true, id + " continuous on probes (max deviation " + Number(worst).str() + ")"};
}

} // namespace

CQVerdict check_weak_reverse_convex(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                                    const CQConfig& cfg)
{
    CQVerdict v;
    v.name = "MPEC-WRC";
    v.method = "sampled convexity";
    v.evidence.push_back("pseudoaffine is read as pseudoconvex and pseudoconcave");
    const RationalVector& k = provider.point();
    auto has = [](const std::vector<std::size_t>& s, std::size_t i) { return std::find(s.begin(), s.end(), i) != s.end(); };
    std::vector<std::string> unsettled;

    auto concave_side = [&](const std::string& id, const std::string& property) {
        const SetOrRefutation neg = obtain(p, provider, "-" + id, cfg);
        if (neg.refutation) {
            v.items.push_back(not_tangentially_convex(property, id, "-" + id, k, *neg.refutation, cfg));
            return;
        }
        if (!neg.set) {
            unsettled.push_back("blocked: supply manual subdifferential for -" + id);
            return;
        }
        v.items.push_back(check_pseudoconcave(function_expr(p, id), k, *neg.set, cfg.sampling, id));
        v.items.back().property = property;
    };
    auto convex_side = [&](const std::string& id, const std::string& property) {
        const SetOrRefutation pos = obtain(p, provider, id, cfg);
        if (pos.refutation) {
            v.items.push_back(not_tangentially_convex(property, id, id, k, *pos.refutation, cfg));
            return;
        }
        if (!pos.set) {
            unsettled.push_back("blocked: supply manual subdifferential for " + id);
            return;
        }
        v.items.push_back(check_pseudoconvex(function_expr(p, id), k, *pos.set, cfg.sampling, id));
        v.items.back().property = property;
    };
    auto continuity = [&](const std::string& id) {
        const Continuity c = continuity_probe(p, id, k, cfg.sampling.seed);
        v.evidence.push_back(c.detail);
        if (!c.ok)
            unsettled.push_back(c.detail);
    };

    for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
        if (has(sets.active, i))
            concave_side(id_of("l", i), "pseudoconcave");
        else
            continuity(id_of("l", i));
    }
    for (std::size_t j = 0; j < p.equalities.size(); ++j) {
        convex_side(id_of("h", j), "pseudoaffine (pseudoconvex side)");
        concave_side(id_of("h", j), "pseudoaffine (pseudoconcave side)");
    }
    for (std::size_t i = 0; i < p.pairs(); ++i) {
        if (has(sets.upsilon, i))
            continuity(id_of("G", i));
        else {
            convex_side(id_of("G", i), "pseudoaffine (pseudoconvex side)");
            concave_side(id_of("G", i), "pseudoaffine (pseudoconcave side)");
        }
        if (has(sets.theta, i))
            continuity(id_of("H", i));
        else {
            convex_side(id_of("H", i), "pseudoaffine (pseudoconvex side)");
            concave_side(id_of("H", i), "pseudoaffine (pseudoconcave side)");
        }
    }

    for (const auto& item : v.items) {
        v.rays_tested += item.samples;
        if (item.refuted()) {
            v.status = CQStatus::Refuted;
            v.witness = item.witness_point;
            v.reason = item.function + " fails " + item.property + ": " + item.note;
            return v;
        }
    }
    if (!unsettled.empty()) {
        v.status = CQStatus::Inconclusive;
        v.reason = unsettled.front();
        return v;
    }
    if (v.items.empty() && v.evidence.size() == 1) {
        v.status = CQStatus::HoldsExact;
        v.reason = "no constraint to check";
        return v;
    }
    v.status = CQStatus::HoldsOnSamples;
    return v;
}

} // namespace mpecv
