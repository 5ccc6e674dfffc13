#include "mpecv/convexity.hpp"

#include "mpecv/errors.hpp"
#include "mpecv/sampling.hpp"

#include <algorithm>

namespace mpecv {

std::vector<RationalVector> sample_points(const RationalVector& k, const SampleConfig& cfg)
{
    const Index n = k.size();
    std::vector<RationalVector> out;
    for (Index i = 0; i < n; ++i)
        for (int s : {1, -1}) {
            RationalVector t = k;
            t[i] += s;
            out.push_back(t);
        }
    if (n <= cfg.grid_max_dimension)
        for (auto& t : ball_grid(k, cfg.radius, cfg.grid_step))
            if (t != k)
                out.push_back(std::move(t));
    Sampler sampler(cfg.seed);
    for (std::size_t j = 0; j < cfg.random_count; ++j)
        out.push_back(sampler.ball_point(k, cfg.radius));
    return out;
}

std::string describe_region(const RationalVector& k, const SampleConfig& cfg)
{
    std::string s = "ball(center " + to_string(k) + ", radius " + to_string(cfg.radius) + "): axis points";
    if (k.size() <= cfg.grid_max_dimension)
        s += ", grid step " + to_string(cfg.grid_step);
    s += ", " + std::to_string(cfg.random_count) + " random points";
    return s;
}

namespace {

enum class Strength { Strict, Weak };

Number base_value(const Expr& e, const RationalVector& k, const Subdifferential& s)
{
    if (s.base_value)
        return *s.base_value;
    try {
        return eval(e, k);
    } catch (const DivisionByZero&) {
        throw DomainError("function is undefined at " + to_string(k) + "; supply a manual value");
    }
}

/// True when f(t) < f(k) (Strict) or f(t) ≤ f(k) (Weak) holds for certain.
bool below(const Number& ft, const Number& fk, Strength strength, double tol)
{
    if (ft.exact() && fk.exact()) {
        const int c = compare(ft, fk);
        return strength == Strength::Strict ? c < 0 : c <= 0;
    }
    return ft.to_double() < fk.to_double() - tol;
}

ConvexityVerdict implication_check(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                   const SampleConfig& cfg, Strength strength, std::string property,
                                   std::string function)
{
    ConvexityVerdict v;
    v.property = std::move(property);
    v.function = std::move(function);
    v.seed = cfg.seed;
    v.region = describe_region(k, cfg);
    v.note = "sampled; not a proof";
    const Number fk = base_value(e, k, s);
    const auto& verts = s.polytope.vertices();

    for (const RationalVector& t : sample_points(k, cfg)) {
        Number ft;
        try {
            ft = eval(e, t);
        } catch (const Error&) {
            ++v.skipped;
            continue;
        }
        ++v.samples;
        if (!below(ft, fk, strength, cfg.tolerance))
            continue;
        const RationalVector step = t - k;
        // The vertex maximizing ⟨ξ, t − k⟩ decides the implication; ties go to the lexicographically larger vertex.
        const RationalVector* worst = &verts.front();
        Rational worst_value = worst->dot(step);
        for (const auto& xi : verts) {
            const Rational value = xi.dot(step);
            if (value > worst_value || (value == worst_value && lex_less(*worst, xi))) {
                worst = &xi;
                worst_value = value;
            }
        }
        const bool violated = strength == Strength::Strict ? worst_value >= 0 : worst_value > 0;
        if (violated) {
            v.status = ConvexityStatus::Refuted;
            v.witness_point = t;
            v.witness_subgradient = *worst;
            v.note = "f(t) = " + ft.str() + (strength == Strength::Strict ? " < " : " <= ") + "f(k) = " + fk.str() +
                     " but <xi, t - k> = " + to_string(worst_value);
            return v;
        }
    }
    return v;
}

ConvexityVerdict relabel(ConvexityVerdict v, std::string property, const std::string& function)
{
    v.property = std::move(property);
    if (!function.empty())
        v.function = function;
    return v;
}

} // namespace

ConvexityVerdict check_pseudoconvex(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                    const SampleConfig& cfg, const std::string& function)
{
    return implication_check(e, k, s, cfg, Strength::Strict, "pseudoconvex", function);
}

ConvexityVerdict check_quasiconvex(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                   const SampleConfig& cfg, const std::string& function)
{
    return implication_check(e, k, s, cfg, Strength::Weak, "quasiconvex", function);
}

ConvexityVerdict check_pseudoconcave(const Expr& e, const RationalVector& k, const Subdifferential& negated,
                                     const SampleConfig& cfg, const std::string& function)
{
    return relabel(check_pseudoconvex(-e, k, negated, cfg), "pseudoconcave", function);
}

ConvexityVerdict check_quasiconcave(const Expr& e, const RationalVector& k, const Subdifferential& negated,
                                    const SampleConfig& cfg, const std::string& function)
{
    return relabel(check_quasiconvex(-e, k, negated, cfg), "quasiconcave", function);
}

ConvexityVerdict check_pseudoaffine(const Expr& e, const RationalVector& k, const Subdifferential& s,
                                    const Subdifferential& negated, const SampleConfig& cfg,
                                    const std::string& function)
{
    ConvexityVerdict convex = check_pseudoconvex(e, k, s, cfg, function);
    if (convex.refuted())
        return relabel(std::move(convex), "pseudoaffine (pseudoconvex side)", function);
    ConvexityVerdict concave = check_pseudoconcave(e, k, negated, cfg, function);
    if (concave.refuted())
        return relabel(std::move(concave), "pseudoaffine (pseudoconcave side)", function);
    concave.samples += convex.samples;
    concave.skipped += convex.skipped;
    return relabel(std::move(concave), "pseudoaffine", function);
}

ConvexityVerdict check_pseudoconcave(const Expr& e, const RationalVector& k, const SampleConfig& cfg)
{
    return check_pseudoconcave(e, k, build_subdifferential(-e, k), cfg);
}

ConvexityVerdict check_quasiconcave(const Expr& e, const RationalVector& k, const SampleConfig& cfg)
{
    return check_quasiconcave(e, k, build_subdifferential(-e, k), cfg);
}

ConvexityVerdict check_pseudoaffine(const Expr& e, const RationalVector& k, const SampleConfig& cfg)
{
    return check_pseudoaffine(e, k, build_subdifferential(e, k), build_subdifferential(-e, k), cfg);
}

MuIndexSets mu_index_sets(const StationarityCertificate& cert, const IndexSets& sets)
{
    MuIndexSets mu;
    const auto& mu_g = cert.multipliers[Multiplier::MuG];
    const auto& mu_h = cert.multipliers[Multiplier::MuH];
    for (std::size_t i : sets.omega) {
        if (mu_h[i] == 0 && mu_g[i] > 0)
            mu.omega_g.push_back(i);
        if (mu_g[i] == 0 && mu_h[i] > 0)
            mu.omega_h.push_back(i);
    }
    for (std::size_t i : sets.theta)
        if (mu_g[i] > 0)
            mu.theta_plus.push_back(i);
    for (std::size_t i : sets.upsilon)
        if (mu_h[i] > 0)
            mu.upsilon_plus.push_back(i);
    return mu;
}

std::string sufficiency_status_name(SufficiencyStatus s)
{
    switch (s) {
    case SufficiencyStatus::Certified: return "global-min-certified";
    case SufficiencyStatus::HypothesisFailed: return "hypothesis-failed";
    case SufficiencyStatus::IndexSetsNonempty: return "index-sets-nonempty";
    }
    return "?";
}

SufficiencyVerdict sufficiency_check(const MPECProblem& p, const IndexSets& sets, const StationarityCertificate& cert,
                                     SubdifferentialProvider& provider, const SampleConfig& cfg)
{
    SufficiencyVerdict verdict;
    verdict.mu = mu_index_sets(cert, sets);
    const std::pair<const char*, const std::vector<std::size_t>*> named[] = {
        {"Omega_mu^G", &verdict.mu.omega_g},
        {"Omega_mu^H", &verdict.mu.omega_h},
        {"Theta_mu^+", &verdict.mu.theta_plus},
        {"Upsilon_mu^+", &verdict.mu.upsilon_plus},
    };
    for (const auto& [name, set] : named)
        if (!set->empty()) {
            verdict.status = SufficiencyStatus::IndexSetsNonempty;
            verdict.which = name;
            return verdict;
        }

    const RationalVector& k = provider.point();
    auto run = [&](const std::string& id, bool pseudo) {
        const Expr e = function_expr(p, id);
        const Subdifferential& s = provider.get(id);
        verdict.checks.push_back(pseudo ? check_pseudoconvex(e, k, s, cfg, id) : check_quasiconvex(e, k, s, cfg, id));
        if (verdict.checks.back().refuted()) {
            verdict.status = SufficiencyStatus::HypothesisFailed;
            verdict.which = id + " " + verdict.checks.back().property;
            return false;
        }
        return true;
    };

    if (!run("J", true))
        return verdict;
    for (std::size_t i : sets.active)
        if (!run("l" + std::to_string(i + 1), false))
            return verdict;
    for (std::size_t j = 0; j < p.equalities.size(); ++j)
        if (!run("h" + std::to_string(j + 1), false) || !run("-h" + std::to_string(j + 1), false))
            return verdict;
    std::vector<std::size_t> g_side = sets.theta;
    g_side.insert(g_side.end(), sets.omega.begin(), sets.omega.end());
    std::sort(g_side.begin(), g_side.end());
    for (std::size_t i : g_side)
        if (!run("-G" + std::to_string(i + 1), false))
            return verdict;
    std::vector<std::size_t> h_side = sets.upsilon;
    h_side.insert(h_side.end(), sets.omega.begin(), sets.omega.end());
    std::sort(h_side.begin(), h_side.end());
    for (std::size_t i : h_side)
        if (!run("-H" + std::to_string(i + 1), false))
            return verdict;
    return verdict;
}

} // namespace mpecv
