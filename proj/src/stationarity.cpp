#include "mpecv/stationarity.hpp"

#include "mpecv/errors.hpp"
#include "mpecv/lp.hpp"

#include <algorithm>

namespace mpecv {

std::string kind_name(StationarityKind kind) { return kind == StationarityKind::GA ? "GA" : "GS"; }

std::string multiplier_name(Multiplier m)
{
    switch (m) {
    case Multiplier::LambdaEll: return "lambda_ell";
    case Multiplier::LambdaEq: return "lambda_h";
    case Multiplier::MuEq: return "mu_h";
    case Multiplier::LambdaG: return "lambda_G";
    case Multiplier::LambdaH: return "lambda_H";
    case Multiplier::MuG: return "mu_G";
    case Multiplier::MuH: return "mu_H";
    }
    return "?";
}

std::string multiplier_function(Multiplier m, std::size_t i)
{
    const std::string n = std::to_string(i + 1);
    switch (m) {
    case Multiplier::LambdaEll: return "l" + n;
    case Multiplier::LambdaEq: return "h" + n;
    case Multiplier::MuEq: return "-h" + n;
    case Multiplier::LambdaG: return "-G" + n;
    case Multiplier::LambdaH: return "-H" + n;
    case Multiplier::MuG: return "G" + n;
    case Multiplier::MuH: return "H" + n;
    }
    return "?";
}

std::string omega_choice_name(OmegaChoice c)
{
    switch (c) {
    case OmegaChoice::NeitherMu: return "mu_G=mu_H=0";
    case OmegaChoice::MuGOnly: return "mu_H=0";
    case OmegaChoice::MuHOnly: return "mu_G=0";
    }
    return "?";
}

MultiplierVector MultiplierVector::zeros(const MPECProblem& p)
{
    MultiplierVector mv;
    mv[Multiplier::LambdaEll].assign(p.inequalities.size(), Rational(0));
    mv[Multiplier::LambdaEq].assign(p.equalities.size(), Rational(0));
    mv[Multiplier::MuEq].assign(p.equalities.size(), Rational(0));
    for (Multiplier m : {Multiplier::LambdaG, Multiplier::LambdaH, Multiplier::MuG, Multiplier::MuH})
        mv[m].assign(p.pairs(), Rational(0));
    return mv;
}

namespace {

bool contains(const std::vector<std::size_t>& set, std::size_t i) { return std::find(set.begin(), set.end(), i) != set.end(); }

std::optional<OmegaChoice> omega_choice_of(const std::vector<std::size_t>& omega, const std::vector<OmegaChoice>& branch,
                                           std::size_t i)
{
    auto it = std::find(omega.begin(), omega.end(), i);
    if (it == omega.end())
        return std::nullopt;
    return branch[static_cast<std::size_t>(it - omega.begin())];
}

/// Whether the multiplier at index i may be nonzero under the zero pattern
/// and the Ω branch.
bool allowed(Multiplier m, std::size_t i, const IndexSets& sets, const std::vector<OmegaChoice>& branch)
{
    const auto choice = omega_choice_of(sets.omega, branch, i);
    switch (m) {
    case Multiplier::LambdaEll: return contains(sets.active, i);
    case Multiplier::LambdaEq:
    case Multiplier::MuEq: return true;
    case Multiplier::LambdaG: return !contains(sets.upsilon, i);
    case Multiplier::LambdaH: return !contains(sets.theta, i);
    case Multiplier::MuG: return !contains(sets.upsilon, i) && (!choice || *choice == OmegaChoice::MuGOnly);
    case Multiplier::MuH: return !contains(sets.theta, i) && (!choice || *choice == OmegaChoice::MuHOnly);
    }
    return false;
}

std::size_t family_size(const MPECProblem& p, Multiplier m)
{
    switch (m) {
    case Multiplier::LambdaEll: return p.inequalities.size();
    case Multiplier::LambdaEq:
    case Multiplier::MuEq: return p.equalities.size();
    default: return p.pairs();
    }
}

SelectedSubgradient select(const std::string& function, const std::vector<RationalVector>& vertices,
                           RationalVector weights)
{
    RationalVector point = RationalVector::Zero(vertices.front().size());
    for (std::size_t j = 0; j < vertices.size(); ++j)
        point += weights[static_cast<Index>(j)] * vertices[j];
    return {function, vertices, std::move(weights), std::move(point)};
}

std::optional<StationarityCertificate> solve_branch(const MPECProblem& p, const IndexSets& sets,
                                                    SubdifferentialProvider& provider, StationarityKind kind,
                                                    const std::vector<OmegaChoice>& branch)
{
    const Index n = p.dimension;
    const auto& objective = provider.get("J").polytope.vertices();

    struct Block {
        Multiplier m;
        std::size_t index;
        std::string function;
        const std::vector<RationalVector>* vertices;
        Index first_column;
    };
    std::vector<Block> blocks;
    Index columns = static_cast<Index>(objective.size());
    for (Multiplier m : all_multipliers)
        for (std::size_t i = 0; i < family_size(p, m); ++i)
            if (allowed(m, i, sets, branch)) {
                const std::string id = multiplier_function(m, i);
                const auto& verts = provider.get(id).polytope.vertices();
                blocks.push_back({m, i, id, &verts, columns});
                columns += static_cast<Index>(verts.size());
            }

    // Σ α_v v + Σ β_g g = 0 with α in one convex group and β ≥ 0.
    RationalMatrix a = RationalMatrix::Zero(n, columns);
    std::vector<Index> alpha_group;
    for (std::size_t j = 0; j < objective.size(); ++j) {
        a.col(static_cast<Index>(j)) = objective[j];
        alpha_group.push_back(static_cast<Index>(j));
    }
    for (const auto& b : blocks)
        for (std::size_t j = 0; j < b.vertices->size(); ++j)
            a.col(b.first_column + static_cast<Index>(j)) = (*b.vertices)[j];

    // First ask for every inequality-type multiplier to be at least 1, which
    // yields the certificates one writes by hand when they exist; otherwise
    // accept any solution.
    std::vector<const Block*> weighted;
    for (const auto& b : blocks)
        if (b.m == Multiplier::LambdaEll || b.m == Multiplier::LambdaG || b.m == Multiplier::LambdaH)
            weighted.push_back(&b);
    LPCertificate lp;
    if (!weighted.empty()) {
        const Index extra = static_cast<Index>(weighted.size());
        RationalMatrix a2 = RationalMatrix::Zero(n + extra, columns + extra);
        a2.topLeftCorner(n, columns) = a;
        RationalVector b2 = RationalVector::Zero(n + extra);
        for (Index r = 0; r < extra; ++r) {
            const Block& b = *weighted[static_cast<std::size_t>(r)];
            for (std::size_t j = 0; j < b.vertices->size(); ++j)
                a2(n + r, b.first_column + static_cast<Index>(j)) = 1;
            a2(n + r, columns + r) = -1;
            b2[n + r] = 1;
        }
        lp = lp_feasible(a2, b2, std::vector<bool>(static_cast<std::size_t>(columns + extra), true), {alpha_group});
    }
    if (!lp.feasible)
        lp = lp_feasible(a, RationalVector::Zero(n), std::vector<bool>(static_cast<std::size_t>(columns), true),
                         {alpha_group});
    if (!lp.feasible)
        return std::nullopt;

    StationarityCertificate cert;
    cert.kind = kind;
    cert.multipliers = MultiplierVector::zeros(p);
    cert.omega_branch = branch;
    cert.objective = select("J", objective, lp.solution.head(static_cast<Index>(objective.size())));
    for (const auto& b : blocks) {
        const Index size = static_cast<Index>(b.vertices->size());
        const RationalVector beta = lp.solution.segment(b.first_column, size);
        const Rational lambda = beta.sum();
        if (lambda == 0)
            continue;
        cert.multipliers[b.m][b.index] = lambda;
        cert.terms.push_back({{b.m, b.index}, select(b.function, *b.vertices, RationalVector(beta / lambda))});
    }
    return cert;
}

} // namespace

StationarityResult check_gs_stationary(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider)
{
    StationarityResult result{StationarityKind::GS, std::nullopt, 1};
    const std::vector<OmegaChoice> branch(sets.omega.size(), OmegaChoice::NeitherMu);
    result.certificate = solve_branch(p, sets, provider, StationarityKind::GS, branch);
    return result;
}

StationarityResult check_ga_stationary(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider,
                                       const StationarityConfig& cfg)
{
    const std::size_t w = sets.omega.size();
    if (w > cfg.branch_cap)
        throw BranchCapExceeded(w, cfg.branch_cap);
    StationarityResult result{StationarityKind::GA, std::nullopt, 0};

    ++result.branches_tried;
    result.certificate =
        solve_branch(p, sets, provider, StationarityKind::GA, std::vector<OmegaChoice>(w, OmegaChoice::NeitherMu));
    if (result.certificate || w == 0)
        return result;

    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w); ++mask) {
        std::vector<OmegaChoice> branch(w);
        for (std::size_t i = 0; i < w; ++i)
            branch[i] = (mask >> i) & 1U ? OmegaChoice::MuGOnly : OmegaChoice::MuHOnly;
        ++result.branches_tried;
        result.certificate = solve_branch(p, sets, provider, StationarityKind::GA, branch);
        if (result.certificate)
            return result;
    }
    return result;
}

CertificateCheck verify_certificate(const StationarityCertificate& cert, const MPECProblem& p, const IndexSets& sets,
                                    SubdifferentialProvider& provider)
{
    CertificateCheck check;
    auto fail = [&](std::string reason) {
        check.ok = false;
        check.reasons.push_back(std::move(reason));
    };
    const Index n = p.dimension;

    auto check_selection = [&](const SelectedSubgradient& s, const std::string& expected_id) {
        if (s.function != expected_id) {
            fail("subgradient for " + expected_id + " is labeled " + s.function);
            return false;
        }
        const auto& verts = provider.get(expected_id).polytope.vertices();
        if (s.weights.size() != static_cast<Index>(s.vertices.size()) || s.point.size() != n) {
            fail("malformed subgradient for " + expected_id);
            return false;
        }
        Rational total = 0;
        RationalVector combined = RationalVector::Zero(n);
        for (std::size_t j = 0; j < s.vertices.size(); ++j) {
            const Rational& wj = s.weights[static_cast<Index>(j)];
            if (wj < 0)
                fail("negative convex weight in subgradient of " + expected_id);
            if (std::find(verts.begin(), verts.end(), s.vertices[j]) == verts.end())
                fail("subgradient of " + expected_id + " uses " + to_string(s.vertices[j]) +
                     ", not a vertex of its subdifferential");
            total += wj;
            combined += wj * s.vertices[j];
        }
        if (total != 1)
            fail("convex weights of " + expected_id + " sum to " + to_string(total));
        if (combined != s.point)
            fail("subgradient of " + expected_id + " does not match its weights");
        return true;
    };

    const MultiplierVector& mv = cert.multipliers;
    for (Multiplier m : all_multipliers)
        if (mv[m].size() != family_size(p, m)) {
            fail(multiplier_name(m) + " has the wrong length");
            return check;
        }
    if (cert.omega_branch.size() != sets.omega.size())
        fail("Omega branch does not match the degenerate set");

    RationalVector sum = RationalVector::Zero(n);
    if (check_selection(cert.objective, "J"))
        sum += cert.objective.point;

    for (Multiplier m : all_multipliers)
        for (std::size_t i = 0; i < mv[m].size(); ++i) {
            const Rational& value = mv[m][i];
            const std::string label = multiplier_name(m) + "[" + std::to_string(i + 1) + "]";
            if (value < 0)
                fail(label + " = " + to_string(value) + " is negative");
            if (value == 0)
                continue;
            if (m == Multiplier::LambdaEll && !contains(sets.active, i))
                fail(label + " is nonzero on an inactive inequality");
            if ((m == Multiplier::LambdaG || m == Multiplier::MuG) && contains(sets.upsilon, i))
                fail(label + " is nonzero on Upsilon");
            if ((m == Multiplier::LambdaH || m == Multiplier::MuH) && contains(sets.theta, i))
                fail(label + " is nonzero on Theta");
            if (contains(sets.omega, i) && (m == Multiplier::MuG || m == Multiplier::MuH)) {
                if (cert.kind == StationarityKind::GS)
                    fail(label + " is nonzero on Omega under the GS rule");
                else if (mv[Multiplier::MuG][i] != 0 && mv[Multiplier::MuH][i] != 0 && m == Multiplier::MuG)
                    fail("mu_G[" + std::to_string(i + 1) + "] and mu_H[" + std::to_string(i + 1) +
                         "] are both nonzero on Omega");
            }
            auto term = std::find_if(cert.terms.begin(), cert.terms.end(),
                                     [&](const auto& t) { return t.first == std::make_pair(m, i); });
            if (term == cert.terms.end()) {
                fail(label + " is nonzero but has no selected subgradient");
                continue;
            }
            if (check_selection(term->second, multiplier_function(m, i)))
                sum += value * term->second.point;
        }
    for (const auto& t : cert.terms)
        if (t.first.second >= mv[t.first.first].size() || mv[t.first.first][t.first.second] == 0)
            fail("subgradient listed for an absent term " + multiplier_function(t.first.first, t.first.second));

    if (!is_zero(sum))
        fail("stationarity sum is " + to_string(sum) + ", not zero");
    return check;
}

} // namespace mpecv
