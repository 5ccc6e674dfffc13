#include "mpecv/mpec.hpp"

#include "mpecv/errors.hpp"

#include <cmath>

namespace mpecv {

namespace {

int sign_with_tolerance(const Number& x, double tol)
{
    if (x.exact())
        return x.sign();
    const double v = x.to_double();
    if (std::fabs(v) <= tol)
        return 0;
    return v > 0 ? 1 : -1;
}

std::string indexed(const char* family, std::size_t i) { return family + std::to_string(i + 1); }

} // namespace

void MPECProblem::validate() const
{
    if (dimension <= 0)
        throw ValidationError("dimension must be positive");
    if (g.size() != h.size())
        throw ValidationError("complementarity lists differ in length: |G| = " + std::to_string(g.size()) +
                              ", |H| = " + std::to_string(h.size()));
    auto check = [&](const Expr& e, const std::string& what) {
        if (required_dimension(e) > static_cast<std::size_t>(dimension))
            throw ValidationError(what + " uses a variable index outside dimension " + std::to_string(dimension));
    };
    check(objective, "J");
    for (std::size_t i = 0; i < inequalities.size(); ++i)
        check(inequalities[i], indexed("l", i));
    for (std::size_t i = 0; i < equalities.size(); ++i)
        check(equalities[i], indexed("h", i));
    for (std::size_t i = 0; i < g.size(); ++i) {
        check(g[i], indexed("G", i));
        check(h[i], indexed("H", i));
    }
    auto check_point = [&](const RationalVector& k, const std::string& what) {
        if (k.size() != dimension)
            throw ValidationError(what + " has dimension " + std::to_string(k.size()) + ", expected " +
                                  std::to_string(dimension));
    };
    for (const auto& m : manual) {
        function_expr(*this, m.function);
        check_point(m.point, "manual entry for " + m.function);
        if (m.vertices.empty())
            throw ValidationError("manual entry for " + m.function + " has no vertices");
        for (const auto& v : m.vertices)
            check_point(v, "manual vertex of " + m.function);
    }
    for (const auto& r : references) {
        function_expr(*this, r.function);
        check_point(r.point, "reference set for " + r.function);
        for (const auto& v : r.points)
            check_point(v, "reference point of " + r.function);
    }
    for (const auto& pt : points)
        check_point(pt.coords, "point '" + pt.label + "'");
}

Expr function_expr(const MPECProblem& p, const std::string& id)
{
    if (!id.empty() && id.front() == '-')
        return -function_expr(p, id.substr(1));
    if (id == "J")
        return p.objective;
    auto bad = [&]() { return ValidationError("unknown function id '" + id + "'"); };
    if (id.size() < 2)
        throw bad();
    std::size_t pos = 0;
    unsigned long index = 0;
    try {
        index = std::stoul(id.substr(1), &pos);
    } catch (const std::exception&) {
        throw bad();
    }
    if (pos != id.size() - 1 || index == 0)
        throw bad();
    const std::vector<Expr>* list = nullptr;
    switch (id.front()) {
    case 'l': list = &p.inequalities; break;
    case 'h': list = &p.equalities; break;
    case 'G': list = &p.g; break;
    case 'H': list = &p.h; break;
    default: throw bad();
    }
    if (index > list->size())
        throw bad();
    return (*list)[index - 1];
}

const ManualEntry* find_manual(const MPECProblem& p, const std::string& id, const RationalVector& k)
{
    for (const auto& m : p.manual)
        if (m.function == id && m.point.size() == k.size() && m.point == k)
            return &m;
    return nullptr;
}

Number function_value(const MPECProblem& p, const std::string& id, const RationalVector& k)
{
    if (const ManualEntry* m = find_manual(p, id, k); m && m->value)
        return Number(*m->value);
    try {
        return eval(function_expr(p, id), k);
    } catch (const DivisionByZero&) {
        throw DomainError(id + " is undefined at " + to_string(k) + "; supply a manual value");
    }
}

FeasibilityReport check_feasible(const MPECProblem& p, const RationalVector& k, double tol)
{
    if (k.size() != p.dimension)
        throw DimensionMismatch("point has dimension " + std::to_string(k.size()) + ", problem has " +
                                std::to_string(p.dimension));
    FeasibilityReport report;
    auto violate = [&](std::string what, const Number& residual) {
        report.feasible = false;
        report.violations.push_back({std::move(what), residual.str()});
    };
    for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
        Number v = function_value(p, indexed("l", i), k);
        if (sign_with_tolerance(v, tol) > 0)
            violate(indexed("l", i) + " <= 0", v);
    }
    for (std::size_t j = 0; j < p.equalities.size(); ++j) {
        Number v = function_value(p, indexed("h", j), k);
        if (sign_with_tolerance(v, tol) != 0)
            violate(indexed("h", j) + " = 0", v);
    }
    Number product(0);
    for (std::size_t i = 0; i < p.pairs(); ++i) {
        Number gv = function_value(p, indexed("G", i), k);
        Number hv = function_value(p, indexed("H", i), k);
        if (sign_with_tolerance(gv, tol) < 0)
            violate(indexed("G", i) + " >= 0", gv);
        if (sign_with_tolerance(hv, tol) < 0)
            violate(indexed("H", i) + " >= 0", hv);
        product = product + gv * hv;
    }
    if (sign_with_tolerance(product, tol) != 0)
        violate("G^T H = 0", product);
    return report;
}

IndexSets compute_index_sets(const MPECProblem& p, const RationalVector& k, double tol)
{
    const FeasibilityReport feas = check_feasible(p, k, tol);
    if (!feas.feasible) {
        std::string what = "point " + to_string(k) + " is infeasible:";
        for (const auto& v : feas.violations)
            what += " " + v.constraint + " (residual " + v.residual + ")";
        throw FeasibilityError(what);
    }
    IndexSets sets;
    for (std::size_t i = 0; i < p.inequalities.size(); ++i)
        if (sign_with_tolerance(function_value(p, indexed("l", i), k), tol) == 0)
            sets.active.push_back(i);
    for (std::size_t i = 0; i < p.pairs(); ++i) {
        const bool g_zero = sign_with_tolerance(function_value(p, indexed("G", i), k), tol) == 0;
        const bool h_zero = sign_with_tolerance(function_value(p, indexed("H", i), k), tol) == 0;
        if (g_zero && h_zero)
            sets.omega.push_back(i);
        else if (g_zero)
            sets.theta.push_back(i);
        else
            sets.upsilon.push_back(i);
    }
    return sets;
}

const Subdifferential& SubdifferentialProvider::get(const std::string& id)
{
    if (auto it = cache_.find(id); it != cache_.end())
        return it->second;
    const Expr e = function_expr(problem_, id);
    std::optional<VertexPolytope> manual;
    std::optional<Rational> value;
    if (const ManualEntry* m = find_manual(problem_, id, point_)) {
        manual = VertexPolytope(m->vertices);
        value = m->value;
    }
    return cache_.emplace(id, build_subdifferential(e, point_, manual, value, id)).first->second;
}

std::string pool_name(Pool pool)
{
    switch (pool) {
    case Pool::Ineq: return "ell";
    case Pool::Eq: return "h";
    case Pool::GTheta: return "G_Theta";
    case Pool::GOmega: return "G_Omega";
    case Pool::HUpsilon: return "H_Upsilon";
    case Pool::HOmega: return "H_Omega";
    case Pool::GHOmega: return "GH_Omega";
    }
    return "?";
}

std::vector<RationalVector> GeneratorFamilies::pool(Pool which) const
{
    std::vector<RationalVector> out;
    for (const auto& t : terms)
        if (t.pool == which)
            out.insert(out.end(), t.vertices.begin(), t.vertices.end());
    sort_unique(out);
    return out;
}

bool GeneratorFamilies::empty(Pool which) const
{
    for (const auto& t : terms)
        if (t.pool == which)
            return false;
    return true;
}

GeneratorFamilies assemble_families(const MPECProblem& p, const IndexSets& sets, SubdifferentialProvider& provider)
{
    GeneratorFamilies f;
    f.dimension = p.dimension;
    auto add = [&](const std::string& id, Pool pool) {
        f.terms.push_back({id, pool, provider.get(id).polytope.vertices()});
    };
    for (std::size_t i : sets.active)
        add(indexed("l", i), Pool::Ineq);
    for (std::size_t j = 0; j < p.equalities.size(); ++j) {
        add(indexed("h", j), Pool::Eq);
        add("-" + indexed("h", j), Pool::Eq);
    }
    for (std::size_t i : sets.theta) {
        add(indexed("G", i), Pool::GTheta);
        add("-" + indexed("G", i), Pool::GTheta);
    }
    for (std::size_t i : sets.upsilon) {
        add(indexed("H", i), Pool::HUpsilon);
        add("-" + indexed("H", i), Pool::HUpsilon);
    }
    for (std::size_t i : sets.omega) {
        add(indexed("G", i), Pool::GOmega);
        add(indexed("H", i), Pool::HOmega);
        add("-" + indexed("G", i), Pool::GHOmega);
        add("-" + indexed("H", i), Pool::GHOmega);
    }
    return f;
}

namespace {

constexpr Pool pi_pools[] = {Pool::Ineq, Pool::Eq, Pool::GTheta, Pool::HUpsilon, Pool::GHOmega};

std::vector<RationalVector> pi_normals(const GeneratorFamilies& f)
{
    std::vector<RationalVector> normals;
    for (Pool pool : pi_pools) {
        auto part = f.pool(pool);
        normals.insert(normals.end(), part.begin(), part.end());
    }
    sort_unique(normals);
    return normals;
}

} // namespace

HalfspaceCone build_pi(const GeneratorFamilies& f)
{
    bool any = false;
    for (Pool pool : pi_pools)
        any = any || !f.empty(pool);
    if (!any)
        throw AllPoolsEmpty("every pool entering the linearization cone is empty");
    return HalfspaceCone{f.dimension, pi_normals(f)};
}

PsiCone build_psi(const GeneratorFamilies& f)
{
    if (f.terms.empty())
        throw AllPoolsEmpty("every pool entering the MPEC linearization cone is empty");
    PsiCone psi{{f.dimension, pi_normals(f)}, {f.dimension, pi_normals(f)}};
    for (auto& v : f.pool(Pool::GOmega))
        psi.branch_g.normals.push_back(v);
    for (auto& v : f.pool(Pool::HOmega))
        psi.branch_h.normals.push_back(v);
    sort_unique(psi.branch_g.normals);
    sort_unique(psi.branch_h.normals);
    return psi;
}

GeneratedCone build_delta(const GeneratorFamilies& f) { return {f.dimension, pi_normals(f)}; }

GeneratedCone build_lambda(const GeneratorFamilies& f)
{
    GeneratedCone c = build_delta(f);
    for (auto& v : f.pool(Pool::GOmega))
        c.generators.push_back(v);
    sort_unique(c.generators);
    return c;
}

} // namespace mpecv
