#include "mpecv/subdifferential.hpp"

#include "mpecv/errors.hpp"
#include "mpecv/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace mpecv {

namespace {

/// Local first-order data of a subtree at the base point: either a gradient
/// (smooth) or a vertex set.
struct Local {
    Number value;
    std::optional<std::vector<Number>> grad;
    std::vector<RationalVector> set;
};

class RuleEngine {
public:
    RuleEngine(const RationalVector& k, std::string function_id) : k_(k), n_(k.size()), id_(std::move(function_id)) {}

    Local derive(const Expr& e);
    bool exact() const { return exact_; }

    RationalVector to_vector(const std::vector<Number>& g)
    {
        RationalVector v(n_);
        for (Index i = 0; i < n_; ++i) {
            const Number& x = g[static_cast<std::size_t>(i)];
            exact_ = exact_ && x.exact();
            v[i] = x.to_rational();
        }
        return v;
    }

    std::vector<RationalVector> as_set(const Local& l)
    {
        if (l.grad)
            return {to_vector(*l.grad)};
        return l.set;
    }

    Rational scalar(const Number& x)
    {
        exact_ = exact_ && x.exact();
        return x.to_rational();
    }

private:
    [[noreturn]] void fail(const std::string& reason) const { throw RuleFailure(id_, reason); }

    std::vector<RationalVector> reduced(std::vector<RationalVector> pts) const
    {
        if (n_ <= 3)
            return reduce_to_vertices(std::move(pts));
        sort_unique(pts);
        return pts;
    }

    std::vector<Number> zeros() const { return std::vector<Number>(static_cast<std::size_t>(n_), Number(0)); }

    static std::vector<Number> axpy(const std::vector<Number>& x, const Number& a, const std::vector<Number>& y)
    {
        std::vector<Number> out(y);
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = out[i] + a * x[i];
        return out;
    }

    std::vector<RationalVector> scale_shift(const std::vector<RationalVector>& set, const Rational& c,
                                            const RationalVector& shift) const
    {
        std::vector<RationalVector> out;
        for (const auto& v : set)
            out.push_back(c * v + shift);
        return reduced(std::move(out));
    }

    Local product_of(const std::vector<Local>& parts);

    const RationalVector& k_;
    Index n_;
    std::string id_;
    bool exact_ = true;
};

Local RuleEngine::product_of(const std::vector<Local>& parts)
{
    Local acc{Number(1), zeros(), {}};
    for (const auto& p : parts)
        acc = Local{acc.value * p.value, axpy(*acc.grad, p.value, axpy(*p.grad, acc.value, zeros())), {}};
    return acc;
}

Local RuleEngine::derive(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Const: return {Number(e.value()), zeros(), {}};
    case ExprKind::Var: {
        if (static_cast<Index>(e.index()) >= n_)
            throw DimensionMismatch("variable outside dimension");
        auto g = zeros();
        g[e.index()] = Number(1);
        return {Number(k_[static_cast<Index>(e.index())]), g, {}};
    }
    case ExprKind::Add: {
        std::vector<Local> parts;
        bool smooth = true;
        for (const auto& c : e.children()) {
            parts.push_back(derive(c));
            smooth = smooth && parts.back().grad.has_value();
        }
        Number value = parts.front().value;
        for (std::size_t i = 1; i < parts.size(); ++i)
            value = value + parts[i].value;
        if (smooth) {
            auto g = zeros();
            for (const auto& p : parts)
                g = axpy(*p.grad, Number(1), g);
            return {value, g, {}};
        }
        VertexPolytope acc(as_set(parts.front()));
        for (std::size_t i = 1; i < parts.size(); ++i)
            acc = minkowski_sum(acc, VertexPolytope(as_set(parts[i])));
        return {value, std::nullopt, acc.vertices()};
    }
    case ExprKind::Mul: {
        std::vector<Local> smooth_parts;
        std::optional<Local> rough;
        for (const auto& c : e.children()) {
            Local l = derive(c);
            if (l.grad)
                smooth_parts.push_back(std::move(l));
            else if (rough)
                fail("product of two nonsmooth factors");
            else
                rough = std::move(l);
        }
        Local p = product_of(smooth_parts);
        if (!rough)
            return p;
        if (p.value.sign() < 0)
            fail("nonsmooth factor multiplied by a negative value");
        // (P g)′(k, d) = P(k) g′(k, d) + g(k) ⟨∇P(k), d⟩
        RationalVector shift = scalar(rough->value) * to_vector(*p.grad);
        return {p.value * rough->value, std::nullopt, scale_shift(rough->set, scalar(p.value), shift)};
    }
    case ExprKind::Neg: {
        Local l = derive(e.child());
        if (!l.grad)
            fail("negation of a nonsmooth term");
        return {-l.value, axpy(*l.grad, Number(-1), zeros()), {}};
    }
    case ExprKind::Div: {
        Local num = derive(e.child(0));
        Local den = derive(e.child(1));
        if (!den.grad)
            fail("nonsmooth denominator");
        // The formula does not define the function here; only a hand-supplied set can.
        if (den.value.sign() == 0)
            fail("denominator vanishes at the point");
        const Number inv = Number(1) / den.value;
        const Number q = num.value * inv;
        if (num.grad)
            return {q, axpy(*den.grad, -(q * inv), axpy(*num.grad, inv, zeros())), {}};
        if (den.value.sign() < 0)
            fail("nonsmooth numerator over a negative denominator");
        RationalVector shift = scalar(-(q * inv)) * to_vector(*den.grad);
        return {q, std::nullopt, scale_shift(num.set, scalar(inv), shift)};
    }
    case ExprKind::Abs: {
        Local u = derive(e.child());
        const int s = u.value.sign();
        if (u.grad) {
            if (s != 0)
                return {abs(u.value), axpy(*u.grad, Number(s), zeros()), {}};
            RationalVector g = to_vector(*u.grad);
            return {abs(u.value), std::nullopt, reduced({g, RationalVector(-g)})};
        }
        if (s > 0)
            return {u.value, std::nullopt, u.set};
        fail(s == 0 ? "abs of a nonsmooth argument that vanishes" : "abs of a negative nonsmooth argument");
    }
    case ExprKind::Max:
    case ExprKind::Min: {
        const bool is_max = e.kind() == ExprKind::Max;
        std::vector<Local> parts;
        for (const auto& c : e.children())
            parts.push_back(derive(c));
        std::size_t best = 0;
        for (std::size_t i = 1; i < parts.size(); ++i)
            if (compare(parts[i].value, parts[best].value) == (is_max ? 1 : -1))
                best = i;
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (compare(parts[i].value, parts[best].value) == 0)
                active.push_back(i);
        if (active.size() == 1)
            return parts[best];
        for (std::size_t i : active)
            if (!parts[i].grad)
                fail(std::string(is_max ? "max" : "min") + " with several active pieces, one of them nonsmooth");
        std::vector<RationalVector> grads;
        for (std::size_t i : active)
            grads.push_back(to_vector(*parts[i].grad));
        if (is_max)
            return {parts[best].value, std::nullopt, reduced(std::move(grads))};
        if (std::all_of(grads.begin(), grads.end(), [&](const RationalVector& g) { return g == grads.front(); }))
            return {parts[best].value, *parts[best].grad, {}};
        fail("min with several active pieces of different slopes is not tangentially convex");
    }
    case ExprKind::Pow: {
        Local u = derive(e.child());
        const int p = e.exponent();
        const Number value = pow(u.value, p);
        const Number coeff = Number(p) * pow(u.value, p - 1);
        if (u.grad)
            return {value, axpy(*u.grad, coeff, zeros()), {}};
        if (coeff.sign() < 0)
            fail("odd power of a negative nonsmooth base");
        return {value, std::nullopt, scale_shift(u.set, scalar(coeff), RationalVector::Zero(n_))};
    }
    case ExprKind::Exp: {
        Local u = derive(e.child());
        const Number value = exp(u.value);
        if (u.grad)
            return {value, axpy(*u.grad, value, zeros()), {}};
        return {value, std::nullopt, scale_shift(u.set, scalar(value), RationalVector::Zero(n_))};
    }
    }
    throw std::logic_error("unknown expression kind");
}

} // namespace

Subdifferential build_subdifferential(const Expr& e, const RationalVector& k,
                                      const std::optional<VertexPolytope>& manual_override,
                                      const std::optional<Rational>& manual_value, const std::string& function_id)
{
    if (manual_override) {
        if (manual_override->dimension() != k.size())
            throw DimensionMismatch("manual subdifferential has the wrong dimension");
        std::optional<Number> value;
        if (manual_value)
            value = Number(*manual_value);
        return Subdifferential{k, *manual_override, Provenance::Manual, true, value};
    }
    if (required_dimension(e) > static_cast<std::size_t>(k.size()))
        throw DimensionMismatch("expression uses more variables than the point has");

    RuleEngine engine(k, function_id);
    Local local;
    try {
        local = engine.derive(e);
    } catch (const DivisionByZero& err) {
        throw DomainError(std::string(err.what()) + " while deriving " +
                          (function_id.empty() ? to_string(e) : function_id));
    }
    std::vector<RationalVector> set = engine.as_set(local);
    return Subdifferential{k, VertexPolytope(std::move(set)), Provenance::RuleDerived, engine.exact(), std::nullopt};
}

SupportReport support_consistency(const Subdifferential& s, const Expr& e, const DirectionSampleConfig& cfg)
{
    SupportReport report;
    const auto dirs = sample_directions(s.base_point.size(), cfg.planar_count, cfg.random_count, cfg.seed);
    for (const auto& d : dirs) {
        if (cfg.exclude_axes && (d.array().abs() < 1e-12).any()) {
            ++report.skipped_axes;
            continue;
        }
        const RationalVector dr = to_rational(d);
        DirectionalDerivative dd;
        try {
            dd = directional_derivative(e, s.base_point, dr, cfg.limit, s.base_value);
        } catch (const DomainError&) {
            ++report.inevaluable;
            continue;
        }
        if (!dd.converged) {
            ++report.divergent;
            continue;
        }
        ++report.checked;
        const double deviation = std::fabs(s.polytope.support(dr).convert_to<double>() - dd.estimate);
        if (!report.worst_direction || deviation > report.max_deviation) {
            report.max_deviation = deviation;
            report.worst_direction = d;
        }
    }
    return report;
}

TangentialConvexityVerdict tangential_convexity_probe(const Expr& e, const RationalVector& k,
                                                      const ConvexityProbeConfig& cfg,
                                                      const std::optional<Number>& base_value)
{
    const Index n = k.size();
    TangentialConvexityVerdict verdict;

    auto derivative = [&](const RationalVector& d) -> std::optional<double> {
        try {
            auto dd = directional_derivative(e, k, d, cfg.limit, base_value);
            if (!dd.converged)
                return std::nullopt;
            return dd.estimate;
        } catch (const DomainError&) {
            return std::nullopt;
        }
    };

    auto test = [&](const RationalVector& d1, const RationalVector& d2, const Rational& lambda) {
        auto f1 = derivative(d1);
        auto f2 = derivative(d2);
        auto fm = derivative(RationalVector(lambda * d1 + (Rational(1) - lambda) * d2));
        if (!f1 || !f2 || !fm) {
            ++verdict.excluded;
            return false;
        }
        ++verdict.samples;
        const double l = lambda.convert_to<double>();
        const double bound = l * *f1 + (1.0 - l) * *f2;
        if (*fm > bound + cfg.tolerance) {
            verdict.refuted = true;
            verdict.witness = TangentialConvexityWitness{d1, d2, lambda, *fm, bound};
            return true;
        }
        return false;
    };

    for (Index i = 0; i < n && verdict.samples < cfg.samples; ++i) {
        RationalVector d = RationalVector::Zero(n);
        d[i] = 1;
        if (test(d, RationalVector(-d), Rational(1, 2)))
            return verdict;
    }
    Sampler sampler(cfg.seed);
    std::size_t attempts = 0;
    while (verdict.samples < cfg.samples && attempts++ < 2 * cfg.samples + 16) {
        RationalVector d1 = sampler.cube_direction(n);
        RationalVector d2 = sampler.cube_direction(n);
        Rational lambda = sampler.open_unit(16);
        if (test(d1, d2, lambda))
            return verdict;
    }
    return verdict;
}

} // namespace mpecv
