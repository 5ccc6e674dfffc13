#include "mpecv/expr.hpp"

#include "mpecv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace mpecv {

// ---------------------------------------------------------------------------
// Number

double Number::to_double() const
{
    if (exact())
        return rational().convert_to<double>();
    return std::get<double>(value_);
}

Rational Number::to_rational() const
{
    if (exact())
        return rational();
    return mpecv::to_rational(std::get<double>(value_));
}

int Number::sign() const
{
    if (exact())
        return rational().sign();
    double x = std::get<double>(value_);
    return (x > 0) - (x < 0);
}

Number operator+(const Number& a, const Number& b)
{
    if (a.exact() && b.exact())
        return Number(Rational(a.rational() + b.rational()));
    return Number(a.to_double() + b.to_double());
}

Number operator-(const Number& a, const Number& b)
{
    if (a.exact() && b.exact())
        return Number(Rational(a.rational() - b.rational()));
    return Number(a.to_double() - b.to_double());
}

Number operator*(const Number& a, const Number& b)
{
    if (a.exact() && b.exact())
        return Number(Rational(a.rational() * b.rational()));
    return Number(a.to_double() * b.to_double());
}

Number operator/(const Number& a, const Number& b)
{
    if (b.sign() == 0)
        throw DivisionByZero("division by zero");
    if (a.exact() && b.exact())
        return Number(Rational(a.rational() / b.rational()));
    return Number(a.to_double() / b.to_double());
}

Number operator-(const Number& a)
{
    if (a.exact())
        return Number(Rational(-a.rational()));
    return Number(-a.to_double());
}

std::string Number::str() const
{
    if (exact())
        return mpecv::to_string(rational());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
    return buf;
}

Number abs(const Number& x) { return x.sign() < 0 ? -x : x; }

Number exp(const Number& x)
{
    if (x.exact() && x.sign() == 0)
        return Number(Rational(1));
    return Number(std::exp(x.to_double()));
}

Number pow(const Number& x, int exponent)
{
    Number result(Rational(1));
    for (int i = 0; i < exponent; ++i)
        result = result * x;
    return result;
}

int compare(const Number& a, const Number& b)
{
    if (a.exact() && b.exact())
        return a.rational().compare(b.rational()) < 0 ? -1 : (a.rational() == b.rational() ? 0 : 1);
    double x = a.to_double(), y = b.to_double();
    return (x > y) - (x < y);
}

// ---------------------------------------------------------------------------
// Expr

struct Expr::Node {
    ExprKind kind;
    Rational value;
    std::size_t index = 0;
    int exponent = 0;
    std::vector<Expr> children;
};

Expr Expr::constant(Rational value)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Const;
    n->value = std::move(value);
    return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Var;
    n->index = index;
    return Expr(std::move(n));
}

Expr Expr::nary(ExprKind kind, std::vector<Expr> children)
{
    if (kind != ExprKind::Add && kind != ExprKind::Mul && kind != ExprKind::Max && kind != ExprKind::Min)
        throw std::invalid_argument("nary: kind takes a child list");
    if (children.size() < 2)
        throw ValidationError("add/mul/max/min need at least two children");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = std::move(children);
    return Expr(std::move(n));
}

Expr Expr::unary(ExprKind kind, Expr child)
{
    if (kind != ExprKind::Neg && kind != ExprKind::Abs && kind != ExprKind::Exp)
        throw std::invalid_argument("unary: kind is not unary");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children.push_back(std::move(child));
    return Expr(std::move(n));
}

Expr Expr::quotient(Expr numerator, Expr denominator)
{
    if (denominator.kind() == ExprKind::Const && denominator.value() == 0)
        throw ValidationError("division by the constant 0");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Div;
    n->children = {std::move(numerator), std::move(denominator)};
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent)
{
    if (exponent < 1)
        throw ValidationError("pow exponent must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Pow;
    n->exponent = exponent;
    n->children.push_back(std::move(base));
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

Expr constant(const Rational& value) { return Expr::constant(value); }
Expr constant(long value) { return Expr::constant(Rational(value)); }
Expr var(std::size_t index) { return Expr::variable(index); }
Expr operator+(const Expr& a, const Expr& b) { return Expr::nary(ExprKind::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::nary(ExprKind::Add, {a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::nary(ExprKind::Mul, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
Expr operator-(const Expr& a) { return Expr::unary(ExprKind::Neg, a); }
Expr abs(const Expr& a) { return Expr::unary(ExprKind::Abs, a); }
Expr exp(const Expr& a) { return Expr::unary(ExprKind::Exp, a); }
Expr pow(const Expr& a, int exponent) { return Expr::power(a, exponent); }
Expr max(std::vector<Expr> children) { return Expr::nary(ExprKind::Max, std::move(children)); }
Expr min(std::vector<Expr> children) { return Expr::nary(ExprKind::Min, std::move(children)); }
Expr sum(std::vector<Expr> children) { return Expr::nary(ExprKind::Add, std::move(children)); }
Expr product(std::vector<Expr> children) { return Expr::nary(ExprKind::Mul, std::move(children)); }

std::size_t required_dimension(const Expr& e)
{
    if (e.kind() == ExprKind::Var)
        return e.index() + 1;
    std::size_t n = 0;
    for (const auto& c : e.children())
        n = std::max(n, required_dimension(c));
    return n;
}

bool contains_exp(const Expr& e)
{
    if (e.kind() == ExprKind::Exp)
        return true;
    return std::any_of(e.children().begin(), e.children().end(), [](const Expr& c) { return contains_exp(c); });
}

bool is_constant(const Expr& e)
{
    if (e.kind() == ExprKind::Var)
        return false;
    return std::all_of(e.children().begin(), e.children().end(), [](const Expr& c) { return is_constant(c); });
}

std::string to_string(const Expr& e)
{
    auto join = [&](const char* sep) {
        std::string out;
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            if (i > 0)
                out += sep;
            out += to_string(e.children()[i]);
        }
        return out;
    };
    switch (e.kind()) {
    case ExprKind::Const: return to_string(e.value());
    case ExprKind::Var: return "k" + std::to_string(e.index() + 1);
    case ExprKind::Add: return "(" + join(" + ") + ")";
    case ExprKind::Mul: return "(" + join("*") + ")";
    case ExprKind::Neg: return "-" + to_string(e.child());
    case ExprKind::Div: return "(" + to_string(e.child(0)) + "/" + to_string(e.child(1)) + ")";
    case ExprKind::Abs: return "|" + to_string(e.child()) + "|";
    case ExprKind::Max: return "max(" + join(", ") + ")";
    case ExprKind::Min: return "min(" + join(", ") + ")";
    case ExprKind::Pow: return to_string(e.child()) + "^" + std::to_string(e.exponent());
    case ExprKind::Exp: return "exp(" + to_string(e.child()) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double ops_abs(double x) { return std::fabs(x); }
double ops_exp(double x) { return std::exp(x); }
double ops_pow(double x, int p) { return std::pow(x, p); }
int ops_compare(double a, double b) { return (a > b) - (a < b); }
double ops_div(double a, double b)
{
    if (b == 0.0)
        throw DivisionByZero("division by zero");
    return a / b;
}
template <typename T>
T ops_from(const Rational& q);
template <>
double ops_from<double>(const Rational& q) { return q.convert_to<double>(); }

Number ops_abs(const Number& x) { return abs(x); }
Number ops_exp(const Number& x) { return exp(x); }
Number ops_pow(const Number& x, int p) { return pow(x, p); }
int ops_compare(const Number& a, const Number& b) { return compare(a, b); }
Number ops_div(const Number& a, const Number& b) { return a / b; }
template <>
Number ops_from<Number>(const Rational& q) { return Number(q); }

template <typename T, typename Point>
T eval_impl(const Expr& e, const Point& k)
{
    switch (e.kind()) {
    case ExprKind::Const: return ops_from<T>(e.value());
    case ExprKind::Var:
        if (static_cast<Index>(e.index()) >= k.size())
            throw DimensionMismatch("variable k" + std::to_string(e.index() + 1) + " outside dimension " +
                                    std::to_string(k.size()));
        return T(k[static_cast<Index>(e.index())]);
    case ExprKind::Add: {
        T acc = eval_impl<T>(e.child(0), k);
        for (std::size_t i = 1; i < e.children().size(); ++i)
            acc = acc + eval_impl<T>(e.children()[i], k);
        return acc;
    }
    case ExprKind::Mul: {
        T acc = eval_impl<T>(e.child(0), k);
        for (std::size_t i = 1; i < e.children().size(); ++i)
            acc = acc * eval_impl<T>(e.children()[i], k);
        return acc;
    }
    case ExprKind::Neg: return -eval_impl<T>(e.child(), k);
    case ExprKind::Div: return ops_div(eval_impl<T>(e.child(0), k), eval_impl<T>(e.child(1), k));
    case ExprKind::Abs: return ops_abs(eval_impl<T>(e.child(), k));
    case ExprKind::Max:
    case ExprKind::Min: {
        T best = eval_impl<T>(e.child(0), k);
        int want = e.kind() == ExprKind::Max ? 1 : -1;
        for (std::size_t i = 1; i < e.children().size(); ++i) {
            T v = eval_impl<T>(e.children()[i], k);
            if (ops_compare(v, best) == want)
                best = v;
        }
        return best;
    }
    case ExprKind::Pow: return ops_pow(eval_impl<T>(e.child(), k), e.exponent());
    case ExprKind::Exp: return ops_exp(eval_impl<T>(e.child(), k));
    }
    throw std::logic_error("unknown expression kind");
}

} // namespace

Number eval(const Expr& e, const RationalVector& k) { return eval_impl<Number>(e, k); }

double eval(const Expr& e, const Vector<double>& k) { return eval_impl<double>(e, k); }

// ---------------------------------------------------------------------------
// Directional derivative

DirectionalDerivative directional_derivative(const Expr& e, const RationalVector& k, const RationalVector& d,
                                             const LimitConfig& cfg, const std::optional<Number>& base_value)
{
    if (k.size() != d.size())
        throw DimensionMismatch("point and direction dimensions differ");
    if (is_zero(d))
        return {0.0, true};

    auto evaluate = [&](const RationalVector& x) {
        try {
            return eval(e, x);
        } catch (const DivisionByZero& err) {
            throw DomainError(std::string("probe point outside the domain: ") + err.what());
        }
    };
    const Number f0 = base_value ? *base_value : evaluate(k);

    auto close = [&](double a, double b) {
        return std::fabs(a - b) <= cfg.tolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
    };
    const auto agree = static_cast<std::size_t>(std::max(cfg.agree, 2));

    // Richardson extrapolation removes the O(h) term of the difference quotient;
    // piecewise-linear quotients are already constant and stay unchanged.
    // Quotients are produced lazily: the first window of `agree` consecutive
    // agreeing extrapolants decides.
    std::vector<double> extrapolated;
    Rational h = cfg.initial_step;
    Number previous = (evaluate(RationalVector(k + h * d)) - f0) / Number(h);
    for (int j = 1; j < cfg.steps; ++j) {
        h /= 2;
        const Number q = (evaluate(RationalVector(k + h * d)) - f0) / Number(h);
        extrapolated.push_back((Number(2) * q - previous).to_double());
        previous = q;
        if (extrapolated.size() < agree)
            continue;
        const std::size_t first = extrapolated.size() - agree;
        bool ok = std::isfinite(extrapolated[first]);
        for (std::size_t i = first; ok && i + 1 < extrapolated.size(); ++i)
            ok = std::isfinite(extrapolated[i + 1]) && close(extrapolated[i], extrapolated[i + 1]);
        if (ok)
            return {extrapolated.back(), true};
    }
    return {extrapolated.empty() ? 0.0 : extrapolated.back(), false};
}

// ---------------------------------------------------------------------------
// Gradient of smooth trees

namespace {

struct Smooth {
    Number value;
    std::vector<Number> grad;
};

std::vector<Number> scaled(const std::vector<Number>& g, const Number& c)
{
    std::vector<Number> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = g[i] * c;
    return out;
}

std::vector<Number> added(const std::vector<Number>& a, const std::vector<Number>& b)
{
    std::vector<Number> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

std::optional<Smooth> smooth_at(const Expr& e, const RationalVector& k)
{
    const std::size_t n = static_cast<std::size_t>(k.size());
    switch (e.kind()) {
    case ExprKind::Const: return Smooth{Number(e.value()), std::vector<Number>(n, Number(0))};
    case ExprKind::Var: {
        if (e.index() >= n)
            throw DimensionMismatch("variable outside dimension");
        std::vector<Number> g(n, Number(0));
        g[e.index()] = Number(1);
        return Smooth{Number(k[static_cast<Index>(e.index())]), g};
    }
    case ExprKind::Add: {
        std::optional<Smooth> acc;
        for (const auto& c : e.children()) {
            auto s = smooth_at(c, k);
            if (!s)
                return std::nullopt;
            acc = acc ? Smooth{acc->value + s->value, added(acc->grad, s->grad)} : *s;
        }
        return acc;
    }
    case ExprKind::Mul: {
        std::optional<Smooth> acc;
        for (const auto& c : e.children()) {
            auto s = smooth_at(c, k);
            if (!s)
                return std::nullopt;
            if (!acc)
                acc = *s;
            else
                acc = Smooth{acc->value * s->value, added(scaled(acc->grad, s->value), scaled(s->grad, acc->value))};
        }
        return acc;
    }
    case ExprKind::Neg: {
        auto s = smooth_at(e.child(), k);
        if (!s)
            return std::nullopt;
        return Smooth{-s->value, scaled(s->grad, Number(-1))};
    }
    case ExprKind::Div: {
        auto num = smooth_at(e.child(0), k);
        auto den = smooth_at(e.child(1), k);
        if (!num || !den)
            return std::nullopt;
        if (den->value.sign() == 0)
            throw DomainError("denominator vanishes at the point");
        Number inv = Number(1) / den->value;
        Number q = num->value * inv;
        // (n/d)' = n'/d − (n/d²) d'
        return Smooth{q, added(scaled(num->grad, inv), scaled(den->grad, -(q * inv)))};
    }
    case ExprKind::Abs: {
        auto s = smooth_at(e.child(), k);
        if (!s || s->value.sign() == 0)
            return std::nullopt;
        return Smooth{abs(s->value), scaled(s->grad, Number(s->value.sign()))};
    }
    case ExprKind::Max:
    case ExprKind::Min: {
        const int want = e.kind() == ExprKind::Max ? 1 : -1;
        std::vector<Number> values;
        for (const auto& c : e.children())
            values.push_back(eval(c, k));
        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (compare(values[i], values[best]) == want)
                best = i;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (i != best && compare(values[i], values[best]) == 0)
                return std::nullopt;
        return smooth_at(e.children()[best], k);
    }
    case ExprKind::Pow: {
        auto s = smooth_at(e.child(), k);
        if (!s)
            return std::nullopt;
        int p = e.exponent();
        return Smooth{pow(s->value, p), scaled(s->grad, Number(p) * pow(s->value, p - 1))};
    }
    case ExprKind::Exp: {
        auto s = smooth_at(e.child(), k);
        if (!s)
            return std::nullopt;
        Number v = exp(s->value);
        return Smooth{v, scaled(s->grad, v)};
    }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::vector<Number>> gradient_if_smooth(const Expr& e, const RationalVector& k)
{
    try {
        auto s = smooth_at(e, k);
        if (!s)
            return std::nullopt;
        return s->grad;
    } catch (const DivisionByZero& err) {
        throw DomainError(err.what());
    }
}

} // namespace mpecv
