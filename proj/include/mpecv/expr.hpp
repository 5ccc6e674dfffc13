#pragma once

#include "mpecv/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace mpecv {

/// A scalar that is exact while it can be and floating once it has to be.
class Number {
public:
    Number() : value_(Rational(0)) {}
    Number(Rational q) : value_(std::move(q)) {}
    Number(double x) : value_(x) {}
    Number(int x) : value_(Rational(x)) {}

    bool exact() const { return std::holds_alternative<Rational>(value_); }
    /// Precondition: exact().
    const Rational& rational() const { return std::get<Rational>(value_); }
    double to_double() const;
    /// Exact value, or the exact dyadic value of the floating result.
    Rational to_rational() const;
    int sign() const;

    friend Number operator+(const Number& a, const Number& b);
    friend Number operator-(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    /// Throws DivisionByZero.
    friend Number operator/(const Number& a, const Number& b);
    friend Number operator-(const Number& a);

    std::string str() const;

private:
    std::variant<Rational, double> value_;
};

Number abs(const Number& x);
Number exp(const Number& x);
Number pow(const Number& x, int exponent);
/// Exact comparison when both sides are exact, plain double comparison otherwise.
int compare(const Number& a, const Number& b);

enum class ExprKind { Const, Var, Add, Mul, Neg, Div, Abs, Max, Min, Pow, Exp };

/// Immutable expression tree for a scalar function of n variables.
class Expr {
public:
    static Expr constant(Rational value);
    static Expr variable(std::size_t index);
    static Expr nary(ExprKind kind, std::vector<Expr> children);
    static Expr unary(ExprKind kind, Expr child);
    static Expr quotient(Expr numerator, Expr denominator);
    static Expr power(Expr base, int exponent);

    ExprKind kind() const;
    /// Const nodes only.
    const Rational& value() const;
    /// Var nodes only.
    std::size_t index() const;
    /// Pow nodes only.
    int exponent() const;
    const std::vector<Expr>& children() const;
    const Expr& child(std::size_t i = 0) const { return children().at(i); }

    bool same_node(const Expr& other) const { return node_ == other.node_; }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expr constant(const Rational& value);
Expr constant(long value);
Expr var(std::size_t index);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr abs(const Expr& a);
Expr exp(const Expr& a);
Expr pow(const Expr& a, int exponent);
Expr max(std::vector<Expr> children);
Expr min(std::vector<Expr> children);
Expr sum(std::vector<Expr> children);
Expr product(std::vector<Expr> children);

/// One more than the largest variable index (0 for constant trees).
std::size_t required_dimension(const Expr& e);
bool contains_exp(const Expr& e);
/// True when the tree has no variable leaves.
bool is_constant(const Expr& e);
std::string to_string(const Expr& e);

/// Exact whenever the tree avoids exp (exp(0) stays exact).
/// Throws DivisionByZero, DimensionMismatch.
Number eval(const Expr& e, const RationalVector& k);
double eval(const Expr& e, const Vector<double>& k);

struct LimitConfig {
    Rational initial_step = Rational(1, 16);
    int steps = 24;
    int agree = 3;
    double tolerance = 1e-8;
};

struct DirectionalDerivative {
    double estimate = 0.0;
    bool converged = false;
};

/// Estimates lim_{h↓0} (f(k + h d) − f(k)) / h along h_j = h₀·2^{−j}.
/// `base_value` replaces f(k) for functions whose formula is undefined at k.
/// Throws DomainError when a probe point is inevaluable.
DirectionalDerivative directional_derivative(const Expr& e, const RationalVector& k, const RationalVector& d,
                                             const LimitConfig& cfg = {},
                                             const std::optional<Number>& base_value = std::nullopt);

/// Exact gradient when no abs/max/min node is nonsmooth at k.
std::optional<std::vector<Number>> gradient_if_smooth(const Expr& e, const RationalVector& k);

} // namespace mpecv
