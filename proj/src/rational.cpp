#include "mpecv/rational.hpp"

#include "mpecv/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace mpecv {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Rational parse_integer(std::string_view s)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw ValidationError("malformed rational '" + std::string(s) + "'");
    Rational value{Integer(std::string(s))};
    return negative ? Rational(-value) : value;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    text = trim(text);
    if (text.empty())
        throw ValidationError("empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_integer(trim(text.substr(0, slash)));
        Rational den = parse_integer(trim(text.substr(slash + 1)));
        if (den == 0)
            throw ValidationError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (!frac.empty() && !all_digits(frac))
            throw ValidationError("malformed decimal '" + std::string(text) + "'");
        bool negative = !whole.empty() && whole.front() == '-';
        std::string_view digits = whole;
        if (!digits.empty() && (digits.front() == '-' || digits.front() == '+'))
            digits.remove_prefix(1);
        std::string all = std::string(digits.empty() ? "0" : digits) + std::string(frac);
        if (!all_digits(all))
            throw ValidationError("malformed decimal '" + std::string(text) + "'");
        Rational value{Integer(all)};
        Rational scale{Integer(boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size())))};
        value /= scale;
        return negative ? Rational(-value) : value;
    }
    return parse_integer(text);
}

std::string to_string(const Rational& q)
{
    if (denominator(q) == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const RationalVector& v)
{
    std::string out = "(";
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

RationalVector parse_point(std::string_view csv)
{
    std::vector<Rational> entries;
    csv = trim(csv);
    if (!csv.empty() && csv.front() == '(' && csv.back() == ')') {
        csv.remove_prefix(1);
        csv.remove_suffix(1);
    }
    while (true) {
        auto comma = csv.find(',');
        entries.push_back(parse_rational(csv.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        csv.remove_prefix(comma + 1);
    }
    RationalVector v(static_cast<Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i)
        v[static_cast<Index>(i)] = entries[i];
    return v;
}

RationalVector make_vector(std::initializer_list<Rational> entries)
{
    RationalVector v(static_cast<Index>(entries.size()));
    Index i = 0;
    for (const auto& e : entries)
        v[i++] = e;
    return v;
}

Rational to_rational(double x)
{
    if (!std::isfinite(x))
        throw DomainError("non-finite value cannot be made exact");
    return Rational(x);
}

RationalVector to_rational(const Vector<double>& v)
{
    RationalVector out(v.size());
    for (Index i = 0; i < v.size(); ++i)
        out[i] = to_rational(v[i]);
    return out;
}

Vector<double> to_double(const RationalVector& v)
{
    Vector<double> out(v.size());
    for (Index i = 0; i < v.size(); ++i)
        out[i] = v[i].convert_to<double>();
    return out;
}

bool lex_less(const RationalVector& a, const RationalVector& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    for (Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            return true;
        if (b[i] < a[i])
            return false;
    }
    return false;
}

void sort_unique(std::vector<RationalVector>& points)
{
    std::sort(points.begin(), points.end(), lex_less);
    points.erase(std::unique(points.begin(), points.end(),
                             [](const RationalVector& a, const RationalVector& b) { return a == b; }),
                 points.end());
}

RationalVector primitive(const RationalVector& v)
{
    using mpz_int = Integer;
    mpz_int lcm_den = 1;
    for (Index i = 0; i < v.size(); ++i)
        lcm_den = boost::multiprecision::lcm(lcm_den, denominator(v[i]));
    mpz_int g = 0;
    for (Index i = 0; i < v.size(); ++i) {
        mpz_int scaled = numerator(v[i]) * (lcm_den / denominator(v[i]));
        g = boost::multiprecision::gcd(g, scaled);
    }
    if (g == 0)
        return v;
    RationalVector out(v.size());
    for (Index i = 0; i < v.size(); ++i)
        out[i] = v[i] * Rational(lcm_den) / Rational(g);
    return out;
}

bool is_zero(const RationalVector& v)
{
    for (Index i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            return false;
    return true;
}

} // namespace mpecv
