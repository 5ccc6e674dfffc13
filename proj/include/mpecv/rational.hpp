#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace mpecv {

// Expression templates are disabled so that Rational behaves as a plain value
// type inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RationalVector = Vector<Rational>;
using RationalMatrix = Matrix<Rational>;
using Index = Eigen::Index;

/// Parses "p/q", "p" or a plain decimal such as "-1.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);
/// "(a, b, ...)" with canonical entries.
std::string to_string(const RationalVector& v);

/// Parses a comma separated list of rationals ("0,1/2,-3").
RationalVector parse_point(std::string_view csv);

RationalVector make_vector(std::initializer_list<Rational> entries);

/// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double x);
RationalVector to_rational(const Vector<double>& v);
Vector<double> to_double(const RationalVector& v);

/// Lexicographic order, used for canonical sorting and deduplication.
bool lex_less(const RationalVector& a, const RationalVector& b);

/// Sorts lexicographically and removes exact duplicates.
void sort_unique(std::vector<RationalVector>& points);

/// Positive rescaling of a nonzero vector to a primitive integer vector.
RationalVector primitive(const RationalVector& v);

bool is_zero(const RationalVector& v);

} // namespace mpecv
