#include "mpecv/lp.hpp"

#include "mpecv/errors.hpp"

#include <stdexcept>

namespace mpecv {

namespace {

void pivot(RationalMatrix& t, Index row, Index col)
{
    const Index cols = t.cols();
    const Rational inv = Rational(1) / t(row, col);
    for (Index j = 0; j < cols; ++j)
        if (t(row, j) != 0)
            t(row, j) *= inv;
    for (Index i = 0; i < t.rows(); ++i) {
        if (i == row || t(i, col) == 0)
            continue;
        const Rational f = t(i, col);
        for (Index j = 0; j < cols; ++j)
            if (t(row, j) != 0)
                t(i, j) -= f * t(row, j);
    }
}

} // namespace

LPCertificate lp_feasible(const RationalMatrix& eq_matrix, const RationalVector& rhs, const std::vector<bool>& nonneg,
                          const std::vector<std::vector<Index>>& convex_groups)
{
    const Index n = eq_matrix.cols();
    if (eq_matrix.rows() != rhs.size())
        throw DimensionMismatch("lp_feasible: rhs length differs from row count");
    if (static_cast<Index>(nonneg.size()) != n)
        throw DimensionMismatch("lp_feasible: nonneg mask length differs from column count");

    std::vector<bool> bounded = nonneg;
    for (const auto& group : convex_groups)
        for (Index j : group) {
            if (j < 0 || j >= n)
                throw DimensionMismatch("lp_feasible: convex group index out of range");
            bounded[static_cast<std::size_t>(j)] = true;
        }

    // Column layout: one column per variable, plus a negative part for free ones.
    std::vector<Index> minus_col(static_cast<std::size_t>(n), -1);
    Index structural = n;
    for (Index j = 0; j < n; ++j)
        if (!bounded[static_cast<std::size_t>(j)])
            minus_col[static_cast<std::size_t>(j)] = structural++;

    const Index rows = eq_matrix.rows() + static_cast<Index>(convex_groups.size());
    const Index rhs_col = structural + rows;
    RationalMatrix t = RationalMatrix::Zero(rows + 1, rhs_col + 1);

    for (Index i = 0; i < eq_matrix.rows(); ++i) {
        for (Index j = 0; j < n; ++j) {
            t(i, j) = eq_matrix(i, j);
            if (Index m = minus_col[static_cast<std::size_t>(j)]; m >= 0)
                t(i, m) = -eq_matrix(i, j);
        }
        t(i, rhs_col) = rhs[i];
    }
    for (std::size_t g = 0; g < convex_groups.size(); ++g) {
        const Index i = eq_matrix.rows() + static_cast<Index>(g);
        for (Index j : convex_groups[g])
            t(i, j) += 1;
        t(i, rhs_col) = 1;
    }
    for (Index i = 0; i < rows; ++i) {
        if (t(i, rhs_col) < 0)
            for (Index j = 0; j <= rhs_col; ++j)
                t(i, j) = -t(i, j);
        t(i, structural + i) = 1;
    }

    // Phase-1 objective: minimize the sum of artificials, written in reduced form.
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < structural; ++j)
            t(rows, j) -= t(i, j);
    for (Index i = 0; i < rows; ++i)
        t(rows, rhs_col) -= t(i, rhs_col);

    std::vector<Index> basis(static_cast<std::size_t>(rows));
    for (Index i = 0; i < rows; ++i)
        basis[static_cast<std::size_t>(i)] = structural + i;

    while (true) {
        // Bland: lowest-index improving column. Artificials never re-enter.
        Index entering = -1;
        for (Index j = 0; j < structural; ++j)
            if (t(rows, j) < 0) {
                entering = j;
                break;
            }
        if (entering < 0)
            break;

        Index leaving = -1;
        Rational best_ratio;
        for (Index i = 0; i < rows; ++i) {
            if (t(i, entering) <= 0)
                continue;
            Rational ratio = t(i, rhs_col) / t(i, entering);
            if (leaving < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leaving)])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving < 0)
            break; // cannot happen: phase 1 is bounded below by zero
        pivot(t, leaving, entering);
        basis[static_cast<std::size_t>(leaving)] = entering;
    }

    LPCertificate cert;
    if (t(rows, rhs_col) != 0)
        return cert;

    RationalVector columns = RationalVector::Zero(structural);
    for (Index i = 0; i < rows; ++i)
        if (Index b = basis[static_cast<std::size_t>(i)]; b < structural)
            columns[b] = t(i, rhs_col);

    cert.feasible = true;
    cert.solution = RationalVector::Zero(n);
    for (Index j = 0; j < n; ++j) {
        cert.solution[j] = columns[j];
        if (Index m = minus_col[static_cast<std::size_t>(j)]; m >= 0)
            cert.solution[j] -= columns[m];
    }

    RationalVector residual = eq_matrix * cert.solution - rhs;
    if (!is_zero(residual))
        throw std::logic_error("lp_feasible: certificate does not reproduce the system");
    return cert;
}

} // namespace mpecv
