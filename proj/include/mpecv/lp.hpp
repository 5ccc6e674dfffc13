#pragma once

#include "mpecv/rational.hpp"

#include <vector>

namespace mpecv {

/// Outcome of an exact feasibility test. On success `solution` satisfies the
/// system exactly.
struct LPCertificate {
    bool feasible = false;
    RationalVector solution;
};

/// Decides  A x = b,  x_j >= 0 where nonneg[j],  and for every convex group
/// G:  x_G >= 0, sum(x_G) = 1.
///
/// Phase-1 simplex over exact rationals with Bland's rule; free variables are
/// split into a difference of two nonnegative columns. Throws DimensionMismatch.
LPCertificate lp_feasible(const RationalMatrix& eq_matrix, const RationalVector& rhs, const std::vector<bool>& nonneg,
                          const std::vector<std::vector<Index>>& convex_groups = {});

} // namespace mpecv
