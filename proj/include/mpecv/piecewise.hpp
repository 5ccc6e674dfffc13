#pragma once

#include "mpecv/cone.hpp"
#include "mpecv/expr.hpp"

#include <optional>
#include <vector>

namespace mpecv {

/// One linear piece of d ↦ f(k + d) − f(k) near d = 0, valid on the cone
/// {d : ⟨a, d⟩ ≤ 0 for a in region}.
struct LinearPiece {
    RationalVector gradient;
    std::vector<RationalVector> region;
};

inline constexpr std::size_t default_piece_cap = 4096;

/// Pieces of a piecewise-affine expression around k: const, var, add, neg,
/// mul with at most one nonconstant factor, division by a constant, abs, max,
/// min and pow 1. Absent for anything else or above `cap` pieces.
std::optional<std::vector<LinearPiece>> local_pieces(const Expr& e, const RationalVector& k,
                                                     std::size_t cap = default_piece_cap);

/// True iff cone ⊆ ⋃ pieces (closed halfspace cones). On false, `witness`
/// receives a direction of `cone` outside every piece when one is found.
bool covered_by_union(const HalfspaceCone& cone, const std::vector<HalfspaceCone>& pieces,
                      std::optional<RationalVector>* witness = nullptr);

} // namespace mpecv
