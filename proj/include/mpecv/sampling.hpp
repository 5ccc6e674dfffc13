#pragma once

#include "mpecv/rational.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mpecv {

/// Seeded source of dyadic-rational samples. Only raw engine output is used,
/// so sequences are identical across standard library implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the dyadic grid of [lo, hi] with 2^bits cells.
    Rational uniform(const Rational& lo, const Rational& hi, int bits = 20);
    /// Uniform in (0, 1) on a dyadic grid.
    Rational open_unit(int bits = 20);
    /// Uniform in the closed ball (rejection from the bounding cube).
    RationalVector ball_point(const RationalVector& center, const Rational& radius, int bits = 20);
    /// Nonzero vector uniform in [-1, 1]^n.
    RationalVector cube_direction(Index n, int bits = 16);
    /// Unit vector (floating) from rejection in the unit ball.
    Vector<double> unit_direction(Index n);

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Points k + step·z for integer vectors z with ‖step·z‖ ≤ radius, ordered by
/// squared norm and then lexicographically.
std::vector<RationalVector> ball_grid(const RationalVector& center, const Rational& radius, const Rational& step);

/// n = 2: `planar` equally spaced angles; n = 1: ±1; otherwise `random` seeded
/// unit vectors.
std::vector<Vector<double>> sample_directions(Index n, std::size_t planar, std::size_t random, std::uint64_t seed);

} // namespace mpecv
