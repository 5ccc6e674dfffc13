#include "mpecv/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mpecv {

Rational Sampler::uniform(const Rational& lo, const Rational& hi, int bits)
{
    const std::uint64_t cells = std::uint64_t{1} << bits;
    const std::uint64_t draw = engine_() % (cells + 1);
    return lo + (hi - lo) * Rational(static_cast<long long>(draw), static_cast<long long>(cells));
}

Rational Sampler::open_unit(int bits)
{
    const std::uint64_t cells = std::uint64_t{1} << bits;
    const std::uint64_t draw = 1 + engine_() % (cells - 1);
    return Rational(static_cast<long long>(draw), static_cast<long long>(cells));
}

RationalVector Sampler::ball_point(const RationalVector& center, const Rational& radius, int bits)
{
    const Index n = center.size();
    while (true) {
        RationalVector offset(n);
        for (Index i = 0; i < n; ++i)
            offset[i] = uniform(Rational(-1), Rational(1), bits);
        if (offset.squaredNorm() <= 1)
            return center + radius * offset;
    }
}

RationalVector Sampler::cube_direction(Index n, int bits)
{
    while (true) {
        RationalVector d(n);
        for (Index i = 0; i < n; ++i)
            d[i] = uniform(Rational(-1), Rational(1), bits);
        if (!is_zero(d))
            return d;
    }
}

Vector<double> Sampler::unit_direction(Index n)
{
    constexpr double scale = 1.0 / 9007199254740992.0; // 2^-53
    while (true) {
        Vector<double> d(n);
        for (Index i = 0; i < n; ++i)
            d[i] = 2.0 * static_cast<double>(engine_() >> 11) * scale - 1.0;
        const double norm = d.norm();
        if (norm > 1e-3 && norm <= 1.0)
            return d / norm;
    }
}

std::vector<RationalVector> ball_grid(const RationalVector& center, const Rational& radius, const Rational& step)
{
    const Index n = center.size();
    const Rational ratio = radius / step;
    const long reach = static_cast<long>(
        boost::multiprecision::mpz_int(numerator(ratio) / denominator(ratio)).convert_to<long long>());
    std::vector<std::pair<Rational, RationalVector>> offsets;
    std::vector<long> z(static_cast<std::size_t>(n), -reach);
    if (n == 0)
        return {center};
    const Rational radius_sq = radius * radius;
    while (true) {
        RationalVector off(n);
        for (Index i = 0; i < n; ++i)
            off[i] = step * Rational(z[static_cast<std::size_t>(i)]);
        Rational norm_sq = off.squaredNorm();
        if (norm_sq <= radius_sq)
            offsets.emplace_back(norm_sq, off);
        Index i = 0;
        while (i < n && z[static_cast<std::size_t>(i)] == reach)
            z[static_cast<std::size_t>(i++)] = -reach;
        if (i == n)
            break;
        ++z[static_cast<std::size_t>(i)];
    }
    std::sort(offsets.begin(), offsets.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return lex_less(a.second, b.second);
    });
    std::vector<RationalVector> out;
    out.reserve(offsets.size());
    for (auto& [norm, off] : offsets)
        out.push_back(center + off);
    return out;
}

std::vector<Vector<double>> sample_directions(Index n, std::size_t planar, std::size_t random, std::uint64_t seed)
{
    std::vector<Vector<double>> dirs;
    if (n == 1) {
        dirs.push_back(Vector<double>::Constant(1, 1.0));
        dirs.push_back(Vector<double>::Constant(1, -1.0));
        return dirs;
    }
    if (n == 2) {
        for (std::size_t j = 0; j < planar; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(planar);
            Vector<double> d(2);
            d << std::cos(theta), std::sin(theta);
            dirs.push_back(d);
        }
        return dirs;
    }
    Sampler sampler(seed);
    for (std::size_t j = 0; j < random; ++j)
        dirs.push_back(sampler.unit_direction(n));
    return dirs;
}

} // namespace mpecv
