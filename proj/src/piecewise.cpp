#include "mpecv/piecewise.hpp"

#include "mpecv/errors.hpp"

namespace mpecv {

namespace {

struct Local {
    Rational value;
    std::vector<LinearPiece> pieces;
};

class PieceBuilder {
public:
    PieceBuilder(const RationalVector& k, std::size_t cap) : k_(k), n_(k.size()), cap_(cap) {}

    /// Absent when the subtree is outside the recognized class.
    std::optional<Local> build(const Expr& e);

private:
    Local constant_local(const Rational& c) const { return {c, {{RationalVector::Zero(n_), {}}}}; }

    std::optional<Rational> constant_value(const Expr& e) const
    {
        if (!is_constant(e))
            return std::nullopt;
        Number v = eval(e, k_);
        if (!v.exact())
            return std::nullopt;
        return v.rational();
    }

    static void scale(Local& l, const Rational& c)
    {
        l.value *= c;
        for (auto& p : l.pieces)
            p.gradient *= c;
    }

    bool too_many(std::size_t count) const { return count > cap_; }

    /// Cartesian product of piece lists; `combine` merges a choice into one piece.
    template <typename Combine>
    std::optional<std::vector<LinearPiece>> product(const std::vector<const Local*>& parts, Combine combine)
    {
        std::size_t total = 1;
        for (const Local* l : parts) {
            total *= l->pieces.size();
            if (too_many(total))
                return std::nullopt;
        }
        std::vector<LinearPiece> out;
        std::vector<std::size_t> choice(parts.size(), 0);
        while (true) {
            std::vector<const LinearPiece*> picked;
            for (std::size_t i = 0; i < parts.size(); ++i)
                picked.push_back(&parts[i]->pieces[choice[i]]);
            combine(picked, out);
            if (too_many(out.size()))
                return std::nullopt;
            std::size_t i = 0;
            while (i < parts.size() && ++choice[i] == parts[i]->pieces.size())
                choice[i++] = 0;
            if (i == parts.size())
                break;
        }
        return out;
    }

    const RationalVector& k_;
    Index n_;
    std::size_t cap_;
};

std::optional<Local> PieceBuilder::build(const Expr& e)
{
    if (auto c = constant_value(e))
        return constant_local(*c);

    switch (e.kind()) {
    case ExprKind::Const: return constant_local(e.value());
    case ExprKind::Var: {
        RationalVector g = RationalVector::Zero(n_);
        g[static_cast<Index>(e.index())] = 1;
        return Local{k_[static_cast<Index>(e.index())], {{g, {}}}};
    }
    case ExprKind::Neg: {
        auto l = build(e.child());
        if (l)
            scale(*l, Rational(-1));
        return l;
    }
    case ExprKind::Add: {
        std::vector<Local> locals;
        for (const auto& c : e.children()) {
            auto l = build(c);
            if (!l)
                return std::nullopt;
            locals.push_back(std::move(*l));
        }
        std::vector<const Local*> parts;
        Rational value = 0;
        for (const auto& l : locals) {
            parts.push_back(&l);
            value += l.value;
        }
        auto pieces = product(parts, [&](const std::vector<const LinearPiece*>& picked, std::vector<LinearPiece>& out) {
            LinearPiece p{RationalVector::Zero(n_), {}};
            for (const LinearPiece* q : picked) {
                p.gradient += q->gradient;
                p.region.insert(p.region.end(), q->region.begin(), q->region.end());
            }
            sort_unique(p.region);
            out.push_back(std::move(p));
        });
        if (!pieces)
            return std::nullopt;
        return Local{value, std::move(*pieces)};
    }
    case ExprKind::Mul: {
        Rational factor = 1;
        std::optional<Local> variable_part;
        for (const auto& c : e.children()) {
            if (auto v = constant_value(c)) {
                factor *= *v;
                continue;
            }
            if (variable_part)
                return std::nullopt;
            variable_part = build(c);
            if (!variable_part)
                return std::nullopt;
        }
        if (!variable_part)
            return constant_local(factor);
        scale(*variable_part, factor);
        return variable_part;
    }
    case ExprKind::Div: {
        auto den = constant_value(e.child(1));
        if (!den || *den == 0)
            return std::nullopt;
        auto l = build(e.child(0));
        if (l)
            scale(*l, Rational(1) / *den);
        return l;
    }
    case ExprKind::Pow: {
        if (e.exponent() != 1)
            return std::nullopt;
        return build(e.child());
    }
    case ExprKind::Abs: {
        auto u = build(e.child());
        if (!u)
            return std::nullopt;
        if (u->value > 0)
            return u;
        if (u->value < 0) {
            scale(*u, Rational(-1));
            return u;
        }
        Local out{Rational(0), {}};
        for (const auto& p : u->pieces) {
            // u ≥ 0 on the first half, u ≤ 0 on the second.
            LinearPiece plus{p.gradient, p.region};
            plus.region.push_back(-p.gradient);
            LinearPiece minus{-p.gradient, p.region};
            minus.region.push_back(p.gradient);
            sort_unique(plus.region);
            sort_unique(minus.region);
            out.pieces.push_back(std::move(plus));
            out.pieces.push_back(std::move(minus));
        }
        if (too_many(out.pieces.size()))
            return std::nullopt;
        return out;
    }
    case ExprKind::Max:
    case ExprKind::Min: {
        const bool is_max = e.kind() == ExprKind::Max;
        std::vector<Local> locals;
        for (const auto& c : e.children()) {
            auto l = build(c);
            if (!l)
                return std::nullopt;
            locals.push_back(std::move(*l));
        }
        Rational best = locals.front().value;
        for (const auto& l : locals)
            best = is_max ? std::max(best, l.value) : std::min(best, l.value);
        std::vector<const Local*> active;
        for (const auto& l : locals)
            if (l.value == best)
                active.push_back(&l);
        if (active.size() == 1)
            return *active.front();
        auto pieces = product(active, [&](const std::vector<const LinearPiece*>& picked, std::vector<LinearPiece>& out) {
            std::vector<RationalVector> shared;
            for (const LinearPiece* q : picked)
                shared.insert(shared.end(), q->region.begin(), q->region.end());
            for (std::size_t w = 0; w < picked.size(); ++w) {
                // The winner's slope dominates every other active slope.
                LinearPiece p{picked[w]->gradient, shared};
                for (std::size_t j = 0; j < picked.size(); ++j)
                    if (j != w) {
                        RationalVector a = picked[j]->gradient - picked[w]->gradient;
                        p.region.push_back(is_max ? a : RationalVector(-a));
                    }
                sort_unique(p.region);
                out.push_back(std::move(p));
            }
        });
        if (!pieces)
            return std::nullopt;
        return Local{best, std::move(*pieces)};
    }
    case ExprKind::Exp: return std::nullopt;
    }
    return std::nullopt;
}

bool covered_from(const HalfspaceCone& cone, const std::vector<HalfspaceCone>& pieces, std::size_t index,
                  std::optional<RationalVector>* witness)
{
    const std::vector<RationalVector> rays = extreme_rays(cone);
    if (rays.empty())
        return true;
    if (index == pieces.size()) {
        if (witness && !*witness) {
            // A strictly positive combination of all generators lies in the
            // relative interior, which avoids every piece at this depth.
            RationalVector sum = RationalVector::Zero(cone.dimension);
            for (const auto& r : rays)
                sum += r;
            std::vector<RationalVector> candidates{sum};
            candidates.insert(candidates.end(), rays.begin(), rays.end());
            for (const auto& c : candidates) {
                if (is_zero(c))
                    continue;
                bool outside = true;
                for (const auto& p : pieces)
                    outside = outside && !p.contains(c);
                if (outside) {
                    *witness = primitive(c);
                    break;
                }
            }
        }
        return false;
    }
    const HalfspaceCone& piece = pieces[index];
    bool inside = true;
    for (const auto& r : rays)
        inside = inside && piece.contains(r);
    if (inside)
        return true;
    for (const auto& a : piece.normals) {
        bool reaches_outside = false;
        for (const auto& r : rays)
            reaches_outside = reaches_outside || a.dot(r) > 0;
        if (!reaches_outside)
            continue;
        HalfspaceCone part = cone;
        part.normals.push_back(-a);
        if (!covered_from(part, pieces, index + 1, witness))
            return false;
    }
    return true;
}

} // namespace

std::optional<std::vector<LinearPiece>> local_pieces(const Expr& e, const RationalVector& k, std::size_t cap)
{
    if (contains_exp(e))
        return std::nullopt;
    PieceBuilder builder(k, cap);
    std::optional<Local> l;
    try {
        l = builder.build(e);
    } catch (const DivisionByZero&) {
        return std::nullopt;
    }
    if (!l)
        return std::nullopt;
    return std::move(l->pieces);
}

bool covered_by_union(const HalfspaceCone& cone, const std::vector<HalfspaceCone>& pieces,
                      std::optional<RationalVector>* witness)
{
    return covered_from(cone, pieces, 0, witness);
}

} // namespace mpecv
