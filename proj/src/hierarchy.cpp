#include "pva/hierarchy.hpp"

#include <unordered_map>

namespace pva {

namespace {

DiffPoly integrate(const DiffPoly& f, int times)
{
    DiffPoly g = f;
    for (int i = 0; i < times; ++i) {
        try {
            g = integrate_total_derivative(g);
        } catch (const NotExact& e) {
            throw Obstruction("integration step " + std::to_string(i + 1) + " of " + std::to_string(times) +
                              " failed: " + e.what());
        }
    }
    return g;
}

} // namespace

std::optional<int> pure_d_power(const DiffOp& K)
{
    if (K.coeffs().size() != 1)
        return std::nullopt;
    const auto& [k, c] = *K.coeffs().begin();
    if (k < 1 || !c.is_constant() || !c.constant_value().is_one())
        return std::nullopt;
    return k;
}

DiffPoly lenard_step_Dk(const DiffOp& K, const DiffOp& H, const DiffPoly& xi)
{
    auto k = pure_d_power(K);
    if (!k)
        throw Error("lenard_step_Dk: K must be a power of D");
    return integrate(apply(H, xi), *k);
}

DiffOp reduced5_operator(const RingPtr& ring, const DiffPoly& c)
{
    DiffPoly u1 = DiffPoly::jet(ring, 0, 1);
    DiffPoly w = u1 * DiffPoly::jet(ring, 0, 0, -3);
    DiffOp D = DiffOp::D(ring);
    DiffOp Dc = D + DiffOp(c);
    return DiffOp(DiffPoly::jet(ring, 0, 0, -2)) * (DiffOp::D(ring, 2) - DiffOp(c * c)) + DiffOp(w) * Dc -
           DiffOp(apply(Dc, w));
}

DiffPoly lenard_step_reduced5(const DiffPoly& xi, const DiffPoly& c)
{
    const RingPtr& ring = xi.ring() ? xi.ring() : c.ring();
    if (xi.is_zero())
        return xi;
    DiffPoly inv_u2 = DiffPoly::jet(ring, 0, 0, -2);
    DiffOp Kc = DiffOp::D(ring) * (DiffOp::D(ring, 2) - DiffOp(c * c));
    DiffPoly source = xi * apply(Kc, inv_u2);
    return apply(reduced5_operator(ring, c), xi) - integrate(source, 1) * Rational(1, 2);
}

HierarchyState run_hierarchy(const DiffOp& K, const DiffOp& H, const std::vector<DiffPoly>& seeds, int steps,
                             const std::optional<DiffPoly>& reduced_c)
{
    if (seeds.empty())
        throw Error("run_hierarchy: at least one seed is required");
    HierarchyState s{K, H, seeds, {}, false};
    bool d_power = pure_d_power(K).has_value();
    if (!d_power && !reduced_c)
        throw Error("run_hierarchy: K is not a power of D and no reduced scheme was selected");
    for (int i = 0; i < steps; ++i) {
        const DiffPoly& last = s.xis.back();
        s.xis.push_back(d_power ? lenard_step_Dk(K, H, last) : lenard_step_reduced5(last, *reduced_c));
    }
    for (std::size_t j = 0; j + 1 < s.xis.size(); ++j) {
        DiffPoly lhs = apply(K, s.xis[j + 1]);
        DiffPoly rhs = apply(H, s.xis[j]);
        if (lhs != rhs)
            throw Obstruction("recursion relation fails at step " + std::to_string(j) + ": K xi_" +
                              std::to_string(j + 1) + " - H xi_" + std::to_string(j) + " = " +
                              to_string(lhs - rhs));
        s.equations.push_back(lhs);
    }
    RingPtr ring = common_ring(K.ring(), H.ring());
    s.independent = specialized_rank(s.xis, default_specialization(ring)) == static_cast<int>(s.xis.size());
    return s;
}

bool verify_density(const DiffPoly& h, const DiffPoly& xi) { return variational_derivative(h, 0) == xi; }

bool verify_conservation(const HierarchyState& s)
{
    std::vector<DiffPoly> kx;
    for (const auto& xi : s.xis)
        kx.push_back(apply(s.K, xi));
    for (std::size_t i = 0; i < s.xis.size(); ++i)
        for (std::size_t j = 0; j < s.xis.size(); ++j)
            if (!variational_derivative(s.xis[i] * kx[j], 0).is_zero())
                return false;
    return true;
}

std::map<std::size_t, Rational> default_specialization(const RingPtr& ring)
{
    std::map<std::size_t, Rational> v;
    if (!ring)
        return v;
    static const std::int64_t primes[] = {7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    std::size_t k = 0;
    for (std::size_t s = 0; s < ring->symbols().size(); ++s) {
        const auto& sym = ring->symbols()[s];
        if (!ring->symbol_is_constant(s) || sym.square_reduction)
            continue;
        v.emplace(s, Rational(primes[k % 12], 3 + static_cast<std::int64_t>(k)));
        ++k;
    }
    return v;
}

int specialized_rank(const std::vector<DiffPoly>& polys, const std::map<std::size_t, Rational>& values)
{
    std::map<std::size_t, DiffPoly> images;
    std::vector<DiffPoly> spec;
    for (const auto& p : polys) {
        if (images.empty())
            for (const auto& [s, r] : values)
                images.emplace(s, DiffPoly(p.ring(), r));
        spec.push_back(substitute_symbols(p, images));
    }
    std::unordered_map<Monomial, std::size_t> cols;
    for (const auto& p : spec)
        for (const auto& t : p.terms())
            cols.emplace(t.mono, cols.size());
    std::vector<std::vector<Rational>> rows;
    for (const auto& p : spec) {
        std::vector<Rational> row(cols.size(), Rational(0));
        for (const auto& t : p.terms())
            row[cols[t.mono]] = t.coeff;
        rows.push_back(std::move(row));
    }
    // Gaussian elimination over Q.
    int rank = 0;
    std::size_t ncols = cols.size();
    for (std::size_t c = 0; c < ncols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t piv = rows.size();
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (!rows[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv == rows.size())
            continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c].is_zero())
                continue;
            Rational f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < ncols; ++k)
                rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

std::optional<Rational> proportionality(const DiffPoly& a, const DiffPoly& b)
{
    if (b.is_zero())
        return a.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
    if (a.size() != b.size())
        return std::nullopt;
    Rational k = a.terms().front().coeff / b.terms().front().coeff;
    if (a == b * k)
        return k;
    return std::nullopt;
}

std::optional<DiffPoly> constant_factor(const DiffPoly& a, const DiffPoly& b)
{
    if (b.is_zero() || a.is_zero() || a.size() != b.size())
        return std::nullopt;
    const Term& ta = a.terms().front();
    const Term& tb = b.terms().front();
    if (ta.mono.x_exp() != tb.mono.x_exp())
        return std::nullopt;
    Monomial m = ta.mono;
    for (const auto& f : tb.mono.factors())
        m.mul_var(f.key, -f.exp);
    DiffPoly k = DiffPoly::monomial(common_ring(a.ring(), b.ring()), m, ta.coeff / tb.coeff);
    if (!total_derivative(k).is_zero() || a != b * k)
        return std::nullopt;
    return k;
}

} // namespace pva
