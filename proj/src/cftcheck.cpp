#include "pva/cftcheck.hpp"

#include <algorithm>
#include <array>

namespace pva {

CFTStructure make_cft(const RingPtr& ring, const std::vector<Rational>& weights, const DiffPoly& c)
{
    if (ring->generators().size() != weights.size())
        throw Error("make_cft: one weight per generator is required");
    if (!is_quasiconstant(c) || !total_derivative(c).is_zero())
        throw Error("make_cft: central charge must be a constant");
    CFTStructure s{BracketTable(ring), weights, c};
    s.table.weights.assign(weights.begin(), weights.end());
    DiffPoly L = DiffPoly::jet(ring, 0, 0);
    LambdaPoly ll(total_derivative(L));
    ll.add(1, 0, L * Rational(2));
    ll.add(3, 0, c);
    s.table.set(0, 0, ll);
    for (std::size_t j = 1; j < weights.size(); ++j) {
        DiffPoly W = DiffPoly::jet(ring, static_cast<std::uint32_t>(j), 0);
        LambdaPoly lw(total_derivative(W));
        lw.add(1, 0, W * weights[j]);
        set_entry(s, 0, j, lw);
    }
    return s;
}

void set_entry(CFTStructure& s, std::size_t i, std::size_t j, const LambdaPoly& p)
{
    s.table.set(i, j, p);
    if (i != j)
        s.table.set(j, i, -reflect(p));
}

LambdaPoly l_bracket(const DiffPoly& P, const CFTStructure& s)
{
    return bracket(DiffPoly::jet(s.table.ring, 0, 0), P, s.table);
}

Rational conformal_weight(const DiffPoly& P, const CFTStructure& s)
{
    if (P.is_zero())
        throw NotEigen("zero has no conformal weight");
    DiffPoly l1 = l_bracket(P, s).coeff(1);
    if (l1.is_zero())
        return Rational(0);
    Rational k = l1.terms().front().coeff / P.terms().front().coeff;
    DiffPoly defect = l1 - P * k;
    if (!defect.is_zero())
        throw NotEigen("L_(1) P - " + k.str() + " P = " + to_string(defect));
    return k;
}

bool is_primary(const DiffPoly& P, const CFTStructure& s)
{
    Rational w = conformal_weight(P, s);
    LambdaPoly expect(total_derivative(P));
    expect.add(1, 0, P * w);
    return l_bracket(P, s) == expect;
}

Rational monomial_weight(const Monomial& m, const CFTStructure& s)
{
    Rational w(0);
    for (const auto& f : m.factors()) {
        if (key_is_symbol(f.key))
            continue;
        w += (s.weights.at(key_gen(f.key)) + Rational(key_order(f.key))) * Rational(f.exp);
    }
    return w;
}

std::vector<std::array<std::size_t, 3>> weight_violations(const CFTStructure& s)
{
    std::vector<std::array<std::size_t, 3>> bad;
    for (std::size_t i = 0; i < s.table.size(); ++i)
        for (std::size_t j = 0; j < s.table.size(); ++j)
            for (const auto& [e, c] : s.table.entry(i, j).coeffs()) {
                Rational want = s.weights[i] + s.weights[j] - Rational(e.first + 1);
                for (const auto& t : c.terms())
                    if (t.mono.x_exp() != 0 || monomial_weight(t.mono, s) != want) {
                        bad.push_back({i, j, static_cast<std::size_t>(e.first)});
                        break;
                    }
            }
    return bad;
}

WeightRelationReport check_weight_relations(const CFTStructure& s, const Rational& delta, const std::map<int, DiffPoly>& P)
{
    WeightRelationReport rep;
    RingPtr ring = s.table.ring;
    auto p_at = [&](int j) {
        auto it = P.find(j);
        return it == P.end() ? DiffPoly(ring, Rational(0)) : it->second;
    };
    auto fail = [&](const std::string& m) {
        rep.pass = false;
        rep.failures.push_back(m);
    };
    for (const auto& [j, Pj] : P) {
        LambdaPoly b = l_bracket(Pj, s);
        std::string tag = "P_" + std::to_string(j);
        if (b.has_mu())
            fail(tag + ": unexpected mu");
        if (b.coeff(0) != total_derivative(Pj))
            fail(tag + ": constant term is not P'");
        if (b.coeff(1) != Pj * (Rational(2) * delta - Rational(j + 1)))
            fail(tag + ": weight is not 2 Delta - j - 1");
        int kmax = std::max(b.degree_lambda(), P.rbegin()->first - j + 2);
        for (int k = 2; k <= kmax; ++k) {
            int h = k / 2;
            DiffPoly expect = k % 2 == 0
                                  ? total_derivative(p_at(j + 2 * h)) * binomial(j + 2 * h, j)
                                  : p_at(j + 2 * h) * (Rational(2) * delta * binomial(j + 2 * h, j) -
                                                       binomial(j + 2 * h + 1, j));
            DiffPoly got = b.coeff(k);
            if (got != expect)
                fail("Q_{" + std::to_string(j) + "," + std::to_string(k) + "} = " + to_string(got) + ", expected " +
                     to_string(expect));
        }
    }
    return rep;
}

WAlgebraReport check_w_algebra(const CFTStructure& s) { return {check_skew(s.table), check_jacobi(s.table)}; }

WAlgebraData w_algebra(const RingPtr& ring, const Rational& delta, const DiffPoly& c, std::map<int, DiffPoly> P)
{
    WAlgebraData d{make_cft(ring, {Rational(2), delta}, c), delta, std::move(P)};
    set_entry(d.structure, 1, 1, from_canonical_form(d.P, ring));
    return d;
}

WAlgebraData w_algebra_weight3()
{
    RingPtr r = make_ring({"L", "W"}, {{"c", "", std::nullopt}});
    DiffPoly c = DiffPoly::symbol(r, "c");
    auto L = [&](int o, int e = 1) { return DiffPoly::jet(r, 0, o, e); };
    return w_algebra(r, Rational(3), c,
                     {{1, L(0, 2) * Rational(256) + c * L(2) * Rational(24)}, {3, c * L(0) * Rational(40)}, {5, c * c}});
}

WAlgebraData w_algebra_weight4()
{
    RingPtr r = make_ring({"L", "W"}, {{"c", "", std::nullopt}, {"sqrt2", "", Rational(2)}});
    DiffPoly c = DiffPoly::symbol(r, "c"), s2 = DiffPoly::symbol(r, "sqrt2");
    auto L = [&](int o, int e = 1) { return DiffPoly::jet(r, 0, o, e); };
    auto W = [&](int o) { return DiffPoly::jet(r, 1, o); };
    auto q = [](std::int64_t n) { return Rational(n); };
    DiffPoly P1 = L(0, 3) * q(18432) + c * L(1, 2) * q(64) + c * L(0) * L(2) * q(3712) + c * c * L(4) * q(48) +
                  s2 * L(0) * W(0) * q(112) + s2 * c * W(2) * q(2);
    DiffPoly P3 = c * L(0, 2) * q(3136) + c * c * L(2) * q(224) + s2 * c * W(0) * q(6);
    return w_algebra(r, Rational(4), c, {{1, P1}, {3, P3}, {5, c * c * L(0) * q(112)}, {7, c * c * c}});
}

WAlgebraData w_algebra_cubic()
{
    RingPtr r = make_ring({"L", "W"}, {{"alpha", "", std::nullopt}, {"beta", "", std::nullopt}});
    DiffPoly a = DiffPoly::symbol(r, "alpha"), b = DiffPoly::symbol(r, "beta");
    DiffPoly L = DiffPoly::jet(r, 0, 0), W = DiffPoly::jet(r, 1, 0);
    return w_algebra(r, Rational(4), DiffPoly(r, Rational(0)), {{1, a * L.pow(3) + b * L * W}});
}

} // namespace pva
