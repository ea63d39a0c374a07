#pragma once

// Shared helpers for the test suites: seeded random objects and an
// evaluation oracle that substitutes explicit polynomials for the
// generators and works with truncated Taylor series in t = x - x0.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "pva/diffop.hpp"

namespace pvatest {

using pva::DiffOp;
using pva::DiffPoly;
using pva::LambdaPoly;
using pva::Rational;
using pva::RingPtr;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return uniform(0, 1) == 1; }
    Rational small_rational()
    {
        int n = uniform(-5, 5);
        if (n == 0) n = 1;
        return Rational(n, uniform(1, 3));
    }

private:
    std::mt19937_64 gen_;
};

struct RandomShape {
    int terms = 3;
    int max_order = 3;
    bool laurent = true;
    bool use_x = true;
    bool use_symbols = true;
};

/// Random polynomial in the jets of every generator, optionally with x and
/// the ring's symbols.
inline DiffPoly random_poly(Rng& rng, const RingPtr& ring, const RandomShape& shape = {})
{
    std::vector<pva::Term> terms;
    int nterms = rng.uniform(1, shape.terms);
    for (int t = 0; t < nterms; ++t) {
        pva::Monomial m;
        if (shape.use_x && rng.uniform(0, 3) == 0) m.set_x_exp(static_cast<std::uint32_t>(rng.uniform(1, 2)));
        int nf = rng.uniform(0, 3);
        for (int f = 0; f < nf; ++f) {
            auto gen = static_cast<std::uint32_t>(rng.uniform(0, static_cast<int>(ring->generators().size()) - 1));
            auto order = static_cast<std::uint32_t>(rng.uniform(0, shape.max_order));
            int e = rng.uniform(1, 2);
            if (shape.laurent && (order == 0 || order == 2) && rng.uniform(0, 2) == 0) e = -e;
            m.mul_var(pva::jet_key(gen, order), e);
        }
        if (shape.use_symbols && !ring->symbols().empty() && rng.uniform(0, 2) == 0) {
            auto s = static_cast<std::uint32_t>(rng.uniform(0, static_cast<int>(ring->symbols().size()) - 1));
            if (!ring->symbol_square(s)) m.mul_var(pva::symbol_key(s), rng.uniform(1, 2));
        }
        terms.push_back({m, rng.small_rational()});
    }
    return DiffPoly::from_terms(ring, std::move(terms));
}

inline DiffOp random_op(Rng& rng, const RingPtr& ring, int max_degree, const RandomShape& shape = {})
{
    DiffOp a(ring);
    for (int k = 0; k <= max_degree; ++k)
        if (rng.coin()) a.add(k, random_poly(rng, ring, shape));
    if (a.is_zero()) a.add(0, random_poly(rng, ring, shape));
    return a;
}

/// Random skew-adjoint operator A - A*.
inline DiffOp random_skew_op(Rng& rng, const RingPtr& ring, int max_degree, const RandomShape& shape = {})
{
    for (;;) {
        auto a = random_op(rng, ring, max_degree, shape);
        auto s = a - pva::adjoint(a);
        if (!s.is_zero()) return s;
    }
}

// ---------------------------------------------------------------------------
// Series oracle.

/// Truncated power series sum c_k t^k.
struct Series {
    std::vector<Rational> c;

    explicit Series(std::size_t n = 0) : c(n) {}
    std::size_t size() const { return c.size(); }

    static Series constant(const Rational& v, std::size_t n)
    {
        Series s(n);
        if (n) s.c[0] = v;
        return s;
    }
    Series truncated(std::size_t n) const
    {
        Series s(std::min(n, c.size()));
        for (std::size_t i = 0; i < s.size(); ++i) s.c[i] = c[i];
        return s;
    }
    Series derivative() const
    {
        Series s(c.empty() ? 0 : c.size() - 1);
        for (std::size_t i = 0; i < s.size(); ++i) s.c[i] = c[i + 1] * Rational(static_cast<std::int64_t>(i + 1));
        return s;
    }
    Series integral(const Rational& c0) const
    {
        Series s(c.size() + 1);
        s.c[0] = c0;
        for (std::size_t i = 0; i < c.size(); ++i) s.c[i + 1] = c[i] / Rational(static_cast<std::int64_t>(i + 1));
        return s;
    }
    friend Series operator+(const Series& a, const Series& b)
    {
        Series s(std::min(a.size(), b.size()));
        for (std::size_t i = 0; i < s.size(); ++i) s.c[i] = a.c[i] + b.c[i];
        return s;
    }
    friend Series operator-(const Series& a, const Series& b)
    {
        Series s(std::min(a.size(), b.size()));
        for (std::size_t i = 0; i < s.size(); ++i) s.c[i] = a.c[i] - b.c[i];
        return s;
    }
    friend Series operator*(const Series& a, const Series& b)
    {
        Series s(std::min(a.size(), b.size()));
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j) s.c[i] += a.c[j] * b.c[i - j];
        return s;
    }
    Series inverse() const
    {
        Series s(c.size());
        if (c.empty()) return s;
        s.c[0] = c[0].inverse();
        for (std::size_t i = 1; i < c.size(); ++i) {
            Rational acc;
            for (std::size_t j = 1; j <= i; ++j) acc += c[j] * s.c[i - j];
            s.c[i] = -acc * s.c[0];
        }
        return s;
    }
    Series pow(int e) const
    {
        Series base = e < 0 ? inverse() : *this;
        Series r = constant(Rational(1), c.size());
        for (int k = 0; k < (e < 0 ? -e : e); ++k) r = r * base;
        return r;
    }
    friend bool operator==(const Series& a, const Series& b) { return a.c == b.c; }
};

/// Evaluates polynomials along explicit generator polynomials u_i(x0 + t)
/// with nonzero values at t = 0. Constant symbols get rational values;
/// a symbol with a D-image is the integral of its image's series.
class Oracle {
public:
    Oracle(const RingPtr& ring, std::uint64_t seed, std::size_t precision = 10)
        : ring_(ring), prec_(precision)
    {
        Rng rng(seed);
        x0_ = Rational(rng.uniform(1, 4), rng.uniform(1, 3));
        const std::size_t span = prec_ + 12;
        for (std::size_t g = 0; g < ring->generators().size(); ++g) {
            std::vector<Rational> poly(span);
            for (std::size_t k = 0; k < 7; ++k) poly[k] = rng.small_rational();
            jets_.push_back({Series(span)});
            jets_.back()[0].c = poly;
        }
        symbols_.resize(ring->symbols().size());
        std::vector<bool> done(symbols_.size(), false);
        for (bool progress = true; progress;) {
            progress = false;
            for (std::size_t s = 0; s < symbols_.size(); ++s) {
                if (done[s]) continue;
                auto img = ring->symbol_d_image(s);
                if (auto sq = ring->symbol_square(s)) {
                    // Not representable over Q; placeholder, never evaluated.
                    symbols_[s] = Series::constant(*sq, span);
                } else if (!img) {
                    symbols_[s] = Series::constant(rng.small_rational(), span);
                } else if (done[*img]) {
                    symbols_[s] = symbols_[*img].truncated(span - 1).integral(rng.small_rational());
                } else {
                    continue;
                }
                done[s] = true;
                progress = true;
            }
        }
    }

    std::size_t precision() const { return prec_; }

    Series eval(const DiffPoly& f) const { return eval(f, prec_); }

    Series eval(const DiffPoly& f, std::size_t n) const
    {
        Series acc(n);
        for (const auto& t : f.terms()) {
            Series m = Series::constant(t.coeff, n);
            if (t.mono.x_exp()) {
                Series x(n);
                x.c[0] = x0_;
                if (n > 1) x.c[1] = Rational(1);
                m = m * x.pow(static_cast<int>(t.mono.x_exp()));
            }
            for (const auto& vp : t.mono.factors()) {
                Series base = pva::key_is_symbol(vp.key) ? symbols_[pva::key_symbol(vp.key)].truncated(n)
                                                         : jet(pva::key_gen(vp.key), pva::key_order(vp.key)).truncated(n);
                m = m * base.pow(vp.exp);
            }
            acc = acc + m;
        }
        return acc;
    }

    /// sum_k a_k d^k/dt^k g, to precision n.
    Series eval_apply(const DiffOp& a, const DiffPoly& g, std::size_t n) const
    {
        int deg = std::max(a.degree(), 0);
        Series gs = eval(g, n + static_cast<std::size_t>(deg));
        Series acc(n);
        for (const auto& [k, f] : a.coeffs()) {
            Series d = gs;
            for (int i = 0; i < k; ++i) d = d.derivative();
            acc = acc + eval(f, n) * d.truncated(n);
        }
        return acc;
    }

private:
    const Series& jet(std::uint32_t gen, std::uint32_t order) const
    {
        auto& chain = jets_[gen];
        while (chain.size() <= order) chain.push_back(chain.back().derivative());
        return chain[order];
    }

    RingPtr ring_;
    std::size_t prec_;
    Rational x0_;
    mutable std::vector<std::vector<Series>> jets_;
    std::vector<Series> symbols_;
};

/// True when the value of the generator polynomials at t = 0 is nonzero for
/// every jet that occurs with a negative exponent.
inline bool oracle_defined(const Oracle& o, const DiffPoly& f)
{
    for (const auto& t : f.terms())
        for (const auto& vp : t.mono.factors())
            if (vp.exp < 0) {
                DiffPoly single = DiffPoly::monomial(f.ring(), [&] {
                    pva::Monomial m;
                    m.mul_var(vp.key, 1);
                    return m;
                }(), Rational(1));
                if (o.eval(single, 1).c[0].is_zero()) return false;
            }
    return true;
}

/// Value at t = 0 of a DiffPoly under the oracle.
inline Rational point_value(const Oracle& o, const DiffPoly& f) { return o.eval(f, 1).c[0]; }

} // namespace pvatest
