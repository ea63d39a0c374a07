#include "pva/diffalg.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pva {

namespace {

std::atomic<std::size_t> g_term_limit{2'000'000};

void check_limit(std::size_t n)
{
    std::size_t lim = g_term_limit.load(std::memory_order_relaxed);
    if (lim != 0 && n > lim)
        throw TermLimitExceeded("intermediate polynomial has " + std::to_string(n) +
                                " terms, above the limit of " + std::to_string(lim));
}

bool term_less(const Term& a, const Term& b) { return a.mono < b.mono; }

// Sorts and merges equal monomials, dropping zeros.
void canonicalize(std::vector<Term>& terms, std::size_t sorted_prefix = 0)
{
    if (terms.empty())
        return;
    if (sorted_prefix < terms.size()) {
        auto mid = terms.begin() + static_cast<std::ptrdiff_t>(sorted_prefix);
        std::sort(mid, terms.end(), term_less);
        if (sorted_prefix > 0)
            std::inplace_merge(terms.begin(), mid, terms.end(), term_less);
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i + 1;
        Rational c = std::move(terms[i].coeff);
        while (j < terms.size() && terms[j].mono == terms[i].mono) {
            c += terms[j].coeff;
            ++j;
        }
        if (!c.is_zero()) {
            if (out != i)
                terms[out].mono = std::move(terms[i].mono);
            terms[out].coeff = std::move(c);
            ++out;
        }
        i = j;
    }
    terms.resize(out);
}

} // namespace

void set_term_limit(std::size_t limit) { g_term_limit.store(limit); }
std::size_t term_limit() { return g_term_limit.load(); }

// ---------------------------------------------------------------------------
// Ring

Ring::Ring(std::vector<std::string> generators, std::vector<ParamSymbol> symbols, std::string x_name)
    : generators_(std::move(generators)), symbols_(std::move(symbols)), x_name_(std::move(x_name))
{
    if (generators_.empty())
        throw Error("ring needs at least one generator");
    std::set<std::string> seen{x_name_};
    for (const auto& g : generators_)
        if (!seen.insert(g).second)
            throw Error("duplicate name '" + g + "'");
    for (const auto& s : symbols_)
        if (!seen.insert(s.name).second)
            throw Error("duplicate name '" + s.name + "'");

    d_images_.resize(symbols_.size());
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto& s = symbols_[i];
        if (s.square_reduction) {
            has_square_ = true;
            if (!s.d_image.empty())
                throw Error("symbol '" + s.name + "' has a square reduction and must be D-constant");
            if (s.square_reduction->is_zero())
                throw Error("symbol '" + s.name + "' square reduction must be nonzero");
        }
        if (s.d_image.empty() || s.d_image == "0")
            continue;
        auto idx = symbol_index(s.d_image);
        if (!idx)
            throw Error("symbol '" + s.name + "': D-image '" + s.d_image + "' is not a declared symbol");
        d_images_[i] = *idx;
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        std::size_t steps = 0;
        auto cur = d_images_[i];
        while (cur) {
            if (++steps > symbols_.size())
                throw Error("D-chain of symbol '" + symbols_[i].name + "' is cyclic");
            cur = d_images_[*cur];
        }
    }
}

std::optional<std::size_t> Ring::generator_index(const std::string& name) const
{
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i] == name)
            return i;
    return std::nullopt;
}

std::optional<std::size_t> Ring::symbol_index(const std::string& name) const
{
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name)
            return i;
    return std::nullopt;
}

RingPtr make_ring(std::vector<std::string> generators, std::vector<ParamSymbol> symbols, std::string x_name)
{
    return std::make_shared<const Ring>(std::move(generators), std::move(symbols), std::move(x_name));
}

RingPtr common_ring(const RingPtr& a, const RingPtr& b)
{
    if (!a)
        return b;
    if (!b || a == b)
        return a;
    throw Error("polynomials over different rings cannot be combined");
}

// ---------------------------------------------------------------------------
// Monomial

std::int32_t Monomial::exp(VarKey key) const
{
    for (const auto& f : factors_)
        if (f.key == key)
            return f.exp;
    return 0;
}

void Monomial::mul_var(VarKey key, std::int32_t delta)
{
    if (delta == 0)
        return;
    auto it = std::lower_bound(factors_.begin(), factors_.end(), key,
                               [](const VarPow& f, VarKey k) { return f.key < k; });
    if (it != factors_.end() && it->key == key) {
        it->exp += delta;
        if (it->exp == 0)
            factors_.erase(it);
    } else {
        factors_.insert(it, VarPow{key, delta});
    }
}

int Monomial::jet_degree() const
{
    int d = 0;
    for (const auto& f : factors_)
        if (!key_is_symbol(f.key))
            d += f.exp;
    return d;
}

bool Monomial::has_jets() const
{
    return !factors_.empty() && !key_is_symbol(factors_.front().key);
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.x_exp_ = a.x_exp_ + b.x_exp_;
    auto& o = out.factors_;
    o.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin(), ie = a.factors_.end();
    auto j = b.factors_.begin(), je = b.factors_.end();
    while (i != ie && j != je) {
        if (i->key < j->key) {
            o.push_back(*i++);
        } else if (j->key < i->key) {
            o.push_back(*j++);
        } else {
            std::int32_t e = i->exp + j->exp;
            if (e != 0)
                o.push_back(VarPow{i->key, e});
            ++i;
            ++j;
        }
    }
    o.insert(o.end(), i, ie);
    o.insert(o.end(), j, je);
    return out;
}

bool operator<(const Monomial& a, const Monomial& b)
{
    if (a.x_exp_ != b.x_exp_)
        return a.x_exp_ < b.x_exp_;
    const auto& fa = a.factors_;
    const auto& fb = b.factors_;
    std::size_t n = std::min(fa.size(), fb.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (fa[k].key != fb[k].key)
            return fa[k].key < fb[k].key;
        if (fa[k].exp != fb[k].exp)
            return fa[k].exp < fb[k].exp;
    }
    return fa.size() < fb.size();
}

std::size_t Monomial::hash() const
{
    std::size_t h = 0x9e3779b97f4a7c15ull ^ x_exp_;
    for (const auto& f : factors_) {
        h ^= (static_cast<std::size_t>(f.key) * 0x100000001b3ull) + static_cast<std::size_t>(f.exp) +
             (h << 6) + (h >> 2);
    }
    return h;
}

Rational reduce_squares(const Ring* ring, Monomial& m)
{
    Rational factor(1);
    if (!ring || !ring->has_square_reductions())
        return factor;
    for (const auto& f : Monomial::Factors(m.factors())) {
        if (!key_is_symbol(f.key))
            continue;
        const auto& sq = ring->symbol_square(key_symbol(f.key));
        if (!sq || f.exp == 1)
            continue;
        std::int32_t e = f.exp;
        std::int32_t q = (e >= 0) ? e / 2 : -((-e + 1) / 2);
        std::int32_t b = e - 2 * q;
        factor *= sq->pow(q);
        m.mul_var(f.key, b - e);
    }
    return factor;
}

Rational multiply_monomials(const Ring* ring, const Monomial& a, const Monomial& b, Monomial& out)
{
    out = a * b;
    return reduce_squares(ring, out);
}

// ---------------------------------------------------------------------------
// TermAccumulator

void TermAccumulator::adopt(const RingPtr& r) { ring_ = common_ring(ring_, r); }

void TermAccumulator::add(const Monomial& m, const Rational& c)
{
    if (c.is_zero())
        return;
    buf_.push_back(Term{m, c});
    if (buf_.size() > 2 * compacted_ + 4096)
        compact();
}

void TermAccumulator::add(Monomial&& m, Rational&& c)
{
    if (c.is_zero())
        return;
    buf_.push_back(Term{std::move(m), std::move(c)});
    if (buf_.size() > 2 * compacted_ + 4096)
        compact();
}

void TermAccumulator::add(const DiffPoly& p)
{
    adopt(p.ring());
    for (const auto& t : p.terms())
        add(t.mono, t.coeff);
}

void TermAccumulator::add_scaled(const DiffPoly& p, const Rational& c)
{
    if (c.is_zero())
        return;
    adopt(p.ring());
    for (const auto& t : p.terms())
        add(t.mono, t.coeff * c);
}

void TermAccumulator::add_product(const DiffPoly& a, const DiffPoly& b, const Rational& c)
{
    if (a.is_zero() || b.is_zero() || c.is_zero())
        return;
    adopt(a.ring());
    adopt(b.ring());
    const Ring* ring = ring_.get();
    bool sq = ring && ring->has_square_reductions();
    for (const auto& ta : a.terms()) {
        Rational ca = ta.coeff * c;
        for (const auto& tb : b.terms()) {
            Monomial m = ta.mono * tb.mono;
            Rational coeff = ca * tb.coeff;
            if (sq)
                coeff *= reduce_squares(ring, m);
            add(std::move(m), std::move(coeff));
        }
    }
}

void TermAccumulator::compact()
{
    canonicalize(buf_, compacted_);
    compacted_ = buf_.size();
    check_limit(compacted_);
}

DiffPoly TermAccumulator::finish()
{
    compact();
    DiffPoly out;
    out.ring_ = ring_;
    out.terms_ = std::move(buf_);
    buf_.clear();
    compacted_ = 0;
    return out;
}

// ---------------------------------------------------------------------------
// DiffPoly

DiffPoly::DiffPoly(RingPtr ring, Rational c) : ring_(std::move(ring))
{
    if (!c.is_zero())
        terms_.push_back(Term{Monomial{}, std::move(c)});
}

DiffPoly DiffPoly::variable(RingPtr ring, Var v, int exp)
{
    Monomial m;
    switch (v.kind) {
    case Var::Kind::X:
        if (exp < 0)
            throw NotAUnit("x cannot carry a negative exponent");
        m.set_x_exp(static_cast<std::uint32_t>(exp));
        break;
    case Var::Kind::Jet:
        if (!ring || v.index >= ring->generators().size())
            throw Error("jet variable of an undeclared generator");
        m.mul_var(jet_key(v.index, v.order), exp);
        break;
    case Var::Kind::Symbol:
        if (!ring || v.index >= ring->symbols().size())
            throw Error("undeclared symbol");
        m.mul_var(symbol_key(v.index), exp);
        break;
    }
    Rational c = reduce_squares(ring.get(), m);
    return monomial(std::move(ring), std::move(m), std::move(c));
}

DiffPoly DiffPoly::symbol(RingPtr ring, const std::string& name, int exp)
{
    auto idx = ring ? ring->symbol_index(name) : std::nullopt;
    if (!idx)
        throw Error("undeclared symbol '" + name + "'");
    return variable(std::move(ring), Var::symbol(static_cast<std::uint32_t>(*idx)), exp);
}

DiffPoly DiffPoly::monomial(RingPtr ring, Monomial m, Rational c)
{
    DiffPoly p;
    p.ring_ = std::move(ring);
    if (!c.is_zero())
        p.terms_.push_back(Term{std::move(m), std::move(c)});
    return p;
}

DiffPoly DiffPoly::from_terms(RingPtr ring, std::vector<Term> terms)
{
    DiffPoly p;
    p.ring_ = std::move(ring);
    canonicalize(terms);
    p.terms_ = std::move(terms);
    return p;
}

bool DiffPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.front().mono.is_one());
}

Rational DiffPoly::constant_value() const
{
    if (!is_constant())
        throw Error("polynomial is not a rational constant");
    return constant_term();
}

Rational DiffPoly::constant_term() const
{
    if (!terms_.empty() && terms_.front().mono.is_one())
        return terms_.front().coeff; // the monomial 1 sorts first
    return Rational(0);
}

DiffPoly DiffPoly::operator-() const
{
    DiffPoly r(*this);
    for (auto& t : r.terms_)
        t.coeff = -t.coeff;
    return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o)
{
    ring_ = common_ring(ring_, o.ring_);
    if (o.terms_.empty())
        return *this;
    if (terms_.empty()) {
        terms_ = o.terms_;
        return *this;
    }
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin(), ie = terms_.end();
    auto j = o.terms_.begin(), je = o.terms_.end();
    while (i != ie && j != je) {
        if (i->mono < j->mono) {
            out.push_back(std::move(*i++));
        } else if (j->mono < i->mono) {
            out.push_back(*j++);
        } else {
            Rational c = i->coeff + j->coeff;
            if (!c.is_zero())
                out.push_back(Term{std::move(i->mono), std::move(c)});
            ++i;
            ++j;
        }
    }
    for (; i != ie; ++i)
        out.push_back(std::move(*i));
    for (; j != je; ++j)
        out.push_back(*j);
    terms_ = std::move(out);
    check_limit(terms_.size());
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) { return *this += -o; }

DiffPoly& DiffPoly::operator*=(const Rational& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_)
        t.coeff *= c;
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b)
{
    if (a.is_zero() || b.is_zero()) {
        DiffPoly z;
        z.ring_ = common_ring(a.ring_, b.ring_);
        return z;
    }
    if (a.is_constant()) {
        DiffPoly r(b);
        r.ring_ = common_ring(a.ring_, b.ring_);
        return r *= a.terms_.front().coeff;
    }
    if (b.is_constant()) {
        DiffPoly r(a);
        r.ring_ = common_ring(a.ring_, b.ring_);
        return r *= b.terms_.front().coeff;
    }
    TermAccumulator acc(common_ring(a.ring_, b.ring_));
    acc.add_product(a, b);
    return acc.finish();
}

DiffPoly& DiffPoly::operator*=(const DiffPoly& o) { return *this = *this * o; }

DiffPoly DiffPoly::pow(int e) const
{
    if (e < 0) {
        if (terms_.size() != 1)
            throw NotAUnit("negative power of a polynomial that is not a single monomial");
        const Term& t = terms_.front();
        if (t.mono.x_exp() != 0)
            throw NotAUnit("x cannot carry a negative exponent");
        Monomial m;
        for (const auto& f : t.mono.factors())
            m.mul_var(f.key, -f.exp * (-e));
        Rational c = t.coeff.pow(e) * reduce_squares(ring_.get(), m);
        return monomial(ring_, std::move(m), std::move(c));
    }
    DiffPoly result(ring_, Rational(1));
    DiffPoly base(*this);
    while (e > 0) {
        if (e & 1)
            result *= base;
        e >>= 1;
        if (e)
            base *= base;
    }
    return result;
}

bool operator==(const DiffPoly& a, const DiffPoly& b)
{
    if (a.terms_.size() != b.terms_.size())
        return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

DiffPoly DiffPoly::with_ring(RingPtr ring) const
{
    DiffPoly r(*this);
    r.ring_ = std::move(ring);
    return r;
}

// ---------------------------------------------------------------------------
// Calculus

namespace {

void derive_term(const Ring* ring, const Term& t, TermAccumulator& acc)
{
    const Monomial& m = t.mono;
    if (m.x_exp() > 0) {
        Monomial d = m;
        d.set_x_exp(m.x_exp() - 1);
        acc.add(std::move(d), t.coeff * Rational(m.x_exp()));
    }
    for (const auto& f : m.factors()) {
        VarKey next;
        if (key_is_symbol(f.key)) {
            auto img = ring ? ring->symbol_d_image(key_symbol(f.key)) : std::nullopt;
            if (!img)
                continue;
            next = symbol_key(static_cast<std::uint32_t>(*img));
        } else {
            next = jet_key(key_gen(f.key), key_order(f.key) + 1);
        }
        Monomial d = m;
        d.mul_var(f.key, -1);
        d.mul_var(next, 1);
        Rational c = t.coeff * Rational(f.exp);
        if (key_is_symbol(next))
            c *= reduce_squares(ring, d);
        acc.add(std::move(d), std::move(c));
    }
}

} // namespace

DiffPoly total_derivative(const DiffPoly& f)
{
    TermAccumulator acc(f.ring());
    for (const auto& t : f.terms())
        derive_term(f.ring().get(), t, acc);
    return acc.finish();
}

DiffPoly total_derivative(const DiffPoly& f, int k)
{
    DiffPoly r = f;
    for (int i = 0; i < k; ++i)
        r = total_derivative(r);
    return r;
}

DiffPoly partial_derivative(const DiffPoly& f, Var v)
{
    TermAccumulator acc(f.ring());
    for (const auto& t : f.terms()) {
        if (v.kind == Var::Kind::X) {
            if (t.mono.x_exp() == 0)
                continue;
            Monomial d = t.mono;
            d.set_x_exp(t.mono.x_exp() - 1);
            acc.add(std::move(d), t.coeff * Rational(t.mono.x_exp()));
            continue;
        }
        VarKey key = v.kind == Var::Kind::Jet ? jet_key(v.index, v.order) : symbol_key(v.index);
        std::int32_t e = t.mono.exp(key);
        if (e == 0)
            continue;
        Monomial d = t.mono;
        d.mul_var(key, -1);
        acc.add(std::move(d), t.coeff * Rational(e));
    }
    return acc.finish();
}

int diff_order(const DiffPoly& f)
{
    int best = kNegInfinity;
    for (const auto& t : f.terms())
        for (const auto& p : t.mono.factors())
            if (!key_is_symbol(p.key))
                best = std::max(best, static_cast<int>(key_order(p.key)));
    return best;
}

int diff_order(const DiffPoly& f, std::uint32_t gen)
{
    int best = kNegInfinity;
    for (const auto& t : f.terms())
        for (const auto& p : t.mono.factors())
            if (!key_is_symbol(p.key) && key_gen(p.key) == gen)
                best = std::max(best, static_cast<int>(key_order(p.key)));
    return best;
}

bool is_quasiconstant(const DiffPoly& f) { return diff_order(f) == kNegInfinity; }

DiffPoly variational_derivative(const DiffPoly& f, std::uint32_t gen)
{
    int top = diff_order(f, gen);
    if (top == kNegInfinity)
        return DiffPoly(f.ring(), Rational(0));
    // Horner: g_0 - D(g_1 - D(g_2 - ...))
    DiffPoly acc = partial_derivative(f, Var::jet(gen, static_cast<std::uint32_t>(top)));
    for (int n = top - 1; n >= 0; --n)
        acc = partial_derivative(f, Var::jet(gen, static_cast<std::uint32_t>(n))) - total_derivative(acc);
    return acc;
}

namespace {

DiffPoly integrate_quasiconstant_in_x(const DiffPoly& f)
{
    const Ring* ring = f.ring().get();
    TermAccumulator acc(f.ring());
    for (const auto& t : f.terms()) {
        for (const auto& p : t.mono.factors())
            if (key_is_symbol(p.key) && ring && !ring->symbol_is_constant(key_symbol(p.key)))
                throw NotExact("cannot integrate a quasiconstant containing the non-constant symbol '" +
                               ring->symbols()[key_symbol(p.key)].name + "'");
        Monomial m = t.mono;
        m.set_x_exp(t.mono.x_exp() + 1);
        acc.add(std::move(m), t.coeff / Rational(t.mono.x_exp() + 1));
    }
    return acc.finish();
}

} // namespace

DiffPoly integrate_total_derivative(const DiffPoly& input)
{
    const RingPtr& ring = input.ring();
    if (ring) {
        for (std::uint32_t g = 0; g < ring->generators().size(); ++g)
            if (!variational_derivative(input, g).is_zero())
                throw NotExact("not a total derivative: variational derivative with respect to '" +
                               ring->generators()[g] + "' is nonzero");
    }
    DiffPoly f = input;
    DiffPoly g(ring, Rational(0));
    for (int iter = 0; !f.is_zero(); ++iter) {
        if (iter > 100000)
            throw NotExact("integration did not terminate");
        int m = diff_order(f);
        if (m == kNegInfinity) {
            g += integrate_quasiconstant_in_x(f);
            break;
        }
        if (m == 0)
            throw NotExact("not a total derivative: leftover of differential order 0");
        std::uint32_t gen = 0;
        for (std::uint32_t i = 0; ring && i < ring->generators().size(); ++i)
            if (diff_order(f, i) == m) {
                gen = i;
                break;
            }
        VarKey top = jet_key(gen, static_cast<std::uint32_t>(m));
        VarKey below = jet_key(gen, static_cast<std::uint32_t>(m - 1));
        TermAccumulator h(ring);
        for (const auto& t : f.terms()) {
            std::int32_t e = t.mono.exp(top);
            if (e == 0)
                continue;
            if (e != 1)
                throw NotExact("not a total derivative: nonlinear in the highest derivative");
            Monomial a = t.mono;
            a.mul_var(top, -1);
            for (const auto& p : a.factors())
                if (!key_is_symbol(p.key) && static_cast<int>(key_order(p.key)) >= m)
                    throw NotExact("not a total derivative: product of highest derivatives");
            std::int32_t eb = a.exp(below);
            if (eb == -1)
                throw NotExact("not a total derivative in this ring: logarithmic antiderivative");
            a.mul_var(below, 1);
            h.add(std::move(a), t.coeff / Rational(eb + 1));
        }
        DiffPoly hp = h.finish();
        f -= total_derivative(hp);
        g += hp;
    }
    return g;
}

DiffPoly substitute(const DiffPoly& f, const Substitution& s)
{
    RingPtr target = s.target ? s.target : f.ring();
    const Ring* src = f.ring().get();
    // Cache of powers per variable.
    std::unordered_map<std::uint64_t, DiffPoly> cache;
    auto image_pow = [&](VarKey key, bool is_x, std::int32_t e) -> const DiffPoly& {
        std::uint64_t ck = (static_cast<std::uint64_t>(is_x ? 0xFFFFFFFFu : key) << 32) ^
                           static_cast<std::uint32_t>(e);
        auto it = cache.find(ck);
        if (it != cache.end())
            return it->second;
        DiffPoly base;
        if (is_x) {
            if (!s.x)
                throw Error("substitution does not cover the independent variable");
            base = *s.x;
        } else if (key_is_symbol(key)) {
            const std::string& name = src->symbols()[key_symbol(key)].name;
            base = DiffPoly::symbol(target, name);
        } else {
            auto jt = s.jets.find({key_gen(key), key_order(key)});
            if (jt == s.jets.end())
                throw Error("substitution does not cover " + var_name(*src, key));
            base = jt->second;
        }
        return cache.emplace(ck, base.pow(e)).first->second;
    };
    TermAccumulator acc(target);
    for (const auto& t : f.terms()) {
        DiffPoly prod(target, t.coeff);
        if (t.mono.x_exp() > 0)
            prod = prod * image_pow(0, true, static_cast<std::int32_t>(t.mono.x_exp()));
        for (const auto& p : t.mono.factors())
            prod = prod * image_pow(p.key, false, p.exp);
        acc.add(prod);
    }
    return acc.finish();
}

DiffPoly substitute_symbols(const DiffPoly& f, const std::map<std::size_t, DiffPoly>& images)
{
    TermAccumulator acc(f.ring());
    for (const auto& t : f.terms()) {
        Monomial rest = t.mono;
        DiffPoly prod(f.ring(), t.coeff);
        for (const auto& p : t.mono.factors()) {
            if (!key_is_symbol(p.key))
                continue;
            auto it = images.find(key_symbol(p.key));
            if (it == images.end())
                continue;
            rest.mul_var(p.key, -p.exp);
            prod = prod * it->second.pow(p.exp);
        }
        acc.add_product(prod, DiffPoly::monomial(f.ring(), rest, Rational(1)));
    }
    return acc.finish();
}

DiffPoly transport(const DiffPoly& f, const RingPtr& target)
{
    if (f.ring() == target || !f.ring())
        return f.with_ring(target);
    const Ring& src = *f.ring();
    std::vector<Term> out;
    out.reserve(f.size());
    for (const auto& t : f.terms()) {
        Monomial m;
        m.set_x_exp(t.mono.x_exp());
        for (const auto& p : t.mono.factors()) {
            if (key_is_symbol(p.key)) {
                const auto& name = src.symbols()[key_symbol(p.key)].name;
                auto idx = target->symbol_index(name);
                if (!idx)
                    throw Error("symbol '" + name + "' is not declared in the target ring");
                m.mul_var(symbol_key(static_cast<std::uint32_t>(*idx)), p.exp);
            } else {
                const auto& name = src.generators()[key_gen(p.key)];
                auto idx = target->generator_index(name);
                if (!idx)
                    throw Error("generator '" + name + "' is not declared in the target ring");
                m.mul_var(jet_key(static_cast<std::uint32_t>(*idx), key_order(p.key)), p.exp);
            }
        }
        Rational c = t.coeff * reduce_squares(target.get(), m);
        out.push_back(Term{std::move(m), std::move(c)});
    }
    return DiffPoly::from_terms(target, std::move(out));
}

// ---------------------------------------------------------------------------
// Printing

std::string var_name(const Ring& ring, VarKey key)
{
    if (key_is_symbol(key))
        return ring.symbols()[key_symbol(key)].name;
    std::string s = ring.generators()[key_gen(key)];
    std::uint32_t n = key_order(key);
    if (n <= 3)
        return s + std::string(n, '\'');
    return s + "^(" + std::to_string(n) + ")";
}

namespace {

bool display_less(const Monomial& a, const Monomial& b)
{
    int da = a.jet_degree(), db = b.jet_degree();
    if (da != db)
        return da > db;
    if (a.x_exp() != b.x_exp())
        return a.x_exp() > b.x_exp();
    return b < a;
}

std::string power_str(const std::string& base, std::int64_t e)
{
    return e == 1 ? base : base + "^" + std::to_string(e);
}

} // namespace

std::string to_string(const DiffPoly& f)
{
    if (f.is_zero())
        return "0";
    std::vector<const Term*> order;
    for (const auto& t : f.terms())
        order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const Term* a, const Term* b) { return display_less(a->mono, b->mono); });
    const Ring* ring = f.ring().get();
    std::ostringstream os;
    bool first = true;
    for (const Term* t : order) {
        std::vector<std::string> num, den;
        if (t->mono.x_exp() > 0)
            num.push_back(power_str(ring ? ring->x_name() : "x", t->mono.x_exp()));
        for (const auto& p : t->mono.factors()) {
            std::string n = var_name(*ring, p.key);
            if (p.exp > 0)
                num.push_back(power_str(n, p.exp));
            else
                den.push_back(power_str(n, -static_cast<std::int64_t>(p.exp)));
        }
        Rational c = t->coeff;
        bool neg = c.sign() < 0;
        if (neg)
            c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        std::string body;
        for (std::size_t i = 0; i < num.size(); ++i)
            body += (i ? "*" : "") + num[i];
        if (body.empty())
            os << c.str();
        else if (c.is_one())
            os << body;
        else
            os << c.str() << "*" << body;
        if (den.size() == 1) {
            os << "/" << den[0];
        } else if (den.size() > 1) {
            os << "/(";
            for (std::size_t i = 0; i < den.size(); ++i)
                os << (i ? "*" : "") << den[i];
            os << ")";
        }
    }
    return os.str();
}

} // namespace pva
