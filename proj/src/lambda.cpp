#include "pva/lambda.hpp"

#include <algorithm>
#include <sstream>

namespace pva {

// ---------------------------------------------------------------------------
// LambdaPoly

LambdaPoly::LambdaPoly(DiffPoly c, int l, int m) : ring_(c.ring())
{
    if (!c.is_zero())
        coeffs_.emplace(Exp{l, m}, std::move(c));
}

DiffPoly LambdaPoly::coeff(int l, int m) const
{
    auto it = coeffs_.find({l, m});
    return it == coeffs_.end() ? DiffPoly(ring_, Rational(0)) : it->second;
}

int LambdaPoly::degree_lambda() const
{
    int d = -1;
    for (const auto& [e, c] : coeffs_)
        d = std::max(d, e.first);
    return d;
}

int LambdaPoly::degree_mu() const
{
    int d = -1;
    for (const auto& [e, c] : coeffs_)
        d = std::max(d, e.second);
    return d;
}

bool LambdaPoly::has_mu() const { return degree_mu() > 0; }

std::size_t LambdaPoly::term_count() const
{
    std::size_t n = 0;
    for (const auto& [e, c] : coeffs_)
        n += c.size();
    return n;
}

void LambdaPoly::add(int l, int m, const DiffPoly& c)
{
    if (c.is_zero())
        return;
    ring_ = common_ring(ring_, c.ring());
    auto [it, fresh] = coeffs_.try_emplace(Exp{l, m}, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            coeffs_.erase(it);
    }
}

LambdaPoly LambdaPoly::operator-() const
{
    LambdaPoly r(*this);
    for (auto& [e, c] : r.coeffs_)
        c = -c;
    return r;
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o)
{
    ring_ = common_ring(ring_, o.ring_);
    for (const auto& [e, c] : o.coeffs_)
        add(e.first, e.second, c);
    return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) { return *this += -o; }

LambdaPoly& LambdaPoly::operator*=(const DiffPoly& f)
{
    ring_ = common_ring(ring_, f.ring());
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        it->second = it->second * f;
        if (it->second.is_zero())
            it = coeffs_.erase(it);
        else
            ++it;
    }
    return *this;
}

LambdaPoly& LambdaPoly::operator*=(const Rational& c)
{
    if (c.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [e, p] : coeffs_)
        p *= c;
    return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b)
{
    LambdaPoly r(common_ring(a.ring_, b.ring_));
    for (const auto& [ea, ca] : a.coeffs_)
        for (const auto& [eb, cb] : b.coeffs_)
            r.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
}

bool operator==(const LambdaPoly& a, const LambdaPoly& b) { return a.coeffs_ == b.coeffs_; }

LambdaPoly LambdaPoly::shifted(int l, int m) const
{
    LambdaPoly r(ring_);
    for (const auto& [e, c] : coeffs_)
        r.coeffs_.emplace(Exp{e.first + l, e.second + m}, c);
    return r;
}

LambdaPoly total_derivative(const LambdaPoly& p)
{
    LambdaPoly r(p.ring());
    for (const auto& [e, c] : p.coeffs())
        r.add(e.first, e.second, total_derivative(c));
    return r;
}

LambdaPoly swap_formal(const LambdaPoly& p)
{
    LambdaPoly r(p.ring());
    for (const auto& [e, c] : p.coeffs())
        r.add(e.second, e.first, c);
    return r;
}

namespace {

// (a*lambda + b*mu)^s as a LambdaPoly with rational coefficients.
LambdaPoly linear_power(const RingPtr& ring, int a, int b, int s)
{
    LambdaPoly r(ring);
    for (int q = 0; q <= s; ++q) {
        Rational c = binomial(s, q) * Rational(a).pow(q) * Rational(b).pow(s - q);
        if (!c.is_zero())
            r.add(q, s - q, DiffPoly(ring, c));
    }
    return r;
}

} // namespace

LambdaPoly shift_power(const LambdaPoly& p, int a, int b, int n)
{
    LambdaPoly r(p.ring());
    LambdaPoly d = p;
    for (int k = 0; k <= n && !d.is_zero(); ++k) {
        LambdaPoly lin = linear_power(p.ring(), a, b, n - k);
        r += (lin * d) * binomial(n, k);
        if (k < n)
            d = total_derivative(d);
    }
    return r;
}

LambdaPoly substitute_lambda(const LambdaPoly& p, int a, int b)
{
    LambdaPoly r(p.ring());
    for (const auto& [e, c] : p.coeffs()) {
        LambdaPoly lin = linear_power(p.ring(), a, b, e.first);
        r += (lin * c).shifted(0, e.second);
    }
    return r;
}

LambdaPoly reflect(const LambdaPoly& p)
{
    LambdaPoly r(p.ring());
    for (const auto& [e, c] : p.coeffs()) {
        if (e.second != 0)
            throw Error("reflect: expected a polynomial in lambda only");
        int k = e.first;
        DiffPoly d = c;
        Rational sign = (k % 2) ? Rational(-1) : Rational(1);
        for (int s = 0; s <= k && !d.is_zero(); ++s) {
            r.add(k - s, 0, d * (sign * binomial(k, s)));
            if (s < k)
                d = total_derivative(d);
        }
    }
    return r;
}

std::string to_string(const LambdaPoly& p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
        auto [l, m] = it->first;
        std::string vars;
        auto pw = [](const char* name, int e) {
            return e == 1 ? std::string(name) : std::string(name) + "^" + std::to_string(e);
        };
        if (l > 0)
            vars += pw("l", l);
        if (m > 0)
            vars += (vars.empty() ? "" : "*") + pw("mu", m);
        std::string c = to_string(it->second);
        bool neg = false;
        if (it->second.size() == 1 && c[0] == '-') {
            neg = true;
            c = c.substr(1);
        } else if (it->second.size() > 1 && (!vars.empty() || !first)) {
            c = "(" + c + ")";
        }
        if (!first)
            os << (neg ? " - " : " + ");
        else if (neg)
            os << "-";
        first = false;
        if (vars.empty())
            os << c;
        else if (c == "1")
            os << vars;
        else
            os << c << "*" << vars;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Bracket tables

BracketTable::BracketTable(RingPtr r) : ring(std::move(r))
{
    std::size_t n = ring->generators().size();
    entries.assign(n, std::vector<LambdaPoly>(n, LambdaPoly(ring)));
    weights.assign(n, std::nullopt);
}

BracketTable scalar_table(const LambdaPoly& p)
{
    if (!p.ring())
        throw Error("bracket has no ring");
    BracketTable t(p.ring());
    if (t.size() != 1)
        throw Error("scalar bracket table needs exactly one generator");
    t.set(0, 0, p);
    return t;
}

namespace {

using Dense = std::vector<DiffPoly>; // coefficients by power of the single formal variable

Dense to_dense(const LambdaPoly& p, const RingPtr& ring)
{
    Dense d;
    for (const auto& [e, c] : p.coeffs()) {
        if (e.second != 0)
            throw Error("bracket table entries must be polynomials in lambda only");
        if (static_cast<int>(d.size()) <= e.first)
            d.resize(e.first + 1, DiffPoly(ring, Rational(0)));
        d[e.first] = c;
    }
    return d;
}

// Caches D^r of a dense polynomial.
class DerivativeCache {
public:
    explicit DerivativeCache(Dense p) { levels_.push_back(std::move(p)); }
    const Dense& get(int r)
    {
        while (static_cast<int>(levels_.size()) <= r) {
            const Dense& prev = levels_.back();
            Dense next;
            next.reserve(prev.size());
            for (const auto& c : prev)
                next.push_back(total_derivative(c));
            levels_.push_back(std::move(next));
        }
        return levels_[r];
    }
    bool is_zero() const
    {
        for (const auto& c : levels_.front())
            if (!c.is_zero())
                return false;
        return true;
    }

private:
    std::vector<Dense> levels_;
};

struct Output {
    RingPtr ring;
    std::vector<TermAccumulator> acc;
    TermAccumulator& at(std::size_t k)
    {
        while (acc.size() <= k)
            acc.emplace_back(ring);
        return acc[k];
    }
    Dense finish()
    {
        Dense d;
        for (auto& a : acc)
            d.push_back(a.finish());
        return d;
    }
};

// out += sum_n w_n (lambda + D)^n P.
void accumulate_shifted(Output& out, const std::map<int, DiffPoly>& weights, DerivativeCache& p)
{
    for (const auto& [n, w] : weights) {
        if (w.is_zero())
            continue;
        for (int r = 0; r <= n; ++r) {
            const Dense& dr = p.get(r);
            Rational b = binomial(n, r);
            for (std::size_t t = 0; t < dr.size(); ++t)
                if (!dr[t].is_zero())
                    out.at(n - r + t).add_product(w, dr[t], b);
        }
    }
}

std::map<int, DiffPoly> jet_partials(const DiffPoly& f, std::uint32_t gen)
{
    std::map<int, DiffPoly> out;
    int top = diff_order(f, gen);
    for (int n = 0; n <= top; ++n) {
        DiffPoly d = partial_derivative(f, Var::jet(gen, static_cast<std::uint32_t>(n)));
        if (!d.is_zero())
            out.emplace(n, std::move(d));
    }
    return out;
}

std::map<int, DiffPoly> dense_weights(const Dense& d)
{
    std::map<int, DiffPoly> w;
    for (std::size_t k = 0; k < d.size(); ++k)
        if (!d[k].is_zero())
            w.emplace(static_cast<int>(k), d[k]);
    return w;
}

// Precomputes, for a fixed first argument f, the polynomials
// B_j = sum_i {u_i _{lambda+D} u_j}-> (-lambda-D)^m df/du_i^(m), so that
// {f_lambda g} = sum_{j,n} dg/du_j^(n) (lambda+D)^n B_j.
class FirstSlot {
public:
    FirstSlot(const DiffPoly& f, const BracketTable& t) : ring_(t.ring)
    {
        std::size_t l = t.size();
        std::vector<std::optional<DerivativeCache>> a(l);
        for (std::size_t i = 0; i < l; ++i) {
            auto parts = jet_partials(f, static_cast<std::uint32_t>(i));
            if (parts.empty())
                continue;
            // A_i = sum_m (-lambda-D)^m df/du_i^(m)
            Output ai{ring_, {}};
            for (const auto& [m, fm] : parts) {
                DiffPoly d = fm;
                Rational sign = (m % 2) ? Rational(-1) : Rational(1);
                for (int r = 0; r <= m && !d.is_zero(); ++r) {
                    ai.at(m - r).add_scaled(d, sign * binomial(m, r));
                    if (r < m)
                        d = total_derivative(d);
                }
            }
            a[i].emplace(ai.finish());
        }
        for (std::size_t j = 0; j < l; ++j) {
            Output out{ring_, {}};
            for (std::size_t i = 0; i < l; ++i)
                if (a[i])
                    accumulate_shifted(out, dense_weights(to_dense(t.entry(i, j), ring_)), *a[i]);
            caches_.emplace_back(out.finish());
        }
    }

    Dense apply(const DiffPoly& g)
    {
        Output out{ring_, {}};
        for (std::size_t j = 0; j < caches_.size(); ++j) {
            if (caches_[j].is_zero())
                continue;
            accumulate_shifted(out, jet_partials(g, static_cast<std::uint32_t>(j)), caches_[j]);
        }
        return out.finish();
    }

private:
    RingPtr ring_;
    std::vector<DerivativeCache> caches_;
};

LambdaPoly from_dense(const Dense& d, const RingPtr& ring, Formal var, int l0 = 0, int m0 = 0)
{
    LambdaPoly r(ring);
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (var == Formal::Lambda)
            r.add(static_cast<int>(k) + l0, m0, d[k]);
        else
            r.add(l0, static_cast<int>(k) + m0, d[k]);
    }
    return r;
}

RingPtr table_ring(const BracketTable& t)
{
    if (!t.ring)
        throw Error("bracket table has no ring");
    return t.ring;
}

DiffPoly generator(const RingPtr& ring, std::size_t i) { return DiffPoly::jet(ring, static_cast<std::uint32_t>(i), 0); }

} // namespace

LambdaPoly bracket(const DiffPoly& f, const DiffPoly& g, const BracketTable& t, Formal var)
{
    RingPtr ring = table_ring(t);
    FirstSlot slot(f.with_ring(ring), t);
    return from_dense(slot.apply(g.with_ring(ring)), ring, var);
}

LambdaPoly bracket(const LambdaPoly& f, const LambdaPoly& g, const BracketTable& t, Formal var)
{
    RingPtr ring = table_ring(t);
    LambdaPoly r(ring);
    for (const auto& [ef, cf] : f.coeffs()) {
        FirstSlot slot(cf.with_ring(ring), t);
        for (const auto& [eg, cg] : g.coeffs())
            r += from_dense(slot.apply(cg.with_ring(ring)), ring, var, ef.first + eg.first,
                            ef.second + eg.second);
    }
    return r;
}

LambdaPoly bracket_poly_first_slot(const LambdaPoly& p, const DiffPoly& g, const BracketTable& t)
{
    RingPtr ring = table_ring(t);
    LambdaPoly r(ring);
    for (const auto& [e, c] : p.coeffs()) {
        if (e.second != 0)
            throw Error("bracket_poly_first_slot: expected a polynomial in lambda only");
        FirstSlot slot(c.with_ring(ring), t);
        LambdaPoly nu = from_dense(slot.apply(g.with_ring(ring)), ring, Formal::Lambda);
        r += substitute_lambda(nu, 1, 1).shifted(e.first, 0);
    }
    return r;
}

AxiomReport check_skew(const BracketTable& t)
{
    AxiomReport rep;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i; j < t.size(); ++j) {
            LambdaPoly res = t.entry(j, i) + reflect(t.entry(i, j));
            if (!res.is_zero()) {
                rep.pass = false;
                rep.residuals.push_back({{i, j}, std::move(res)});
            }
        }
    return rep;
}

AxiomReport check_jacobi(const BracketTable& t)
{
    RingPtr ring = table_ring(t);
    std::size_t l = t.size();
    auto idx = [l](std::size_t i, std::size_t j, std::size_t k) { return (i * l + j) * l + k; };

    // inner[i,j,k] = {u_i lambda {u_j mu u_k}}
    std::vector<LambdaPoly> inner(l * l * l, LambdaPoly(ring));
    for (std::size_t i = 0; i < l; ++i) {
        FirstSlot slot(generator(ring, i), t);
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t k = 0; k < l; ++k) {
                LambdaPoly acc(ring);
                for (const auto& [e, c] : t.entry(j, k).coeffs())
                    acc += from_dense(slot.apply(c), ring, Formal::Lambda, 0, e.first);
                inner[idx(i, j, k)] = std::move(acc);
            }
    }

    AxiomReport rep;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) {
            // {{u_i lambda u_j}_{lambda+mu} u_k} for all k at once
            std::vector<LambdaPoly> outer(l, LambdaPoly(ring));
            for (const auto& [e, c] : t.entry(i, j).coeffs()) {
                FirstSlot slot(c, t);
                for (std::size_t k = 0; k < l; ++k) {
                    LambdaPoly nu = from_dense(slot.apply(generator(ring, k)), ring, Formal::Lambda);
                    outer[k] += substitute_lambda(nu, 1, 1).shifted(e.first, 0);
                }
            }
            for (std::size_t k = 0; k < l; ++k) {
                LambdaPoly res = inner[idx(i, j, k)] - swap_formal(inner[idx(j, i, k)]) - outer[k];
                if (!res.is_zero()) {
                    rep.pass = false;
                    rep.residuals.push_back({{i, j, k}, std::move(res)});
                }
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Canonical form, order and level

namespace {

// (D + 2 lambda)^j f
LambdaPoly odd_power_term(int j, const DiffPoly& f)
{
    LambdaPoly r(f.ring());
    DiffPoly d = f;
    for (int s = 0; s <= j && !d.is_zero(); ++s) {
        r.add(j - s, 0, d * (binomial(j, s) * Rational(2).pow(j - s)));
        if (s < j)
            d = total_derivative(d);
    }
    return r;
}

} // namespace

std::map<int, DiffPoly> canonical_form(const LambdaPoly& p)
{
    if (p.has_mu())
        throw NotSkewForm("canonical form needs a polynomial in lambda only");
    std::map<int, DiffPoly> out;
    LambdaPoly rest = p;
    while (!rest.is_zero()) {
        int k = rest.degree_lambda();
        DiffPoly top = rest.coeff(k);
        if (k % 2 == 0)
            throw NotSkewForm("nonzero coefficient of lambda^" + std::to_string(k) +
                              " left after peeling odd powers of (D + 2 lambda)");
        DiffPoly f = top * Rational(2).pow(-k);
        rest -= odd_power_term(k, f);
        out.emplace(k, std::move(f));
    }
    return out;
}

LambdaPoly from_canonical_form(const std::map<int, DiffPoly>& f, const RingPtr& ring)
{
    LambdaPoly r(ring);
    for (const auto& [j, c] : f)
        r += odd_power_term(j, c);
    return r;
}

OrderLevel order_and_level(const LambdaPoly& p)
{
    auto f = canonical_form(p);
    OrderLevel ol;
    if (f.empty())
        throw NotSkewForm("zero bracket has no order");
    ol.order = f.rbegin()->first;
    for (const auto& [j, c] : f) {
        int o = diff_order(c);
        if (o != kNegInfinity)
            ol.level = std::max(ol.level, j + o);
    }
    return ol;
}

bool check_level_bounds(int n, int m)
{
    if (m == kNegInfinity)
        return true; // quasiconstant coefficients: no constraint
    if (n < 1 || n % 2 == 0)
        return false;
    if (2 * m < n - 1 || m > 2 * n + 1 || m == 2 * n)
        return false;
    if (n % 4 == 3 && 2 * m == n + 1)
        return false;
    if (n % 4 == 1 && (2 * m == n - 1 || 2 * m == n + 3))
        return false;
    return true;
}

} // namespace pva
