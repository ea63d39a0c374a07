#include "pva/transform.hpp"

#include <algorithm>
#include <sstream>

namespace pva {

namespace {

struct Split {
    Rational coeff{1};
    Monomial mono; // Laurent part in jets and symbols
    std::uint32_t x_exp = 0;
    DiffPoly rest; // leading coefficient 1, no monomial content
};

// p = coeff * mono * x^x_exp * rest
Split split_content(const DiffPoly& p)
{
    Split s;
    const auto terms = p.terms();
    s.coeff = terms.front().coeff;
    std::map<VarKey, std::int32_t> lo;
    std::uint32_t xlo = terms.front().mono.x_exp();
    bool first = true;
    for (const auto& t : terms) {
        xlo = std::min(xlo, t.mono.x_exp());
        std::map<VarKey, std::int32_t> here;
        for (const auto& f : t.mono.factors())
            here[f.key] = f.exp;
        if (first) {
            lo = here;
            first = false;
            continue;
        }
        for (auto& [k, e] : lo) {
            auto it = here.find(k);
            e = std::min(e, it == here.end() ? 0 : it->second);
        }
        for (const auto& [k, e] : here)
            if (!lo.count(k))
                lo[k] = std::min(0, e);
    }
    for (const auto& [k, e] : lo)
        if (e != 0)
            s.mono.mul_var(k, e);
    s.x_exp = xlo;
    std::vector<Term> out;
    Rational inv = s.coeff.inverse();
    for (const auto& t : terms) {
        Monomial m = t.mono;
        for (const auto& [k, e] : lo)
            if (e != 0)
                m.mul_var(k, -e);
        m.set_x_exp(m.x_exp() - xlo);
        out.push_back({std::move(m), t.coeff * inv});
    }
    s.rest = DiffPoly::from_terms(p.ring(), std::move(out));
    return s;
}

DiffPoly factor_power(const RatDiffFn::Factors& fs, const std::function<int(std::size_t)>& exp, const RingPtr& r)
{
    DiffPoly out(r, Rational(1));
    for (std::size_t i = 0; i < fs.size(); ++i) {
        int e = exp(i);
        for (int k = 0; k < e; ++k)
            out = out * fs[i].first;
    }
    return out;
}

int find_factor(const RatDiffFn::Factors& fs, const DiffPoly& p)
{
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i].first == p)
            return static_cast<int>(i);
    return -1;
}

} // namespace

RatDiffFn::RatDiffFn(const DiffPoly& num) : num_(num) {}

void RatDiffFn::add_factor(const DiffPoly& p, int e)
{
    if (e == 0)
        return;
    int i = find_factor(den_, p);
    if (i < 0)
        den_.emplace_back(p, e);
    else
        den_[i].second += e;
}

void RatDiffFn::cancel_x()
{
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    DiffPoly x = DiffPoly::x(ring());
    int i = find_factor(den_, x);
    if (i < 0)
        return;
    std::uint32_t lo = num_.terms().front().mono.x_exp();
    for (const auto& t : num_.terms())
        lo = std::min(lo, t.mono.x_exp());
    int c = std::min<int>(static_cast<int>(lo), den_[i].second);
    if (c == 0)
        return;
    std::vector<Term> out;
    for (const auto& t : num_.terms()) {
        Monomial m = t.mono;
        m.set_x_exp(m.x_exp() - c);
        out.push_back({std::move(m), t.coeff});
    }
    num_ = DiffPoly::from_terms(ring(), std::move(out));
    if ((den_[i].second -= c) == 0)
        den_.erase(den_.begin() + i);
}

RatDiffFn RatDiffFn::quotient(const DiffPoly& num, const DiffPoly& den)
{
    return RatDiffFn(num) * RatDiffFn(den).inverse();
}

DiffPoly RatDiffFn::den_poly() const
{
    return factor_power(den_, [&](std::size_t i) { return den_[i].second; }, ring());
}

DiffPoly RatDiffFn::to_diffpoly() const
{
    if (!den_.empty())
        throw Error("rational function has a nontrivial denominator: " + to_string(*this));
    return num_;
}

RatDiffFn RatDiffFn::operator-() const
{
    RatDiffFn r(*this);
    r.num_ = -r.num_;
    return r;
}

RatDiffFn& RatDiffFn::operator+=(const RatDiffFn& o)
{
    if (o.is_zero())
        return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    Factors merged = den_;
    for (const auto& [p, e] : o.den_) {
        int i = find_factor(merged, p);
        if (i < 0)
            merged.emplace_back(p, e);
        else
            merged[i].second = std::max(merged[i].second, e);
    }
    auto exp_in = [](const Factors& fs, const DiffPoly& p) {
        int i = find_factor(fs, p);
        return i < 0 ? 0 : fs[i].second;
    };
    RingPtr r = common_ring(ring(), o.ring());
    DiffPoly a = num_ * factor_power(merged, [&](std::size_t i) { return merged[i].second - exp_in(den_, merged[i].first); }, r);
    DiffPoly b =
        o.num_ * factor_power(merged, [&](std::size_t i) { return merged[i].second - exp_in(o.den_, merged[i].first); }, r);
    num_ = a + b;
    den_ = num_.is_zero() ? Factors{} : std::move(merged);
    cancel_x();
    return *this;
}

RatDiffFn& RatDiffFn::operator*=(const RatDiffFn& o)
{
    num_ = num_ * o.num_;
    if (num_.is_zero()) {
        den_.clear();
        return *this;
    }
    for (const auto& [p, e] : o.den_)
        add_factor(p, e);
    cancel_x();
    return *this;
}

RatDiffFn RatDiffFn::inverse() const
{
    if (is_zero())
        throw Error("division by zero rational function");
    Split s = split_content(num_);
    Monomial inv;
    for (const auto& f : s.mono.factors())
        inv.mul_var(f.key, -f.exp);
    RatDiffFn r(den_poly() * DiffPoly::monomial(ring(), inv, s.coeff.inverse()));
    if (s.x_exp)
        r.add_factor(DiffPoly::x(ring()), static_cast<int>(s.x_exp));
    if (s.rest.size() > 1)
        r.add_factor(s.rest, 1);
    r.cancel_x();
    return r;
}

RatDiffFn RatDiffFn::pow(int e) const
{
    if (e < 0)
        return inverse().pow(-e);
    RatDiffFn r(ring(), Rational(1));
    for (int i = 0; i < e; ++i)
        r *= *this;
    return r;
}

bool operator==(const RatDiffFn& a, const RatDiffFn& b)
{
    RatDiffFn::Factors fa = a.den_, fb = b.den_;
    // cancel shared factor powers before cross-multiplying
    for (auto& [p, e] : fa) {
        int i = find_factor(fb, p);
        if (i < 0)
            continue;
        int m = std::min(e, fb[i].second);
        e -= m;
        fb[i].second -= m;
    }
    RingPtr r = common_ring(a.ring(), b.ring());
    DiffPoly da = factor_power(fa, [&](std::size_t i) { return fa[i].second; }, r);
    DiffPoly db = factor_power(fb, [&](std::size_t i) { return fb[i].second; }, r);
    return a.num_ * db == b.num_ * da;
}

RatDiffFn derive(const RatDiffFn& f, const std::function<DiffPoly(const DiffPoly&)>& d)
{
    if (f.is_laurent())
        return RatDiffFn(d(f.num()));
    // (n / prod p^e)' = (n' prod p - n sum e p' prod_{q != p} q) / prod p^(e+1),
    // with only the factors that d moves entering the products
    const auto& fs = f.den();
    std::vector<DiffPoly> dp;
    std::vector<std::size_t> moving;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        DiffPoly g = d(fs[i].first);
        if (!g.is_zero()) {
            moving.push_back(i);
            dp.push_back(std::move(g));
        }
    }
    RingPtr r = f.ring();
    DiffPoly all(r, Rational(1));
    for (auto i : moving)
        all = all * fs[i].first;
    DiffPoly num = d(f.num()) * all;
    for (std::size_t a = 0; a < moving.size(); ++a) {
        DiffPoly others(r, Rational(1));
        for (std::size_t b = 0; b < moving.size(); ++b)
            if (b != a)
                others = others * fs[moving[b]].first;
        num -= f.num() * dp[a] * others * Rational(fs[moving[a]].second);
    }
    RatDiffFn out(num);
    RatDiffFn den(r, Rational(1));
    for (std::size_t i = 0; i < fs.size(); ++i) {
        bool moves = std::find(moving.begin(), moving.end(), i) != moving.end();
        den *= RatDiffFn(fs[i].first).pow(-(fs[i].second + (moves ? 1 : 0)));
    }
    return num.is_zero() ? RatDiffFn(num) : out * den;
}

RatDiffFn total_derivative(const RatDiffFn& f)
{
    return derive(f, [](const DiffPoly& p) { return total_derivative(p); });
}

RatDiffFn partial_derivative(const RatDiffFn& f, Var v)
{
    return derive(f, [v](const DiffPoly& p) { return partial_derivative(p, v); });
}

std::string to_string(const RatDiffFn& f)
{
    std::string n = to_string(f.num());
    if (f.is_laurent())
        return n;
    std::vector<std::string> parts;
    for (const auto& [p, e] : f.den()) {
        std::string s = to_string(p);
        if (p.size() > 1)
            s = "(" + s + ")";
        if (e != 1)
            s += "^" + std::to_string(e);
        parts.push_back(s);
    }
    std::string den = parts.size() == 1 ? parts[0] : "(" + parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i)
        den += "*" + parts[i];
    if (parts.size() > 1)
        den += ")";
    return (f.num().size() > 1 ? "(" + n + ")" : n) + "/" + den;
}

RatDiffOp::RatDiffOp(const RatDiffFn& f) : ring_(f.ring())
{
    add(0, f);
}

RatDiffOp::RatDiffOp(const DiffOp& a) : ring_(a.ring())
{
    for (const auto& [k, c] : a.coeffs())
        add(k, RatDiffFn(c));
}

RatDiffOp RatDiffOp::D(RingPtr ring, int k)
{
    RatDiffOp r(ring);
    r.add(k, RatDiffFn(ring, Rational(1)));
    return r;
}

RatDiffFn RatDiffOp::coeff(int k) const
{
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? RatDiffFn(ring_, Rational(0)) : it->second;
}

bool RatDiffOp::is_laurent() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.is_laurent(); });
}

DiffOp RatDiffOp::to_diffop() const
{
    DiffOp r(ring_);
    for (const auto& [k, c] : coeffs_)
        r.add(k, c.to_diffpoly());
    return r;
}

void RatDiffOp::add(int k, const RatDiffFn& f)
{
    if (f.is_zero())
        return;
    ring_ = common_ring(ring_, f.ring());
    auto [it, fresh] = coeffs_.try_emplace(k, f);
    if (!fresh) {
        it->second += f;
        if (it->second.is_zero())
            coeffs_.erase(it);
    }
}

RatDiffOp RatDiffOp::operator-() const
{
    RatDiffOp r(*this);
    for (auto& [k, c] : r.coeffs_)
        c = -c;
    return r;
}

RatDiffOp& RatDiffOp::operator+=(const RatDiffOp& o)
{
    ring_ = common_ring(ring_, o.ring_);
    for (const auto& [k, c] : o.coeffs_)
        add(k, c);
    return *this;
}

RatDiffOp operator*(const RatDiffOp& a, const RatDiffOp& b)
{
    RatDiffOp r(common_ring(a.ring_, b.ring_));
    int top = a.degree();
    for (const auto& [j, bj] : b.coeffs_) {
        std::vector<RatDiffFn> d{bj};
        for (int s = 1; s <= top; ++s)
            d.push_back(total_derivative(d.back()));
        for (const auto& [i, ai] : a.coeffs_)
            for (int s = 0; s <= i; ++s)
                if (!d[s].is_zero())
                    r.add(i - s + j, ai * d[s] * RatDiffFn(r.ring(), binomial(i, s)));
    }
    return r;
}

bool operator==(const RatDiffOp& a, const RatDiffOp& b) { return (a - b).is_zero(); }

RatDiffOp adjoint(const RatDiffOp& a)
{
    RatDiffOp r(a.ring());
    for (const auto& [k, f] : a.coeffs()) {
        Rational sign = (k % 2) ? Rational(-1) : Rational(1);
        RatDiffFn d = f;
        for (int s = 0; s <= k && !d.is_zero(); ++s) {
            r.add(k - s, d * RatDiffFn(a.ring(), sign * binomial(k, s)));
            if (s < k)
                d = total_derivative(d);
        }
    }
    return r;
}

std::string to_string(const RatDiffOp& a)
{
    if (a.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
        if (!first)
            os << " + ";
        first = false;
        int k = it->first;
        std::string c = to_string(it->second);
        if (k == 0) {
            os << c;
            continue;
        }
        std::string d = k == 1 ? "D" : "D^" + std::to_string(k);
        if (c == "1")
            os << d;
        else if (c == "-1")
            os << "-" << d;
        else
            os << "(" << c << ")*" << d;
    }
    return os.str();
}

RingPtr contact_ring(const RingPtr& source, const std::string& gen, const std::string& var)
{
    return make_ring({gen}, source ? source->symbols() : std::vector<ParamSymbol>{}, var);
}

RatDiffFn is_contact(const ContactMap& m)
{
    RingPtr r = m.ring();
    Var v0 = Var::jet(0, 0), v1 = Var::jet(0, 1);
    for (const RatDiffFn* f : {&m.phi, &m.psi}) {
        int ord = std::max(diff_order(f->num()), 0);
        for (const auto& [p, e] : f->den())
            ord = std::max(ord, diff_order(p));
        if (ord > 1)
            throw NotContact("map depends on derivatives of order above one");
    }
    RatDiffFn dphi = total_derivative(m.phi), dpsi = total_derivative(m.psi);
    if (partial_derivative(m.phi, v1) * dpsi != partial_derivative(m.psi, v1) * dphi)
        throw NotContact("tangency condition phi_v' psi' = psi_v' phi' fails");
    if (dphi.is_zero())
        throw NotContact("phi' vanishes");
    RatDiffFn rho_phi = partial_derivative(m.psi, v0) * dphi - partial_derivative(m.phi, v0) * dpsi;
    if (rho_phi.is_zero())
        throw NotContact("rho phi' vanishes");
    return rho_phi / dphi;
}

namespace {

class Pullback {
public:
    explicit Pullback(const ContactMap& m) : m_(m), ring_(m.ring()), inv_dphi_(total_derivative(m.phi).inverse())
    {
        phi_is_y_ = m.phi == RatDiffFn(DiffPoly::x(ring_));
        jets_.push_back(m.psi);
    }

    RatDiffFn operator()(const DiffPoly& f)
    {
        const Ring& src = *f.ring();
        RatDiffFn out(ring_, Rational(0));
        for (const auto& t : f.terms()) {
            RatDiffFn term(ring_, t.coeff);
            if (t.mono.x_exp())
                term *= m_.phi.pow(static_cast<int>(t.mono.x_exp()));
            Monomial syms;
            for (const auto& fp : t.mono.factors()) {
                if (key_is_symbol(fp.key)) {
                    std::size_t s = key_symbol(fp.key);
                    if (!src.symbol_is_constant(s) && !phi_is_y_)
                        throw Error("pullback: x-dependent symbol '" + src.symbols()[s].name +
                                    "' needs phi = y");
                    auto idx = ring_->symbol_index(src.symbols()[s].name);
                    if (!idx)
                        throw Error("pullback: symbol '" + src.symbols()[s].name + "' missing in target ring");
                    syms.mul_var(symbol_key(static_cast<std::uint32_t>(*idx)), fp.exp);
                    continue;
                }
                if (key_gen(fp.key) != 0)
                    throw Error("pullback: only single-generator rings are supported");
                term *= jet(key_order(fp.key)).pow(fp.exp);
            }
            if (!syms.is_one())
                term *= RatDiffFn(DiffPoly::monomial(ring_, syms, Rational(1)));
            out += term;
        }
        return out;
    }

    const RatDiffFn& jet(std::size_t n)
    {
        while (jets_.size() <= n)
            jets_.push_back(inv_dphi_ * total_derivative(jets_.back()));
        return jets_[n];
    }

private:
    const ContactMap& m_;
    RingPtr ring_;
    RatDiffFn inv_dphi_;
    bool phi_is_y_ = false;
    std::vector<RatDiffFn> jets_;
};

} // namespace

RatDiffFn pullback_function(const DiffPoly& f, const ContactMap& m) { return Pullback(m)(f); }

RatDiffFn pullback_function(const RatDiffFn& f, const ContactMap& m)
{
    Pullback pb(m);
    RatDiffFn out = pb(f.num());
    for (const auto& [p, e] : f.den())
        out *= pb(p).pow(-e);
    return out;
}

ContactMap compose(const ContactMap& a, const ContactMap& b)
{
    return {pullback_function(a.phi, b), pullback_function(a.psi, b)};
}

RatDiffOp transform_operator(const DiffOp& h, const ContactMap& m)
{
    RatDiffFn rho = is_contact(m);
    RingPtr r = m.ring();
    RatDiffFn dphi = total_derivative(m.phi);
    Pullback pb(m);
    RatDiffOp step = RatDiffOp(dphi.inverse()) * RatDiffOp::D(r);
    RatDiffOp power = RatDiffOp(RatDiffFn(r, Rational(1)));
    RatDiffOp tilde(r);
    int k = 0;
    for (const auto& [j, c] : h.coeffs()) {
        while (k < j) {
            power = step * power;
            ++k;
        }
        tilde += RatDiffOp(pb(c)) * power;
    }
    return RatDiffOp(rho.inverse()) * tilde * RatDiffOp((rho * dphi).inverse());
}

RatDiffFn schwarzian(const RatDiffFn& phi)
{
    RatDiffFn d1 = total_derivative(phi), d2 = total_derivative(d1), d3 = total_derivative(d2);
    RingPtr r = phi.ring();
    return d3 / d1 - RatDiffFn(r, Rational(3, 2)) * d2 * d2 / (d1 * d1);
}

std::pair<RatDiffFn, RatDiffFn> top_canonical_pair(const RatDiffOp& h, int N)
{
    if (N < 2)
        throw Error("top_canonical_pair: order must be at least 2");
    RingPtr r = h.ring();
    RatDiffFn fN = h.coeff(N) * RatDiffFn(r, Rational(1, 1) / Rational(2).pow(N));
    RatDiffFn fN2 = h.coeff(N - 2) * RatDiffFn(r, Rational(1, 1) / Rational(2).pow(N - 2)) -
                    RatDiffFn(r, binomial(N, 2)) * total_derivative(total_derivative(fN));
    return {fN, fN2};
}

std::pair<RatDiffFn, RatDiffFn> transform_bracket_coeffs(int N, const DiffPoly& fN, const DiffPoly& fN2,
                                                         const ContactMap& m)
{
    return transform_bracket_coeffs(N, fN, fN2, m, Rational(N * (N * N - 1), 3));
}

std::pair<RatDiffFn, RatDiffFn> transform_bracket_coeffs(int N, const DiffPoly& fN, const DiffPoly& fN2,
                                                         const ContactMap& m, const Rational& k)
{
    if (N < 1 || N % 2 == 0)
        throw Error("transform_bracket_coeffs: order must be odd");
    RingPtr r = m.ring();
    auto depends_on_v = [](const RatDiffFn& f) {
        if (diff_order(f.num()) != kNegInfinity)
            return true;
        for (const auto& [p, e] : f.den())
            if (diff_order(p) != kNegInfinity)
                return true;
        return false;
    };
    if (depends_on_v(m.phi))
        throw NotContact("transform_bracket_coeffs: phi must depend on y only");
    RatDiffFn dphi = total_derivative(m.phi);
    RatDiffFn scale = dphi.pow(-(N + 1) / 2);
    if (partial_derivative(m.psi, Var::jet(0, 0)) != scale || depends_on_v(m.psi - scale * RatDiffFn(DiffPoly::jet(r, 0, 0))))
        throw NotContact("transform_bracket_coeffs: psi must be phi'^(-(N+1)/2) v + f(y)");
    RatDiffFn rho = is_contact(m);
    RatDiffFn gN = pullback_function(fN, m) / (rho * rho * dphi.pow(N + 1));
    RatDiffFn gN2 = dphi * dphi * pullback_function(fN2, m) + RatDiffFn(r, k) * schwarzian(m.phi);
    return {gN, gN2};
}

} // namespace pva
