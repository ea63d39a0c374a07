#include "pva/diffop.hpp"

#include <sstream>
#include <vector>

namespace pva {

DiffOp::DiffOp(const DiffPoly& f) : ring_(f.ring())
{
    if (!f.is_zero())
        coeffs_.emplace(0, f);
}

DiffOp DiffOp::D(RingPtr ring, int k)
{
    DiffOp r(ring);
    r.add(k, DiffPoly(ring, Rational(1)));
    return r;
}

DiffPoly DiffOp::coeff(int k) const
{
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? DiffPoly(ring_, Rational(0)) : it->second;
}

std::size_t DiffOp::term_count() const
{
    std::size_t n = 0;
    for (const auto& [k, c] : coeffs_)
        n += c.size();
    return n;
}

void DiffOp::add(int k, const DiffPoly& f)
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

DiffOp DiffOp::operator-() const
{
    DiffOp r(*this);
    for (auto& [k, c] : r.coeffs_)
        c = -c;
    return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o)
{
    ring_ = common_ring(ring_, o.ring_);
    for (const auto& [k, c] : o.coeffs_)
        add(k, c);
    return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) { return *this += -o; }

DiffOp& DiffOp::operator*=(const Rational& c)
{
    if (c.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [k, p] : coeffs_)
        p *= c;
    return *this;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b)
{
    RingPtr ring = common_ring(a.ring_, b.ring_);
    if (a.is_zero() || b.is_zero())
        return DiffOp(ring);
    int top = a.degree();
    // derivs[j][r] = D^r b_j
    std::map<int, std::vector<DiffPoly>> derivs;
    for (const auto& [j, bj] : b.coeffs_) {
        auto& v = derivs[j];
        v.push_back(bj);
        for (int r = 1; r <= top; ++r)
            v.push_back(total_derivative(v.back()));
    }
    std::map<int, TermAccumulator> out;
    for (const auto& [i, ai] : a.coeffs_)
        for (const auto& [j, v] : derivs)
            for (int r = 0; r <= i; ++r) {
                if (v[r].is_zero())
                    continue;
                auto it = out.try_emplace(i - r + j, ring).first;
                it->second.add_product(ai, v[r], binomial(i, r));
            }
    DiffOp r(ring);
    for (auto& [k, acc] : out) {
        DiffPoly c = acc.finish();
        if (!c.is_zero())
            r.coeffs_.emplace(k, std::move(c));
    }
    return r;
}

DiffOp DiffOp::pow(int n) const
{
    if (n < 0)
        throw Error("negative power of a differential operator");
    DiffOp r = identity(ring_);
    for (int i = 0; i < n; ++i)
        r = r * *this;
    return r;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) { return a * b; }

DiffOp adjoint(const DiffOp& a)
{
    // (f D^k)* = (-D)^k o f = (-1)^k sum_r C(k,r) D^r(f) D^(k-r)
    DiffOp r(a.ring());
    for (const auto& [k, f] : a.coeffs()) {
        Rational sign = (k % 2) ? Rational(-1) : Rational(1);
        DiffPoly d = f;
        for (int s = 0; s <= k && !d.is_zero(); ++s) {
            r.add(k - s, d * (sign * binomial(k, s)));
            if (s < k)
                d = total_derivative(d);
        }
    }
    return r;
}

DiffPoly apply(const DiffOp& a, const DiffPoly& f)
{
    TermAccumulator acc(common_ring(a.ring(), f.ring()));
    DiffPoly d = f;
    int k = 0;
    for (const auto& [j, c] : a.coeffs()) {
        while (k < j) {
            d = total_derivative(d);
            ++k;
        }
        if (d.is_zero())
            break;
        acc.add_product(c, d);
    }
    return acc.finish();
}

LambdaPoly apply_shifted(const DiffOp& op, const LambdaPoly& p, int a, int b)
{
    LambdaPoly r(common_ring(op.ring(), p.ring()));
    for (const auto& [k, f] : op.coeffs())
        r += shift_power(p, a, b, k) * f;
    return r;
}

DiffOp operator*(const DiffPoly& f, const DiffOp& a) { return DiffOp(f) * a; }

DiffOp substitute_symbols(const DiffOp& a, const std::map<std::size_t, DiffPoly>& images)
{
    DiffOp r(a.ring());
    for (const auto& [k, c] : a.coeffs())
        r.add(k, substitute_symbols(c, images));
    return r;
}

DiffOp transport(const DiffOp& a, const RingPtr& target)
{
    DiffOp r(target);
    for (const auto& [k, c] : a.coeffs())
        r.add(k, transport(c, target));
    return r;
}

LambdaPoly to_bracket(const DiffOp& h)
{
    LambdaPoly r(h.ring());
    for (const auto& [k, c] : h.coeffs())
        r.add(k, 0, c);
    return r;
}

DiffOp from_bracket(const LambdaPoly& p)
{
    DiffOp r(p.ring());
    for (const auto& [e, c] : p.coeffs()) {
        if (e.second != 0)
            throw Error("from_bracket: expected a polynomial in lambda only");
        r.add(e.first, c);
    }
    return r;
}

OpReport is_skew_adjoint(const DiffOp& a)
{
    OpReport rep;
    rep.residual = a + adjoint(a);
    rep.pass = rep.residual.is_zero();
    return rep;
}

HamiltonianReport check_hamiltonian(const DiffOp& a)
{
    HamiltonianReport rep;
    rep.skew = is_skew_adjoint(a).pass;
    if (a.is_zero()) {
        rep.jacobi = true;
        return rep;
    }
    rep.jacobi_detail = check_jacobi(scalar_table(to_bracket(a)));
    rep.jacobi = rep.jacobi_detail.pass;
    return rep;
}

CompatibilityReport check_compatible(const DiffOp& a, const DiffOp& b)
{
    CompatibilityReport rep;
    rep.a = check_hamiltonian(a);
    rep.b = check_hamiltonian(b);
    rep.sum = check_hamiltonian(a + b);
    return rep;
}

std::string to_string(const DiffOp& a)
{
    if (a.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
        int k = it->first;
        std::string c = to_string(it->second);
        std::string d = k == 0 ? "" : (k == 1 ? "D" : "D^" + std::to_string(k));
        bool neg = false;
        if (it->second.size() == 1 && c[0] == '-') {
            neg = true;
            c = c.substr(1);
        } else if (it->second.size() > 1 && (k > 0 || !first)) {
            c = "(" + c + ")";
        }
        if (!first)
            os << (neg ? " - " : " + ");
        else if (neg)
            os << "-";
        first = false;
        if (d.empty())
            os << c;
        else if (c == "1")
            os << d;
        else
            os << c << "*" << d;
    }
    return os.str();
}

} // namespace pva
