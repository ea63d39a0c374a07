#include "pva/independence.hpp"

#include <algorithm>
#include <stdexcept>

#include <gmpxx.h>

namespace pva {

BivarPoly BivarPoly::monomial(int a, int b, Rational c)
{
    BivarPoly p;
    p.add(a, b, c);
    return p;
}

Rational BivarPoly::coeff(int a, int b) const
{
    auto it = coeffs_.find({a, b});
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void BivarPoly::add(int a, int b, const Rational& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = coeffs_.try_emplace(Exp{a, b}, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            coeffs_.erase(it);
    }
}

int BivarPoly::degree() const
{
    int d = -1;
    for (const auto& [e, c] : coeffs_)
        d = std::max(d, e.first + e.second);
    return d;
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& o)
{
    for (const auto& [e, c] : o.coeffs_)
        add(e.first, e.second, c);
    return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& o)
{
    for (const auto& [e, c] : o.coeffs_)
        add(e.first, e.second, -c);
    return *this;
}

BivarPoly& BivarPoly::operator*=(const Rational& c)
{
    if (c.is_zero())
        coeffs_.clear();
    for (auto& [e, x] : coeffs_)
        x *= c;
    return *this;
}

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b)
{
    BivarPoly r;
    for (const auto& [ea, ca] : a.coeffs_)
        for (const auto& [eb, cb] : b.coeffs_)
            r.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
}

BivarPoly BivarPoly::pow(int n) const
{
    BivarPoly r = monomial(0, 0);
    for (int i = 0; i < n; ++i)
        r = r * *this;
    return r;
}

BivarPoly BivarPoly::d_u() const
{
    BivarPoly r;
    for (const auto& [e, c] : coeffs_)
        if (e.first > 0)
            r.add(e.first - 1, e.second, c * Rational(e.first));
    return r;
}

BivarPoly BivarPoly::d_v() const
{
    BivarPoly r;
    for (const auto& [e, c] : coeffs_)
        if (e.second > 0)
            r.add(e.first, e.second - 1, c * Rational(e.second));
    return r;
}

Rational BivarPoly::eval(const Rational& s, const Rational& t) const
{
    Rational r(0);
    for (const auto& [e, c] : coeffs_)
        r += c * s.pow(e.first) * t.pow(e.second);
    return r;
}

BivarPoly BivarPoly::swapped() const
{
    BivarPoly r;
    for (const auto& [e, c] : coeffs_)
        r.add(e.second, e.first, c);
    return r;
}

BivarPoly F_poly(int n, int j)
{
    if (j < 0 || j > n)
        throw std::invalid_argument("F_poly: need 0 <= j <= n");
    BivarPoly u = BivarPoly::monomial(1, 0), v = BivarPoly::monomial(0, 1);
    BivarPoly w = (u + v) * Rational(-1);
    return u.pow(n - j) * (v - w).pow(j) + v.pow(n - j) * (w - u).pow(j) + w.pow(n - j) * (u - v).pow(j);
}

int poly_rank(const std::vector<BivarPoly>& polys)
{
    // Columns: all monomials that occur. Rows scaled to integers, then Bareiss.
    std::map<BivarPoly::Exp, std::size_t> cols;
    for (const auto& p : polys)
        for (const auto& [e, c] : p.coeffs())
            cols.emplace(e, 0);
    std::size_t k = 0;
    for (auto& [e, idx] : cols)
        idx = k++;
    std::size_t rows = polys.size(), ncols = cols.size();
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(ncols, 0));
    for (std::size_t r = 0; r < rows; ++r) {
        mpz_class lcm = 1;
        for (const auto& [e, c] : polys[r].coeffs())
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.to_mpq().get_den().get_mpz_t());
        for (const auto& [e, c] : polys[r].coeffs()) {
            mpq_class q = c.to_mpq() * lcm;
            a[r][cols[e]] = q.get_num();
        }
    }
    int rank = 0;
    mpz_class prev = 1;
    for (std::size_t col = 0; col < ncols && rank < static_cast<int>(rows); ++col) {
        std::size_t pivot = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot == rows)
            continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < ncols; ++c) {
                a[r][c] = a[rank][col] * a[r][c] - a[r][col] * a[rank][c];
                mpz_divexact(a[r][c].get_mpz_t(), a[r][c].get_mpz_t(), prev.get_mpz_t());
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

RankResult rank_S(int N, int m, bool truncate)
{
    if (N < 1 || N % 2 == 0 || m < 1)
        throw std::invalid_argument("rank_S: need odd N >= 1 and m >= 1");
    int top = truncate ? std::min(N, m) : N;
    std::vector<BivarPoly> polys;
    for (int j = 1; j <= top; j += 2)
        polys.push_back(F_poly(N + m, j));
    return RankResult{poly_rank(polys), static_cast<int>(polys.size())};
}

RecurrenceIdentityResult verify_recurrence_identities(int n, int j)
{
    RecurrenceIdentityResult res;
    auto F = [](int nn, int jj) { return (jj < 0 || jj > nn || nn < 0) ? BivarPoly() : F_poly(nn, jj); };
    BivarPoly f = F(n, j);
    BivarPoly lhs = f.d_u().d_u() + f.d_v().d_v() - f.d_u().d_v();
    BivarPoly rhs = F(n - 2, j) * Rational((n - j) * (n - j - 1)) + F(n - 2, j - 2) * Rational(3 * j * (j - 1));
    res.a = lhs == rhs;
    BivarPoly q = BivarPoly::monomial(2, 0) + BivarPoly::monomial(1, 1) + BivarPoly::monomial(0, 2);
    res.b = q * f * Rational(4) == F(n + 2, j) * Rational(3) + F(n + 2, j + 2);
    return res;
}

BivarPoly remainder_mod_quadratic(const BivarPoly& f)
{
    // u^2 = -uv - v^2 until the u-degree is below 2.
    BivarPoly r = f;
    while (true) {
        auto it = std::find_if(r.coeffs().begin(), r.coeffs().end(),
                               [](const auto& t) { return t.first.first >= 2; });
        if (it == r.coeffs().end())
            return r;
        auto [e, c] = *it;
        BivarPoly step;
        step.add(e.first, e.second, -c);
        step.add(e.first - 1, e.second + 1, -c);
        step.add(e.first - 2, e.second + 2, -c);
        r += step;
    }
}

} // namespace pva
