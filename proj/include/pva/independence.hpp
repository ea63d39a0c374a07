#pragma once

// The antisymmetric polynomials F_{n,j}(u, v) and exact rank tests.

#include <map>
#include <utility>
#include <vector>

#include "pva/rational.hpp"

namespace pva {

/// Polynomial in u, v with rational coefficients, keyed by (deg_u, deg_v).
class BivarPoly {
public:
    using Exp = std::pair<int, int>;

    BivarPoly() = default;
    static BivarPoly monomial(int a, int b, Rational c = Rational(1));

    const std::map<Exp, Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    Rational coeff(int a, int b) const;
    void add(int a, int b, const Rational& c);
    /// Total degree, -1 for zero.
    int degree() const;

    BivarPoly& operator+=(const BivarPoly& o);
    BivarPoly& operator-=(const BivarPoly& o);
    BivarPoly& operator*=(const Rational& c);
    friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
    friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
    friend BivarPoly operator*(BivarPoly a, const Rational& c) { return a *= c; }
    friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);
    friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.coeffs_ == b.coeffs_; }

    BivarPoly pow(int n) const;
    BivarPoly d_u() const;
    BivarPoly d_v() const;
    /// f(s, t) for rationals s, t.
    Rational eval(const Rational& s, const Rational& t) const;
    /// f(v, u).
    BivarPoly swapped() const;

private:
    std::map<Exp, Rational> coeffs_;
};

/// u^(n-j)(v-w)^j + v^(n-j)(w-u)^j + w^(n-j)(u-v)^j with w = -(u+v); 0 <= j <= n.
BivarPoly F_poly(int n, int j);

/// Exact rank of a list of polynomials over Q (fraction-free elimination).
int poly_rank(const std::vector<BivarPoly>& polys);

struct RankResult {
    int rank = 0;
    int size = 0;
    bool independent() const { return rank == size; }
};

/// Rank of {F_{N+m,j}: j odd, 1 <= j <= N}; with truncate, j <= min(N, m).
RankResult rank_S(int N, int m, bool truncate = false);

/// Checks the Laplacian-type identity (a) and the multiplication identity (b)
/// for F_{n,j}. Identities whose indices fall outside 0 <= j <= n are skipped.
struct RecurrenceIdentityResult {
    bool a = true;
    bool b = true;
    bool pass() const { return a && b; }
};
RecurrenceIdentityResult verify_recurrence_identities(int n, int j);

/// Remainder of f modulo u^2 + uv + v^2 (as a polynomial of degree < 2 in u).
BivarPoly remainder_mod_quadratic(const BivarPoly& f);

} // namespace pva
