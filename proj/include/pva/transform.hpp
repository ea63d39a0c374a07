#pragma once

// Contact changes of variables x = phi(y, v, v'), u = psi(y, v, v') and their
// action on functions and differential operators.

#include <functional>
#include <utility>
#include <vector>

#include "pva/diffop.hpp"

namespace pva {

class NotContact : public Error {
public:
    using Error::Error;
};

/// num / prod(factor^exp). Factors are normalized non-monomial polynomials or
/// the independent variable itself; Laurent monomials live in num.
class RatDiffFn {
public:
    using Factors = std::vector<std::pair<DiffPoly, int>>;

    RatDiffFn() = default;
    RatDiffFn(const DiffPoly& num);
    RatDiffFn(RingPtr ring, Rational c) : RatDiffFn(DiffPoly(std::move(ring), std::move(c))) {}

    static RatDiffFn quotient(const DiffPoly& num, const DiffPoly& den);

    const DiffPoly& num() const { return num_; }
    const Factors& den() const { return den_; }
    DiffPoly den_poly() const;
    RingPtr ring() const { return num_.ring(); }
    bool is_zero() const { return num_.is_zero(); }
    /// True when the denominator is trivial.
    bool is_laurent() const { return den_.empty(); }
    /// The numerator when the denominator is trivial; throws otherwise.
    DiffPoly to_diffpoly() const;

    RatDiffFn operator-() const;
    RatDiffFn& operator+=(const RatDiffFn& o);
    RatDiffFn& operator-=(const RatDiffFn& o) { return *this += -o; }
    RatDiffFn& operator*=(const RatDiffFn& o);
    friend RatDiffFn operator+(RatDiffFn a, const RatDiffFn& b) { return a += b; }
    friend RatDiffFn operator-(RatDiffFn a, const RatDiffFn& b) { return a -= b; }
    friend RatDiffFn operator*(RatDiffFn a, const RatDiffFn& b) { return a *= b; }
    friend RatDiffFn operator/(const RatDiffFn& a, const RatDiffFn& b) { return a * b.inverse(); }

    RatDiffFn inverse() const;
    RatDiffFn pow(int e) const;

    /// Cross-multiplied equality.
    friend bool operator==(const RatDiffFn& a, const RatDiffFn& b);
    friend bool operator!=(const RatDiffFn& a, const RatDiffFn& b) { return !(a == b); }

private:
    void add_factor(const DiffPoly& p, int e);
    /// Cancels powers of the independent variable against the numerator.
    void cancel_x();

    DiffPoly num_;
    Factors den_;
};

/// Applies a derivation of the polynomial ring via the quotient rule.
RatDiffFn derive(const RatDiffFn& f, const std::function<DiffPoly(const DiffPoly&)>& d);
RatDiffFn total_derivative(const RatDiffFn& f);
RatDiffFn partial_derivative(const RatDiffFn& f, Var v);
std::string to_string(const RatDiffFn& f);

/// Operators sum_k f_k D^k with rational coefficients.
class RatDiffOp {
public:
    RatDiffOp() = default;
    explicit RatDiffOp(RingPtr ring) : ring_(std::move(ring)) {}
    explicit RatDiffOp(const RatDiffFn& f);
    explicit RatDiffOp(const DiffOp& a);
    static RatDiffOp D(RingPtr ring, int k = 1);

    const RingPtr& ring() const { return ring_; }
    const std::map<int, RatDiffFn>& coeffs() const { return coeffs_; }
    RatDiffFn coeff(int k) const;
    int degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_laurent() const;
    DiffOp to_diffop() const;

    void add(int k, const RatDiffFn& f);
    RatDiffOp operator-() const;
    RatDiffOp& operator+=(const RatDiffOp& o);
    friend RatDiffOp operator+(RatDiffOp a, const RatDiffOp& b) { return a += b; }
    friend RatDiffOp operator-(RatDiffOp a, const RatDiffOp& b) { return a += -b; }
    friend RatDiffOp operator*(const RatDiffOp& a, const RatDiffOp& b);
    friend bool operator==(const RatDiffOp& a, const RatDiffOp& b);
    friend bool operator!=(const RatDiffOp& a, const RatDiffOp& b) { return !(a == b); }

private:
    RingPtr ring_;
    std::map<int, RatDiffFn> coeffs_;
};

RatDiffOp adjoint(const RatDiffOp& a);
std::string to_string(const RatDiffOp& a);

/// x = phi, u = psi, both of order at most one in the new generator.
struct ContactMap {
    RatDiffFn phi;
    RatDiffFn psi;
    RingPtr ring() const { return common_ring(phi.ring(), psi.ring()); }
};

/// Target ring for maps: generator `v`, independent variable `y`, and the
/// D-constant symbols of `source`.
RingPtr contact_ring(const RingPtr& source, const std::string& gen = "v", const std::string& var = "y");

/// Checks phi_{v'} psi' = psi_{v'} phi', phi' != 0, rho phi' != 0 and
/// returns rho = (psi_v phi' - phi_v psi') / phi'.
RatDiffFn is_contact(const ContactMap& m);

/// x -> phi, u^(n) -> ((1/phi') D)^n psi. Constant symbols are carried over;
/// x-dependent symbols are only allowed when phi = y.
RatDiffFn pullback_function(const DiffPoly& f, const ContactMap& m);
RatDiffFn pullback_function(const RatDiffFn& f, const ContactMap& m);
/// The map "first a, then b": phi = a.phi pulled back along b, same for psi.
ContactMap compose(const ContactMap& a, const ContactMap& b);

/// (1/rho) H~ o 1/(rho phi'), H~ the operator with D replaced by (1/phi') D and
/// coefficients pulled back.
RatDiffOp transform_operator(const DiffOp& h, const ContactMap& m);

/// phi'''/phi' - 3 phi''^2 / (2 phi'^2)
RatDiffFn schwarzian(const RatDiffFn& phi);

/// Top two canonical coefficients (f_N, f_{N-2}) of the bracket of an operator
/// of odd order N: f_N = a_N / 2^N, f_{N-2} = a_{N-2}/2^(N-2) - C(N,2) f_N''.
std::pair<RatDiffFn, RatDiffFn> top_canonical_pair(const RatDiffOp& h, int N);

/// For phi = phi(y), psi = phi'^(-(N+1)/2) v + f(y):
/// g_N = f~_N / (rho^2 phi'^(N+1)), g_{N-2} = phi'^2 f~_{N-2} + k S(phi) with
/// k = N(N^2-1)/3.
std::pair<RatDiffFn, RatDiffFn> transform_bracket_coeffs(int N, const DiffPoly& fN, const DiffPoly& fN2,
                                                         const ContactMap& m);
/// Same law with an explicit constant k in front of S(phi).
std::pair<RatDiffFn, RatDiffFn> transform_bracket_coeffs(int N, const DiffPoly& fN, const DiffPoly& fN2,
                                                         const ContactMap& m, const Rational& k);

} // namespace pva
