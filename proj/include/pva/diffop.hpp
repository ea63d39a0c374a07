#pragma once

// Scalar differential operators sum_k f_k D^k in left-normal form.

#include <map>
#include <string>

#include "pva/lambda.hpp"

namespace pva {

class DiffOp {
public:
    DiffOp() = default;
    explicit DiffOp(RingPtr ring) : ring_(std::move(ring)) {}
    /// Multiplication operator by f.
    explicit DiffOp(const DiffPoly& f);

    static DiffOp D(RingPtr ring, int k = 1);
    static DiffOp identity(RingPtr ring) { return DiffOp(DiffPoly(std::move(ring), Rational(1))); }

    const RingPtr& ring() const { return ring_; }
    const std::map<int, DiffPoly>& coeffs() const { return coeffs_; }
    DiffPoly coeff(int k) const;
    /// Highest k with nonzero coefficient, -1 for the zero operator.
    int degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t term_count() const;

    void add(int k, const DiffPoly& f);

    DiffOp operator-() const;
    DiffOp& operator+=(const DiffOp& o);
    DiffOp& operator-=(const DiffOp& o);
    DiffOp& operator*=(const Rational& c);
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    friend DiffOp operator*(DiffOp a, const Rational& c) { return a *= c; }
    friend DiffOp operator*(const Rational& c, DiffOp a) { return a *= c; }
    /// Composition.
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
    friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

    DiffOp pow(int n) const;

private:
    RingPtr ring_;
    std::map<int, DiffPoly> coeffs_;
};

DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp adjoint(const DiffOp& a);
DiffPoly apply(const DiffOp& a, const DiffPoly& f);
/// sum_k f_k (a*lambda + b*mu + D)^k P.
LambdaPoly apply_shifted(const DiffOp& op, const LambdaPoly& p, int a, int b);
/// Left multiplication by f.
DiffOp operator*(const DiffPoly& f, const DiffOp& a);
/// Substitutes parameter symbols in every coefficient.
DiffOp substitute_symbols(const DiffOp& a, const std::map<std::size_t, DiffPoly>& images);
DiffOp transport(const DiffOp& a, const RingPtr& target);

/// H(D + lambda)(1) = sum_k f_k lambda^k.
LambdaPoly to_bracket(const DiffOp& h);
DiffOp from_bracket(const LambdaPoly& p);

struct OpReport {
    bool pass = true;
    DiffOp residual;
};
/// A + A* = 0.
OpReport is_skew_adjoint(const DiffOp& a);

struct HamiltonianReport {
    bool skew = false;
    bool jacobi = false;
    bool pass() const { return skew && jacobi; }
    AxiomReport jacobi_detail;
};
HamiltonianReport check_hamiltonian(const DiffOp& a);

struct CompatibilityReport {
    HamiltonianReport a, b, sum;
    bool pass() const { return a.pass() && b.pass() && sum.pass(); }
};
CompatibilityReport check_compatible(const DiffOp& a, const DiffOp& b);

std::string to_string(const DiffOp& a);

} // namespace pva
