#pragma once

// Polynomials in the formal variables lambda and mu with DiffPoly
// coefficients, the master-formula bracket and the PVA axiom checks.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pva/diffalg.hpp"

namespace pva {

class NotSkewForm : public Error {
public:
    using Error::Error;
};

enum class Formal { Lambda, Mu };

class LambdaPoly {
public:
    using Exp = std::pair<int, int>; // (power of lambda, power of mu)

    LambdaPoly() = default;
    explicit LambdaPoly(RingPtr ring) : ring_(std::move(ring)) {}
    LambdaPoly(DiffPoly c, int l = 0, int m = 0);

    const RingPtr& ring() const { return ring_; }
    const std::map<Exp, DiffPoly>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    DiffPoly coeff(int l, int m = 0) const;
    int degree_lambda() const;
    int degree_mu() const;
    bool has_mu() const;
    std::size_t term_count() const;

    /// Adds c * lambda^l * mu^m.
    void add(int l, int m, const DiffPoly& c);

    LambdaPoly operator-() const;
    LambdaPoly& operator+=(const LambdaPoly& o);
    LambdaPoly& operator-=(const LambdaPoly& o);
    LambdaPoly& operator*=(const DiffPoly& f);
    LambdaPoly& operator*=(const Rational& c);
    friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
    friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
    friend LambdaPoly operator*(LambdaPoly a, const DiffPoly& f) { return a *= f; }
    friend LambdaPoly operator*(const DiffPoly& f, LambdaPoly a) { return a *= f; }
    friend LambdaPoly operator*(LambdaPoly a, const Rational& c) { return a *= c; }
    friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
    friend bool operator==(const LambdaPoly& a, const LambdaPoly& b);
    friend bool operator!=(const LambdaPoly& a, const LambdaPoly& b) { return !(a == b); }

    /// Multiplies by lambda^l mu^m.
    LambdaPoly shifted(int l, int m) const;

private:
    RingPtr ring_;
    std::map<Exp, DiffPoly> coeffs_;
};

/// D applied to every coefficient.
LambdaPoly total_derivative(const LambdaPoly& p);
/// Exchanges lambda and mu.
LambdaPoly swap_formal(const LambdaPoly& p);
/// (a*lambda + b*mu + D)^n P, with D acting on the coefficients of P.
LambdaPoly shift_power(const LambdaPoly& p, int a, int b, int n);
/// Substitutes lambda -> a*lambda + b*mu in a lambda-only polynomial.
LambdaPoly substitute_lambda(const LambdaPoly& p, int a, int b);
/// Substitutes lambda -> -lambda - D (D acting on the coefficients), lambda-only input.
LambdaPoly reflect(const LambdaPoly& p);

std::string to_string(const LambdaPoly& p);

/// {u_i lambda u_j} for every ordered pair of generators.
struct BracketTable {
    RingPtr ring;
    std::vector<std::vector<LambdaPoly>> entries;
    std::vector<std::optional<Rational>> weights;

    BracketTable() = default;
    explicit BracketTable(RingPtr r);
    std::size_t size() const { return entries.size(); }
    const LambdaPoly& entry(std::size_t i, std::size_t j) const { return entries[i][j]; }
    void set(std::size_t i, std::size_t j, LambdaPoly p) { entries[i][j] = std::move(p); }
};

/// Scalar table {u_lambda u} = p.
BracketTable scalar_table(const LambdaPoly& p);

/// {f_var g} by the master formula. Formal variables already present in
/// f or g are inert.
LambdaPoly bracket(const DiffPoly& f, const DiffPoly& g, const BracketTable& t,
                   Formal var = Formal::Lambda);
LambdaPoly bracket(const LambdaPoly& f, const LambdaPoly& g, const BracketTable& t,
                   Formal var = Formal::Lambda);

/// sum_k lambda^k {p_k _{lambda+mu} g} for p = sum_k p_k lambda^k.
LambdaPoly bracket_poly_first_slot(const LambdaPoly& p, const DiffPoly& g, const BracketTable& t);

struct AxiomReport {
    bool pass = true;
    /// (i, j) or (i, j, k) index plus the nonzero residual.
    std::vector<std::pair<std::vector<std::size_t>, LambdaPoly>> residuals;
};

AxiomReport check_skew(const BracketTable& t);
/// Jacobi on every ordered generator triple.
AxiomReport check_jacobi(const BracketTable& t);

/// Canonical coefficients f_j (odd j) with p = sum (D + 2 lambda)^j f_j.
std::map<int, DiffPoly> canonical_form(const LambdaPoly& p);
/// Rebuilds sum (D + 2 lambda)^j f_j.
LambdaPoly from_canonical_form(const std::map<int, DiffPoly>& f, const RingPtr& ring);

struct OrderLevel {
    int order = 0;
    int level = kNegInfinity;
};
OrderLevel order_and_level(const LambdaPoly& p);

/// Allowed (order, level) pairs for non-quasiconstant brackets.
bool check_level_bounds(int order, int level);

} // namespace pva
