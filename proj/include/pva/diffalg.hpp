#pragma once

// Exact Laurent differential polynomials over Q.
//
// A DiffPoly is a finite Q-combination of monomials in the independent
// variable x (non-negative powers), the jet variables u_i^(n) and declared
// parameter symbols (both with integer, possibly negative, powers).

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "pva/rational.hpp"

namespace pva {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Negative power of a sum, or a substitution that needs one.
class NotAUnit : public Error {
public:
    using Error::Error;
};

/// The argument of integrate_total_derivative is not in the image of D.
class NotExact : public Error {
public:
    using Error::Error;
};

/// Intermediate expression grew beyond the configured term budget.
class TermLimitExceeded : public Error {
public:
    using Error::Error;
};

/// Global guard on the size of any single polynomial produced by a product or
/// accumulation. Zero disables the check.
void set_term_limit(std::size_t limit);
std::size_t term_limit();

/// Declared parameter symbol. `d_image` names the symbol that D maps this one
/// to (empty: D annihilates it). `square_reduction`, when present, rewrites
/// symbol^2 to the given rational.
struct ParamSymbol {
    std::string name;
    std::string d_image;
    std::optional<Rational> square_reduction;
};

/// The ground ring: generator names, parameter symbols and the name of the
/// independent variable. Immutable once built.
class Ring {
public:
    Ring(std::vector<std::string> generators, std::vector<ParamSymbol> symbols = {},
         std::string x_name = "x");

    const std::vector<std::string>& generators() const { return generators_; }
    const std::vector<ParamSymbol>& symbols() const { return symbols_; }
    const std::string& x_name() const { return x_name_; }

    std::optional<std::size_t> generator_index(const std::string& name) const;
    std::optional<std::size_t> symbol_index(const std::string& name) const;

    /// Index of D(symbol), or nullopt when D annihilates it.
    std::optional<std::size_t> symbol_d_image(std::size_t s) const { return d_images_[s]; }
    const std::optional<Rational>& symbol_square(std::size_t s) const
    {
        return symbols_[s].square_reduction;
    }
    bool has_square_reductions() const { return has_square_; }
    /// True when the symbol and everything in its D-chain are killed by D.
    bool symbol_is_constant(std::size_t s) const { return !d_images_[s].has_value(); }

private:
    std::vector<std::string> generators_;
    std::vector<ParamSymbol> symbols_;
    std::string x_name_;
    std::vector<std::optional<std::size_t>> d_images_;
    bool has_square_ = false;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> generators, std::vector<ParamSymbol> symbols = {},
                  std::string x_name = "x");

/// A variable of the ground ring.
struct Var {
    enum class Kind : std::uint8_t { X, Jet, Symbol };
    Kind kind = Kind::X;
    std::uint32_t index = 0; // generator or symbol index
    std::uint32_t order = 0; // derivative order for jets

    static Var x() { return {Kind::X, 0, 0}; }
    static Var jet(std::uint32_t gen, std::uint32_t order) { return {Kind::Jet, gen, order}; }
    static Var symbol(std::uint32_t s) { return {Kind::Symbol, s, 0}; }

    friend bool operator==(const Var&, const Var&) = default;
};

/// Packed key of a jet or symbol variable; jets sort before symbols.
using VarKey = std::uint32_t;

constexpr VarKey kSymbolBit = 0x80000000u;
constexpr VarKey jet_key(std::uint32_t gen, std::uint32_t order) { return (gen << 20) | order; }
constexpr VarKey symbol_key(std::uint32_t s) { return kSymbolBit | s; }
constexpr bool key_is_symbol(VarKey k) { return (k & kSymbolBit) != 0; }
constexpr std::uint32_t key_gen(VarKey k) { return k >> 20; }
constexpr std::uint32_t key_order(VarKey k) { return k & 0xFFFFFu; }
constexpr std::uint32_t key_symbol(VarKey k) { return k & ~kSymbolBit; }

struct VarPow {
    VarKey key;
    std::int32_t exp;
    friend bool operator==(const VarPow&, const VarPow&) = default;
};

class Monomial {
public:
    using Factors = boost::container::small_vector<VarPow, 6>;

    Monomial() = default;

    std::uint32_t x_exp() const { return x_exp_; }
    const Factors& factors() const { return factors_; }
    bool is_one() const { return x_exp_ == 0 && factors_.empty(); }

    std::int32_t exp(VarKey key) const;
    /// Multiplies by key^delta (delta may be negative).
    void mul_var(VarKey key, std::int32_t delta);
    void set_x_exp(std::uint32_t e) { x_exp_ = e; }

    /// Total degree in jet variables (Laurent, so can be negative).
    int jet_degree() const;
    bool has_jets() const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b)
    {
        return a.x_exp_ == b.x_exp_ && a.factors_ == b.factors_;
    }
    friend bool operator<(const Monomial& a, const Monomial& b);
    std::size_t hash() const;

private:
    std::uint32_t x_exp_ = 0;
    Factors factors_;
};

struct Term {
    Monomial mono;
    Rational coeff;
};

class DiffPoly;

/// Sort-and-combine buffer for building large sums.
class TermAccumulator {
public:
    explicit TermAccumulator(RingPtr ring = nullptr) : ring_(std::move(ring)) {}
    void add(const Monomial& m, const Rational& c);
    void add(Monomial&& m, Rational&& c);
    void add(const DiffPoly& p);
    void add_scaled(const DiffPoly& p, const Rational& c);
    /// Adds c * a * b.
    void add_product(const DiffPoly& a, const DiffPoly& b, const Rational& c = Rational(1));
    DiffPoly finish();
    bool empty() const { return buf_.empty(); }

private:
    void compact();
    void adopt(const RingPtr& r);

    RingPtr ring_;
    std::vector<Term> buf_;
    std::size_t compacted_ = 0;
};

/// Canonical Laurent differential polynomial. Terms are kept sorted with no
/// zero coefficients, so equality is structural.
class DiffPoly {
public:
    DiffPoly() = default;
    DiffPoly(RingPtr ring, Rational c);
    explicit DiffPoly(Rational c) : DiffPoly(nullptr, std::move(c)) {}

    static DiffPoly constant(RingPtr ring, Rational c) { return DiffPoly(std::move(ring), std::move(c)); }
    static DiffPoly variable(RingPtr ring, Var v, int exp = 1);
    static DiffPoly x(RingPtr ring, int exp = 1) { return variable(std::move(ring), Var::x(), exp); }
    static DiffPoly jet(RingPtr ring, std::uint32_t gen, std::uint32_t order, int exp = 1)
    {
        return variable(std::move(ring), Var::jet(gen, order), exp);
    }
    static DiffPoly symbol(RingPtr ring, const std::string& name, int exp = 1);
    static DiffPoly monomial(RingPtr ring, Monomial m, Rational c);
    /// Builds from unsorted terms (duplicates combined, zeros dropped).
    static DiffPoly from_terms(RingPtr ring, std::vector<Term> terms);

    const RingPtr& ring() const { return ring_; }
    std::span<const Term> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    /// Rational value of a constant polynomial.
    Rational constant_value() const;
    /// Coefficient of the monomial 1.
    Rational constant_term() const;

    DiffPoly operator-() const;
    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    DiffPoly& operator*=(const DiffPoly& o);
    DiffPoly& operator*=(const Rational& c);

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
    friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }

    /// Integer power; negative exponents require a single-term polynomial.
    DiffPoly pow(int e) const;

    friend bool operator==(const DiffPoly& a, const DiffPoly& b);
    friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

    /// Rewrites the polynomial to live over `ring` (which must be compatible).
    DiffPoly with_ring(RingPtr ring) const;

private:
    friend class TermAccumulator;
    RingPtr ring_;
    std::vector<Term> terms_;
};

/// Product of monomials, applying square reductions. Returns the rational
/// factor contributed by the reductions.
Rational multiply_monomials(const Ring* ring, const Monomial& a, const Monomial& b, Monomial& out);

/// Applies square reductions in place, returning the rational factor produced.
Rational reduce_squares(const Ring* ring, Monomial& m);

RingPtr common_ring(const RingPtr& a, const RingPtr& b);

// ---------------------------------------------------------------------------
// Differential calculus.

/// Total derivative D = d/dx + sum u^(n+1) d/du^(n) + symbol d-images.
DiffPoly total_derivative(const DiffPoly& f);
/// D^k f.
DiffPoly total_derivative(const DiffPoly& f, int k);
DiffPoly partial_derivative(const DiffPoly& f, Var v);

/// Marker for "the polynomial is quasiconstant".
inline constexpr int kNegInfinity = std::numeric_limits<int>::min();

/// Largest n with d f / d u_i^(n) != 0 over all i, or kNegInfinity.
int diff_order(const DiffPoly& f);
/// Same, restricted to one generator.
int diff_order(const DiffPoly& f, std::uint32_t gen);
bool is_quasiconstant(const DiffPoly& f);

/// Euler operator sum_n (-D)^n d/du_i^(n).
DiffPoly variational_derivative(const DiffPoly& f, std::uint32_t gen);

/// Solves D g = f; throws NotExact when f is not a total derivative.
DiffPoly integrate_total_derivative(const DiffPoly& f);

/// Images for substitute(): x and any jet variable occurring in f.
struct Substitution {
    std::optional<DiffPoly> x;
    std::map<std::pair<std::uint32_t, std::uint32_t>, DiffPoly> jets;
    /// Ring of the images; symbols are carried over by name.
    RingPtr target;
};

/// Homomorphic substitution. Symbols map to the same-named symbols of the
/// target ring.
DiffPoly substitute(const DiffPoly& f, const Substitution& s);

/// Replaces parameter symbols by polynomials (same ring).
DiffPoly substitute_symbols(const DiffPoly& f, const std::map<std::size_t, DiffPoly>& images);

/// Mapping of variables of one ring into another, by name.
DiffPoly transport(const DiffPoly& f, const RingPtr& target);

/// Human-readable form in the expression syntax accepted by the parser.
std::string to_string(const DiffPoly& f);
std::string var_name(const Ring& ring, VarKey key);

} // namespace pva

template <>
struct std::hash<pva::Monomial> {
    std::size_t operator()(const pva::Monomial& m) const noexcept { return m.hash(); }
};
