#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <iosfwd>

#include <gmpxx.h>

namespace pva {

/// Exact rational number.
///
/// Values that fit in a pair of 64-bit integers are kept inline; anything
/// larger is promoted to a GMP rational.  The representation is canonical:
/// a value is stored inline whenever it fits, the denominator is positive
/// and the fraction is reduced, so equality is a field-wise compare.
class Rational {
public:
    Rational() noexcept = default;
    Rational(std::int64_t n) noexcept : num_(n), den_(1) {} // NOLINT: implicit by design of numeric types
    Rational(std::int64_t n, std::int64_t d);
    explicit Rational(const mpq_class& q);

    Rational(const Rational& o);
    Rational(Rational&& o) noexcept = default;
    Rational& operator=(const Rational& o);
    Rational& operator=(Rational&& o) noexcept = default;
    ~Rational() = default;

    /// Parses "p", "-p", or "p/q" (decimal digits only).
    static Rational parse(const std::string& text);

    bool is_zero() const noexcept { return !big_ && num_ == 0; }
    bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
    bool is_integer() const;
    bool is_small() const noexcept { return !big_; }
    int sign() const;

    /// Numerator / denominator when the value is inline.
    std::int64_t small_num() const noexcept { return num_; }
    std::int64_t small_den() const noexcept { return den_; }

    mpq_class to_mpq() const;
    std::string str() const;
    std::size_t hash() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);

    Rational inverse() const;
    Rational pow(int e) const;

private:
    void assign_mpq(mpq_class q);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Binomial coefficient C(n, k) as an exact rational (0 outside 0 <= k <= n).
Rational binomial(int n, int k);

} // namespace pva
