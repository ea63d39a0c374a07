#include "pva/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace pva {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = std::numeric_limits<std::int64_t>::min();

u128 uabs(i128 v) { return v < 0 ? u128(-v) : u128(v); }

u128 gcd128(u128 a, u128 b)
{
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(i128 v) { return v >= kMin && v <= kMax; }

mpz_class to_mpz(i128 v)
{
    bool neg = v < 0;
    u128 m = uabs(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0)
        throw std::domain_error("Rational: zero denominator");
    i128 nn = n, dd = d;
    if (dd < 0) {
        nn = -nn;
        dd = -dd;
    }
    u128 g = gcd128(uabs(nn), u128(dd));
    if (g > 1) {
        nn /= i128(g);
        dd /= i128(g);
    }
    if (fits(nn) && fits(dd)) {
        num_ = std::int64_t(nn);
        den_ = std::int64_t(dd);
    } else {
        mpq_class q(to_mpz(nn), to_mpz(dd));
        assign_mpq(std::move(q));
    }
}

Rational::Rational(const mpq_class& q) { assign_mpq(q); }

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_)
{
    if (o.big_)
        big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o)
{
    if (this == &o)
        return *this;
    num_ = o.num_;
    den_ = o.den_;
    if (o.big_)
        big_ = std::make_unique<mpq_class>(*o.big_);
    else
        big_.reset();
    return *this;
}

void Rational::assign_mpq(mpq_class q)
{
    q.canonicalize();
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        num_ = q.get_num().get_si();
        den_ = q.get_den().get_si();
        big_.reset();
    } else {
        num_ = 0;
        den_ = 1;
        big_ = std::make_unique<mpq_class>(std::move(q));
    }
}

Rational Rational::parse(const std::string& text)
{
    if (text.empty())
        throw std::invalid_argument("Rational::parse: empty string");
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("Rational::parse: bad rational '" + text + "'");
    if (q.get_den() == 0)
        throw std::domain_error("Rational::parse: zero denominator");
    return Rational(q);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const
{
    if (big_)
        return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const
{
    if (big_)
        return *big_;
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

std::string Rational::str() const
{
    if (big_)
        return big_->get_str();
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t Rational::hash() const
{
    if (big_) {
        std::hash<std::string> h;
        return h(big_->get_str());
    }
    return std::hash<std::int64_t>{}(num_) * 1000003u ^ std::hash<std::int64_t>{}(den_);
}

Rational Rational::operator-() const
{
    Rational r(*this);
    if (r.big_)
        r.assign_mpq(-*r.big_);
    else if (r.num_ == std::numeric_limits<std::int64_t>::min())
        r.assign_mpq(-r.to_mpq());
    else
        r.num_ = -r.num_;
    return r;
}

Rational& Rational::operator+=(const Rational& o)
{
    if (!big_ && !o.big_) {
        if (den_ == 1 && o.den_ == 1) {
            i128 s = i128(num_) + o.num_;
            if (fits(s)) {
                num_ = std::int64_t(s);
                return *this;
            }
        }
        i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
        i128 d = i128(den_) * o.den_;
        u128 g = gcd128(uabs(n), u128(d));
        if (g > 1) {
            n /= i128(g);
            d /= i128(g);
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        if (fits(n) && fits(d)) {
            num_ = std::int64_t(n);
            den_ = std::int64_t(d);
            return *this;
        }
        assign_mpq(mpq_class(to_mpz(n), to_mpz(d)));
        return *this;
    }
    assign_mpq(to_mpq() + o.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o)
{
    if (!big_ && !o.big_) {
        if (num_ == 0 || o.num_ == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        std::int64_t a = num_, b = den_, c = o.num_, d = o.den_;
        if (b != 1 || d != 1) {
            auto g1 = static_cast<std::int64_t>(gcd128(uabs(a), u128(d)));
            auto g2 = static_cast<std::int64_t>(gcd128(uabs(c), u128(b)));
            if (g1 > 1) {
                a /= g1;
                d /= g1;
            }
            if (g2 > 1) {
                c /= g2;
                b /= g2;
            }
        }
        i128 n = i128(a) * c;
        i128 dd = i128(b) * d;
        if (fits(n) && fits(dd)) {
            num_ = std::int64_t(n);
            den_ = std::int64_t(dd);
            return *this;
        }
        assign_mpq(mpq_class(to_mpz(n), to_mpz(dd)));
        return *this;
    }
    assign_mpq(to_mpq() * o.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw std::domain_error("Rational: division by zero");
    return *this *= o.inverse();
}

Rational Rational::inverse() const
{
    if (is_zero())
        throw std::domain_error("Rational: inverse of zero");
    if (big_)
        return Rational(mpq_class(1) / *big_);
    return Rational(den_, num_);
}

Rational Rational::pow(int e) const
{
    if (e < 0)
        return inverse().pow(-e);
    Rational result(1);
    Rational base(*this);
    while (e > 0) {
        if (e & 1)
            result *= base;
        e >>= 1;
        if (e)
            base *= base;
    }
    return result;
}

bool operator==(const Rational& a, const Rational& b)
{
    if (!a.big_ && !b.big_)
        return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_)
        return *a.big_ == *b.big_;
    return false; // canonical: a big value never equals an inline one
}

bool operator<(const Rational& a, const Rational& b)
{
    if (!a.big_ && !b.big_)
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    return a.to_mpq() < b.to_mpq();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return Rational(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(mpq_class(r));
}

} // namespace pva
