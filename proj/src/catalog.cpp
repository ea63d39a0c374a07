#include "pva/catalog.hpp"

namespace pva {

namespace {

DiffPoly u_pow(const RingPtr& r, int e, int order = 0) { return DiffPoly::jet(r, 0, order, e); }
DiffOp Dop(const RingPtr& r, int k = 1) { return DiffOp::D(r, k); }
DiffOp mul(const DiffPoly& f) { return DiffOp(f); }

void require_quasiconstant(const DiffPoly& c, const char* what)
{
    if (!is_quasiconstant(c))
        throw ConstraintViolated(std::string(what) + ": parameter must be a quasiconstant");
}

void require_constant(const DiffPoly& c, const char* what)
{
    require_quasiconstant(c, what);
    if (!total_derivative(c).is_zero())
        throw ConstraintViolated(std::string(what) + ": parameter must be a constant (D c = 0)");
}

void require_vanishing_derivative(const DiffPoly& c, int k, const char* what)
{
    require_quasiconstant(c, what);
    if (!total_derivative(c, k).is_zero())
        throw ConstraintViolated(std::string(what) + ": parameter must satisfy D^" + std::to_string(k) +
                                 " c = 0");
}

void require_odd(int N, int lo, const char* what)
{
    if (N < lo || N % 2 == 0)
        throw Error(std::string(what) + ": order must be odd and at least " + std::to_string(lo));
}

} // namespace

DiffOp B_pow(const RingPtr& ring, int n) { return (mul(u_pow(ring, -1)) * Dop(ring)).pow(n); }

DiffOp H_N0_any(const RingPtr& ring, int N)
{
    if (N < 3)
        throw Error("H_N0: order must be at least 3");
    return Dop(ring, 2) * B_pow(ring, N - 3) * Dop(ring);
}

DiffOp H_N0(const RingPtr& ring, int N)
{
    require_odd(N, 3, "H_N0");
    return H_N0_any(ring, N);
}

DiffOp B_nc(const RingPtr& ring, int n, const DiffPoly& c)
{
    require_constant(c, "B_nc");
    DiffOp r = DiffOp::identity(ring);
    for (int k = 1; k <= n; ++k)
        r = r * (mul(u_pow(ring, -1)) * (Dop(ring) - mul(c * Rational(k))));
    return r;
}

DiffOp H_Nc(const RingPtr& ring, int N, const DiffPoly& c)
{
    require_odd(N, 3, "H_Nc");
    int n = (N - 3) / 2;
    DiffOp b = B_nc(ring, n, c);
    DiffOp r = (Dop(ring) - mul(c)) * adjoint(b) * Dop(ring) * b * (Dop(ring) + mul(c));
    return n % 2 ? -r : r;
}

DiffOp T_N(const RingPtr& ring, int N)
{
    if (N < 0)
        throw Error("T_N: order must be nonnegative");
    DiffOp inv = mul(u_pow(ring, -1, 2));
    return inv * (Dop(ring) * inv).pow(N);
}

DiffOp K_c(const RingPtr& ring, const DiffPoly& c)
{
    require_constant(c, "K_c");
    return Dop(ring) * (Dop(ring, 2) - mul(c * c));
}

std::map<int, DiffPoly> H5_coefficients(const RingPtr& ring, const DiffPoly& c1, const DiffPoly& c2)
{
    require_quasiconstant(c1, "H5_c1c2");
    require_quasiconstant(c2, "H5_c1c2");
    DiffPoly u = u_pow(ring, 1), u1 = u_pow(ring, 1, 1), u2 = u_pow(ring, 1, 2), u3 = u_pow(ring, 1, 3),
             u4 = u_pow(ring, 1, 4);
    auto q = [](std::int64_t a, std::int64_t b = 1) { return Rational(a, b); };
    DiffPoly c1p = total_derivative(c1), c1pp = total_derivative(c1, 2);
    DiffPoly c2pp = total_derivative(c2, 2);

    DiffPoly g1num = c1 * c1 * u.pow(4) * q(1, 4) + c1 * c2 * u.pow(6) - c1 * u.pow(3) * u2 * q(2) +
                     c1 * u.pow(2) * u1.pow(2) * q(6) + c1pp * u.pow(4) * q(3) - c2pp * u.pow(6) * q(6) -
                     c1p * u.pow(3) * u1 * q(8) - u.pow(3) * u4 * q(2) + u.pow(2) * u1 * u3 * q(24) +
                     u.pow(2) * u2.pow(2) * q(18) - u * u1.pow(2) * u2 * q(144) + u1.pow(4) * q(120);
    DiffPoly g3num = c1 * u.pow(2) + c2 * u.pow(4) * q(2) + u * u2 * q(4) - u1.pow(2) * q(12);
    return {{1, g1num * u.pow(-6)}, {3, g3num * u.pow(-4)}, {5, u.pow(-2)}};
}

DiffOp H5_c1c2(const RingPtr& ring, const DiffPoly& c1, const DiffPoly& c2)
{
    DiffPoly constraint = c1 * total_derivative(c2) * Rational(2) + c2 * total_derivative(c1) +
                          total_derivative(c2, 3) * Rational(4);
    if (!constraint.is_zero())
        throw ConstraintViolated("H5_c1c2: 2 c1 c2' + c2 c1' + 4 c2''' = " + to_string(constraint) +
                                 " is not zero");
    return from_bracket(from_canonical_form(H5_coefficients(ring, c1, c2), ring));
}

DiffOp H5_0c(const RingPtr& ring, const DiffPoly& c)
{
    require_vanishing_derivative(c, 3, "H5_0c");
    return H_N0(ring, 5) + mul(c * Rational(1, 2)) * Dop(ring, 3) +
           mul(total_derivative(c) * Rational(3, 4)) * Dop(ring, 2);
}

DiffOp B3(const RingPtr& ring, const DiffPoly& c)
{
    require_quasiconstant(c, "B3");
    DiffOp inv = mul(u_pow(ring, -1));
    return inv * Dop(ring) * inv * Dop(ring, 2) + mul(c) * Dop(ring) -
           mul(total_derivative(c) * Rational(1, 2));
}

DiffOp H7(const RingPtr& ring, const DiffPoly& c)
{
    require_vanishing_derivative(c, 3, "H7");
    DiffOp b = B3(ring, c);
    return -(adjoint(b) * Dop(ring) * b);
}

DiffOp H9(const RingPtr& ring, const DiffPoly& c)
{
    require_vanishing_derivative(c, 2, "H9");
    DiffOp b = B3(ring, c);
    DiffOp inv = mul(u_pow(ring, -1));
    DiffOp mid = Dop(ring) * inv * Dop(ring) * inv * Dop(ring) + mul(c) * Dop(ring) +
                 mul(total_derivative(c) * Rational(1, 2));
    return -(adjoint(b) * mid * b);
}

DiffOp H9_display(const RingPtr& ring, const DiffPoly& c)
{
    return -H9(ring, c);
}

DiffOp B_sq(const RingPtr& ring, int n, const DiffPoly& c)
{
    require_vanishing_derivative(c, 2, "B_sq");
    DiffOp inv = mul(u_pow(ring, -1));
    DiffOp r = DiffOp::identity(ring);
    for (int k = 1; k <= n; ++k)
        r = r * (inv * Dop(ring) - mul(c * Rational(k)));
    return r * (inv * Dop(ring, 2) + mul(c) * Dop(ring) - mul(total_derivative(c)));
}

DiffOp H_sq(const RingPtr& ring, int N, const DiffPoly& c)
{
    require_odd(N, 5, "H_sq");
    int n = (N - 5) / 2;
    DiffOp b = B_sq(ring, n, c);
    DiffOp r = adjoint(b) * Dop(ring) * b;
    return n % 2 ? -r : r;
}

std::pair<LambdaPoly, LambdaPoly> compatibility_identity_first(const RingPtr& ring, int m, int n)
{
    DiffPoly one(ring, Rational(1));
    DiffPoly inv_u = u_pow(ring, -1);
    DiffOp bm = B_pow(ring, m);
    BracketTable table = scalar_table(to_bracket(H_N0_any(ring, n + 3)));

    LambdaPoly first = apply_shifted(bm, LambdaPoly(one), 1, 0);
    LambdaPoly lhs = bracket_poly_first_slot(first, DiffPoly::jet(ring, 0, 0), table);

    LambdaPoly diff = apply_shifted(bm, LambdaPoly(inv_u), 1, 0);
    LambdaPoly other = apply_shifted(bm, LambdaPoly(inv_u), 0, 1);
    diff -= m % 2 ? -other : other;
    LambdaPoly rhs = apply_shifted(Dop(ring, 2) * B_pow(ring, n), diff, 1, 1);
    rhs = -rhs.shifted(1, 0);
    return {lhs, rhs};
}

std::pair<LambdaPoly, LambdaPoly> compatibility_identity_second(const RingPtr& ring, int m, int n)
{
    DiffPoly one(ring, Rational(1));
    DiffPoly inv_u = u_pow(ring, -1);
    DiffOp bm = B_pow(ring, m), bn = B_pow(ring, n);
    BracketTable table = scalar_table(to_bracket(H_N0_any(ring, m + 3)));

    LambdaPoly left = apply_shifted(Dop(ring) * bm, LambdaPoly(one, 1, 0), 1, 0);
    LambdaPoly right = apply_shifted(Dop(ring) * bn, LambdaPoly(one, 0, 1), 0, 1);
    LambdaPoly lhs = -(left * right * inv_u);
    LambdaPoly inner = apply_shifted(bn, LambdaPoly(one, 0, 1), 0, 1);
    lhs += bracket(LambdaPoly(DiffPoly::jet(ring, 0, 0)), inner, table, Formal::Lambda);

    LambdaPoly rhs = apply_shifted(bn, apply_shifted(bm, LambdaPoly(inv_u), 1, 0), 1, 1);
    rhs = -rhs.shifted(2, 2);
    return {lhs, rhs};
}

} // namespace pva
