#pragma once

// Named operator families over a single-generator ring. Parameters are
// quasiconstant DiffPolys (symbols with D-chains, rationals, or x-polynomials).

#include "pva/diffop.hpp"

namespace pva {

class ConstraintViolated : public Error {
public:
    using Error::Error;
};

/// ((1/u) D)^n
DiffOp B_pow(const RingPtr& ring, int n);
/// D^2 o ((1/u) D)^(N-3) o D for any N >= 3.
DiffOp H_N0_any(const RingPtr& ring, int N);
/// Same, restricted to odd N >= 3.
DiffOp H_N0(const RingPtr& ring, int N);

/// (1/u)(D - c) o (1/u)(D - 2c) o ... o (1/u)(D - nc); c constant.
DiffOp B_nc(const RingPtr& ring, int n, const DiffPoly& c);
/// (-1)^n (D - c) o B* o D o B o (D + c) with N = 2n + 3.
DiffOp H_Nc(const RingPtr& ring, int N, const DiffPoly& c);

/// (1/u'') (D o (1/u''))^N
DiffOp T_N(const RingPtr& ring, int N);
/// D (D^2 - c^2)
DiffOp K_c(const RingPtr& ring, const DiffPoly& c);

/// Canonical coefficients g_1, g_3, g_5 of the order-five family.
std::map<int, DiffPoly> H5_coefficients(const RingPtr& ring, const DiffPoly& c1, const DiffPoly& c2);
/// Operator of the bracket sum (D + 2 lambda)^j g_j. Requires
/// 2 c1 c2' + c2 c1' + 4 c2''' = 0.
DiffOp H5_c1c2(const RingPtr& ring, const DiffPoly& c1, const DiffPoly& c2);
/// H^(5,0) + c/2 D^3 + 3/4 c' D^2, with c''' = 0.
DiffOp H5_0c(const RingPtr& ring, const DiffPoly& c);

/// (1/u) D o (1/u) D^2 + c D - c'/2
DiffOp B3(const RingPtr& ring, const DiffPoly& c);
/// -B3* o D o B3, with c''' = 0.
DiffOp H7(const RingPtr& ring, const DiffPoly& c);
/// -B3* o (D o (1/u) o D o (1/u) D + c D + c'/2) o B3, with c'' = 0. The
/// overall sign makes H9(c) = H^(9,0) + 3c H^(7,0) + 3c^2 H^(5,0) + c^3 H^(3,0)
/// for constant c.
DiffOp H9(const RingPtr& ring, const DiffPoly& c);
/// The same product without the leading minus sign.
DiffOp H9_display(const RingPtr& ring, const DiffPoly& c);

/// ((1/u)D - c) ... ((1/u)D - nc) ((1/u)D^2 + cD - c'), with c'' = 0.
DiffOp B_sq(const RingPtr& ring, int n, const DiffPoly& c);
/// (-1)^n B_sq* o D o B_sq with N = 2n + 5.
DiffOp H_sq(const RingPtr& ring, int N, const DiffPoly& c);

/// Both sides of the identity
/// {B^(m)(l+D)1 _{l+mu} u}_{n+3}
///   = -l (l+mu+D)^2 B^(n)(l+mu+D) (B^(m)(l+D)(1/u) - (-1)^m B^(m)(mu+D)(1/u)).
std::pair<LambdaPoly, LambdaPoly> compatibility_identity_first(const RingPtr& ring, int m, int n);
/// Both sides of the identity
/// -(1/u)((l+D)B^(m)(l+D) l)((mu+D)B^(n)(mu+D) mu) + {u_l B^(n)(mu+D) mu}_{m+3}
///   = -l^2 mu^2 B^(n)(l+mu+D) B^(m)(l+D)(1/u).
std::pair<LambdaPoly, LambdaPoly> compatibility_identity_second(const RingPtr& ring, int m, int n);

} // namespace pva
