#pragma once

// Lenard-Magri recursion K xi_{j+1} = H xi_j for the compatible pairs of the
// catalog.

#include <optional>
#include <vector>

#include "pva/diffop.hpp"

namespace pva {

/// An integration step of the recursion has no solution.
class Obstruction : public Error {
public:
    using Error::Error;
};

struct HierarchyState {
    DiffOp K;
    DiffOp H;
    std::vector<DiffPoly> xis;
    /// equations[j] = K xi_{j+1} = H xi_j
    std::vector<DiffPoly> equations;
    /// Linear independence of the xis over constants, certified at a rational
    /// specialization of the constant symbols.
    bool independent = false;
};

/// k when K = D^k, otherwise nullopt.
std::optional<int> pure_d_power(const DiffOp& K);

/// xi_next with D^k xi_next = H xi, integration constants zero.
DiffPoly lenard_step_Dk(const DiffOp& K, const DiffOp& H, const DiffPoly& xi);

/// One step of the reduced order-5 recursion:
/// xi_next = H_c xi - 1/2 * integral(xi * K_c(1/u^2)), with
/// H_c = (1/u^2)(D^2 - c^2) + (u'/u^3)(D + c) - ((D + c)(u'/u^3)), the last
/// term a multiplication operator, so that D o H_c - 1/2 K_c(1/u^2) equals
/// (1/u) D (1/u) (D^2 - c^2).
DiffPoly lenard_step_reduced5(const DiffPoly& xi, const DiffPoly& c);
DiffOp reduced5_operator(const RingPtr& ring, const DiffPoly& c);

/// Runs `steps` further steps from the last seed. When K is a power of D the
/// integration step is used; otherwise `reduced_c` selects the reduced
/// order-5 step for (K_c, H^(5,c)). Every consecutive pair is verified.
HierarchyState run_hierarchy(const DiffOp& K, const DiffOp& H, const std::vector<DiffPoly>& seeds, int steps,
                             const std::optional<DiffPoly>& reduced_c = std::nullopt);

/// variational_derivative(h) == xi
bool verify_density(const DiffPoly& h, const DiffPoly& xi);

/// xi_i * K xi_j is a total derivative for every pair (variational test).
bool verify_conservation(const HierarchyState& s);

/// Rank over Q of the given polynomials after substituting the rational
/// values for constant symbols (other symbols stay as indeterminates).
int specialized_rank(const std::vector<DiffPoly>& polys, const std::map<std::size_t, Rational>& values);
/// Deterministic nonzero rational values for every D-constant symbol.
std::map<std::size_t, Rational> default_specialization(const RingPtr& ring);

/// k with a = k * b, if one exists (b nonzero).
std::optional<Rational> proportionality(const DiffPoly& a, const DiffPoly& b);
/// k with a = k * b where k is a single monomial killed by D (a constant
/// symbol product times a rational), if one exists.
std::optional<DiffPoly> constant_factor(const DiffPoly& a, const DiffPoly& b);

} // namespace pva
