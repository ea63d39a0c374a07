#pragma once

// Poisson vertex algebras generated by a Virasoro element L and primary
// generators of given conformal weights.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "pva/lambda.hpp"

namespace pva {

/// L_(1) P is not a rational multiple of P.
class NotEigen : public Error {
public:
    using Error::Error;
};

struct CFTStructure {
    BracketTable table;
    /// Conformal weight per generator; generator 0 is L with weight 2.
    std::vector<Rational> weights;
    DiffPoly c;
};

/// Table with {L_l L} = (D + 2l)L + c l^3 and {L_l W_j} = (D + w_j l) W_j
/// (plus the skew mirrors); all W-W entries start at zero.
CFTStructure make_cft(const RingPtr& ring, const std::vector<Rational>& weights, const DiffPoly& c);
/// Sets entry (i, j) and its skew mirror (j, i).
void set_entry(CFTStructure& s, std::size_t i, std::size_t j, const LambdaPoly& p);

/// {L_l P}
LambdaPoly l_bracket(const DiffPoly& P, const CFTStructure& s);
/// Delta with L_(1) P = Delta P.
Rational conformal_weight(const DiffPoly& P, const CFTStructure& s);
/// {L_l P} = (D + Delta l) P.
bool is_primary(const DiffPoly& P, const CFTStructure& s);

/// Weight of a monomial: sum of (generator weight + order) * exponent.
Rational monomial_weight(const Monomial& m, const CFTStructure& s);
/// Every monomial of the l^k coefficient of entry (i, j) has weight
/// w_i + w_j - k - 1. Returns the offending (i, j, k) triples.
std::vector<std::array<std::size_t, 3>> weight_violations(const CFTStructure& s);

struct WeightRelationReport {
    bool pass = true;
    std::vector<std::string> failures;
};
/// Decomposes {L_l P_j} = (D + (2 Delta - j - 1) l) P_j + sum_{k >= 2} l^k Q_{j,k}
/// and checks Q_{j,2k} = C(j+2k, j) P'_{j+2k},
/// Q_{j,2k+1} = (2 Delta C(j+2k, j) - C(j+2k+1, j)) P_{j+2k}.
WeightRelationReport check_weight_relations(const CFTStructure& s, const Rational& delta, const std::map<int, DiffPoly>& P);

struct WAlgebraReport {
    AxiomReport skew;
    AxiomReport jacobi;
    bool pass() const { return skew.pass && jacobi.pass; }
};
/// Full skew and Jacobi on the table.
WAlgebraReport check_w_algebra(const CFTStructure& s);

/// Rings and coefficient data of the explicit W-algebras: generators L, W;
/// constant symbol c; for weight four also sqrt2 with sqrt2^2 = 2.
struct WAlgebraData {
    CFTStructure structure;
    Rational delta;
    std::map<int, DiffPoly> P;
};
WAlgebraData w_algebra_weight3();
WAlgebraData w_algebra_weight4();
/// {W_l W} = (D + 2l)(alpha L^3 + beta L W), c = 0, weight four.
WAlgebraData w_algebra_cubic();
/// Builds the structure for given coefficient data over the ring of `P`.
WAlgebraData w_algebra(const RingPtr& ring, const Rational& delta, const DiffPoly& c, std::map<int, DiffPoly> P);

} // namespace pva
