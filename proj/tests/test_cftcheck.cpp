#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pva/cftcheck.hpp"
#include "pva/cftfile.hpp"

using namespace pva;

namespace {

struct Fixture {
    WAlgebraData w3 = w_algebra_weight3();
    CFTStructure& S = w3.structure;
    RingPtr R = S.table.ring;
    DiffPoly L(int order = 0) const { return DiffPoly::jet(R, 0, static_cast<std::uint32_t>(order)); }
    DiffPoly W(int order = 0) const { return DiffPoly::jet(R, 1, static_cast<std::uint32_t>(order)); }
    DiffPoly c() const { return DiffPoly::symbol(R, "c"); }
};

} // namespace

TEST_CASE_FIXTURE(Fixture, "Virasoro and primary axioms of the table")
{
    auto ll = S.table.entry(0, 0);
    CHECK(ll == LambdaPoly(L(1)) + LambdaPoly(L() * Rational(2), 1) + LambdaPoly(c(), 3));
    CHECK(S.table.entry(0, 1) == LambdaPoly(W(1)) + LambdaPoly(W() * Rational(3), 1));
}

TEST_CASE_FIXTURE(Fixture, "conformal weights")
{
    CHECK(conformal_weight(L(), S) == Rational(2));
    CHECK(conformal_weight(L(1), S) == Rational(3));
    CHECK(conformal_weight(W() * W(), S) == Rational(6));
    CHECK(conformal_weight(L() * W(2), S) == Rational(7));
    CHECK_THROWS_AS(conformal_weight(L() * L() + L(1), S), NotEigen);
}

TEST_CASE_FIXTURE(Fixture, "primary elements")
{
    CHECK(is_primary(W(), S));
    CHECK_FALSE(is_primary(L(), S));
    CHECK(is_primary(W() * W(), S));
    CHECK(is_primary(W() * W() * W() * Rational(5), S));
    CHECK_FALSE(is_primary(L(1), S));
    CHECK_FALSE(is_primary(W(1), S));
    CHECK_FALSE(is_primary(W() * L(), S));
    CHECK_FALSE(is_primary(W(2) * W(), S));
}

TEST_CASE_FIXTURE(Fixture, "top term of {L_l L^(m)}")
{
    for (int m = 0; m <= 3; ++m) {
        auto b = l_bracket(L(m), S);
        CHECK(b.degree_lambda() == m + 3);
        auto top = b.coeff(m + 3);
        CHECK(top.is_monomial());
        CHECK(top.terms()[0].mono == c().terms()[0].mono);
    }
}

TEST_CASE("weight-three algebra")
{
    auto d = w_algebra_weight3();
    CHECK(check_weight_relations(d.structure, d.delta, d.P).pass);
    auto r = check_w_algebra(d.structure);
    CHECK(r.skew.pass);
    CHECK(r.jacobi.pass);
    CHECK(weight_violations(d.structure).empty());
}

TEST_CASE("weight-four algebra")
{
    auto d = w_algebra_weight4();
    CHECK(check_weight_relations(d.structure, d.delta, d.P).pass);
    auto r = check_w_algebra(d.structure);
    CHECK(r.skew.pass);
    CHECK(r.jacobi.pass);
    CHECK(weight_violations(d.structure).empty());
}

TEST_CASE("cubic weight-four algebra at zero central charge")
{
    auto d = w_algebra_cubic();
    CHECK(d.structure.c.is_zero());
    CHECK(check_weight_relations(d.structure, d.delta, d.P).pass);
    CHECK(check_w_algebra(d.structure).pass());
}

TEST_CASE("perturbed data fails")
{
    auto d = w_algebra_weight3();
    auto P = d.P;
    P[3] *= Rational(2);
    auto bad = w_algebra(d.structure.table.ring, d.delta, d.structure.c, P);
    CHECK_FALSE(check_weight_relations(bad.structure, bad.delta, bad.P).pass);
    CHECK_FALSE(check_w_algebra(bad.structure).jacobi.pass);
}

TEST_CASE("weight bookkeeping detects a misweighted entry")
{
    auto d = w_algebra_weight3();
    auto R = d.structure.table.ring;
    auto s = d.structure;
    set_entry(s, 1, 1, LambdaPoly(DiffPoly::jet(R, 0, 0), 1));
    CHECK_FALSE(weight_violations(s).empty());
}

TEST_CASE("declaration file")
{
    const char* text = "format: 1\n"
                       "# weight three\n"
                       "generators: L W\n"
                       "weights: 2 3\n"
                       "symbol: c\n"
                       "central: c\n"
                       "P1: 256*L^2 + 24*c*L''\n"
                       "P3: 40*c*L\n"
                       "P5: c^2\n";
    auto f = parse_cft_file(text);
    REQUIRE(f.data.has_value());
    CHECK(check_w_algebra(f.structure).pass());
    CHECK(check_weight_relations(f.data->structure, f.data->delta, f.data->P).pass);
    CHECK(f.structure.table.entry(1, 1) == w_algebra_weight3().structure.table.entry(1, 1));

    CHECK_THROWS_AS(parse_cft_file("generators: L W\n"), Error);
    CHECK_THROWS_AS(parse_cft_file("format: 1\ngenerators: L W\nweights: 2\n"), Error);
}
