#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pva/catalog.hpp"
#include "pva/diffop.hpp"
#include "support.hpp"

using namespace pva;

namespace {

struct Fixture {
    RingPtr R = make_ring({"u"}, {{"c", "", std::nullopt}, {"a", "", std::nullopt}});
    DiffPoly u(int order = 0, int e = 1) const { return DiffPoly::jet(R, 0, static_cast<std::uint32_t>(order), e); }
    DiffPoly q(std::int64_t a, std::int64_t b = 1) const { return DiffPoly(R, Rational(a, b)); }
    DiffPoly sym(const char* n) const { return DiffPoly::symbol(R, n); }
    DiffOp D(int k = 1) const { return DiffOp::D(R, k); }
    DiffOp M(const DiffPoly& f) const { return DiffOp(f); }
};

} // namespace

TEST_CASE_FIXTURE(Fixture, "composition")
{
    CHECK(D() * M(u()) == M(u()) * D() + M(u(1)));
    auto p = (M(u(0, -1)) * D()).pow(2);
    CHECK(p == M(u(0, -2)) * D(2) - M(u(1) * u(0, -3)) * D());
    CHECK(D(2) * D() == D(3));
    CHECK(D(0) == DiffOp::identity(R));
}

TEST_CASE_FIXTURE(Fixture, "composition agrees with the series oracle")
{
    pvatest::Oracle o(R, 5, 8);
    pvatest::Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        auto A = pvatest::random_op(rng, R, 2);
        auto B = pvatest::random_op(rng, R, 2);
        auto f = pvatest::random_poly(rng, R);
        auto ab = A * B;
        CHECK(o.eval(apply(ab, f), 4) == o.eval_apply(A, apply(B, f), 4));
        CHECK(o.eval(apply(A, f), 4) == o.eval_apply(A, f, 4));
    }
}

TEST_CASE_FIXTURE(Fixture, "adjoint")
{
    CHECK(adjoint(D()) == -D());
    CHECK(adjoint(M(u()) * D()) == -(M(u()) * D()) - M(u(1)));
    auto h5 = H_N0(R, 5);
    CHECK(adjoint(h5) == -h5);
    CHECK(adjoint(adjoint(M(u(2)) * D(3) + M(u(0, -1)))) == M(u(2)) * D(3) + M(u(0, -1)));
}

TEST_CASE_FIXTURE(Fixture, "application")
{
    auto x2 = DiffPoly::x(R, 2);
    CHECK(apply(D(3), x2).is_zero());
    auto expected = q(-2) * u(3) * u(0, -3) + q(18) * u(1) * u(2) * u(0, -4) - q(24) * u(1).pow(3) * u(0, -5);
    CHECK(apply(H_N0(R, 5), x2) == expected);
    CHECK(expected == total_derivative(u(0, -2), 3));

    auto c = sym("c");
    auto kc = apply(K_c(R, c), u(0, -2));
    CHECK(kc == total_derivative(q(-2) * u(2) * u(0, -3) + q(6) * u(1).pow(2) * u(0, -4) - c * c * u(0, -2)));
}

TEST_CASE_FIXTURE(Fixture, "operators and brackets")
{
    CHECK(to_bracket(D()) == LambdaPoly(q(1), 1));
    auto a = sym("a");
    auto thm = D(3) + M(a) * (M(q(2) * u()) * D() + M(u(1)));
    auto expected = LambdaPoly(q(1), 3) + LambdaPoly(q(2) * a * u(), 1) + LambdaPoly(a * u(1));
    CHECK(to_bracket(thm) == expected);
    auto h7 = H_N0(R, 7);
    CHECK(from_bracket(to_bracket(h7)) == h7);
    CHECK(from_bracket(expected) == thm);
}

TEST_CASE_FIXTURE(Fixture, "skew-adjointness")
{
    CHECK(is_skew_adjoint(D(3)).pass);
    auto r = is_skew_adjoint(M(u()) * D());
    CHECK_FALSE(r.pass);
    CHECK(r.residual == M(-u(1)));
    CHECK(is_skew_adjoint(T_N(R, 3)).pass);
}

TEST_CASE_FIXTURE(Fixture, "skew as a form matches skew-adjointness")
{
    pvatest::Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        auto A = i % 2 ? pvatest::random_skew_op(rng, R, 3) : pvatest::random_op(rng, R, 3);
        CHECK(is_skew_adjoint(A).pass == check_skew(scalar_table(to_bracket(A))).pass);
    }
}

TEST_CASE_FIXTURE(Fixture, "Hamiltonian operators")
{
    CHECK(check_hamiltonian(H_N0(R, 3)).pass());
    CHECK(check_hamiltonian(H_N0(R, 5)).pass());
    auto fake = D(3) + M(q(2) * u(0, 2)) * D() + M(q(2) * u() * u(1));
    auto r = check_hamiltonian(fake);
    CHECK(r.skew);
    CHECK_FALSE(r.jacobi);
    CHECK_FALSE(r.pass());
}

TEST_CASE_FIXTURE(Fixture, "compatible pairs")
{
    CHECK(check_compatible(H_N0(R, 3), H_N0(R, 5)).pass());
    auto c = sym("c");
    CHECK(check_compatible(H_Nc(R, 5, c), K_c(R, c)).pass());
    auto fake = D(3) + M(q(2) * u(0, 2)) * D() + M(q(2) * u() * u(1));
    auto r = check_compatible(H_N0(R, 5), fake);
    CHECK_FALSE(r.pass());
    CHECK(r.a.pass());
    CHECK_FALSE(r.b.pass());
}

TEST_CASE_FIXTURE(Fixture, "printing")
{
    CHECK(to_string(D(3)) == "D^3");
    CHECK(to_string(-D()) == "-D");
    CHECK(to_string(DiffOp(R)) == "0");
}
