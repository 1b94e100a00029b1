#include <doctest.h>

#include "algebras.hpp"
#include "gen.hpp"

using namespace polisog;

namespace {

Scalar random_scalar(testgen::Rng& r, const BaseRing& b) {
    Scalar s(b.dim());
    for (auto& x : s) x = Rational(r.range(-5, 5), r.range(1, 3));
    for (auto& x : s) x.canonicalize();
    return s;
}

AlgElem random_elem(testgen::Rng& r, const AlgebraWithInvolution& a) {
    std::vector<Rational> v(a.dim_q());
    for (auto& x : v) x = r.range(-4, 4);
    return a.unflatten(v);
}

std::vector<BaseRing> rings() {
    return {BaseRing::rational(), BaseRing::quadratic(Integer(5)), BaseRing::quadratic(Integer(-3)),
            BaseRing::quaternion(-1, -1), BaseRing::quaternion(-1, 3)};
}

}  // namespace

TEST_CASE("base ring axioms") {
    testgen::Rng r(3);
    for (auto& b : rings())
        for (int i = 0; i < 40; ++i) {
            Scalar x = random_scalar(r, b), y = random_scalar(r, b), z = random_scalar(r, b);
            CHECK(b.mul(b.mul(x, y), z) == b.mul(x, b.mul(y, z)));
            CHECK(b.mul(x, b.add(y, z)) == b.add(b.mul(x, y), b.mul(x, z)));
            CHECK(b.conj(b.mul(x, y)) == b.mul(b.conj(y), b.conj(x)));
            CHECK(b.conj(b.conj(x)) == x);
            CHECK(b.norm_q(b.mul(x, y)) == b.norm_q(x) * b.norm_q(y));
            CHECK(b.left_mult(b.mul(x, y)) == b.left_mult(x) * b.left_mult(y));
            if (!b.is_zero(x)) CHECK(b.mul(x, b.inv(x)) == b.one());
            CHECK(b.is_rational(b.mul(x, b.conj(x))));
        }
}

TEST_CASE("quaternion relations") {
    auto H = BaseRing::quaternion(2, -3);
    Scalar i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(H.mul(i, i) == H.from_rational(2));
    CHECK(H.mul(j, j) == H.from_rational(-3));
    CHECK(H.mul(i, j) == k);
    CHECK(H.mul(j, i) == H.neg(k));
    CHECK(H.norm_q(Scalar{1, 1, 0, 0}) == -1);
    CHECK_THROWS_AS(BaseRing::quaternion(0, 1), Error);
}

TEST_CASE("matrix algebra involutions") {
    testgen::Rng r(8);
    auto Q = BaseRing::rational();
    auto H = BaseRing::quaternion(-1, -1);
    auto F = BaseRing::quadratic(Integer(-2));
    std::vector<AlgebraWithInvolution> algs{
        AlgebraWithInvolution({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity)}),
        AlgebraWithInvolution({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity, BMatrix::from_rational(Q, QMatrix::diagonal({1, 3})))}),
        AlgebraWithInvolution({SimpleFactor::make(H, 2, EntryInvolution::kCanonical)}),
        AlgebraWithInvolution({SimpleFactor::make(F, 2, EntryInvolution::kConjugation)}),
        AlgebraWithInvolution({SimpleFactor::make(Q, 1, EntryInvolution::kIdentity), SimpleFactor::make(Q, 1, EntryInvolution::kIdentity)}, {{0, 1}}),
    };
    for (auto& a : algs)
        for (int i = 0; i < 20; ++i) {
            AlgElem x = random_elem(r, a), y = random_elem(r, a);
            CHECK(a.equal(a.involution(a.mul(x, y)), a.mul(a.involution(y), a.involution(x))));
            CHECK(a.equal(a.involution(a.involution(x)), x));
            CHECK(a.left_regular(a.mul(x, y)) == a.left_regular(x) * a.left_regular(y));
        }
    CHECK(algs[0].is_positive_involution());
    CHECK(algs[1].is_positive_involution());
    CHECK(algs[2].is_positive_involution());
    CHECK(algs[3].is_positive_involution());
    CHECK_FALSE(algs[4].is_positive_involution());
    AlgebraWithInvolution indefinite({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity, BMatrix::from_rational(Q, QMatrix::diagonal({1, -1})))});
    CHECK_FALSE(indefinite.is_positive_involution());
    CHECK_THROWS_AS(SimpleFactor::make(H, 1, EntryInvolution::kIdentity), Error);
}

TEST_CASE("involution trace form matches its definition") {
    auto Q = BaseRing::rational();
    AlgebraWithInvolution a({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity, BMatrix::from_rational(Q, QMatrix::diagonal({1, 2})))});
    QMatrix t = a.involution_trace_form();
    for (size_t i = 0; i < a.dim_q(); ++i)
        for (size_t j = 0; j < a.dim_q(); ++j)
            CHECK(t(i, j) == a.trace_q(a.mul(a.basis_element(i), a.involution(a.basis_element(j)))));
}

TEST_CASE("norms") {
    testgen::Rng r(21);
    auto Q = BaseRing::rational();
    auto F = BaseRing::quadratic(Integer(5));
    AlgebraWithInvolution a({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity), SimpleFactor::make(F, 1, EntryInvolution::kIdentity)});
    NormSpec spec = NormSpec::make(a, {1, 1});
    CHECK(spec.rank_d == 4);
    CHECK(NormSpec::make(a, {2, 1}).rank_d == 6);
    CHECK_THROWS_AS(NormSpec::make(a, {1, 1}, 3), Error);
    CHECK_THROWS_AS(NormSpec::make(a, {1}), Error);
    CHECK(norm(a, a.scalar(3), spec) == 81);
    OrderR order = OrderR::standard(a);
    for (int i = 0; i < 30; ++i) {
        AlgElem x = random_elem(r, a), y = random_elem(r, a);
        CHECK(norm(a, a.mul(x, y), spec) == norm(a, x, spec) * norm(a, y, spec));
        if (norm(a, x, spec) == 0) continue;
        AlgElem ni = norm_times_inverse(order, x, spec);
        CHECK(order.contains(ni));
        CHECK(a.equal(a.mul(ni, x), a.scalar(norm(a, x, spec))));
        for (long p : {2L, 3L, 5L}) CHECK(local_norm(a, x, Integer(p), spec) == qpow(Rational(p), valuation(norm(a, x, spec), Integer(p))));
    }
}

TEST_CASE("orders") {
    auto F = BaseRing::quadratic(Integer(5));
    AlgebraWithInvolution a({SimpleFactor::make(F, 1, EntryInvolution::kIdentity)});
    OrderR o = OrderR::standard(a);
    CHECK(o.contains(a.unflatten({Rational(1, 2), Rational(1, 2)})));
    CHECK_FALSE(o.contains(a.unflatten({Rational(1, 2), 0})));
    auto c = o.coords(a.unflatten({3, 1}));
    CHECK(o.contains(o.from_coords({Integer(c[0]), Integer(c[1])})));
    CHECK_THROWS_AS(OrderR(a, {a.one()}), Error);
    CHECK_THROWS_AS(OrderR(a, {a.one(), a.unflatten({Rational(1, 3), Rational(1, 3)})}), Error);
}
