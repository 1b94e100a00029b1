#include <doctest.h>

#include "hecke_classes.hpp"

using namespace polisog;

namespace {

// n q = u^2 r with n in [1, H] and u = x + y w, |x|, |y| <= H.
bool witness_search(const PolClassRep& q, const PolClassRep& r, long h) {
    for (long n = 1; n <= h; ++n)
        for (long x = -h; x <= h; ++x)
            for (long y = -h; y <= h; ++y) {
                QuadElem u = QuadElem::from_omega(q.field, x, y);
                if (!u.is_zero() && q.q * Rational(n) == u * u * r.q) return true;
            }
    return false;
}

}  // namespace

TEST_CASE("equivalence examples") {
    QuadField f(Integer(5));
    auto e = equivalent(PolClassRep::make(QuadElem(f, 3, 1)), PolClassRep::make(QuadElem(f, 2)));
    CHECK(e.equivalent);
    REQUIRE(e.witness.has_value());
    CHECK(QuadElem(f, 3, 1) * Rational(e.witness->n) == e.witness->u * e.witness->u * QuadElem(f, 2));
    CHECK(rosati_transport_check(QuadElem(f, 3, 1), QuadElem(f, 2), e.witness->u, e.witness->n));
    auto e2 = equivalent(PolClassRep::make(QuadElem(f, 4, 1)), PolClassRep::make(QuadElem(f, Rational(9, 2), Rational(1, 2))));
    CHECK_FALSE(e2.equivalent);
    CHECK(e2.norm_ratio == Rational(11, 19));
    CHECK_THROWS_AS(PolClassRep::make(QuadElem(f, 2, 1)), Error);
    CHECK_THROWS_AS(PolClassRep::make(QuadElem(QuadField(Integer(-1)), 2)), Error);
}

TEST_CASE("generated classes") {
    for (long D : {5L, 2L, 13L}) {
        QuadField f{Integer(D)};
        auto reps = generate_classes(f, 6);
        REQUIRE(reps.size() == 6);
        CHECK(reps[0].q == QuadElem(f, 1));
        for (size_t i = 0; i < reps.size(); ++i) {
            CHECK(is_totally_positive(reps[i].q));
            CHECK(reps[i].q.is_integral());
            for (size_t j = 0; j < reps.size(); ++j) {
                auto e = equivalent(reps[i], reps[j]);
                CHECK(e.equivalent == (i == j));
                if (i != j) CHECK_FALSE(witness_search(reps[i], reps[j], 6));
            }
        }
    }
    auto five = generate_classes(QuadField(Integer(5)), 2);
    CHECK(five[1].q == QuadElem(QuadField(Integer(5)), Rational(7, 2), Rational(1, 2)));
}

TEST_CASE("equivalence agrees with search on scaled squares") {
    QuadField f(Integer(2));
    PolClassRep q = PolClassRep::make(QuadElem(f, 3, 1));
    for (long a = 1; a <= 4; ++a)
        for (long b = -3; b <= 3; ++b) {
            QuadElem u(f, a, b);
            if (u.norm() == 0) continue;
            PolClassRep r = PolClassRep::make(q.q * u * u * Rational(2));
            auto e = equivalent(q, r);
            CHECK(e.equivalent);
            REQUIRE(e.witness.has_value());
            CHECK(q.q * Rational(e.witness->n) == e.witness->u * e.witness->u * r.q);
        }
}
