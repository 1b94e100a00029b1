#include <doctest.h>

#include "gen.hpp"
#include "quadfield.hpp"

using namespace polisog;

namespace {

// Smallest unit > 1 among x + y w with small coordinates, by direct search.
std::optional<QuadElem> small_unit(const QuadField& f, long bound) {
    std::optional<QuadElem> best;
    long double best_v = 0;
    for (long c1 = 1; c1 <= bound; ++c1)
        for (long c0 = -bound; c0 <= bound; ++c0) {
            QuadElem u = QuadElem::from_omega(f, c0, c1);
            if (abs(u.norm()) != 1) continue;
            long double v = u.embeddings().first;
            if (v > 1 && (!best || v < best_v)) {
                best = u;
                best_v = v;
            }
        }
    return best;
}

}  // namespace

TEST_CASE("field arithmetic") {
    QuadField f(Integer(-5));
    QuadElem a(f, 1, 2), b(f, Rational(1, 3), -1);
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK((a * a.inverse()) == QuadElem(f, 1));
    CHECK((a + b).trace() == a.trace() + b.trace());
    CHECK(QuadField(Integer(5)).disc() == 5);
    CHECK(QuadField(Integer(-5)).disc() == -20);
    CHECK_THROWS_AS(QuadField(Integer(12)), Error);
    CHECK_THROWS_AS(QuadField(Integer(1)), Error);
    QuadElem w = QuadElem::from_omega(QuadField(Integer(5)), 0, 1);
    CHECK(w == QuadElem(QuadField(Integer(5)), Rational(5, 2), Rational(1, 2)));
    CHECK(w.is_integral());
    CHECK_FALSE(QuadElem(QuadField(Integer(3)), Rational(1, 2), Rational(1, 2)).is_integral());
}

TEST_CASE("splitting of primes") {
    QuadField f(Integer(5));
    CHECK(splitting_type(f, Integer(11)) == Splitting::kSplit);
    CHECK(splitting_type(f, Integer(7)) == Splitting::kInert);
    CHECK(splitting_type(f, Integer(5)) == Splitting::kRamified);
    CHECK(splitting_type(f, Integer(2)) == Splitting::kInert);
    CHECK(splitting_type(QuadField(Integer(-7)), Integer(2)) == Splitting::kSplit);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        Rational prod = 1;
        QfIdeal all = QfIdeal::unit(f);
        for (auto& P : primes_above(f, Integer(p))) {
            CHECK(P.ideal.norm() == ipow(Integer(p), P.f));
            for (int k = 0; k < P.e; ++k) all = all * P.ideal;
        }
        CHECK(all == QfIdeal::principal(QuadElem(f, p)));
    }
}

TEST_CASE("ideal factorization reproduces the ideal") {
    testgen::Rng r(5);
    for (long D : {-5L, -23L, 10L, 13L, -1L}) {
        QuadField f{Integer(D)};
        for (int i = 0; i < 30; ++i) {
            QuadElem x(f, r.nonzero(-30, 30), r.range(-30, 30));
            QuadElem y(f, r.range(-20, 20), r.nonzero(-20, 20));
            QfIdeal I = QfIdeal::from_generators(f, {x, y});
            QfIdeal J = QfIdeal::unit(f);
            for (auto& [P, e] : factor_ideal(I)) J = J * ideal_pow(P.ideal, e);
            CHECK(J == I);
            QfIdeal K = QfIdeal::principal(x * QuadElem(f, 1, 1));
            CHECK((I * K).norm() == I.norm() * K.norm());
            CHECK((I * I.inverse()).is_unit());
            CHECK(I.contains(x));
            CHECK(I.contains(y));
        }
    }
}

TEST_CASE("class numbers") {
    CHECK(class_group(QuadField(Integer(-1))).h() == 1);
    CHECK(class_group(QuadField(Integer(-5))).h() == 2);
    CHECK(class_group(QuadField(Integer(-23))).h() == 3);
    CHECK(class_group(QuadField(Integer(-47))).h() == 5);
    CHECK(class_group(QuadField(Integer(5))).h() == 1);
    CHECK(class_group(QuadField(Integer(10))).h() == 2);
    CHECK(class_group(QuadField(Integer(79))).h() == 3);
}

TEST_CASE("generators of principal ideals") {
    QuadField f(Integer(-5));
    auto P2 = primes_above(f, Integer(2))[0].ideal;
    CHECK_FALSE(find_generator(P2).has_value());
    auto g = find_generator(P2 * P2);
    REQUIRE(g.has_value());
    CHECK(QfIdeal::principal(*g) == P2 * P2);
    testgen::Rng r(9);
    for (long D : {5L, 13L, 6L, -3L}) {
        QuadField k{Integer(D)};
        for (int i = 0; i < 20; ++i) {
            QuadElem x(k, r.range(-40, 40), r.nonzero(-40, 40));
            auto h = find_generator(QfIdeal::principal(x));
            REQUIRE(h.has_value());
            CHECK(QfIdeal::principal(*h) == QfIdeal::principal(x));
        }
    }
}

TEST_CASE("fundamental units") {
    CHECK(fundamental_unit(QuadField(Integer(2))) == QuadElem(QuadField(Integer(2)), 1, 1));
    CHECK(fundamental_unit(QuadField(Integer(3))) == QuadElem(QuadField(Integer(3)), 2, 1));
    CHECK(fundamental_unit(QuadField(Integer(5))) == QuadElem(QuadField(Integer(5)), Rational(1, 2), Rational(1, 2)));
    CHECK(fundamental_unit(QuadField(Integer(7))) == QuadElem(QuadField(Integer(7)), 8, 3));
    QuadElem u94 = fundamental_unit(QuadField(Integer(94)));
    CHECK(u94 == QuadElem(QuadField(Integer(94)), 2143295, 221064));
    for (long D : {6L, 10L, 11L, 13L, 14L, 15L, 17L, 21L, 29L}) {
        QuadField f{Integer(D)};
        auto brute = small_unit(f, 200);
        REQUIRE(brute.has_value());
        CHECK(fundamental_unit(f) == *brute);
    }
}

TEST_CASE("total positivity and square roots mod p") {
    QuadField f(Integer(5));
    CHECK(is_totally_positive(QuadElem(f, 3, 1)));
    CHECK_FALSE(is_totally_positive(QuadElem(f, 2, 1)));
    CHECK_FALSE(is_totally_positive(QuadElem(f, -3, 1)));
    for (long p : {3L, 5L, 7L, 11L, 101L})
        for (long n = 1; n < p; ++n) {
            auto s = sqrt_mod(Integer(n), Integer(p));
            bool residue = false;
            for (long x = 1; x < p; ++x) residue = residue || (x * x) % p == n;
            CHECK(s.has_value() == residue);
            if (s) CHECK((*s * *s - n) % p == 0);
        }
}
