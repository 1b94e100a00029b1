#include <doctest.h>

#include "gen.hpp"
#include "lattices_local.hpp"

using namespace polisog;

namespace {

int min_valuation(const QMatrix& g, const Integer& p) {
    int best = 1 << 30;
    for (size_t i = 0; i < g.rows(); ++i)
        for (size_t j = 0; j < g.cols(); ++j)
            if (g(i, j) != 0) best = std::min(best, valuation(g(i, j), p));
    return best;
}

// Some index-p superlattice of scale >= s, by trying every c in (Z/p)^n.
bool has_superlattice(const PadicLattice& l, int s) {
    long p = l.ctx().p.get_si();
    size_t n = l.dim();
    std::vector<long> c(n, 0);
    for (;;) {
        size_t k = 0;
        while (k < n && c[k] == p - 1) c[k++] = 0;
        if (k == n) return false;
        ++c[k];
        std::vector<Rational> v(n);
        for (size_t i = 0; i < n; ++i) v[i] = Rational(c[i]);
        std::vector<Rational> x = l.basis() * v;
        QMatrix nb(n, n + 1);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) nb(i, j) = l.basis()(i, j);
            nb(i, n) = x[i] / p;
        }
        QMatrix g = nb.transpose() * l.form() * nb;
        if (min_valuation(g, l.ctx().p) >= s) return true;
    }
}

QMatrix unit_change(testgen::Rng& r, size_t n, long p) {
    for (;;) {
        QMatrix u = testgen::random_matrix(r, n, n, 3);
        Rational d = determinant(u);
        if (d != 0 && valuation(d, Integer(p)) == 0) return u;
    }
}

}  // namespace

TEST_CASE("contexts") {
    CHECK_THROWS_AS(PadicContext(Integer(9)), Error);
    CHECK_THROWS_AS(PadicContext(Integer(2)), Error);
    CHECK_THROWS_AS(PadicContext(Integer(3), 0), Error);
    CHECK(PadicContext(Integer(5), 20).precision == 20);
}

TEST_CASE("small examples") {
    PadicContext ctx(Integer(3));
    PadicLattice l = PadicLattice::standard(ctx, QMatrix::diagonal({1, 9}));
    CHECK(scale(l) == 0);
    CHECK_FALSE(is_maximal(l));
    PadicLattice c = maximal_completion(l, 0);
    CHECK(c.gram() == QMatrix::identity(2));
    CHECK(c.contains(l));
    CHECK(is_maximal(c));
    PadicLattice pz(ctx, QMatrix::diagonal({3, 3}), QMatrix::identity(2));
    CHECK(scale(pz) == 2);
    CHECK(maximal_completion(pz, 0).gram() == QMatrix::identity(2));
    CHECK_THROWS_AS(maximal_completion(l, 1), Error);
}

TEST_CASE("maximality agrees with superlattice enumeration") {
    testgen::Rng r(61);
    for (long p : {3L, 5L, 7L})
        for (int i = 0; i < 25; ++i) {
            PadicContext ctx{Integer(p)};
            size_t n = static_cast<size_t>(r.range(1, 3));
            QMatrix g = testgen::random_symmetric(r, n, 12);
            if (determinant(g) == 0) continue;
            PadicLattice l(ctx, testgen::random_invertible(r, n, 3), g);
            int s = scale(l);
            CHECK(is_maximal(l) == !has_superlattice(l, s));
            PadicLattice c = maximal_completion(l, s);
            CHECK(c.contains(l));
            CHECK(scale(c) >= s);
            CHECK_FALSE(has_superlattice(c, s));
        }
}

TEST_CASE("jordan decomposition is a basis invariant") {
    testgen::Rng r(67);
    for (long p : {3L, 5L, 7L})
        for (int i = 0; i < 20; ++i) {
            size_t n = static_cast<size_t>(r.range(1, 4));
            QMatrix g = testgen::random_symmetric(r, n, 30);
            if (determinant(g) == 0) continue;
            QMatrix u = unit_change(r, n, p);
            QMatrix h = u.transpose() * g * u;
            CHECK(jordan_decomposition(g, Integer(p)) == jordan_decomposition(h, Integer(p)));
            CHECK(lattices_isometric(g, h, Integer(p)));
            int total = 0;
            for (auto& c : jordan_decomposition(g, Integer(p))) total += c.dim;
            CHECK(total == static_cast<int>(n));
        }
    auto j = jordan_decomposition(QMatrix::diagonal({1, 3, 9, 2}), Integer(3));
    REQUIRE(j.size() == 3);
    CHECK(j[0] == JordanComponent{0, 2, -1});
    CHECK(j[1] == JordanComponent{1, 1, 1});
    CHECK(j[2] == JordanComponent{2, 1, 1});
}

TEST_CASE("unimodular isometry") {
    CHECK(unimodular_isometric(QMatrix::diagonal({1, 1}), QMatrix::diagonal({2, 2}), Integer(3)));
    CHECK_FALSE(unimodular_isometric(QMatrix::diagonal({1, 1}), QMatrix::diagonal({1, 2}), Integer(3)));
    CHECK_THROWS_AS(unimodular_isometric(QMatrix::diagonal({1, 3}), QMatrix::diagonal({1, 1}), Integer(3)), Error);
}

TEST_CASE("split local solve") {
    PadicContext ctx(Integer(3));
    QMatrix q = QMatrix::diagonal({1, 9});
    auto r = split_local_solve(q, QMatrix::identity(2) * 3 * QMatrix::diagonal({1, Rational(1, 3)}), 9, ctx);
    CHECK(r.b.transpose() * q * r.b == QMatrix::identity(2) * 9);
    CHECK(is_p_integral(r.b, ctx.p));
    testgen::Rng g(71);
    for (long p : {3L, 5L, 7L})
        for (int i = 0; i < 10; ++i) {
            PadicContext c{Integer(p)};
            QMatrix ainv = *inverse(unit_change(g, 2, p));
            QMatrix qq = ainv.transpose() * ainv * Rational(p);
            QMatrix a = *inverse(ainv);
            Rational mp = p * p * p;
            auto res = split_local_solve(qq, a, mp, c);
            CHECK(res.b.transpose() * qq * res.b == QMatrix::identity(2) * mp);
            CHECK(is_p_integral(res.b, c.p));
            CHECK(2 * res.v_det_b <= 3 * res.v_det_q);
        }
    CHECK_THROWS_AS(split_local_solve(QMatrix::identity(2), QMatrix::identity(2), 3, ctx), Error);
}

TEST_CASE("unit case parity") {
    PadicContext ctx(Integer(7));
    CHECK_THROWS_AS(unit_case_parity(QMatrix::diagonal({7, 7}), QMatrix::identity(2), ctx), Error);
    auto e = unit_case_parity(QMatrix::identity(2), QMatrix::identity(2), ctx);
    CHECK_FALSE(e.even_valuation);
    CHECK(e.witness == QMatrix::identity(2));
    auto w = unit_case_parity(QMatrix::diagonal({2, 2}), QMatrix::identity(2), ctx);
    REQUIRE(w.witness.has_value());
    Integer pk = ipow(ctx.p, static_cast<unsigned long>(w.precision));
    QMatrix t = w.witness->transpose() * QMatrix::diagonal({2, 2}) * *w.witness;
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(mod_pk(t(i, j) - (i == j), pk) == 0);
    auto id = unit_case_parity(QMatrix::identity(2), QMatrix::diagonal({7, 7}), ctx);
    CHECK(id.even_valuation);
    CHECK(id.v_m == 2);
}
