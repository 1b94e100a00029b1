#include <doctest.h>

#include "degree_bound.hpp"
#include "gen.hpp"

using namespace polisog;

namespace {

AlgElem quad(const BaseRing& b, const QuadElem& x) {
    BMatrix m(b, 1, 1);
    m(0, 0) = b.from_quad(x);
    return {m};
}

AlgElem mat(const QMatrix& m) { return {BMatrix::from_rational(BaseRing::rational(), m)}; }

struct Commutative {
    BaseRing base;
    QuadField field;
    AlgebraWithInvolution alg;
    OrderR order;
    NormSpec spec;
    explicit Commutative(long D, EntryInvolution e = EntryInvolution::kIdentity)
        : base(BaseRing::quadratic(Integer(D))),
          field(Integer(D)),
          alg({SimpleFactor::make(base, 1, e)}),
          order(OrderR::standard(alg)),
          spec(NormSpec::make(alg, {1})) {}
    BoundInstance instance(const QuadElem& q, const QuadElem& a) const { return BoundInstance(order, spec, quad(base, q), quad(base, a)); }
};

void check_verified(const BoundInstance& inst, const BoundResult& r) {
    CHECK(inst.order().contains(r.b));
    auto v = inst.alg().as_rational(inst.value_of(r.b));
    REQUIRE(v.has_value());
    CHECK(v->get_den() == 1);
    CHECK(*v != 0);
    CHECK(r.value == v->get_num());
    CHECK(r.norm_b == norm(inst.alg(), r.b, inst.spec()));
    Rational nq = r.norm_q;
    CHECK(r.ratio_sq == r.norm_b * r.norm_b / qpow(nq, 2 * r.rank_d - 1));
}

}  // namespace

TEST_CASE("instance preconditions") {
    Commutative c(5);
    CHECK_THROWS_AS(c.instance(QuadElem(c.field, Rational(1, 2)), QuadElem(c.field, 1)), Error);
    CHECK_THROWS_AS(c.instance(QuadElem(c.field, 3, 1), QuadElem(c.field, 1)), Error);
    Commutative cm(-1, EntryInvolution::kConjugation);
    CHECK_THROWS_AS(cm.instance(QuadElem(cm.field, 1, 1), QuadElem(cm.field, 1)), Error);
}

TEST_CASE("commutative example") {
    Commutative c(5);
    BoundInstance inst = c.instance(QuadElem(c.field, 3, 1), QuadElem(c.field, Rational(-1, 2), Rational(1, 2)));
    BoundResult r = solve_commutative(inst);
    check_verified(inst, r);
    CHECK(r.norm_b == 1);
    CHECK(r.value == 2);
    auto o = brute_force_oracle(inst, 16);
    REQUIRE(o.has_value());
    CHECK(o->norm_b == 1);
}

TEST_CASE("commutative solver against the oracle") {
    testgen::Rng r(83);
    for (long D : {5L, 2L, 13L, 10L, 3L}) {
        Commutative c(D);
        for (int i = 0; i < 6; ++i) {
            QuadElem s = QuadElem::from_omega(c.field, r.range(-6, 6), r.nonzero(-4, 4));
            if (s.norm() == 0) continue;
            QuadElem q = s * s * Rational(r.nonzero(-5, 5));
            BoundInstance inst = c.instance(q, s.inverse());
            BoundResult b = solve_commutative(inst);
            CAPTURE(D);
            CAPTURE(q.to_string());
            CAPTURE(b.b[0](0, 0)[0]);
            CAPTURE(b.b[0](0, 0)[1]);
            CAPTURE(b.norm_b);
            check_verified(inst, b);
            auto o = brute_force_oracle(inst, b.norm_b);
            REQUIRE(o.has_value());
            CHECK(o->norm_b <= b.norm_b);
        }
    }
}

TEST_CASE("rational and CM cases need no enlargement") {
    auto Q = BaseRing::rational();
    AlgebraWithInvolution a({SimpleFactor::make(Q, 1, EntryInvolution::kIdentity)});
    BoundInstance inst(OrderR::standard(a), NormSpec::make(a, {1}), a.scalar(12), a.scalar(Rational(1, 2)));
    CHECK(solve_commutative(inst).norm_b == 1);
    Commutative cm(-1, EntryInvolution::kConjugation);
    BoundInstance ci = cm.instance(QuadElem(cm.field, 6), QuadElem(cm.field, 1, 1));
    BoundResult r = solve_commutative(ci);
    check_verified(ci, r);
    CHECK(r.norm_b == 1);
}

TEST_CASE("split matrix solver") {
    auto Q = BaseRing::rational();
    AlgebraWithInvolution m2({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity)});
    OrderR order = OrderR::standard(m2);
    NormSpec spec = NormSpec::make(m2, {1});
    BoundInstance a(order, spec, mat(QMatrix::diagonal({1, 9})), mat(QMatrix::diagonal({1, Rational(1, 3)})));
    BoundResult ra = solve_split_matrix(a);
    check_verified(a, ra);
    CHECK(ra.norm_b == 3);
    BoundInstance b(order, spec, mat(QMatrix::identity(2)), mat(QMatrix::from_rows({{3, 4}, {-4, 3}}) * Rational(1, 25)));
    BoundResult rb = solve_split_matrix(b);
    check_verified(b, rb);
    CHECK(rb.norm_b == 1);
    testgen::Rng r(89);
    for (int i = 0; i < 8; ++i) {
        Rational k = r.range(1, 6);
        QMatrix x = testgen::random_invertible(r, 2, 2);
        BoundInstance inst(order, spec, mat(x.transpose() * x * k), mat(*inverse(x)));
        BoundResult res = solve(inst);
        check_verified(inst, res);
    }
}

TEST_CASE("oracle budget") {
    Commutative c(5);
    BoundInstance inst = c.instance(QuadElem(c.field, 3, 1), QuadElem(c.field, Rational(-1, 2), Rational(1, 2)));
    CHECK_THROWS_AS(brute_force_oracle(inst, 16, OracleOptions{40, 100}), Error);
    auto o = brute_force_oracle(inst, Rational(1, 2));
    CHECK_FALSE(o.has_value());
}

TEST_CASE("measure constant") {
    Commutative c(5);
    std::vector<BoundInstance> insts;
    for (long k : {2L, 3L, 7L}) insts.push_back(c.instance(QuadElem(c.field, 3, 1) * QuadElem(c.field, 3, 1) * Rational(k), QuadElem(c.field, 3, 1).inverse()));
    MeasureReport rep = measure_constant(insts);
    CHECK(rep.rows.size() == 3);
    for (auto& row : rep.rows) {
        CHECK(row.solver.ratio_sq <= rep.max_ratio_sq_solver);
        REQUIRE(row.oracle.has_value());
        CHECK(row.oracle->norm_b <= row.solver.norm_b);
    }
    Commutative other(2);
    insts.push_back(other.instance(QuadElem(other.field, 2), QuadElem(other.field, 1)));
    CHECK_THROWS_AS(measure_constant(insts), Error);
}

TEST_CASE("torus conductor") {
    auto Q = BaseRing::rational();
    AlgebraWithInvolution m2({SimpleFactor::make(Q, 2, EntryInvolution::kIdentity)});
    auto t = torus_conductor_check(OrderR::standard(m2), mat(QMatrix::from_rows({{1, Rational(1, 3)}, {0, -1}})), Integer(3));
    CHECK(t.c_p == 3);
    CHECK(t.holds);
    auto u = torus_conductor_check(OrderR::standard(m2), mat(QMatrix::from_rows({{0, 1}, {2, 0}})), Integer(3));
    CHECK(u.conductor == 1);
    CHECK(u.holds);
}
