#include "hecke_classes.hpp"

namespace polisog {

PolClassRep PolClassRep::make(const QuadElem& q, std::optional<Integer> source_prime) {
    QuadField f = q.field();
    if (!f.is_real()) fail(ErrorCode::kPrecondition, "representatives live in a real quadratic field");
    if (!q.is_integral()) fail(ErrorCode::kPrecondition, q.to_string() + " is not in the maximal order");
    if (!is_totally_positive(q)) fail(ErrorCode::kPrecondition, q.to_string() + " is not totally positive");
    return PolClassRep{f, q, std::move(source_prime)};
}

EquivalenceResult equivalent(const PolClassRep& q, const PolClassRep& r) {
    if (!(q.field == r.field)) fail(ErrorCode::kPrecondition, "representatives belong to different fields");
    EquivalenceResult res;
    QuadElem s = q.q / r.q;
    res.norm_ratio = s.norm();
    if (!is_square(res.norm_ratio)) return res;
    Rational t = exact_sqrt(res.norm_ratio);
    if (s.trace() + 2 * t == 0) t = -t;
    QuadElem u = QuadElem(q.field, t) + s;
    Rational n = s.trace() + 2 * t;
    // clear denominators: (n, u) -> (lambda^2 n, lambda u)
    auto [c0, c1] = u.omega_coords();
    Integer lambda = lcm(c0.get_den(), c1.get_den());
    u = u * Rational(lambda);
    n *= lambda * lambda;
    Integer nd = n.get_den();
    u = u * Rational(nd);
    n *= nd * nd;
    auto [d0, d1] = u.omega_coords();
    Integer g = gcd(d0.get_num(), d1.get_num());
    if (g > 1)
        for (auto& [p, e] : factor_integer(g))
            for (int k = 0; k < e && n.get_num() % (p * p) == 0; ++k) {
                u = u * Rational(1, p);
                n /= p * p;
            }
    res.equivalent = true;
    res.witness = EquivalenceWitness{n.get_num(), u};
    if (!rosati_transport_check(q.q, r.q, u, n.get_num())) fail(ErrorCode::kInternal, "equivalence witness failed verification");
    return res;
}

bool rosati_transport_check(const QuadElem& q, const QuadElem& r, const QuadElem& u, const Integer& n) {
    if (u.is_zero() || n == 0) fail(ErrorCode::kPrecondition, "u and n must be nonzero");
    return q * Rational(n) == u * u * r;
}

namespace {

bool prefer(const QuadElem& a, const QuadElem& b) {
    if (a.trace() != b.trace()) return a.trace() < b.trace();
    return a.y() > b.y();
}

/* Totally positive associate of g with minimal trace, if any. */
std::optional<QuadElem> positive_associate(const QuadElem& g, const QuadElem& u) {
    QuadElem u2 = u * u;
    std::optional<QuadElem> best;
    for (const QuadElem& c : {g, -g, g * u, -(g * u)}) {
        if (!is_totally_positive(c)) continue;
        QuadElem x = c;
        while (true) {
            QuadElem up = x * u2, down = x * u2.inverse();
            if (up.trace() < x.trace()) x = up;
            else if (down.trace() < x.trace()) x = down;
            else break;
        }
        if (!best || prefer(x, *best)) best = x;
    }
    return best;
}

}  // namespace

std::vector<PolClassRep> generate_classes(const QuadField& f, size_t count, long prime_limit) {
    if (count < 1) fail(ErrorCode::kPrecondition, "count must be at least 1");
    if (!f.is_real()) fail(ErrorCode::kPrecondition, "the field must be real quadratic");
    std::vector<PolClassRep> out{PolClassRep::make(QuadElem(f, 1))};
    QuadElem u = fundamental_unit(f);
    Integer p = 1;
    while (out.size() < count) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        if (p > prime_limit)
            fail(ErrorCode::kResource, "only " + std::to_string(out.size()) + " classes found; last prime tried " + std::to_string(prime_limit));
        if (splitting_type(f, p) != Splitting::kSplit) continue;
        auto P = primes_above(f, p)[0];
        auto g = find_generator(P.ideal);
        if (!g) continue;
        auto a = positive_associate(*g, u);
        auto b = positive_associate(g->conj(), u);
        if (!a && !b) continue;
        QuadElem pick = !a ? *b : !b ? *a : (prefer(*b, *a) ? *b : *a);
        PolClassRep rep = PolClassRep::make(pick, p);
        bool fresh = true;
        for (auto& o : out)
            if (equivalent(rep, o).equivalent) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(rep);
    }
    return out;
}

}  // namespace polisog
