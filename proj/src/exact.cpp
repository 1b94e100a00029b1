#include "exact.hpp"

#include <algorithm>
#include <sstream>

namespace polisog {

namespace {

constexpr unsigned long kTrialBound = 2000000;

int mod8(const Integer& odd) {
    Integer r = odd % 8;
    if (r < 0) r += 8;
    return static_cast<int>(r.get_si());
}

// (u-1)/2 mod 2 and (u^2-1)/8 mod 2 for a 2-adic unit given modulo 8
int eps2(int u8) { return ((u8 - 1) / 2) & 1; }
int omega2(int u8) { return ((u8 * u8 - 1) / 8) & 1; }

}  // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kSchema: return "schema";
        case ErrorCode::kPrecondition: return "precondition";
        case ErrorCode::kUndefined: return "undefined";
        case ErrorCode::kResource: return "resource";
        case ErrorCode::kUnsupported: return "unsupported";
        case ErrorCode::kInternal: return "internal";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

Place Place::prime(const Integer& p) {
    if (p < 2 || !is_prime(p)) fail(ErrorCode::kPrecondition, "not a prime: " + polisog::to_string(p));
    return Place(p);
}

std::string Place::to_string() const { return is_infinite() ? "inf" : polisog::to_string(p_); }

bool Place::operator<(const Place& o) const {
    if (is_infinite()) return false;
    if (o.is_infinite()) return true;
    return p_ < o.p_;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<std::pair<Integer, int>> factor_integer(const Integer& n) {
    if (n == 0) fail(ErrorCode::kUndefined, "cannot factor zero");
    Integer m = abs(n);
    std::vector<std::pair<Integer, int>> out;
    auto strip = [&](const Integer& p) {
        int e = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(Integer(2));
    for (unsigned long d = 3; d <= kTrialBound; d += 2) {
        if (m == 1) break;
        Integer dd(d);
        if (dd * dd > m) break;
        strip(dd);
    }
    if (m > 1) {
        if (!is_prime(m)) fail(ErrorCode::kResource, "integer too large to factor at desk scale: " + to_string(n));
        out.emplace_back(m, 1);
    }
    return out;
}

std::vector<Integer> prime_support(const Rational& x) {
    std::vector<Integer> ps;
    if (x == 0) return ps;
    for (auto& [p, e] : factor_integer(x.get_num())) ps.push_back(p);
    if (x.get_den() != 1)
        for (auto& [p, e] : factor_integer(x.get_den())) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

int valuation(const Integer& x, const Integer& p) {
    if (x == 0) fail(ErrorCode::kUndefined, "valuation of zero is undefined");
    Integer m = x;
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++v;
    }
    return v;
}

int valuation(const Rational& x, const Integer& p) {
    if (x == 0) fail(ErrorCode::kUndefined, "valuation of zero is undefined");
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

Rational unit_part(const Rational& x, const Integer& p) {
    int v = valuation(x, p);
    return x / qpow(Rational(p), v);
}

Integer squarefree_part(const Integer& n) {
    if (n == 0) fail(ErrorCode::kUndefined, "square class of zero is undefined");
    Integer t = n < 0 ? -1 : 1;
    for (auto& [p, e] : factor_integer(n))
        if (e % 2) t *= p;
    return t;
}

Integer square_class(const Rational& x) {
    if (x == 0) fail(ErrorCode::kUndefined, "square class of zero is undefined");
    return squarefree_part(Integer(x.get_num() * x.get_den()));
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

bool is_square(const Rational& x) { return is_square(x.get_num()) && is_square(x.get_den()); }

Rational exact_sqrt(const Rational& x) {
    if (!is_square(x)) fail(ErrorCode::kUndefined, "not a rational square: " + to_string(x));
    Integer a, b;
    mpz_sqrt(a.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), x.get_den_mpz_t());
    Rational r(a, b);
    r.canonicalize();
    return r;
}

Rational exact_root(const Rational& x, unsigned k) {
    if (k == 1) return abs(x);
    Integer n = abs(x.get_num()), d = x.get_den(), rn, rd;
    int ok1 = mpz_root(rn.get_mpz_t(), n.get_mpz_t(), k);
    int ok2 = mpz_root(rd.get_mpz_t(), d.get_mpz_t(), k);
    if (!ok1 || !ok2) fail(ErrorCode::kUndefined, "no exact root of " + to_string(x));
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

int legendre(const Rational& unit, const Integer& p) {
    int a = mpz_legendre(unit.get_num_mpz_t(), p.get_mpz_t());
    int b = mpz_legendre(unit.get_den_mpz_t(), p.get_mpz_t());
    if (a == 0 || b == 0) fail(ErrorCode::kPrecondition, "legendre symbol of a non-unit");
    return a * b;
}

int hilbert_symbol(const Rational& a, const Rational& b, const Place& v) {
    if (a == 0 || b == 0) fail(ErrorCode::kUndefined, "hilbert symbol of zero");
    if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    const Integer& p = v.p();
    int alpha = valuation(a, p), beta = valuation(b, p);
    Rational u = a / qpow(Rational(p), alpha);
    Rational w = b / qpow(Rational(p), beta);
    if (p == 2) {
        int u8 = mod8(Integer(u.get_num() * u.get_den()));
        int w8 = mod8(Integer(w.get_num() * w.get_den()));
        int e = eps2(u8) * eps2(w8) + alpha * omega2(w8) + beta * omega2(u8);
        return (e & 1) ? -1 : 1;
    }
    int s = 1;
    Integer half = (p - 1) / 2;
    if ((alpha & 1) && (beta & 1) && half.get_ui() % 2 == 1) s = -s;
    if (beta & 1) s *= legendre(u, p);
    if (alpha & 1) s *= legendre(w, p);
    return s;
}

int hasse_invariant(std::span<const Rational> diag, const Place& v) {
    for (auto& d : diag)
        if (d == 0) fail(ErrorCode::kUndefined, "hasse invariant of a singular form");
    int s = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) s *= hilbert_symbol(diag[i], diag[j], v);
    return s;
}

std::vector<Place> support_places(std::span<const Rational> entries) {
    std::vector<Integer> ps{Integer(2)};
    for (auto& e : entries)
        for (auto& p : prime_support(e)) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<Place> out;
    for (auto& p : ps) out.push_back(Place::prime(p));
    out.push_back(Place::infinity());
    return out;
}

bool is_local_square(const Rational& m, const Integer& p) {
    if (m == 0) return true;
    int v = valuation(m, p);
    if (v % 2) return false;
    Rational u = unit_part(m, p);
    if (p == 2) return mod8(Integer(u.get_num() * u.get_den())) == 1;
    return legendre(u, p) == 1;
}

Rational parse_rational(const std::string& text) {
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0 || r.get_den() == 0)
        fail(ErrorCode::kSchema, "not an exact rational: '" + text + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer ipow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rational qpow(const Rational& base, long e) {
    if (e >= 0) {
        Rational r(ipow(base.get_num(), e), ipow(base.get_den(), e));
        r.canonicalize();
        return r;
    }
    if (base == 0) fail(ErrorCode::kUndefined, "negative power of zero");
    Rational r(ipow(base.get_den(), -e), ipow(base.get_num(), -e));
    r.canonicalize();
    return r;
}

}  // namespace polisog
