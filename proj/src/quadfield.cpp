#include "quadfield.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polisog {

QuadField::QuadField(const Integer& D) : D_(D) {
    if (D == 0 || D == 1) fail(ErrorCode::kPrecondition, "D must be a squarefree integer other than 0 and 1");
    if (squarefree_part(D) != D) fail(ErrorCode::kPrecondition, "D is not squarefree: " + polisog::to_string(D));
    Integer r = D % 4;
    if (r < 0) r += 4;
    disc_ = (r == 1) ? D : Integer(4 * D);
}

QuadElem QuadElem::from_omega(const QuadField& f, const Rational& c0, const Rational& c1) {
    if (f.disc() == f.D()) return QuadElem(f, c0 + c1 * f.D() / 2, c1 / 2);
    return QuadElem(f, c0 + 2 * f.D() * c1, c1);
}

std::pair<Rational, Rational> QuadElem::omega_coords() const {
    Integer r = D_ % 4;
    if (r < 0) r += 4;
    if (r == 1) return {x_ - y_ * D_, 2 * y_};
    return {x_ - 2 * D_ * y_, y_};
}

bool QuadElem::is_integral() const {
    auto [c0, c1] = omega_coords();
    return c0.get_den() == 1 && c1.get_den() == 1;
}

void QuadElem::check_same(const QuadElem& o) const {
    if (D_ != o.D_) fail(ErrorCode::kPrecondition, "elements of different quadratic fields");
}

QuadElem QuadElem::inverse() const {
    Rational n = norm();
    if (n == 0) fail(ErrorCode::kUndefined, "inverse of zero");
    return QuadElem(D_, x_ / n, -y_ / n);
}

QuadElem QuadElem::operator+(const QuadElem& o) const {
    check_same(o);
    return QuadElem(D_, x_ + o.x_, y_ + o.y_);
}

QuadElem QuadElem::operator-(const QuadElem& o) const {
    check_same(o);
    return QuadElem(D_, x_ - o.x_, y_ - o.y_);
}

QuadElem QuadElem::operator*(const QuadElem& o) const {
    check_same(o);
    return QuadElem(D_, x_ * o.x_ + D_ * y_ * o.y_, x_ * o.y_ + y_ * o.x_);
}

std::pair<long double, long double> QuadElem::embeddings() const {
    if (D_ < 0) fail(ErrorCode::kPrecondition, "real embeddings need a real quadratic field");
    long double s = std::sqrt(static_cast<long double>(D_.get_d()));
    long double x = x_.get_d(), y = y_.get_d();
    return {x + y * s, x - y * s};
}

std::string QuadElem::to_string() const {
    std::string s = x_.get_str();
    if (y_ != 0) s += (y_ > 0 ? " + " : " - ") + Rational(abs(y_)).get_str() + "*sqrt(" + D_.get_str() + ")";
    return s;
}

QuadElem pow(const QuadElem& x, long e) {
    if (e < 0) return pow(x.inverse(), -e);
    QuadElem r(x.field(), 1), b = x;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

QfIdeal QfIdeal::unit(const QuadField& f) { return QfIdeal(f); }

QfIdeal QfIdeal::principal(const QuadElem& x) { return from_generators(x.field(), {x}); }

QfIdeal QfIdeal::from_generators(const QuadField& f, const std::vector<QuadElem>& gens) {
    QuadElem w = QuadElem::from_omega(f, 0, 1);
    std::vector<std::pair<Rational, Rational>> coords;
    Integer den = 1;
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        for (auto& e : {g, g * w}) {
            auto c = e.omega_coords();
            den = lcm(den, lcm(c.first.get_den(), c.second.get_den()));
            coords.push_back(c);
        }
    }
    if (coords.empty()) fail(ErrorCode::kUndefined, "zero ideal");
    std::vector<std::vector<Integer>> rows;
    for (auto& [c0, c1] : coords) {
        Rational u1 = c1 * den, u0 = c0 * den;
        rows.push_back({u1.get_num(), u0.get_num()});
    }
    auto h = hnf_rows(rows, 2);
    QfIdeal out(f);
    Integer g = gcd(gcd(gcd(h[0][0], h[0][1]), h[1][1]), den);
    out.c_ = h[0][0] / g;
    out.b_ = h[0][1] / g;
    out.a_ = h[1][1] / g;
    out.den_ = den / g;
    return out;
}

Rational QfIdeal::norm() const {
    Rational r(a_ * c_, den_ * den_);
    r.canonicalize();
    return r;
}

std::vector<QuadElem> QfIdeal::basis() const {
    Rational inv(1, den_);
    inv.canonicalize();
    return {QuadElem::from_omega(field_, Rational(a_) * inv, 0), QuadElem::from_omega(field_, Rational(b_) * inv, Rational(c_) * inv)};
}

bool QfIdeal::contains(const QuadElem& x) const {
    if (x.D() != field_.D()) return false;
    auto [u0, u1] = x.omega_coords();
    u0 *= den_;
    u1 *= den_;
    if (u0.get_den() != 1 || u1.get_den() != 1) return false;
    Integer k = u1.get_num();
    if (k % c_ != 0) return false;
    k /= c_;
    Integer rest = u0.get_num() - k * b_;
    return rest % a_ == 0;
}

QfIdeal QfIdeal::conj() const {
    std::vector<QuadElem> g;
    for (auto& e : basis()) g.push_back(e.conj());
    return from_generators(field_, g);
}

QfIdeal QfIdeal::inverse() const {
    Rational n = norm();
    return conj() * QuadElem(field_, 1 / n);
}

QfIdeal QfIdeal::operator*(const QfIdeal& o) const {
    if (!(field_ == o.field_)) fail(ErrorCode::kPrecondition, "ideals of different quadratic fields");
    std::vector<QuadElem> g;
    for (auto& x : basis())
        for (auto& y : o.basis()) g.push_back(x * y);
    return from_generators(field_, g);
}

QfIdeal QfIdeal::operator*(const QuadElem& x) const {
    std::vector<QuadElem> g;
    for (auto& e : basis()) g.push_back(e * x);
    return from_generators(field_, g);
}

bool QfIdeal::operator==(const QfIdeal& o) const {
    return field_ == o.field_ && den_ == o.den_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
}

std::string QfIdeal::to_string() const {
    std::string s = "(" + a_.get_str() + ", " + b_.get_str() + " + " + c_.get_str() + "w)";
    if (den_ != 1) s += "/" + den_.get_str();
    return s;
}

std::optional<Integer> sqrt_mod(const Integer& n0, const Integer& p) {
    Integer n = n0 % p;
    if (n < 0) n += p;
    if (n == 0) return Integer(0);
    if (mpz_legendre(n.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    Integer q = p - 1;
    unsigned long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Integer z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    auto powm = [&](const Integer& b, const Integer& e) {
        Integer r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    Integer c = powm(z, q), t = powm(n, q), r = powm(n, (q + 1) / 2);
    unsigned long m = s;
    while (t != 1) {
        unsigned long i = 0;
        Integer tt = t;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        Integer b = c;
        for (unsigned long j = 0; j + 1 < m - i; ++j) b = b * b % p;
        r = r * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return std::min(r, Integer(p - r));
}

namespace {

Integer mod(const Integer& x, const Integer& p) {
    Integer r = x % p;
    if (r < 0) r += p;
    return r;
}

// Roots of the minimal polynomial of w modulo p, ascending.
std::vector<Integer> omega_roots(const QuadField& f, const Integer& p) {
    const Integer& d = f.disc();
    Integer c = (d * d - d) / 4;
    std::vector<Integer> roots;
    if (p == 2) {
        for (int x = 0; x < 2; ++x)
            if (mod(Integer(x * x) - d * x + c, p) == 0) roots.push_back(Integer(x));
        return roots;
    }
    auto s = sqrt_mod(d, p);
    if (!s) return roots;
    Integer inv2 = (p + 1) / 2;
    Integer r1 = mod((d + *s) * inv2, p), r2 = mod((d - *s) * inv2, p);
    roots.push_back(r1);
    if (r2 != r1) roots.push_back(r2);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

Splitting splitting_type(const QuadField& f, const Integer& p) {
    if (f.disc() % p == 0) return Splitting::kRamified;
    return omega_roots(f, p).empty() ? Splitting::kInert : Splitting::kSplit;
}

std::vector<PrimeIdeal> primes_above(const QuadField& f, const Integer& p) {
    if (!is_prime(p)) fail(ErrorCode::kPrecondition, "not a prime: " + polisog::to_string(p));
    std::vector<PrimeIdeal> out;
    Splitting s = splitting_type(f, p);
    if (s == Splitting::kInert) {
        out.push_back({QfIdeal::principal(QuadElem(f, Rational(p))), p, 1, 2});
        return out;
    }
    QuadElem w = QuadElem::from_omega(f, 0, 1);
    for (auto& r : omega_roots(f, p)) {
        QfIdeal P = QfIdeal::from_generators(f, {QuadElem(f, Rational(p)), w - QuadElem(f, Rational(r))});
        out.push_back({P, p, s == Splitting::kRamified ? 2 : 1, 1});
    }
    return out;
}

int ideal_valuation(const QfIdeal& x, const PrimeIdeal& P) {
    const QuadField& f = x.field();
    QfIdeal m = x * QuadElem(f, Rational(x.den()));
    int v = -P.e * (x.den() == 1 ? 0 : valuation(x.den(), P.p));
    QfIdeal pinv = P.ideal.inverse();
    for (;;) {
        QfIdeal k = m * pinv;
        if (!k.is_integral()) break;
        m = k;
        ++v;
    }
    return v;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const QfIdeal& x) {
    std::vector<Integer> ps = prime_support(Rational(x.a() * x.c()));
    for (auto& p : prime_support(Rational(x.den()))) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<std::pair<PrimeIdeal, int>> out;
    for (auto& p : ps)
        for (auto& P : primes_above(x.field(), p)) {
            int v = ideal_valuation(x, P);
            if (v) out.emplace_back(P, v);
        }
    return out;
}

QfIdeal ideal_pow(const QfIdeal& x, long e) {
    if (e < 0) return ideal_pow(x.inverse(), -e);
    QfIdeal r = QfIdeal::unit(x.field()), b = x;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

namespace {

// Q(x + y sqrt D) = 2 (x^2 + |D| y^2): the trace form of the Minkowski embedding.
Rational minkowski(const QuadElem& a, const QuadElem& b) {
    return 2 * (a.x() * b.x() + abs(a.D()) * a.y() * b.y());
}

long double ld(const Rational& r) { return static_cast<long double>(r.get_d()); }

}  // namespace

std::optional<QuadElem> find_generator(const QfIdeal& x) {
    const QuadField& f = x.field();
    QfIdeal m = x * QuadElem(f, Rational(x.den()));
    Rational n = m.norm();
    auto bs = m.basis();
    QuadElem b1 = bs[0], b2 = bs[1];
    // Lagrange reduction.
    for (;;) {
        if (minkowski(b2, b2) < minkowski(b1, b1)) std::swap(b1, b2);
        Rational mu = minkowski(b1, b2) / minkowski(b1, b1);
        Integer r = floor_div(Integer(2 * mu.get_num() + mu.get_den()), Integer(2 * mu.get_den()));
        if (r == 0) break;
        b2 = b2 - b1 * Rational(r);
    }
    long double bound;
    if (f.is_real()) {
        long double eps = fundamental_unit(f).embeddings().first;
        bound = 2 * ld(n) * eps * (1 + 1e-9L) + 1;
    } else {
        bound = 2 * ld(n) * (1 + 1e-9L) + 1;
    }
    long double q11 = ld(minkowski(b1, b1)), q12 = ld(minkowski(b1, b2)), q22 = ld(minkowski(b2, b2));
    long double det = q11 * q22 - q12 * q12;
    long vmax = static_cast<long>(std::sqrt(bound * q11 / det)) + 1;
    long double b1x = ld(b1.x()), b1y = ld(b1.y()), b2x = ld(b2.x()), b2y = ld(b2.y());
    long double dd = ld(Rational(f.D())), nn = ld(n);
    std::optional<QuadElem> best;
    Rational best_q;
    for (long v = -vmax; v <= vmax; ++v) {
        long double center = -v * q12 / q11;
        long double rest = (bound - v * v * det / q11) / q11;
        if (rest < 0) rest = 0;
        long double rad = std::sqrt(rest);
        long lo = static_cast<long>(std::floor(center - rad)) - 1, hi = static_cast<long>(std::ceil(center + rad)) + 1;
        for (long u = lo; u <= hi; ++u) {
            if (u == 0 && v == 0) continue;
            long double fx = u * b1x + v * b2x, fy = u * b1y + v * b2y;
            long double fn = std::fabs(fx * fx - dd * fy * fy);
            if (std::fabs(fn - nn) > 1e-6L * (fx * fx + std::fabs(dd) * fy * fy) + 1e-6L) continue;
            QuadElem a = b1 * Rational(u) + b2 * Rational(v);
            if (abs(a.norm()) != n) continue;
            Rational q = minkowski(a, a);
            bool better = !best || q < best_q ||
                          (q == best_q && (a.x() > best->x() || (a.x() == best->x() && a.y() > best->y())));
            if (better) {
                best = a;
                best_q = q;
            }
        }
    }
    if (!best) return std::nullopt;
    Rational inv(1, x.den());
    inv.canonicalize();
    return *best * inv;
}

ClassGroupTable class_group(const QuadField& f, long disc_bound) {
    if (abs(f.disc()) > disc_bound)
        fail(ErrorCode::kResource, "discriminant " + f.disc().get_str() + " exceeds the class-group bound " + std::to_string(disc_bound));
    long double ad = std::sqrt(static_cast<long double>(Integer(abs(f.disc())).get_d()));
    long double mink = f.is_real() ? ad / 2 : 2 * ad / std::numbers::pi_v<long double>;
    std::vector<QfIdeal> gens;
    for (long p = 2; p <= static_cast<long>(mink); ++p) {
        if (!is_prime(Integer(p))) continue;
        for (auto& P : primes_above(f, Integer(p)))
            if (P.f == 1) gens.push_back(P.ideal);
    }
    ClassGroupTable t{f, {QfIdeal::unit(f)}};
    auto equivalent = [](const QfIdeal& a, const QfIdeal& b) { return find_generator(a * b.conj()).has_value(); };
    for (size_t i = 0; i < t.representatives.size(); ++i)
        for (auto& g : gens) {
            QfIdeal j = t.representatives[i] * g;
            bool seen = false;
            for (auto& r : t.representatives)
                if (equivalent(j, r)) {
                    seen = true;
                    break;
                }
            if (!seen) t.representatives.push_back(j);
        }
    return t;
}

Principalization principalize(const QfIdeal& x, const ClassGroupTable& table) {
    Principalization out;
    out.generator = find_generator(x);
    if (out.generator) return out;
    for (size_t k = 1; k < table.representatives.size(); ++k)
        if (find_generator(x * table.representatives[k].conj())) {
            out.class_index = k;
            return out;
        }
    fail(ErrorCode::kInternal, "ideal " + x.to_string() + " matches no class representative");
}

QuadElem fundamental_unit(const QuadField& f) {
    if (!f.is_real()) fail(ErrorCode::kPrecondition, "fundamental unit needs a real quadratic field");
    const Integer& D = f.D();
    bool half = f.disc() == D;
    Integer P = half ? 1 : 0, Q = half ? 2 : 1;
    Integer s;
    mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
    // theta-bar, the conjugate of (P0 + sqrt D)/Q0
    QuadElem theta_bar(f, Rational(P, Q), Rational(-1, Q));
    Integer A1 = 1, A2 = 0, B1 = 0, B2 = 1;
    for (int it = 0; it < 1000000; ++it) {
        Integer a = floor_div(P + s, Q);
        Integer A = a * A1 + A2, B = a * B1 + B2;
        QuadElem u = QuadElem(f, Rational(A)) - theta_bar * Rational(B);
        Rational n = u.norm();
        if (n == 1 || n == -1) return u;
        A2 = A1;
        A1 = A;
        B2 = B1;
        B1 = B;
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    fail(ErrorCode::kResource, "continued fraction did not reach a unit");
}

bool is_totally_positive(const QuadElem& x) {
    if (x.D() < 0) fail(ErrorCode::kPrecondition, "total positivity needs a real quadratic field");
    if (x.is_zero()) fail(ErrorCode::kPrecondition, "zero is not totally positive or negative");
    return x.norm() > 0 && x.trace() > 0;
}

}  // namespace polisog
