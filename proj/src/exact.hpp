#ifndef POLISOG_EXACT_HPP
#define POLISOG_EXACT_HPP

#include <gmpxx.h>

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polisog {

using Integer = mpz_class;
using Rational = mpq_class;

/* Machine-readable failure classes.  The numeric values are part of the
 * C API (see polisog.h) and must not be renumbered. */
enum class ErrorCode : int {
    kSchema = 10,
    kPrecondition = 11,
    kUndefined = 12,
    kResource = 13,
    kUnsupported = 14,
    kInternal = 15,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

/// A place of Q: a rational prime or the real place.
class Place {
  public:
    static Place infinity() { return Place(Integer(0)); }
    static Place prime(const Integer& p);

    bool is_infinite() const { return p_ == 0; }
    const Integer& p() const { return p_; }
    std::string to_string() const;

    bool operator==(const Place& o) const { return p_ == o.p_; }
    bool operator<(const Place& o) const;

  private:
    explicit Place(Integer p) : p_(std::move(p)) {}
    Integer p_;
};

bool is_prime(const Integer& n);

/* Trial-division factorization of |n|, n != 0.  Desk scale: throws
 * kResource when a cofactor above the trial bound is not a probable prime. */
std::vector<std::pair<Integer, int>> factor_integer(const Integer& n);

/// Prime divisors of the numerator and denominator of x.
std::vector<Integer> prime_support(const Rational& x);

int valuation(const Integer& x, const Integer& p);
int valuation(const Rational& x, const Integer& p);

/// x with every factor of p removed.
Rational unit_part(const Rational& x, const Integer& p);

Integer squarefree_part(const Integer& n);

/// Squarefree integer t (sign included) with x/t a square in Q.
Integer square_class(const Rational& x);

bool is_square(const Integer& n);
bool is_square(const Rational& x);
/// Exact square root, or throws kUndefined.
Rational exact_sqrt(const Rational& x);
/// Positive k-th root of |x|; kUndefined when it is not rational.
Rational exact_root(const Rational& x, unsigned k);

/// Legendre symbol of a p-adic unit rational modulo an odd prime p.
int legendre(const Rational& unit, const Integer& p);

/* Hilbert symbol (a,b)_v over Q.  Odd p uses the Legendre-symbol formula,
 * p = 2 the unit formula with epsilon/omega, infinity the sign test. */
int hilbert_symbol(const Rational& a, const Rational& b, const Place& v);

/* Hasse invariant of the diagonal form <a_1,...,a_n> at v, using the
 * convention s = prod_{i<j} (a_i, a_j)_v.  With this convention
 * s(phi + psi) = s(phi) s(psi) (det phi, det psi). */
int hasse_invariant(std::span<const Rational> diag, const Place& v);

/// 2, infinity, and every prime dividing some entry.  Sorted, infinity last.
std::vector<Place> support_places(std::span<const Rational> entries);

/// Is m square in Q_p^x?  p odd or 2.
bool is_local_square(const Rational& m, const Integer& p);

Rational parse_rational(const std::string& text);
std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer floor_div(const Integer& a, const Integer& b);
Integer ipow(const Integer& base, unsigned long e);
Rational qpow(const Rational& base, long e);

}  // namespace polisog

#endif
