#ifndef POLISOG_QUADFIELD_HPP
#define POLISOG_QUADFIELD_HPP

#include "exact.hpp"

#include <optional>
#include <vector>

namespace polisog {

/* Q(sqrt D) for squarefree D != 0, 1.  disc is D when D = 1 mod 4 and 4D
 * otherwise; the maximal order is Z[w] with w = (disc + sqrt disc)/2. */
class QuadField {
  public:
    explicit QuadField(const Integer& D);

    const Integer& D() const { return D_; }
    const Integer& disc() const { return disc_; }
    bool is_real() const { return D_ > 0; }
    bool operator==(const QuadField& o) const { return D_ == o.D_; }

  private:
    Integer D_, disc_;
};

/// x + y sqrt(D).  Coordinates in the basis (1, w) are derived on demand.
class QuadElem {
  public:
    QuadElem() = default;
    QuadElem(const QuadField& f, Rational x, Rational y = 0) : D_(f.D()), x_(std::move(x)), y_(std::move(y)) {}

    static QuadElem from_omega(const QuadField& f, const Rational& c0, const Rational& c1);
    static QuadElem sqrt_d(const QuadField& f) { return QuadElem(f, 0, 1); }

    const Integer& D() const { return D_; }
    QuadField field() const { return QuadField(D_); }
    const Rational& x() const { return x_; }
    const Rational& y() const { return y_; }
    /// Coordinates (c0, c1) with self = c0 + c1 w.
    std::pair<Rational, Rational> omega_coords() const;

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }
    bool is_integral() const;

    QuadElem conj() const { return QuadElem(D_, x_, -y_); }
    Rational norm() const { return x_ * x_ - D_ * y_ * y_; }
    Rational trace() const { return 2 * x_; }
    QuadElem inverse() const;

    QuadElem operator+(const QuadElem& o) const;
    QuadElem operator-(const QuadElem& o) const;
    QuadElem operator-() const { return QuadElem(D_, -x_, -y_); }
    QuadElem operator*(const QuadElem& o) const;
    QuadElem operator*(const Rational& s) const { return QuadElem(D_, x_ * s, y_ * s); }
    QuadElem operator/(const QuadElem& o) const { return *this * o.inverse(); }
    bool operator==(const QuadElem& o) const { return D_ == o.D_ && x_ == o.x_ && y_ == o.y_; }

    /// Real embeddings (x + y sqrt D, x - y sqrt D); real fields only.
    std::pair<long double, long double> embeddings() const;
    std::string to_string() const;

  private:
    QuadElem(Integer D, Rational x, Rational y) : D_(std::move(D)), x_(std::move(x)), y_(std::move(y)) {}
    void check_same(const QuadElem& o) const;

    Integer D_ = 2;
    Rational x_, y_;
};

QuadElem pow(const QuadElem& x, long e);

/* Fractional ideal (1/den) * M with M the integral module spanned by the
 * rows of an HNF matrix in w-coordinates ordered (w, 1):
 *     rows (c, b) and (0, a),  i.e.  M = Z a + Z (b + c w).
 * gcd(content(M), den) = 1, so the representation is canonical. */
class QfIdeal {
  public:
    static QfIdeal unit(const QuadField& f);
    static QfIdeal principal(const QuadElem& x);
    static QfIdeal from_generators(const QuadField& f, const std::vector<QuadElem>& gens);

    const QuadField& field() const { return field_; }
    const Integer& den() const { return den_; }
    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }

    Rational norm() const;
    bool is_integral() const { return den_ == 1; }
    bool is_unit() const { return den_ == 1 && a_ == 1 && c_ == 1; }
    bool contains(const QuadElem& x) const;
    std::vector<QuadElem> basis() const;

    QfIdeal conj() const;
    QfIdeal inverse() const;
    QfIdeal operator*(const QfIdeal& o) const;
    QfIdeal operator*(const QuadElem& x) const;
    bool operator==(const QfIdeal& o) const;

    std::string to_string() const;

  private:
    explicit QfIdeal(QuadField f) : field_(std::move(f)) {}
    QuadField field_;
    Integer den_ = 1, a_ = 1, b_ = 0, c_ = 1;
};

struct PrimeIdeal {
    QfIdeal ideal;
    Integer p;
    int e = 1;  // ramification index
    int f = 1;  // residue degree
};

enum class Splitting { kSplit, kInert, kRamified };

Splitting splitting_type(const QuadField& f, const Integer& p);
/// Primes above p in a fixed order (root r ascending for split primes).
std::vector<PrimeIdeal> primes_above(const QuadField& f, const Integer& p);
/// v_P(I) for a nonzero fractional ideal.
int ideal_valuation(const QfIdeal& x, const PrimeIdeal& P);
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const QfIdeal& x);
QfIdeal ideal_pow(const QfIdeal& x, long e);

/// A generator of x if x is principal, found by bounded lattice enumeration.
std::optional<QuadElem> find_generator(const QfIdeal& x);

struct ClassGroupTable {
    QuadField field;
    std::vector<QfIdeal> representatives;  // representatives[0] is the unit ideal
    size_t h() const { return representatives.size(); }
};

inline constexpr long kDefaultDiscBound = 1000000;

ClassGroupTable class_group(const QuadField& f, long disc_bound = kDefaultDiscBound);

struct Principalization {
    std::optional<QuadElem> generator;
    size_t class_index = 0;
};

Principalization principalize(const QfIdeal& x, const ClassGroupTable& table);

/// The unit > 1 generating the units modulo +-1; real fields only.
QuadElem fundamental_unit(const QuadField& f);
bool is_totally_positive(const QuadElem& x);

/// Square root of n modulo an odd prime p, when n is a residue.
std::optional<Integer> sqrt_mod(const Integer& n, const Integer& p);

}  // namespace polisog

#endif
