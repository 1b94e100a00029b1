#ifndef POLISOG_FORMS_HPP
#define POLISOG_FORMS_HPP

#include "algebras.hpp"

#include <map>

namespace polisog {

enum class FormKind { kSymmetric, kSkew, kHermitian, kQuatSkewHermitian };

const char* form_kind_name(FormKind k);
FormKind parse_form_kind(const std::string& s);

/* psi(v, w) = v^{*T} G w on the right B-module B^n, * the natural
 * involution of B for hermitian kinds and the identity for (skew-)symmetric
 * kinds.  Supported (kind, base) pairs:
 *   symmetric            Q, real quadratic
 *   skew                 Q
 *   hermitian            quadratic (conjugation), quaternion (canonical)
 *   quat-skew-hermitian  quaternion (canonical) */
class GramForm {
  public:
    GramForm(FormKind kind, BMatrix gram);
    static GramForm symmetric_q(const QMatrix& g);

    FormKind kind() const { return kind_; }
    const BaseRing& base() const { return gram_.base(); }
    const BMatrix& gram() const { return gram_; }
    size_t dim() const { return gram_.rows(); }
    EntryInvolution involution() const { return inv_; }
    /// +1 for symmetric/hermitian kinds, -1 for skew kinds.
    int sign() const { return (kind_ == FormKind::kSymmetric || kind_ == FormKind::kHermitian) ? 1 : -1; }
    bool is_nonsingular() const;
    /// Rational Gram matrix of the symmetric form (x, y) -> Tr_Q(psi(x, y)).
    QMatrix trace_form() const;
    /// Rational Gram matrix, only for bases equal to Q.
    QMatrix rational_gram() const;

    GramForm direct_sum(const GramForm& o) const;
    GramForm power(size_t copies) const;
    /// psi_q(v, w) = psi(v, q w).
    GramForm twisted(const BMatrix& q) const;

  private:
    FormKind kind_;
    BMatrix gram_;
    EntryInvolution inv_;
};

/* Sign-aware validation message for a candidate Gram matrix; empty when the
 * matrix is (skew-)hermitian for the declared kind. */
std::string gram_violation(FormKind kind, const BMatrix& gram);

struct Diagonalization {
    std::vector<Scalar> diag;
    BMatrix transform;  // P with P^{*T} G P = diag
};

/* Congruence diagonalization over the base (division ring).  Throws
 * kUnsupported when no anisotropic pivot can be produced (skew over a
 * commutative base, or zero divisors in a split quaternion algebra). */
Diagonalization diagonalize(const GramForm& f);

struct PositivityResult {
    bool positive = false;
    std::string warning;
};

PositivityResult is_positive_definite(const GramForm& f);

/// The adjoint involution a -> G^{-1} (a^*)^T G as a simple factor descriptor.
SimpleFactor adjoint_involution(const GramForm& f);
/// Do two descriptors act identically on M_n(B)?
bool same_involution(const SimpleFactor& a, const SimpleFactor& b);
/// A form whose adjoint involution is inv; positive definite when asked.
GramForm involution_to_form(const SimpleFactor& inv, bool want_positive);

struct FormInvariants {
    FormKind kind = FormKind::kSymmetric;
    std::string base;
    size_t dim = 0;
    Scalar det;
    std::string det_class;                  // canonical token where one exists
    std::vector<std::pair<Place, int>> hasse;  // symmetric over Q, or Jacobson trace form
    std::vector<std::pair<int, int>> signatures;
    std::vector<Place> norm_obstructions;  // places v with (det, D)_v = -1 (hermitian over quadratic)
    bool complete = true;
    std::string classification;
};

FormInvariants invariants(const GramForm& f);

/// m in N_{F/Q}(F^x) for an imaginary quadratic field F.
bool is_norm(const Rational& m, const QuadField& f);
/// Same test without the imaginary restriction (Hasse norm theorem).
bool is_norm_any(const Rational& m, const Integer& D);

struct IsometryDecision {
    bool isometric = false;
    bool complete = true;
    std::string reason;
};

IsometryDecision isometric(const GramForm& f1, const GramForm& f2);

struct FourthPowerCertificate {
    bool isometric = false;
    FormInvariants inv1, inv2;
    std::vector<std::string> checks;  // human-readable verified steps
    bool base_isometric = false;
};

FourthPowerCertificate fourth_power_isometric(const GramForm& f1, const GramForm& f2);

/* Bounded search for U with U^T G1 U = G2 over rational symmetric forms,
 * where U and U^-1 both have entries n/d with |n|, d <= height.  Bounding
 * both makes the search symmetric in G1 and G2.  The vector table of G1 is
 * built once and reused across targets. */
class WitnessSearcher {
  public:
    WitnessSearcher(const QMatrix& g1, int height);
    std::optional<QMatrix> find(const QMatrix& g2) const;

  private:
    QMatrix g1_;
    size_t n_;
    int height_;
    Integer scale_;  // all values scaled by L^2 * den(G1)
    std::vector<Rational> values_;
    std::vector<std::vector<long>> vecs_;  // entries scaled by L
    long L_ = 1;
    std::vector<std::vector<long>> g1_int_;  // den(G1) * G1
    std::map<long, std::vector<size_t>> buckets_;
};

std::optional<QMatrix> search_isometry_witness(const QMatrix& g1, const QMatrix& g2, int height);

}  // namespace polisog

#endif
