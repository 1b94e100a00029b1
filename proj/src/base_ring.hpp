#ifndef POLISOG_BASE_RING_HPP
#define POLISOG_BASE_RING_HPP

#include "linalg.hpp"
#include "quadfield.hpp"

namespace polisog {

/// Coordinates of a base-ring element: 1, 2 (x + y sqrt D) or 4 (1, i, j, ij).
using Scalar = std::vector<Rational>;

enum class EntryInvolution { kIdentity, kConjugation, kCanonical };

const char* entry_involution_name(EntryInvolution e);

/* Q, a quadratic field Q(sqrt D), or the quaternion algebra (a,b / Q)
 * with i^2 = a, j^2 = b, ij = -ji. */
class BaseRing {
  public:
    enum class Kind { kRational, kQuadratic, kQuaternion };

    static BaseRing rational() { return BaseRing(Kind::kRational); }
    static BaseRing quadratic(const Integer& D);
    static BaseRing quaternion(const Rational& a, const Rational& b);

    Kind kind() const { return kind_; }
    const Integer& D() const { return D_; }
    const Rational& qa() const { return a_; }
    const Rational& qb() const { return b_; }
    QuadField field() const { return QuadField(D_); }
    size_t dim() const;
    bool commutative() const { return kind_ != Kind::kQuaternion; }
    /// Degree over Q of the reduced norm on a 1x1 matrix.
    int norm_degree() const { return kind_ == Kind::kRational ? 1 : 2; }
    bool operator==(const BaseRing& o) const { return kind_ == o.kind_ && D_ == o.D_ && a_ == o.a_ && b_ == o.b_; }
    std::string describe() const;

    Scalar zero() const { return Scalar(dim()); }
    Scalar one() const { return from_rational(1); }
    Scalar from_rational(const Rational& r) const;
    bool is_zero(const Scalar& x) const;
    /// Is x in Q (the prime field)?
    bool is_rational(const Scalar& x) const;

    Scalar add(const Scalar& x, const Scalar& y) const;
    Scalar sub(const Scalar& x, const Scalar& y) const;
    Scalar neg(const Scalar& x) const;
    Scalar mul(const Scalar& x, const Scalar& y) const;
    Scalar scale(const Scalar& x, const Rational& s) const;
    Scalar inv(const Scalar& x) const;

    /// The natural involution: identity on Q, conjugation, canonical.
    Scalar conj(const Scalar& x) const;
    Scalar apply(EntryInvolution e, const Scalar& x) const;
    bool supports(EntryInvolution e) const;
    EntryInvolution natural_involution() const;

    /// N_{F/Q}(Nrd(x)) for the center F.
    Rational norm_q(const Scalar& x) const;
    /// Reduced trace followed by the trace to Q.
    Rational trace_q(const Scalar& x) const;
    /// Matrix of left multiplication by x on the coordinate space.
    QMatrix left_mult(const Scalar& x) const;

    QuadElem to_quad(const Scalar& x) const;
    Scalar from_quad(const QuadElem& x) const;

  private:
    explicit BaseRing(Kind k) : kind_(k) {}
    Kind kind_;
    Integer D_ = 0;
    Rational a_, b_;
};

/// Dense matrix over a base ring.
class BMatrix {
  public:
    BMatrix() = default;
    BMatrix(BaseRing base, size_t rows, size_t cols);
    static BMatrix identity(const BaseRing& base, size_t n);
    static BMatrix from_rational(const BaseRing& base, const QMatrix& m);

    const BaseRing& base() const { return base_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Scalar& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    BMatrix operator*(const BMatrix& o) const;
    BMatrix operator+(const BMatrix& o) const;
    BMatrix operator-(const BMatrix& o) const;
    BMatrix scaled(const Scalar& s) const;  // entrywise left multiplication
    bool operator==(const BMatrix& o) const;
    bool is_zero() const;

    /// (x^e)^T
    BMatrix star_transpose(EntryInvolution e) const;
    /* Representation over Q by left-multiplication blocks: an injective
     * algebra map M_n(B) -> M_{n dim B}(Q). */
    QMatrix rational_rep() const;
    std::optional<BMatrix> inverse() const;
    /// N_{F/Q}(Nrd(x)) up to sign for quaternion bases.
    Rational norm_q() const;
    Rational trace_q() const;

    std::vector<Rational> flatten() const;
    static BMatrix unflatten(const BaseRing& base, size_t n, const std::vector<Rational>& v, size_t offset = 0);

  private:
    BaseRing base_ = BaseRing::rational();
    size_t rows_ = 0, cols_ = 0;
    std::vector<Scalar> data_;
};

}  // namespace polisog

#endif
