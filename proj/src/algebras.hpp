#ifndef POLISOG_ALGEBRAS_HPP
#define POLISOG_ALGEBRAS_HPP

#include "base_ring.hpp"

namespace polisog {

/* M_n(B) with the involution x -> z^{-1} (x^e)^T z.  For n = 1 and z = 1
 * this is just e on B (identity, conjugation, canonical). */
struct SimpleFactor {
    BaseRing base = BaseRing::rational();
    size_t n = 1;
    EntryInvolution entry = EntryInvolution::kIdentity;
    BMatrix z;
    BMatrix z_inv;

    static SimpleFactor make(const BaseRing& base, size_t n, EntryInvolution entry);
    static SimpleFactor make(const BaseRing& base, size_t n, EntryInvolution entry, const BMatrix& z);

    size_t dim_q() const { return n * n * base.dim(); }
    /// Degree of N_{F/Q} o Nrd restricted to Q.
    int norm_degree() const { return static_cast<int>(n) * base.norm_degree(); }
    BMatrix apply(const BMatrix& x) const;
    bool operator==(const SimpleFactor& o) const;
};

using AlgElem = std::vector<BMatrix>;

/* A product of simple factors.  A swap pair (i, j) makes the involution
 * exchange the two factors: (x_i, x_j) -> (theta(x_j), theta(x_i)), theta
 * being the (shared) factor involution. */
class AlgebraWithInvolution {
  public:
    AlgebraWithInvolution(std::vector<SimpleFactor> factors, std::vector<std::pair<size_t, size_t>> swaps = {});

    const std::vector<SimpleFactor>& factors() const { return factors_; }
    const std::vector<std::pair<size_t, size_t>>& swaps() const { return swaps_; }
    size_t partner(size_t i) const { return partner_[i]; }
    size_t dim_q() const;

    AlgElem zero() const;
    AlgElem one() const;
    AlgElem scalar(const Rational& r) const;
    AlgElem add(const AlgElem& x, const AlgElem& y) const;
    AlgElem sub(const AlgElem& x, const AlgElem& y) const;
    AlgElem mul(const AlgElem& x, const AlgElem& y) const;
    AlgElem scale(const AlgElem& x, const Rational& s) const;
    AlgElem involution(const AlgElem& x) const;
    std::optional<AlgElem> inverse(const AlgElem& x) const;
    bool equal(const AlgElem& x, const AlgElem& y) const;
    /// Is x = r * 1 for a rational r?
    std::optional<Rational> as_rational(const AlgElem& x) const;

    std::vector<Rational> flatten(const AlgElem& x) const;
    AlgElem unflatten(const std::vector<Rational>& v) const;
    /// Q-basis element k of the flattened coordinate space.
    AlgElem basis_element(size_t k) const;
    /// Matrix of y -> x y on flattened coordinates.
    QMatrix left_regular(const AlgElem& x) const;
    /// Sum of reduced traces down to Q.
    Rational trace_q(const AlgElem& x) const;
    /// Gram matrix of (x, y) -> Tr(x y^dagger) on the flattened basis.
    QMatrix involution_trace_form() const;
    bool is_positive_involution() const;

  private:
    std::vector<SimpleFactor> factors_;
    std::vector<std::pair<size_t, size_t>> swaps_;
    std::vector<size_t> partner_;
};

struct NormSpec {
    std::vector<long> gammas;
    long rank_d = 0;

    /// Validates gammas against the algebra and fills rank_d (checking any given value).
    static NormSpec make(const AlgebraWithInvolution& alg, std::vector<long> gammas, std::optional<long> rank_d = {});
};

/// Per-factor N_{F_i/Q}(Nrd(x_i)), up to sign for quaternion factors.
std::vector<Rational> factor_norms(const AlgebraWithInvolution& alg, const AlgElem& x);
Rational norm(const AlgebraWithInvolution& alg, const AlgElem& x, const NormSpec& spec);
/// p^(sum gamma_i v_p(N_i(x))); requires every factor norm nonzero.
Rational local_norm(const AlgebraWithInvolution& alg, const AlgElem& x, const Integer& p, const NormSpec& spec);

/// A Z-lattice in E given by a basis, verified to be a dagger-stable order.
class OrderR {
  public:
    OrderR(AlgebraWithInvolution alg, std::vector<AlgElem> basis);
    /// The standard order: integer matrices over Z, Z[w] or Z<i, j>.
    static OrderR standard(const AlgebraWithInvolution& alg);

    const AlgebraWithInvolution& algebra() const { return alg_; }
    const std::vector<AlgElem>& basis() const { return basis_; }
    std::vector<Rational> coords(const AlgElem& x) const;
    bool contains(const AlgElem& x) const;
    AlgElem from_coords(const std::vector<Integer>& c) const;

  private:
    AlgebraWithInvolution alg_;
    std::vector<AlgElem> basis_;
    QMatrix basis_inv_;
};

/// Nm_E(x) x^{-1}, asserted to lie in R.
AlgElem norm_times_inverse(const OrderR& order, const AlgElem& x, const NormSpec& spec);

}  // namespace polisog

#endif
