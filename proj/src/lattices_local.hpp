#ifndef POLISOG_LATTICES_LOCAL_HPP
#define POLISOG_LATTICES_LOCAL_HPP

#include "linalg.hpp"

#include <optional>

namespace polisog {

struct PadicContext {
    Integer p;
    int precision = 12;

    PadicContext(Integer prime, int prec = 12);
};

/* A Z_p-lattice in Q_p^n spanned by the columns of basis, with the
 * symmetric form v^T G w.  Entries are rationals read p-adically. */
class PadicLattice {
  public:
    PadicLattice(PadicContext ctx, QMatrix basis, QMatrix form);
    static PadicLattice standard(PadicContext ctx, QMatrix form);

    const PadicContext& ctx() const { return ctx_; }
    const QMatrix& basis() const { return basis_; }
    const QMatrix& form() const { return form_; }
    size_t dim() const { return basis_.cols(); }
    QMatrix gram() const { return basis_.transpose() * form_ * basis_; }
    bool contains(const PadicLattice& o) const;

  private:
    PadicContext ctx_;
    QMatrix basis_, form_;
};

/// Minimal p-valuation of the Gram entries (zero entries ignored).
int scale(const PadicLattice& l);

/* No superlattice of the same scale exists.  Index-p superlattices suffice:
 * if L' > L has the same scale, pick x in L' with px in L and x not in L;
 * then L + Z_p x lies between L and L' and has the same scale. */
bool is_maximal(const PadicLattice& l);

/* Greedy enlargement by index-p superlattices of scale >= target until none
 * remains.  The result is maximal among lattices of scale >= target; its
 * scale equals target whenever such a lattice exists over the input. */
PadicLattice maximal_completion(const PadicLattice& l, int target);

struct JordanComponent {
    int scale = 0;
    int dim = 0;
    int det_legendre = 1;  // Legendre symbol of the unit part of the determinant
    bool operator==(const JordanComponent&) const = default;
};

std::vector<JordanComponent> jordan_decomposition(const QMatrix& gram, const Integer& p);
bool lattices_isometric(const QMatrix& g1, const QMatrix& g2, const Integer& p);
bool unimodular_isometric(const QMatrix& g1, const QMatrix& g2, const Integer& p);

struct LocalSolveResult {
    QMatrix b;
    std::string route;
    Rational m;
    int v_det_b = 0;
    int v_det_q = 0;
    std::optional<PadicLattice> completed;
};

/* b with p-integral entries and b^T q b = m' I.  Requires m'/m to be a
 * rational square so that u = sqrt(m'/m) and b are exact. */
LocalSolveResult split_local_solve(const QMatrix& q, const QMatrix& a, const Rational& m_prime, const PadicContext& ctx);

struct UnitCaseResult {
    bool even_valuation = false;
    int v_m = 0;
    std::optional<QMatrix> witness;  // b^T q b = I modulo p^precision
    int precision = 0;
};

UnitCaseResult unit_case_parity(const QMatrix& q, const QMatrix& a, const PadicContext& ctx);

/// x mod p^k for a p-integral rational x.
Integer mod_pk(const Rational& x, const Integer& pk);
bool is_p_integral(const QMatrix& m, const Integer& p);
/// m = a^T q a when this is a scalar matrix.
std::optional<Rational> scalar_value(const QMatrix& m);

}  // namespace polisog

#endif
