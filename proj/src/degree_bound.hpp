#ifndef POLISOG_DEGREE_BOUND_HPP
#define POLISOG_DEGREE_BOUND_HPP

#include "algebras.hpp"
#include "quadfield.hpp"

namespace polisog {

/* (E, dagger, R, Nm, q, a) with q^dagger = q, q in R and
 * a^dagger q a = m a nonzero rational. */
class BoundInstance {
  public:
    BoundInstance(OrderR order, NormSpec spec, AlgElem q, AlgElem a);

    const OrderR& order() const { return order_; }
    const AlgebraWithInvolution& alg() const { return order_.algebra(); }
    const NormSpec& spec() const { return spec_; }
    const AlgElem& q() const { return q_; }
    const AlgElem& a() const { return a_; }
    const Rational& m() const { return m_; }
    Rational norm_q() const;
    /// b^dagger q b.
    AlgElem value_of(const AlgElem& b) const;

  private:
    OrderR order_;
    NormSpec spec_;
    AlgElem q_, a_;
    Rational m_;
};

struct BoundResult {
    AlgElem b;
    std::vector<Integer> coords;  // in the order basis
    Integer value;
    Rational norm_b, norm_q;
    long rank_d = 0;
    /// (Nm(b) / Nm(q)^{d - 1/2})^2, exact.
    Rational ratio_sq;
    /// Nm(b) <= Nm(q)^e for e = (d-1)/2, d-1/2, (3d-1)/2.
    bool within_local = false, within_global = false, within_sketch = false;
    std::string route;
    std::vector<std::string> notes;
};

/// Re-verifies b in R and b^dagger q b in Z - {0}; throws kInternal otherwise.
BoundResult make_result(const BoundInstance& inst, const AlgElem& b, std::string route);

/* Quadratic field, maximal order, dagger trivial on a real field or
 * conjugation on an imaginary one.  Prime-by-prime exponent choice,
 * principalization (adjusting by ramified primes), unit parity fix. */
BoundResult solve_commutative(const BoundInstance& inst);

/* M_n(Q) with transpose.  The integral rescaling of a, improved prime by
 * prime with split_local_solve and reassembled as a global lattice. */
BoundResult solve_split_matrix(const BoundInstance& inst);

struct OracleOptions {
    long radius = 0;  // 0: largest radius within the budget
    long budget = 2000000;
};

/* Minimum over the coordinate box of (Nm(b), coordinates) among b with
 * b^dagger q b in Z - {0} and Nm(b) <= norm_cap.  The box is not
 * norm-exhaustive for indefinite norms. */
std::optional<BoundResult> brute_force_oracle(const BoundInstance& inst, const Rational& norm_cap, const OracleOptions& opt = {});

/// Dispatch: commutative or split solver where applicable, else the oracle.
BoundResult solve(const BoundInstance& inst, const OracleOptions& opt = {});

struct MeasureRow {
    BoundResult solver;
    std::optional<BoundResult> oracle;
};

struct MeasureReport {
    std::vector<MeasureRow> rows;
    Rational max_ratio_sq_solver, max_ratio_sq_oracle;
};

MeasureReport measure_constant(const std::vector<BoundInstance>& instances, const OracleOptions& opt = {});

struct TorusCheck {
    Integer conductor;  // [o_L : R cap L]
    Integer c_p;        // p-part of the conductor
    bool x_square_in_Rp = false;
    bool holds = false;  // c_p x in R_p
};

/* L = Q[x] for x outside Q with x^2 in Q + Q x.  Computes the conductor of
 * R cap L in the maximal order of L and checks c x in R_p. */
TorusCheck torus_conductor_check(const OrderR& order, const AlgElem& x, const Integer& p);

}  // namespace polisog

#endif
