#ifndef POLISOG_LINALG_HPP
#define POLISOG_LINALG_HPP

#include "exact.hpp"

#include <optional>
#include <vector>

namespace polisog {

/// Dense matrix over Q, row-major.
class QMatrix {
  public:
    QMatrix() = default;
    QMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static QMatrix identity(size_t n);
    static QMatrix diagonal(const std::vector<Rational>& d);
    static QMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    QMatrix transpose() const;
    std::vector<Rational> column(size_t j) const;
    void set_column(size_t j, const std::vector<Rational>& v);

    QMatrix operator*(const QMatrix& o) const;
    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const Rational& s) const;
    std::vector<Rational> operator*(const std::vector<Rational>& v) const;
    bool operator==(const QMatrix& o) const = default;

    bool is_symmetric() const;
    bool is_integral() const;
    /// Least common denominator of all entries.
    Integer denominator() const;

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

Rational determinant(QMatrix m);
size_t rank(QMatrix m);
std::optional<QMatrix> inverse(const QMatrix& m);
/// Solve m x = b for square nonsingular m.
std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b);
/// Basis of the right kernel {x : m x = 0}, as columns.
QMatrix nullspace(const QMatrix& m);
QMatrix block_diagonal(const std::vector<QMatrix>& blocks);

/* Congruence diagonalization of a symmetric matrix: returns d and fills
 * transform P (if given) with P^T g P = diag(d).  Pivot on the first
 * nonzero diagonal entry; an all-zero diagonal with a nonzero off-diagonal
 * entry g_ij is resolved by e_i <- e_i + e_j. */
std::vector<Rational> diagonalize_symmetric(const QMatrix& g, QMatrix* transform = nullptr);

/// Sylvester criterion on leading principal minors.
bool is_positive_definite(const QMatrix& g);

/// (positive, negative) eigenvalue counts of a nonsingular symmetric matrix.
std::pair<int, int> signature(const QMatrix& g);

/* Row-style Hermite normal form of the Z-lattice spanned by the given
 * integer row vectors (all of the same length n, spanning full rank n).
 * Result: n x n upper triangular, positive diagonal, off-diagonal entries
 * reduced into [0, pivot). */
std::vector<std::vector<Integer>> hnf_rows(std::vector<std::vector<Integer>> gens, size_t n);

std::string to_string(const QMatrix& m);

}  // namespace polisog

#endif
