#include "linalg.hpp"

#include <sstream>

namespace polisog {

QMatrix QMatrix::identity(size_t n) {
    QMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::diagonal(const std::vector<Rational>& d) {
    QMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
    size_t r = rows.size(), c = r ? rows[0].size() : 0;
    QMatrix m(r, c);
    for (size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) fail(ErrorCode::kSchema, "ragged matrix");
        for (size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<Rational> QMatrix::column(size_t j) const {
    std::vector<Rational> v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void QMatrix::set_column(size_t j, const std::vector<Rational>& v) {
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) fail(ErrorCode::kInternal, "matrix shape mismatch in product");
    QMatrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0) continue;
            for (size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    QMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    QMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
}

QMatrix QMatrix::operator*(const Rational& s) const {
    QMatrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
}

std::vector<Rational> QMatrix::operator*(const std::vector<Rational>& v) const {
    std::vector<Rational> r(rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

bool QMatrix::is_symmetric() const {
    if (!is_square()) return false;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool QMatrix::is_integral() const {
    for (auto& x : data_)
        if (x.get_den() != 1) return false;
    return true;
}

Integer QMatrix::denominator() const {
    Integer d = 1;
    for (auto& x : data_) d = lcm(d, x.get_den());
    return d;
}

Rational determinant(QMatrix m) {
    if (!m.is_square()) fail(ErrorCode::kInternal, "determinant of a non-square matrix");
    size_t n = m.rows();
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m(piv, c) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (size_t r = c + 1; r < n; ++r) {
            if (m(r, c) == 0) continue;
            Rational f = m(r, c) / m(c, c);
            for (size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

size_t rank(QMatrix m) {
    size_t r = 0;
    for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        for (size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        for (size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(r, c);
            for (size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

std::optional<QMatrix> inverse(const QMatrix& src) {
    if (!src.is_square()) return std::nullopt;
    size_t n = src.rows();
    QMatrix a = src, inv = QMatrix::identity(n);
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a(piv, c) == 0) ++piv;
        if (piv == n) return std::nullopt;
        for (size_t j = 0; j < n; ++j) {
            std::swap(a(piv, j), a(c, j));
            std::swap(inv(piv, j), inv(c, j));
        }
        Rational s = 1 / a(c, c);
        for (size_t j = 0; j < n; ++j) {
            a(c, j) *= s;
            inv(c, j) *= s;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            Rational f = a(r, c);
            for (size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b) {
    auto inv = inverse(m);
    if (!inv) return std::nullopt;
    return (*inv) * b;
}

QMatrix nullspace(const QMatrix& src) {
    QMatrix a = src;
    size_t rows = a.rows(), cols = a.cols();
    std::vector<long> pivot_col_of_row;
    std::vector<bool> is_pivot(cols, false);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        for (size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
        Rational s = 1 / a(r, c);
        for (size_t j = 0; j < cols; ++j) a(r, j) *= s;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivot_col_of_row.push_back(static_cast<long>(c));
        is_pivot[c] = true;
        ++r;
    }
    std::vector<std::vector<Rational>> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(cols);
        v[f] = 1;
        for (size_t i = 0; i < pivot_col_of_row.size(); ++i) v[pivot_col_of_row[i]] = -a(i, f);
        basis.push_back(std::move(v));
    }
    QMatrix out(cols, basis.size());
    for (size_t j = 0; j < basis.size(); ++j) out.set_column(j, basis[j]);
    return out;
}

QMatrix block_diagonal(const std::vector<QMatrix>& blocks) {
    size_t n = 0;
    for (auto& b : blocks) n += b.rows();
    QMatrix m(n, n);
    size_t off = 0;
    for (auto& b : blocks) {
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = 0; j < b.cols(); ++j) m(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return m;
}

std::vector<Rational> diagonalize_symmetric(const QMatrix& g, QMatrix* transform) {
    if (!g.is_symmetric()) fail(ErrorCode::kPrecondition, "diagonalization needs a symmetric matrix");
    size_t n = g.rows();
    QMatrix a = g, p = QMatrix::identity(n);
    // Congruence a <- E^T a E applied column-wise on p.
    auto add_col = [&](size_t dst, size_t src, const Rational& f) {
        // e_dst <- e_dst + f e_src
        for (size_t i = 0; i < n; ++i) p(i, dst) += f * p(i, src);
        for (size_t i = 0; i < n; ++i) a(i, dst) += f * a(i, src);
        for (size_t j = 0; j < n; ++j) a(dst, j) += f * a(src, j);
    };
    auto swap_idx = [&](size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < n; ++k) std::swap(p(k, i), p(k, j));
        for (size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
        for (size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    };
    for (size_t c = 0; c < n; ++c) {
        size_t piv = n;
        for (size_t i = c; i < n; ++i)
            if (a(i, i) != 0) {
                piv = i;
                break;
            }
        if (piv == n) {
            bool found = false;
            for (size_t i = c; i < n && !found; ++i)
                for (size_t j = i + 1; j < n && !found; ++j)
                    if (a(i, j) != 0) {
                        add_col(i, j, 1);  // a_ii becomes 2 a_ij != 0
                        piv = i;
                        found = true;
                    }
            if (!found) break;  // remaining block is zero
        }
        swap_idx(c, piv);
        for (size_t j = c + 1; j < n; ++j) {
            if (a(c, j) == 0) continue;
            add_col(j, c, -a(c, j) / a(c, c));
        }
    }
    std::vector<Rational> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = a(i, i);
    if (transform) *transform = p;
    return d;
}

bool is_positive_definite(const QMatrix& g) {
    if (!g.is_symmetric()) return false;
    // Gaussian elimination without pivoting exposes the leading minors' ratios.
    QMatrix a = g;
    size_t n = a.rows();
    for (size_t c = 0; c < n; ++c) {
        if (a(c, c) <= 0) return false;
        for (size_t r = c + 1; r < n; ++r) {
            if (a(r, c) == 0) continue;
            Rational f = a(r, c) / a(c, c);
            for (size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return true;
}

std::pair<int, int> signature(const QMatrix& g) {
    int pos = 0, neg = 0;
    for (auto& d : diagonalize_symmetric(g)) {
        if (d > 0) ++pos;
        else if (d < 0) ++neg;
    }
    return {pos, neg};
}

std::vector<std::vector<Integer>> hnf_rows(std::vector<std::vector<Integer>> gens, size_t n) {
    std::vector<std::vector<Integer>> out;
    for (size_t c = 0; c < n; ++c) {
        // gcd-combine column c among the remaining generators.
        std::vector<Integer> best;
        for (;;) {
            long pick = -1;
            for (size_t i = 0; i < gens.size(); ++i)
                if (gens[i][c] != 0 && (pick < 0 || abs(gens[i][c]) < abs(gens[pick][c]))) pick = static_cast<long>(i);
            if (pick < 0) break;
            bool reduced = false;
            for (size_t i = 0; i < gens.size(); ++i) {
                if (static_cast<long>(i) == pick || gens[i][c] == 0) continue;
                Integer q = floor_div(gens[i][c], gens[pick][c]);
                for (size_t j = 0; j < n; ++j) gens[i][j] -= q * gens[pick][j];
                reduced = true;
            }
            if (!reduced) {
                best = gens[pick];
                gens.erase(gens.begin() + pick);
                break;
            }
        }
        if (best.empty()) fail(ErrorCode::kPrecondition, "lattice generators are not of full rank");
        if (best[c] < 0)
            for (auto& x : best) x = -x;
        out.push_back(best);
        // drop zero generators
        std::vector<std::vector<Integer>> rest;
        for (auto& g : gens) {
            bool zero = true;
            for (auto& x : g) zero = zero && x == 0;
            if (!zero) rest.push_back(g);
        }
        gens.swap(rest);
    }
    // Reduce entries above the pivots.
    for (size_t c = 0; c < n; ++c)
        for (size_t r = 0; r < c; ++r) {
            Integer q = floor_div(out[r][c], out[c][c]);
            if (q != 0)
                for (size_t j = 0; j < n; ++j) out[r][j] -= q * out[c][j];
        }
    return out;
}

std::string to_string(const QMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace polisog
