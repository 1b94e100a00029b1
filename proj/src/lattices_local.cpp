#include "lattices_local.hpp"

#include "quadfield.hpp"

#include <algorithm>
#include <map>

namespace polisog {

namespace {

Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

Integer inv_mod(const Integer& a, const Integer& m) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) fail(ErrorCode::kInternal, "not invertible mod " + m.get_str());
    return r;
}

/* Kernel of an integer matrix over F_p, as basis vectors with entries in [0, p). */
std::vector<std::vector<Integer>> kernel_mod_p(std::vector<std::vector<Integer>> m, size_t n, const Integer& p) {
    size_t rows = m.size();
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < n && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (mod_floor(m[i][c], p) != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        Integer iv = inv_mod(mod_floor(m[r][c], p), p);
        for (auto& x : m[r]) x = mod_floor(x * iv, p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || mod_floor(m[i][c], p) == 0) continue;
            Integer f = m[i][c];
            for (size_t k = 0; k < n; ++k) m[i][k] = mod_floor(m[i][k] - f * m[r][k], p);
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<std::vector<Integer>> ker;
    for (size_t c = 0; c < n; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end()) continue;
        std::vector<Integer> v(n, 0);
        v[c] = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = mod_floor(-m[i][c], p);
        ker.push_back(v);
    }
    return ker;
}

/* Projective points of the span of ker, normalized so the first nonzero
 * coordinate is 1, in lexicographic order of the coefficient tuples. */
std::vector<std::vector<Integer>> projective_points(const std::vector<std::vector<Integer>>& ker, size_t n, const Integer& p) {
    std::vector<std::vector<Integer>> out;
    size_t k = ker.size();
    if (k == 0) return out;
    unsigned long pp = p.get_ui();
    std::vector<unsigned long> lam(k, 0);
    while (true) {
        size_t i = k;
        while (i > 0) {
            --i;
            if (++lam[i] < pp) break;
            lam[i] = 0;
            if (i == 0) return out;
        }
        size_t lead = 0;
        while (lead < k && lam[lead] == 0) ++lead;
        if (lead == k || lam[lead] != 1) continue;
        std::vector<Integer> v(n, 0);
        for (size_t j = 0; j < k; ++j)
            for (size_t t = 0; t < n; ++t) v[t] += Integer(lam[j]) * ker[j][t];
        for (auto& x : v) x = mod_floor(x, p);
        size_t f = 0;
        while (f < n && v[f] == 0) ++f;
        Integer iv = inv_mod(v[f], p);
        for (auto& x : v) x = mod_floor(x * iv, p);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
}

/* First c (mod p) with M c = 0 mod p and c^T M c = 0 mod p^2, where M is
 * p-integral; such c give the index-p superlattices L + (B c)/p of scale at
 * least that of M. */
std::optional<std::vector<Integer>> isotropic_direction(const QMatrix& m, const Integer& p) {
    size_t n = m.rows();
    Integer p2 = p * p;
    std::vector<std::vector<Integer>> mi(n, std::vector<Integer>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) mi[i][j] = mod_pk(m(i, j), p2);
    for (auto& c : projective_points(kernel_mod_p(mi, n, p), n, p)) {
        Integer q = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) q += c[i] * mi[i][j] * c[j];
        if (mod_floor(q, p2) == 0) return c;
    }
    return std::nullopt;
}

QMatrix enlarge(const QMatrix& basis, const std::vector<Integer>& c, const Integer& p) {
    size_t n = basis.cols();
    size_t lead = 0;
    while (c[lead] == 0) ++lead;
    std::vector<Rational> v(basis.rows(), 0);
    for (size_t j = 0; j < n; ++j)
        for (size_t r = 0; r < basis.rows(); ++r) v[r] += basis(r, j) * c[j];
    for (auto& x : v) x /= p;
    QMatrix out = basis;
    out.set_column(lead, v);
    return out;
}

}  // namespace

PadicContext::PadicContext(Integer prime, int prec) : p(std::move(prime)), precision(prec) {
    if (!is_prime(p)) fail(ErrorCode::kPrecondition, "not a prime: " + p.get_str());
    if (p == 2) fail(ErrorCode::kUnsupported, "p = 2 is not supported for local lattices");
    if (precision < 1 || precision > 1000) fail(ErrorCode::kPrecondition, "precision must be between 1 and 1000");
}

Integer mod_pk(const Rational& x, const Integer& pk) {
    Integer d = x.get_den();
    if (gcd(d, pk) != 1) fail(ErrorCode::kPrecondition, "value " + to_string(x) + " is not p-integral");
    return mod_floor(x.get_num() * inv_mod(mod_floor(d, pk), pk), pk);
}

bool is_p_integral(const QMatrix& m, const Integer& p) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (m(i, j).get_den() % p == 0) return false;
    return true;
}

std::optional<Rational> scalar_value(const QMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return std::nullopt;
    Rational s = m(0, 0);
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != (i == j ? s : Rational(0))) return std::nullopt;
    return s;
}

PadicLattice::PadicLattice(PadicContext ctx, QMatrix basis, QMatrix form)
    : ctx_(std::move(ctx)), basis_(std::move(basis)), form_(std::move(form)) {
    size_t n = form_.rows();
    if (form_.cols() != n || !form_.is_symmetric()) fail(ErrorCode::kSchema, "lattice form must be a symmetric square matrix");
    if (basis_.rows() != n || basis_.cols() != n) fail(ErrorCode::kSchema, "lattice basis must be " + std::to_string(n) + "x" + std::to_string(n));
    if (determinant(form_) == 0) fail(ErrorCode::kPrecondition, "lattice form is singular");
    if (determinant(basis_) == 0) fail(ErrorCode::kPrecondition, "lattice basis is singular");
}

PadicLattice PadicLattice::standard(PadicContext ctx, QMatrix form) {
    QMatrix id = QMatrix::identity(form.rows());
    return PadicLattice(std::move(ctx), id, std::move(form));
}

bool PadicLattice::contains(const PadicLattice& o) const {
    return is_p_integral(*polisog::inverse(basis_) * o.basis_, ctx_.p);
}

int scale(const PadicLattice& l) {
    QMatrix g = l.gram();
    bool any = false;
    int s = 0;
    for (size_t i = 0; i < g.rows(); ++i)
        for (size_t j = 0; j < g.cols(); ++j) {
            if (g(i, j) == 0) continue;
            int v = valuation(g(i, j), l.ctx().p);
            if (!any || v < s) s = v;
            any = true;
        }
    if (!any) fail(ErrorCode::kInternal, "nonsingular form with zero Gram matrix");
    return s;
}

bool is_maximal(const PadicLattice& l) {
    int s = scale(l);
    QMatrix m = l.gram() * qpow(Rational(l.ctx().p), -s);
    return !isotropic_direction(m, l.ctx().p).has_value();
}

PadicLattice maximal_completion(const PadicLattice& l, int target) {
    const Integer& p = l.ctx().p;
    if (scale(l) < target)
        fail(ErrorCode::kPrecondition, "lattice scale " + std::to_string(scale(l)) + " is below the target " + std::to_string(target));
    QMatrix basis = l.basis();
    Rational shift = qpow(Rational(p), -target);
    while (true) {
        QMatrix m = basis.transpose() * l.form() * basis * shift;
        auto c = isotropic_direction(m, p);
        if (!c) break;
        basis = enlarge(basis, *c, p);
    }
    return PadicLattice(l.ctx(), basis, l.form());
}

namespace {

/* Diagonalization over Z_(p): P has p-integral entries and unit determinant,
 * P^T g P = diag(d).  Pivots on an entry of minimal valuation. */
std::vector<Rational> padic_diagonal(const QMatrix& g, const Integer& p, QMatrix* transform = nullptr) {
    size_t n = g.rows();
    QMatrix m = g;
    QMatrix t = QMatrix::identity(n);
    std::vector<size_t> active(n);
    for (size_t i = 0; i < n; ++i) active[i] = i;
    auto add_to = [&](size_t i, size_t j, const Rational& f) {  // e_i += f e_j
        for (size_t k = 0; k < n; ++k) m(i, k) += f * m(j, k);
        for (size_t k = 0; k < n; ++k) m(k, i) += f * m(k, j);
        for (size_t k = 0; k < n; ++k) t(k, i) += f * t(k, j);
    };
    while (!active.empty()) {
        size_t bi = n, bj = n;
        int best = 0;
        for (size_t i : active)
            for (size_t j : active) {
                if (m(i, j) == 0) continue;
                int v = valuation(m(i, j), p);
                if (bi == n || v < best || (v == best && i == j && bi != bj)) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi == n) fail(ErrorCode::kPrecondition, "form is singular");
        if (bi != bj) add_to(bi, bj, 1);
        for (size_t k : active) {
            if (k == bi || m(k, bi) == 0) continue;
            add_to(k, bi, -m(k, bi) / m(bi, bi));
        }
        active.erase(std::find(active.begin(), active.end(), bi));
    }
    std::vector<Rational> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = m(i, i);
    if (transform) *transform = t;
    return d;
}

}  // namespace

std::vector<JordanComponent> jordan_decomposition(const QMatrix& gram, const Integer& p) {
    if (!gram.is_square() || !gram.is_symmetric()) fail(ErrorCode::kSchema, "Gram matrix must be symmetric");
    std::map<int, std::pair<int, Rational>> by_scale;
    for (auto& x : padic_diagonal(gram, p)) {
        auto& slot = by_scale.try_emplace(valuation(x, p), 0, Rational(1)).first->second;
        slot.first += 1;
        slot.second *= unit_part(x, p);
    }
    std::vector<JordanComponent> out;
    for (auto& [s, c] : by_scale) out.push_back({s, c.first, legendre(c.second, p)});
    return out;
}

bool lattices_isometric(const QMatrix& g1, const QMatrix& g2, const Integer& p) {
    if (g1.rows() != g2.rows()) return false;
    return jordan_decomposition(g1, p) == jordan_decomposition(g2, p);
}

bool unimodular_isometric(const QMatrix& g1, const QMatrix& g2, const Integer& p) {
    for (auto* g : {&g1, &g2}) {
        if (!g->is_square() || !g->is_symmetric()) fail(ErrorCode::kSchema, "Gram matrix must be symmetric");
        if (!is_p_integral(*g, p)) fail(ErrorCode::kPrecondition, "Gram matrix is not p-integral");
        Rational d = determinant(*g);
        if (d == 0 || valuation(d, p) != 0) fail(ErrorCode::kPrecondition, "Gram matrix is not unimodular at p = " + p.get_str());
    }
    if (g1.rows() != g2.rows()) return false;
    return legendre(determinant(g1) / determinant(g2), p) == 1;
}

namespace {

/* Rational x with p-integral coordinates and sum u_i x_i^2 = 1, u_i p-adic
 * units.  With u_i = s_i t_i^2, s_i squarefree, integer vectors y are
 * searched in growing boxes for sum s_i y_i^2 = z^2 with z a p-unit. */
std::optional<std::vector<Rational>> represent_one(const std::vector<Rational>& u, const Integer& p) {
    size_t n = u.size();
    std::vector<Integer> s(n);
    std::vector<Rational> t(n);
    for (size_t i = 0; i < n; ++i) {
        s[i] = square_class(u[i]);
        t[i] = exact_sqrt(u[i] / Rational(s[i]));
    }
    long budget = 4000000;
    for (long bound = 1; bound <= 400; ++bound) {
        std::vector<long> y(n, -bound);
        while (true) {
            long mx = 0;
            for (long c : y) mx = std::max(mx, std::labs(c));
            if (mx == bound) {
                if (--budget < 0) return std::nullopt;
                Integer v = 0;
                for (size_t i = 0; i < n; ++i) v += s[i] * y[i] * y[i];
                if (v > 0 && is_square(v)) {
                    Integer z = sqrt(v);
                    if (valuation(z, p) == 0) {
                        std::vector<Rational> x(n);
                        for (size_t i = 0; i < n; ++i) x[i] = Rational(Rational(y[i]) / (t[i] * Rational(z)));
                        return x;
                    }
                }
            }
            size_t k = n;
            while (k > 0) {
                --k;
                if (++y[k] <= bound) break;
                y[k] = -bound;
                if (k == 0) goto next_bound;
            }
        }
    next_bound:;
    }
    return std::nullopt;
}

/* T in GL_n(Z_(p)) with T^T g T = m I, for g m-modular and rationally
 * isometric to m I.  Splits off one vector of value m at a time. */
QMatrix transport(const QMatrix& g, const Rational& m, const Integer& p) {
    size_t n = g.rows();
    if (n == 0) return QMatrix(0, 0);
    QMatrix pt;
    auto d = padic_diagonal(g, p, &pt);
    std::vector<Rational> u(n);
    for (size_t i = 0; i < n; ++i) u[i] = d[i] / m;
    auto x = represent_one(u, p);
    if (!x) fail(ErrorCode::kResource, "no p-integral vector of value m' found within the search bound");
    std::vector<Rational> w = pt * *x;
    size_t lead = 0;
    while (valuation(w[lead], p) != 0) ++lead;
    std::vector<Rational> gw = g * w;
    QMatrix y(n, n - 1);
    for (size_t k = 0, col = 0; k < n; ++k) {
        if (k == lead) continue;
        Rational c = gw[k] / m;
        for (size_t r = 0; r < n; ++r) y(r, col) = (r == k ? Rational(1) : Rational(0)) - c * w[r];
        ++col;
    }
    QMatrix tc = transport(y.transpose() * g * y, m, p);
    QMatrix rest = y * tc;
    QMatrix t(n, n);
    t.set_column(0, w);
    for (size_t j = 0; j + 1 < n; ++j) t.set_column(j + 1, rest.column(j));
    return t;
}

}  // namespace

LocalSolveResult split_local_solve(const QMatrix& q, const QMatrix& a, const Rational& m_prime, const PadicContext& ctx) {
    const Integer& p = ctx.p;
    size_t n = q.rows();
    if (!q.is_square() || !q.is_symmetric()) fail(ErrorCode::kSchema, "q must be a symmetric square matrix");
    if (a.rows() != n || a.cols() != n) fail(ErrorCode::kSchema, "a must have the same size as q");
    if (!is_p_integral(q, p)) fail(ErrorCode::kPrecondition, "q is not p-integral");
    Rational dq = determinant(q);
    if (dq == 0) fail(ErrorCode::kPrecondition, "q is singular");
    if (determinant(a) == 0) fail(ErrorCode::kPrecondition, "a is singular");
    auto m = scalar_value(a.transpose() * q * a);
    if (!m) fail(ErrorCode::kPrecondition, "a^T q a is not a scalar");
    if (m_prime == 0) fail(ErrorCode::kPrecondition, "m' must be nonzero");
    QMatrix qinv = *polisog::inverse(q);
    if (!is_p_integral(qinv * m_prime, p)) fail(ErrorCode::kPrecondition, "m' q^-1 is not p-integral");
    Rational ratio = m_prime / *m;
    if (!is_local_square(ratio, p))
        fail(ErrorCode::kPrecondition, "parity obstruction: m'/m = " + to_string(ratio) + " is not a square in Q_" + p.get_str() + "; see unit_case_parity");
    if (!is_square(ratio)) fail(ErrorCode::kUnsupported, "m'/m = " + to_string(ratio) + " is a p-adic but not a rational square");
    Rational u = exact_sqrt(ratio);

    LocalSolveResult r;
    r.m = *m;
    r.v_det_q = valuation(dq, p);
    QMatrix direct = a * u;
    if (is_p_integral(direct, p)) {
        r.b = direct;
        r.route = "direct";
    } else {
        int target = valuation(m_prime, p);
        PadicLattice start(ctx, qinv * m_prime, q);
        PadicLattice done = maximal_completion(start, target);
        QMatrix g = done.gram();
        if (scale(done) != target || valuation(determinant(g), p) != static_cast<int>(n) * target)
            fail(ErrorCode::kInternal, "completed lattice is not m'-modular");
        r.b = done.basis() * transport(g, m_prime, p);
        r.route = "transport";
        r.completed = done;
    }
    QMatrix check = r.b.transpose() * q * r.b;
    if (scalar_value(check) != m_prime || !is_p_integral(r.b, p)) fail(ErrorCode::kInternal, "local solution failed verification");
    r.v_det_b = valuation(determinant(r.b), p);
    return r;
}

namespace {

/* b with b^T q b = I modulo p^prec, q unimodular and isometric to I over Z_p.
 * Orthonormal basis mod p, then Newton steps b <- b (I - E/2). */
QMatrix orthonormal_witness(const QMatrix& q, const Integer& p, int prec) {
    size_t n = q.rows();
    std::vector<std::vector<Integer>> qi(n, std::vector<Integer>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) qi[i][j] = mod_pk(q(i, j), p);
    std::vector<std::vector<Integer>> chosen, constraints;
    for (size_t step = 0; step < n; ++step) {
        auto sub = constraints.empty() ? std::vector<std::vector<Integer>>{} : kernel_mod_p(constraints, n, p);
        if (constraints.empty())
            for (size_t i = 0; i < n; ++i) {
                std::vector<Integer> e(n, 0);
                e[i] = 1;
                sub.push_back(e);
            }
        auto cands = projective_points(sub, n, p);
        std::stable_sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
            auto nz = [](const auto& v) { return std::count_if(v.begin(), v.end(), [](const Integer& t) { return t != 0; }); };
            if (nz(x) != nz(y)) return nz(x) < nz(y);
            return x > y;
        });
        std::optional<std::vector<Integer>> found;
        for (auto& c : cands) {
            Integer val = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) val += c[i] * qi[i][j] * c[j];
            val = mod_floor(val, p);
            if (val == 0 || legendre(Rational(val), p) != 1) continue;
            Integer s = *sqrt_mod(val, p);
            Integer si = inv_mod(s, p);
            for (auto& x : c) x = mod_floor(x * si, p);
            found = c;
            break;
        }
        if (!found) fail(ErrorCode::kInternal, "q is not isometric to the identity modulo p");
        std::vector<Integer> row(n, 0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) row[i] += (*found)[j] * qi[j][i];
        constraints.push_back(row);
        chosen.push_back(*found);
    }
    QMatrix b(n, n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) b(i, j) = chosen[j][i];
    Integer pk = ipow(p, prec);
    QMatrix id = QMatrix::identity(n);
    for (int iter = 0; iter < 64; ++iter) {
        QMatrix e = b.transpose() * q * b - id;
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i)
            for (size_t j = 0; j < n && ok; ++j)
                if (e(i, j) != 0 && valuation(e(i, j), p) < prec) ok = false;
        if (ok) return b;
        b = b - b * e * Rational(1, 2);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) b(i, j) = mod_pk(b(i, j), pk);
    }
    fail(ErrorCode::kInternal, "Newton iteration for the orthonormal witness did not converge");
}

}  // namespace

UnitCaseResult unit_case_parity(const QMatrix& q, const QMatrix& a, const PadicContext& ctx) {
    const Integer& p = ctx.p;
    size_t n = q.rows();
    if (!q.is_square() || !q.is_symmetric()) fail(ErrorCode::kSchema, "q must be a symmetric square matrix");
    if (a.rows() != n || a.cols() != n) fail(ErrorCode::kSchema, "a must have the same size as q");
    QMatrix id = QMatrix::identity(n);
    bool iso = unimodular_isometric(q, id, p);
    auto m = scalar_value(a.transpose() * q * a);
    if (!m || *m == 0) fail(ErrorCode::kPrecondition, "a^T q a is not a nonzero scalar");
    UnitCaseResult r;
    r.v_m = valuation(*m, p);
    bool even = r.v_m % 2 == 0;
    if (even && !(r.v_m == 0 && iso)) {
        r.even_valuation = true;
        return r;
    }
    if (!iso) fail(ErrorCode::kInternal, "odd valuation with q not isometric to the identity");
    r.precision = ctx.precision;
    r.witness = orthonormal_witness(q, p, ctx.precision);
    return r;
}

}  // namespace polisog
