#include "forms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polisog {

const char* form_kind_name(FormKind k) {
    switch (k) {
        case FormKind::kSymmetric: return "symmetric";
        case FormKind::kSkew: return "skew";
        case FormKind::kHermitian: return "hermitian";
        case FormKind::kQuatSkewHermitian: return "quat-skew-hermitian";
    }
    return "?";
}

FormKind parse_form_kind(const std::string& s) {
    if (s == "symmetric") return FormKind::kSymmetric;
    if (s == "skew") return FormKind::kSkew;
    if (s == "hermitian") return FormKind::kHermitian;
    if (s == "quat-skew-hermitian") return FormKind::kQuatSkewHermitian;
    fail(ErrorCode::kSchema, "unknown form kind '" + s + "'");
}

namespace {

using Kind = BaseRing::Kind;

EntryInvolution involution_for(FormKind kind, const BaseRing& base) {
    switch (kind) {
        case FormKind::kSymmetric:
            if (base.kind() == Kind::kRational || (base.kind() == Kind::kQuadratic && base.D() > 0))
                return EntryInvolution::kIdentity;
            break;
        case FormKind::kSkew:
            if (base.kind() == Kind::kRational) return EntryInvolution::kIdentity;
            break;
        case FormKind::kHermitian:
            if (base.kind() != Kind::kRational) return base.natural_involution();
            fail(ErrorCode::kPrecondition, "hermitian forms over Q are symmetric forms; use kind 'symmetric'");
        case FormKind::kQuatSkewHermitian:
            if (base.kind() == Kind::kQuaternion) return EntryInvolution::kCanonical;
            break;
    }
    fail(ErrorCode::kUnsupported, std::string(form_kind_name(kind)) + " forms over " + base.describe() + " are not supported");
}

BMatrix negated(const BMatrix& m) { return BMatrix(m.base(), m.rows(), m.cols()) - m; }

}  // namespace

std::string gram_violation(FormKind kind, const BMatrix& gram) {
    if (gram.rows() != gram.cols()) return "gram matrix is not square";
    EntryInvolution e = involution_for(kind, gram.base());
    BMatrix st = gram.star_transpose(e);
    bool plus = kind == FormKind::kSymmetric || kind == FormKind::kHermitian;
    if (plus && !(st == gram)) return "invariant violation: gram† ≠ gram";
    if (!plus && !(st == negated(gram))) return "invariant violation: gram† ≠ -gram";
    return "";
}

GramForm::GramForm(FormKind kind, BMatrix gram) : kind_(kind), gram_(std::move(gram)) {
    inv_ = involution_for(kind_, gram_.base());
    std::string v = gram_violation(kind_, gram_);
    if (!v.empty()) fail(ErrorCode::kPrecondition, v);
    if (gram_.rows() == 0) fail(ErrorCode::kPrecondition, "empty gram matrix");
}

GramForm GramForm::symmetric_q(const QMatrix& g) {
    return GramForm(FormKind::kSymmetric, BMatrix::from_rational(BaseRing::rational(), g));
}

bool GramForm::is_nonsingular() const { return determinant(gram_.rational_rep()) != 0; }

QMatrix GramForm::trace_form() const {
    const BaseRing& b = base();
    size_t n = dim(), k = b.dim();
    std::vector<Scalar> beta;
    for (size_t t = 0; t < k; ++t) {
        Scalar e(k);
        e[t] = 1;
        beta.push_back(e);
    }
    QMatrix t(n * k, n * k);
    for (size_t i = 0; i < n; ++i)
        for (size_t s = 0; s < k; ++s)
            for (size_t j = 0; j < n; ++j)
                for (size_t u = 0; u < k; ++u) {
                    Scalar v = b.mul(b.mul(b.apply(inv_, beta[s]), gram_(i, j)), beta[u]);
                    t(i * k + s, j * k + u) = b.trace_q(v);
                }
    return t;
}

QMatrix GramForm::rational_gram() const {
    if (base().kind() != Kind::kRational) fail(ErrorCode::kInternal, "rational gram of a non-rational form");
    QMatrix g(dim(), dim());
    for (size_t i = 0; i < dim(); ++i)
        for (size_t j = 0; j < dim(); ++j) g(i, j) = gram_(i, j)[0];
    return g;
}

GramForm GramForm::direct_sum(const GramForm& o) const {
    if (kind_ != o.kind_ || !(base() == o.base())) fail(ErrorCode::kPrecondition, "direct sum of forms of different kinds");
    size_t n = dim(), m = o.dim();
    BMatrix g(base(), n + m, n + m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g(i, j) = gram_(i, j);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) g(n + i, n + j) = o.gram_(i, j);
    return GramForm(kind_, g);
}

GramForm GramForm::power(size_t copies) const {
    GramForm r = *this;
    for (size_t c = 1; c < copies; ++c) r = r.direct_sum(*this);
    return r;
}

GramForm GramForm::twisted(const BMatrix& q) const { return GramForm(kind_, gram_ * q); }

Diagonalization diagonalize(const GramForm& f) {
    const BaseRing& b = f.base();
    size_t n = f.dim();
    EntryInvolution e = f.involution();
    BMatrix p = BMatrix::identity(b, n);
    auto gram_of = [&]() { return p.star_transpose(e) * f.gram() * p; };
    auto invertible = [&](const Scalar& x) { return b.norm_q(x) != 0; };
    auto add_col = [&](size_t dst, size_t src, const Scalar& beta) {
        for (size_t r = 0; r < n; ++r) p(r, dst) = b.add(p(r, dst), b.mul(p(r, src), beta));
    };
    auto swap_col = [&](size_t i, size_t j) {
        for (size_t r = 0; r < n; ++r) std::swap(p(r, i), p(r, j));
    };
    std::vector<Scalar> units;
    for (size_t t = 0; t < b.dim(); ++t) {
        Scalar u(b.dim());
        u[t] = 1;
        units.push_back(u);
    }
    for (size_t c = 0; c < n; ++c) {
        BMatrix a = gram_of();
        size_t piv = n;
        for (size_t i = c; i < n && piv == n; ++i)
            if (invertible(a(i, i))) piv = i;
        if (piv == n) {
            bool any = false;
            for (size_t i = c; i < n && piv == n; ++i)
                for (size_t j = i + 1; j < n && piv == n; ++j) {
                    if (b.is_zero(a(i, j))) continue;
                    any = true;
                    if (!invertible(a(i, j))) continue;
                    Scalar xinv = b.inv(a(i, j));
                    for (auto& u : units) {
                        Scalar beta = b.mul(xinv, u);
                        Scalar beta_s = b.apply(e, beta);
                        Scalar val = b.add(b.add(a(i, i), b.mul(a(i, j), beta)),
                                           b.add(b.mul(beta_s, a(j, i)), b.mul(b.mul(beta_s, a(j, j)), beta)));
                        if (invertible(val)) {
                            add_col(i, j, beta);
                            piv = i;
                            break;
                        }
                    }
                }
            if (piv == n) {
                for (size_t i = c; i < n; ++i)
                    if (!b.is_zero(a(i, i))) any = true;
                if (!any) fail(ErrorCode::kPrecondition, "form is singular");
                fail(ErrorCode::kUnsupported, "no anisotropic pivot for this form");
            }
        }
        swap_col(c, piv);
        a = gram_of();
        Scalar dinv = b.inv(a(c, c));
        for (size_t j = c + 1; j < n; ++j) {
            if (b.is_zero(a(c, j))) continue;
            add_col(j, c, b.neg(b.mul(dinv, a(c, j))));
        }
    }
    BMatrix a = gram_of();
    Diagonalization d{{}, p};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && !b.is_zero(a(i, j))) fail(ErrorCode::kInternal, "diagonalization left an off-diagonal entry");
    for (size_t i = 0; i < n; ++i) d.diag.push_back(a(i, i));
    return d;
}

PositivityResult is_positive_definite(const GramForm& f) {
    if (f.sign() < 0) return {false, "skew kinds are never positive definite"};
    return {is_positive_definite(f.trace_form()), ""};
}

SimpleFactor adjoint_involution(const GramForm& f) {
    if (!f.is_nonsingular()) fail(ErrorCode::kPrecondition, "adjoint involution of a singular form");
    return SimpleFactor::make(f.base(), f.dim(), f.involution(), f.gram());
}

bool same_involution(const SimpleFactor& a, const SimpleFactor& b) {
    if (!(a.base == b.base) || a.n != b.n || a.entry != b.entry) return false;
    size_t k = a.base.dim(), n = a.n;
    for (size_t m = 0; m < n * n * k; ++m) {
        std::vector<Rational> v(n * n * k);
        v[m] = 1;
        BMatrix x = BMatrix::unflatten(a.base, n, v);
        if (!(a.apply(x) == b.apply(x))) return false;
    }
    return true;
}

namespace {

// Algebra generators of M_n(B): units of B in the corner, and e_{i,i+1}, e_{i+1,i}.
std::vector<BMatrix> matrix_generators(const BaseRing& b, size_t n) {
    std::vector<BMatrix> gens;
    for (size_t t = 0; t < b.dim(); ++t) {
        BMatrix m(b, n, n);
        m(0, 0)[t] = 1;
        gens.push_back(m);
    }
    for (size_t i = 0; i + 1 < n; ++i) {
        BMatrix u(b, n, n), l(b, n, n);
        u(i, i + 1) = b.one();
        l(i + 1, i) = b.one();
        gens.push_back(u);
        gens.push_back(l);
    }
    return gens;
}

FormKind kind_for(const BaseRing& b, EntryInvolution e, int sign) {
    if (e == EntryInvolution::kIdentity) return sign > 0 ? FormKind::kSymmetric : FormKind::kSkew;
    if (b.kind() == Kind::kQuaternion) return sign > 0 ? FormKind::kHermitian : FormKind::kQuatSkewHermitian;
    return FormKind::kHermitian;
}

}  // namespace

GramForm involution_to_form(const SimpleFactor& inv, bool want_positive) {
    const BaseRing& b = inv.base;
    size_t n = inv.n, k = b.dim(), N = n * n * k;
    auto gens = matrix_generators(b, n);
    std::vector<std::pair<BMatrix, BMatrix>> images;
    for (auto& x : gens) images.emplace_back(inv.apply(x), x.star_transpose(inv.entry));
    // Linear map G -> (G sigma(x) - x^{*T} G) over all generators x.
    QMatrix m(N * gens.size(), N);
    for (size_t c = 0; c < N; ++c) {
        std::vector<Rational> v(N);
        v[c] = 1;
        BMatrix g = BMatrix::unflatten(b, n, v);
        for (size_t t = 0; t < images.size(); ++t) {
            auto col = (g * images[t].first - images[t].second * g).flatten();
            for (size_t r = 0; r < N; ++r) m(t * N + r, c) = col[r];
        }
    }
    QMatrix ker = nullspace(m);
    std::optional<BMatrix> herm, skew;
    for (size_t c = 0; c < ker.cols() && !herm; ++c) {
        BMatrix g = BMatrix::unflatten(b, n, ker.column(c));
        BMatrix gs = g.star_transpose(inv.entry);
        for (auto& cand : {g, g + gs, g - gs}) {
            if (cand.is_zero() || !cand.inverse()) continue;
            BMatrix cs = cand.star_transpose(inv.entry);
            if (cs == cand) {
                herm = cand;
                break;
            }
            if (!skew && cs == negated(cand)) skew = cand;
        }
    }
    if (!herm && skew && b.kind() == Kind::kQuadratic && inv.entry == EntryInvolution::kConjugation)
        herm = skew->scaled(b.from_quad(QuadElem::sqrt_d(b.field())));
    if (!herm && !skew) fail(ErrorCode::kPrecondition, "no (skew-)hermitian solution: the descriptor is not an involution adjoint to a form");
    if (!herm) {
        if (want_positive) fail(ErrorCode::kPrecondition, "the involution is adjoint to a skew form and cannot be positive");
        return GramForm(kind_for(b, inv.entry, -1), *skew);
    }
    GramForm phi(kind_for(b, inv.entry, 1), *herm);
    if (!want_positive) return phi;
    std::vector<BMatrix> probes;
    for (size_t i = 0; i < n; ++i) {
        BMatrix v(b, n, 1);
        v(i, 0) = b.one();
        probes.push_back(v);
        for (size_t j = i + 1; j < n; ++j) {
            BMatrix w = v;
            w(j, 0) = b.one();
            probes.push_back(w);
        }
    }
    for (auto& v : probes) {
        Scalar s = (v.star_transpose(inv.entry) * phi.gram() * v)(0, 0);
        if (b.norm_q(s) == 0) continue;
        GramForm psi(phi.kind(), phi.gram().scaled(b.inv(s)));
        if (is_positive_definite(psi).positive) return psi;
    }
    AlgebraWithInvolution alg({inv});
    if (alg.is_positive_involution()) fail(ErrorCode::kInternal, "positive involution without a positive definite form");
    fail(ErrorCode::kPrecondition, "the involution is not positive");
}

namespace {

int embedding_sign(const Scalar& x, const Integer& D, int which) {
    const Rational& a = x[0];
    Rational t = which == 0 ? x[1] : Rational(-x[1]);
    if (a >= 0 && t >= 0) return (a == 0 && t == 0) ? 0 : 1;
    if (a <= 0 && t <= 0) return -1;
    return a * a > D * t * t ? sgn(a) : sgn(t);
}

bool is_square_in_quad(const Scalar& x, const Integer& D) {
    if (x[1] == 0) return is_square(x[0]) || is_square(Rational(x[0] / D));
    Rational n = x[0] * x[0] - D * x[1] * x[1];
    if (!is_square(n)) return false;
    Rational r = exact_sqrt(n);
    for (const Rational& s : {r, Rational(-r)}) {
        Rational t = 2 * (x[0] + s);
        if (t != 0 && (is_square(t) || is_square(Rational(t / D)))) return true;
    }
    return false;
}

void fill_rational_invariants(FormInvariants& inv, const std::vector<Rational>& diag) {
    Rational det = 1;
    int pos = 0, neg = 0;
    for (auto& d : diag) {
        det *= d;
        (d > 0 ? pos : neg)++;
    }
    inv.det = {det};
    inv.det_class = square_class(det).get_str();
    for (auto& v : support_places(diag)) inv.hasse.emplace_back(v, hasse_invariant(diag, v));
    inv.signatures = {{pos, neg}};
}

std::vector<Rational> rational_diag(const std::vector<Scalar>& d) {
    std::vector<Rational> out;
    for (auto& x : d) {
        for (size_t t = 1; t < x.size(); ++t)
            if (x[t] != 0) fail(ErrorCode::kInternal, "hermitian diagonal entry outside the fixed field");
        out.push_back(x[0]);
    }
    return out;
}

std::vector<Place> norm_obstructions(const Rational& m, const Integer& D) {
    std::vector<Rational> ent{m, Rational(D)};
    std::vector<Place> out;
    for (auto& v : support_places(ent))
        if (hilbert_symbol(m, Rational(D), v) == -1) out.push_back(v);
    return out;
}

std::string places_string(const std::vector<Place>& ps) {
    std::string s;
    for (auto& p : ps) s += (s.empty() ? "" : ",") + p.to_string();
    return "{" + s + "}";
}

int hasse_at(const FormInvariants& inv, const Place& v) {
    for (auto& [p, s] : inv.hasse)
        if (p == v) return s;
    return 1;
}

}  // namespace

bool is_norm_any(const Rational& m, const Integer& D) {
    if (m == 0) fail(ErrorCode::kUndefined, "norm test of zero");
    return norm_obstructions(m, D).empty();
}

bool is_norm(const Rational& m, const QuadField& f) {
    if (f.is_real()) fail(ErrorCode::kPrecondition, "norm classes are tabulated for imaginary (CM) quadratic fields only");
    return is_norm_any(m, f.D());
}

FormInvariants invariants(const GramForm& f) {
    if (!f.is_nonsingular()) fail(ErrorCode::kPrecondition, "invariants of a singular form");
    FormInvariants inv;
    inv.kind = f.kind();
    inv.base = f.base().describe();
    inv.dim = f.dim();
    const BaseRing& b = f.base();
    if (f.kind() == FormKind::kSkew) {
        inv.det = {determinant(f.rational_gram())};
        inv.det_class = "1";
        inv.classification = "nonsingular skew forms are classified by dimension";
        return inv;
    }
    Diagonalization d = diagonalize(f);
    switch (f.kind()) {
        case FormKind::kSymmetric:
            if (b.kind() == Kind::kRational) {
                fill_rational_invariants(inv, rational_diag(d.diag));
                inv.classification = "dimension, determinant mod squares, Hasse invariants, signature";
            } else {
                Scalar det = b.one();
                int p0 = 0, p1 = 0;
                for (auto& x : d.diag) {
                    det = b.mul(det, x);
                    p0 += embedding_sign(x, b.D(), 0) > 0;
                    p1 += embedding_sign(x, b.D(), 1) > 0;
                }
                int n = static_cast<int>(f.dim());
                inv.det = det;
                inv.det_class = "";
                inv.signatures = {{p0, n - p0}, {p1, n - p1}};
                inv.complete = false;
                inv.classification = "dimension, determinant mod F^x2, signatures (Hasse invariants over F not computed)";
            }
            break;
        case FormKind::kHermitian:
            if (b.kind() == Kind::kQuadratic) {
                auto diag = rational_diag(d.diag);
                Rational det = 1;
                int pos = 0;
                for (auto& x : diag) {
                    det *= x;
                    pos += x > 0;
                }
                inv.det = {det, 0};
                inv.norm_obstructions = norm_obstructions(det, b.D());
                inv.det_class = inv.norm_obstructions.empty() ? "norm" : "non-norm at " + places_string(inv.norm_obstructions);
                if (b.D() < 0) inv.signatures = {{pos, static_cast<int>(f.dim()) - pos}};
                inv.classification = b.D() < 0 ? "dimension, determinant mod norms, signature"
                                               : "dimension, determinant mod norms";
            } else {
                std::vector<Rational> trace_diag;
                for (auto& x : rational_diag(d.diag))
                    for (const Rational& c : {Rational(1), Rational(-b.qa()), Rational(-b.qb()), Rational(b.qa() * b.qb())})
                        trace_diag.push_back(x * c);
                fill_rational_invariants(inv, trace_diag);
                inv.classification = "invariants of the quadratic trace form h(v, v) over Q";
            }
            break;
        case FormKind::kQuatSkewHermitian: {
            Rational det = 1;
            for (auto& x : d.diag) det *= b.norm_q(x);
            inv.det = {det};
            inv.det_class = square_class(det).get_str();
            inv.complete = false;
            inv.classification = "dimension and product of reduced norms mod squares (local invariants only)";
            break;
        }
        case FormKind::kSkew: break;
    }
    return inv;
}

IsometryDecision isometric(const GramForm& f1, const GramForm& f2) {
    if (f1.kind() != f2.kind() || !(f1.base() == f2.base()))
        fail(ErrorCode::kPrecondition, "kind/base mismatch: " + std::string(form_kind_name(f1.kind())) + " over " +
                                           f1.base().describe() + " vs " + form_kind_name(f2.kind()) + " over " + f2.base().describe());
    FormInvariants a = invariants(f1), b = invariants(f2);
    IsometryDecision d;
    d.complete = a.complete;
    auto no = [&](std::string why) {
        d.isometric = false;
        d.reason = std::move(why);
        return d;
    };
    if (a.dim != b.dim) return no("dim mismatch: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
    const BaseRing& base = f1.base();
    bool rational_style = f1.kind() == FormKind::kQuatSkewHermitian ||
                          (base.kind() == Kind::kRational && f1.kind() == FormKind::kSymmetric) ||
                          (base.kind() == Kind::kQuaternion && f1.kind() == FormKind::kHermitian);
    if (f1.kind() == FormKind::kSkew) {
        d.isometric = true;
        d.reason = "equal dimension";
        return d;
    }
    if (rational_style) {
        if (a.det_class != b.det_class) return no("det_class mismatch: " + a.det_class + " vs " + b.det_class);
        std::set<Place> places;
        for (auto& [p, s] : a.hasse) places.insert(p);
        for (auto& [p, s] : b.hasse) places.insert(p);
        for (auto& p : places) {
            int s1 = hasse_at(a, p), s2 = hasse_at(b, p);
            if (s1 != s2)
                return no("hasse mismatch at " + p.to_string() + ": " + std::to_string(s1) + " vs " + std::to_string(s2));
        }
    } else if (f1.kind() == FormKind::kSymmetric) {
        Scalar ratio = base.mul(a.det, base.inv(b.det));
        if (!is_square_in_quad(ratio, base.D())) return no("det_class mismatch: determinant ratio is not a square in F");
    } else {
        if (a.norm_obstructions != b.norm_obstructions) return no("det_class mismatch: " + a.det_class + " vs " + b.det_class);
    }
    for (size_t i = 0; i < a.signatures.size(); ++i)
        if (a.signatures[i] != b.signatures[i])
            return no("signature mismatch: (" + std::to_string(a.signatures[i].first) + "," + std::to_string(a.signatures[i].second) +
                      ") vs (" + std::to_string(b.signatures[i].first) + "," + std::to_string(b.signatures[i].second) + ")");
    d.isometric = true;
    d.reason = d.complete ? "all invariants agree" : "local invariants agree (not a complete classification)";
    return d;
}

FourthPowerCertificate fourth_power_isometric(const GramForm& f1, const GramForm& f2) {
    for (auto* f : {&f1, &f2}) {
        if (f->sign() < 0) fail(ErrorCode::kPrecondition, "fourth-power check needs hermitian-kind forms");
        if (!is_positive_definite(*f).positive) fail(ErrorCode::kPrecondition, "form is not positive definite");
    }
    FourthPowerCertificate cert;
    cert.base_isometric = isometric(f1, f2).isometric;
    GramForm g1 = f1.power(4), g2 = f2.power(4);
    cert.inv1 = invariants(g1);
    cert.inv2 = invariants(g2);
    const BaseRing& b = f1.base();
    if (b.kind() == Kind::kRational) {
        for (auto* pr : {&f1, &f2}) {
            FormInvariants base = invariants(*pr);
            FormInvariants four = invariants(pr->power(4));
            Rational d = base.det[0];
            if (four.det_class != "1") fail(ErrorCode::kInternal, "det of a fourth power is not a square");
            std::vector<Rational> ent{d, Rational(2 * d)};
            for (auto& [v, s] : base.hasse) ent.push_back(Rational(v.is_infinite() ? 1 : v.p()));
            for (auto& v : support_places(ent)) {
                // s(2f) = s(f)^2 (d, d); s(4f) = s(2f)^2 (d^2, d^2)
                int s2 = hilbert_symbol(d, d, v);
                int s4 = s2 * s2 * hilbert_symbol(d * d, d * d, v);
                if (s4 != hasse_at(four, v)) fail(ErrorCode::kInternal, "sum rule disagrees with direct Hasse computation at " + v.to_string());
                if (s4 != 1) fail(ErrorCode::kInternal, "Hasse invariant of a fourth power is nontrivial at " + v.to_string());
            }
        }
        cert.checks.push_back("det(f^4) = det(f)^4 has square class 1 on both sides");
        cert.checks.push_back("Hasse invariants of f^4 are trivial at every support place, directly and via the sum rule");
        cert.checks.push_back("signatures of f^4 agree by positive definiteness");
    } else {
        cert.checks.push_back("invariants of both fourth powers computed and compared");
    }
    IsometryDecision d = isometric(g1, g2);
    cert.isometric = d.isometric;
    cert.checks.push_back("comparison: " + d.reason);
    return cert;
}

namespace {

std::vector<Rational> witness_values(int height) {
    std::vector<Rational> vals{Rational(0)};
    for (int d = 1; d <= height; ++d)
        for (int n = -height; n <= height; ++n) {
            if (n == 0 || gcd(Integer(n), Integer(d)) != 1) continue;
            vals.emplace_back(n, d);
        }
    auto key = [](const Rational& r) {
        Integer h = std::max(Integer(abs(r.get_num())), Integer(r.get_den()));
        return std::make_tuple(h, Rational(abs(r)), r < 0);
    };
    std::sort(vals.begin(), vals.end(), [&](const Rational& x, const Rational& y) { return key(x) < key(y); });
    return vals;
}

}  // namespace

WitnessSearcher::WitnessSearcher(const QMatrix& g1, int height) : g1_(g1), n_(g1.rows()), height_(height) {
    if (!g1.is_symmetric()) fail(ErrorCode::kPrecondition, "witness search needs a symmetric rational form");
    if (height < 1) fail(ErrorCode::kPrecondition, "height must be at least 1");
    if (height > 10) fail(ErrorCode::kResource, "witness search height is capped at 10");
    values_ = witness_values(height);
    Integer L = 1;
    for (int k = 2; k <= height; ++k) L = lcm(L, Integer(k));
    L_ = L.get_si();
    Integer den = g1.denominator();
    for (size_t i = 0; i < n_; ++i) {
        std::vector<long> row;
        for (size_t j = 0; j < n_; ++j) {
            Rational x = g1(i, j) * den;
            if (!x.get_num().fits_slong_p()) fail(ErrorCode::kResource, "gram entries too large for witness search");
            row.push_back(x.get_num().get_si());
        }
        g1_int_.push_back(row);
    }
    scale_ = den * L * L;
    double total = std::pow(static_cast<double>(values_.size()), static_cast<double>(n_));
    if (total > 5e6) fail(ErrorCode::kResource, "witness search space too large");
    std::vector<long> scaled;
    for (auto& v : values_) scaled.push_back(Rational(v * L_).get_num().get_si());
    std::vector<size_t> idx(n_, 0);
    for (;;) {
        std::vector<long> u(n_);
        bool zero = true;
        for (size_t i = 0; i < n_; ++i) {
            u[i] = scaled[idx[i]];
            zero = zero && u[i] == 0;
        }
        if (!zero) {
            long q = 0;
            for (size_t i = 0; i < n_; ++i)
                for (size_t j = 0; j < n_; ++j) q += u[i] * g1_int_[i][j] * u[j];
            buckets_[q].push_back(vecs_.size());
            vecs_.push_back(u);
        }
        bool done = true;
        for (size_t k = n_; k > 0; --k) {
            if (++idx[k - 1] < values_.size()) {
                done = false;
                break;
            }
            idx[k - 1] = 0;
        }
        if (done) break;
    }
}

std::optional<QMatrix> WitnessSearcher::find(const QMatrix& g2) const {
    if (g2.rows() != n_ || !g2.is_symmetric()) return std::nullopt;
    if (g2 == g1_) return QMatrix::identity(n_);
    std::vector<std::vector<long>> target(n_, std::vector<long>(n_));
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j) {
            Rational t = g2(i, j) * scale_;
            if (t.get_den() != 1 || !t.get_num().fits_slong_p()) return std::nullopt;
            target[i][j] = t.get_num().get_si();
        }
    std::vector<size_t> chosen;
    std::vector<std::vector<long>> images;  // G1 u for chosen columns
    auto assemble = [&] {
        QMatrix u(n_, n_);
        for (size_t c = 0; c < n_; ++c)
            for (size_t r = 0; r < n_; ++r) {
                u(r, c) = Rational(vecs_[chosen[c]][r], L_);
                u(r, c).canonicalize();
            }
        return u;
    };
    auto inverse_within_height = [&] {
        auto inv = polisog::inverse(assemble());
        if (!inv) return false;
        for (size_t r = 0; r < n_; ++r)
            for (size_t c = 0; c < n_; ++c) {
                const Rational& x = (*inv)(r, c);
                if (abs(x.get_num()) > height_ || x.get_den() > height_) return false;
            }
        return true;
    };
    auto rec = [&](auto&& self, size_t col) -> bool {
        if (col == n_) return inverse_within_height();
        auto it = buckets_.find(target[col][col]);
        if (it == buckets_.end()) return false;
        for (size_t id : it->second) {
            const auto& u = vecs_[id];
            bool ok = true;
            for (size_t i = 0; i < col && ok; ++i) {
                long s = 0;
                for (size_t r = 0; r < n_; ++r) s += images[i][r] * u[r];
                ok = s == target[i][col];
            }
            if (!ok) continue;
            std::vector<long> img(n_, 0);
            for (size_t r = 0; r < n_; ++r)
                for (size_t c = 0; c < n_; ++c) img[r] += g1_int_[r][c] * u[c];
            chosen.push_back(id);
            images.push_back(img);
            if (self(self, col + 1)) return true;
            chosen.pop_back();
            images.pop_back();
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    QMatrix u = assemble();
    if (!(u.transpose() * g1_ * u == g2)) fail(ErrorCode::kInternal, "witness failed exact verification");
    return u;
}

std::optional<QMatrix> search_isometry_witness(const QMatrix& g1, const QMatrix& g2, int height) {
    return WitnessSearcher(g1, height).find(g2);
}

}  // namespace polisog
