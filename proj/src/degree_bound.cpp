#include "degree_bound.hpp"

#include "lattices_local.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace polisog {

namespace {

bool leq_power(const Rational& nb, const Rational& nq, long twice_exp) {
    // nb <= nq^(twice_exp / 2), both positive
    return nb * nb <= qpow(nq, twice_exp);
}

QMatrix to_qmatrix(const BMatrix& m) {
    QMatrix out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j)[0];
    return out;
}

AlgElem from_qmatrix(const BaseRing& base, const QMatrix& m) { return AlgElem{BMatrix::from_rational(base, m)}; }

AlgElem from_quad(const BaseRing& base, const QuadElem& x) {
    BMatrix m(base, 1, 1);
    m(0, 0) = base.from_quad(x);
    return AlgElem{m};
}

bool same_order(const OrderR& a, const OrderR& b) {
    for (auto& x : a.basis())
        if (!b.contains(x)) return false;
    for (auto& x : b.basis())
        if (!a.contains(x)) return false;
    return true;
}

}  // namespace

BoundInstance::BoundInstance(OrderR order, NormSpec spec, AlgElem q, AlgElem a)
    : order_(std::move(order)), spec_(std::move(spec)), q_(std::move(q)), a_(std::move(a)) {
    const auto& E = alg();
    if (spec_.gammas.size() != E.factors().size()) fail(ErrorCode::kSchema, "need exactly one gamma per factor");
    if (!E.equal(E.involution(q_), q_)) fail(ErrorCode::kPrecondition, "q is not symmetric: q^dagger != q");
    if (!order_.contains(q_)) fail(ErrorCode::kPrecondition, "q is not in the order R");
    auto m = E.as_rational(value_of(a_));
    if (!m || *m == 0) fail(ErrorCode::kPrecondition, "a^dagger q a is not a nonzero rational");
    m_ = *m;
}

Rational BoundInstance::norm_q() const { return norm(alg(), q_, spec_); }

AlgElem BoundInstance::value_of(const AlgElem& b) const {
    const auto& E = alg();
    return E.mul(E.involution(b), E.mul(q_, b));
}

BoundResult make_result(const BoundInstance& inst, const AlgElem& b, std::string route) {
    BoundResult r;
    r.b = b;
    r.route = std::move(route);
    for (auto& c : inst.order().coords(b)) {
        if (c.get_den() != 1) fail(ErrorCode::kInternal, "solution is not in the order");
        r.coords.push_back(c.get_num());
    }
    auto v = inst.alg().as_rational(inst.value_of(b));
    if (!v || *v == 0 || v->get_den() != 1) fail(ErrorCode::kInternal, "b^dagger q b is not a nonzero integer");
    r.value = v->get_num();
    r.norm_b = norm(inst.alg(), b, inst.spec());
    r.norm_q = inst.norm_q();
    r.rank_d = inst.spec().rank_d;
    long d = r.rank_d;
    r.ratio_sq = r.norm_b * r.norm_b / qpow(r.norm_q, 2 * d - 1);
    r.within_local = leq_power(r.norm_b, r.norm_q, d - 1);
    r.within_global = leq_power(r.norm_b, r.norm_q, 2 * d - 1);
    r.within_sketch = leq_power(r.norm_b, r.norm_q, 3 * d - 1);
    return r;
}

std::optional<BoundResult> brute_force_oracle(const BoundInstance& inst, const Rational& norm_cap, const OracleOptions& opt) {
    const auto& E = inst.alg();
    const auto& basis = inst.order().basis();
    size_t n = basis.size();
    auto box_size = [&](long h) {
        long double s = std::pow(static_cast<long double>(2 * h + 1), static_cast<long double>(n));
        return s;
    };
    long radius = opt.radius;
    if (radius == 0) {
        radius = 1;
        while (box_size(radius + 1) <= opt.budget) ++radius;
    }
    if (box_size(radius) > opt.budget)
        fail(ErrorCode::kResource, "oracle budget " + std::to_string(opt.budget) + " exceeded at radius " + std::to_string(radius));

    // value(c) = sum c_k c_l V_kl on flattened coordinates, scaled to integers
    std::vector<AlgElem> daggers;
    for (auto& x : basis) daggers.push_back(E.involution(x));
    std::vector<std::vector<std::vector<Rational>>> vq(n, std::vector<std::vector<Rational>>(n));
    Integer den = 1;
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
            vq[k][l] = E.flatten(E.mul(daggers[k], E.mul(inst.q(), basis[l])));
            for (auto& t : vq[k][l]) den = lcm(den, t.get_den());
        }
    size_t w = vq[0][0].size();
    std::vector<std::vector<std::vector<Integer>>> vi(n, std::vector<std::vector<Integer>>(n, std::vector<Integer>(w)));
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l)
            for (size_t t = 0; t < w; ++t) vi[k][l][t] = Rational(vq[k][l][t] * den).get_num();
    auto one = E.flatten(E.one());

    // __int128 when |c_k c_l V_kl| summed over the box cannot overflow
    Integer vmax = 0;
    for (auto& row : vi)
        for (auto& col : row)
            for (auto& t : col) vmax = std::max(vmax, Integer(abs(t)));
    Integer reach = vmax * n * n * radius * radius;
    bool fast = mpz_sizeinbase(reach.get_mpz_t(), 2) < 120 && mpz_sizeinbase(vmax.get_mpz_t(), 2) < 62;
    std::vector<std::vector<std::vector<__int128>>> vf;
    __int128 den_f = 0;
    if (fast) {
        vf.assign(n, std::vector<std::vector<__int128>>(n, std::vector<__int128>(w)));
        for (size_t k = 0; k < n; ++k)
            for (size_t l = 0; l < n; ++l)
                for (size_t t = 0; t < w; ++t) vf[k][l][t] = vi[k][l][t].get_si();
        fast = den.fits_slong_p();
        den_f = fast ? den.get_si() : 0;
    }

    std::optional<BoundResult> best;
    std::vector<long> bestc;
    std::vector<long> c(n, -radius);
    std::vector<Integer> inner(w), acc(w);
    std::vector<__int128> inner_f(w), acc_f(w);
    auto is_scalar_value = [&]() {
        if (fast) {
            std::fill(acc_f.begin(), acc_f.end(), 0);
            for (size_t l = 0; l < n; ++l) {
                if (c[l] == 0) continue;
                std::fill(inner_f.begin(), inner_f.end(), 0);
                for (size_t k = 0; k < n; ++k)
                    if (c[k] != 0)
                        for (size_t t = 0; t < w; ++t) inner_f[t] += c[k] * vf[k][l][t];
                for (size_t t = 0; t < w; ++t) acc_f[t] += c[l] * inner_f[t];
            }
            bool scalar = acc_f[0] != 0 && acc_f[0] % den_f == 0;
            for (size_t t = 1; t < w && scalar; ++t) scalar = (one[t] == 0 ? acc_f[t] == 0 : acc_f[t] == acc_f[0]);
            return scalar;
        }
        std::fill(acc.begin(), acc.end(), 0);
        for (size_t l = 0; l < n; ++l) {
            if (c[l] == 0) continue;
            std::fill(inner.begin(), inner.end(), 0);
            for (size_t k = 0; k < n; ++k)
                if (c[k] != 0)
                    for (size_t t = 0; t < w; ++t) inner[t] += c[k] * vi[k][l][t];
            for (size_t t = 0; t < w; ++t) acc[t] += c[l] * inner[t];
        }
        bool scalar = acc[0] != 0 && acc[0] % den == 0;
        for (size_t t = 1; t < w && scalar; ++t) scalar = (one[t] == 0 ? acc[t] == 0 : acc[t] == acc[0]);
        return scalar;
    };
    while (true) {
        bool zero = std::all_of(c.begin(), c.end(), [](long t) { return t == 0; });
        if (!zero && is_scalar_value()) {
            std::vector<Integer> ci(c.begin(), c.end());
            AlgElem b = inst.order().from_coords(ci);
            Rational nb = norm(E, b, inst.spec());
            if (nb <= norm_cap && (!best || nb < best->norm_b || (nb == best->norm_b && c < bestc))) {
                best = make_result(inst, b, "oracle");
                bestc = c;
            }
        }
        size_t k = n;
        while (k > 0) {
            --k;
            if (++c[k] <= radius) break;
            c[k] = -radius;
            if (k == 0) goto done;
        }
    }
done:
    if (best) best->notes.push_back("box radius " + std::to_string(radius));
    return best;
}

namespace {

/* e with eps = +-u^e, u the fundamental unit. */
long unit_exponent(const QuadElem& eps, const QuadElem& u) {
    long double le = std::log(std::fabs(eps.embeddings().first));
    long double lu = std::log(u.embeddings().first);
    long e = std::lround(le / lu);
    QuadElem p = pow(u, e);
    if (!(p == eps) && !(p == -eps)) fail(ErrorCode::kInternal, "unit is not +-u^e: " + eps.to_string());
    return e;
}

BoundResult commutative_core(const BoundInstance& inst, std::vector<std::string>& notes) {
    const auto& base = inst.alg().factors()[0].base;
    QuadField F = base.field();
    QuadElem q = base.to_quad(inst.q()[0](0, 0));
    if (!F.is_real()) {
        if (!q.is_rational()) fail(ErrorCode::kInternal, "q^dagger = q forces q rational in the CM case");
        return make_result(inst, from_quad(base, QuadElem(F, 1)), "commutative");
    }
    // (b)^2 (q) = (n): per rational p, 2 beta_i + k_i = e_i t with t minimal
    auto fac = factor_ideal(QfIdeal::principal(q));
    std::vector<Integer> ps;
    for (auto& [P, k] : fac)
        if (std::find(ps.begin(), ps.end(), P.p) == ps.end()) ps.push_back(P.p);
    std::sort(ps.begin(), ps.end());
    QfIdeal bideal = QfIdeal::unit(F);
    Rational n = 1;
    for (auto& p : ps) {
        auto above = primes_above(F, p);
        std::vector<int> k(above.size(), 0);
        for (size_t i = 0; i < above.size(); ++i)
            for (auto& [P, kk] : fac)
                if (P.ideal == above[i].ideal) k[i] = kk;
        int t = 0;
        for (;; ++t) {
            bool ok = true;
            for (size_t i = 0; i < above.size() && ok; ++i) {
                int r = above[i].e * t - k[i];
                ok = r >= 0 && r % 2 == 0;
            }
            if (ok) break;
            if (t > 4 * (*std::max_element(k.begin(), k.end()) + 2))
                fail(ErrorCode::kPrecondition, "no exponent pattern at p = " + p.get_str() + "; a^dagger q a cannot be rational");
        }
        for (size_t i = 0; i < above.size(); ++i) {
            int beta = (above[i].e * t - k[i]) / 2;
            if (beta > 0) bideal = bideal * ideal_pow(above[i].ideal, beta);
        }
        n *= qpow(Rational(p), t);
    }
    // principalize, adjusting by ramified primes (their squares are rational)
    std::vector<PrimeIdeal> ram;
    for (auto& [p, e] : factor_integer(F.disc()))
        if (splitting_type(F, p) == Splitting::kRamified) ram.push_back(primes_above(F, p)[0]);
    std::vector<size_t> masks(size_t(1) << ram.size());
    for (size_t i = 0; i < masks.size(); ++i) masks[i] = i;
    std::stable_sort(masks.begin(), masks.end(), [](size_t a, size_t b) { return __builtin_popcountl(a) < __builtin_popcountl(b); });
    QuadElem u = fundamental_unit(F);
    std::optional<QuadElem> best;
    std::vector<std::string> best_notes;
    bool any_principal = false;
    for (size_t mask : masks) {
        QfIdeal trial = bideal;
        Rational nn = n;
        for (size_t i = 0; i < ram.size(); ++i)
            if (mask >> i & 1) {
                trial = trial * ram[i].ideal;
                nn *= ram[i].p;
            }
        auto b0 = find_generator(trial);
        if (!b0) continue;
        any_principal = true;
        std::vector<std::string> local_notes;
        if (mask != 0) local_notes.push_back("ideal adjusted by ramified primes");
        // unit parity: b0^2 q = eps nn
        QuadElem eps = (*b0) * (*b0) * q * (1 / nn);
        if (eps.norm() != 1 && eps.norm() != -1) fail(ErrorCode::kInternal, "b0^2 q / n is not a unit");
        long e = eps.is_rational() ? 0 : unit_exponent(eps, u);
        QuadElem b = *b0;
        if (e % 2 == 0) {
            b = b * pow(u, -e / 2);
        } else {
            if (u.norm() != 1) continue;
            b = b * pow(u, -(e - 1) / 2) * (QuadElem(F, 1) + u.conj());
            local_notes.push_back("odd unit exponent absorbed by 1 + conj(u)");
        }
        if (b.embeddings().first < 0) b = -b;
        if (!best || abs(b.norm()) < abs(best->norm())) {
            best = b;
            best_notes = local_notes;
        }
    }
    if (!best) fail(ErrorCode::kUnsupported, any_principal ? "unit obstruction in every principal adjustment" : "ideal class not reachable through ramified primes");
    notes = best_notes;
    QuadElem b = *best;
    return make_result(inst, from_quad(base, b), "commutative");
}

}  // namespace

BoundResult solve_commutative(const BoundInstance& inst) {
    const auto& E = inst.alg();
    if (E.factors().size() != 1 || E.factors()[0].n != 1) fail(ErrorCode::kUnsupported, "commutative solver needs a single field factor");
    const auto& f = E.factors()[0];
    if (f.base.kind() == BaseRing::Kind::kRational) {
        if (!same_order(inst.order(), OrderR::standard(E))) fail(ErrorCode::kUnsupported, "order is not Z");
        return make_result(inst, E.one(), "commutative");
    }
    if (f.base.kind() != BaseRing::Kind::kQuadratic) fail(ErrorCode::kUnsupported, "commutative solver needs Q or a quadratic field");
    bool real = f.base.field().is_real();
    if (real && f.entry != EntryInvolution::kIdentity) fail(ErrorCode::kUnsupported, "real quadratic case needs the identity involution");
    if (!real && f.entry != EntryInvolution::kConjugation) fail(ErrorCode::kUnsupported, "imaginary quadratic case needs conjugation");
    if (!same_order(inst.order(), OrderR::standard(E))) fail(ErrorCode::kUnsupported, "order is not maximal");
    std::vector<std::string> notes;
    BoundResult r = commutative_core(inst, notes);
    r.notes = notes;
    return r;
}

namespace {

Integer matrix_den(const QMatrix& m) { return m.denominator(); }

/* Orthogonal basis of Z^n with all values m under g (positive definite),
 * found among the vectors of value m. */
std::optional<QMatrix> orthogonal_frame(const QMatrix& g, const Rational& m) {
    size_t n = g.rows();
    if (!is_positive_definite(g) || m <= 0) return std::nullopt;
    QMatrix gi = *polisog::inverse(g);
    std::vector<long> bound(n);
    long double total = 1;
    for (size_t i = 0; i < n; ++i) {
        bound[i] = static_cast<long>(std::floor(std::sqrt(Rational(m * gi(i, i)).get_d()))) + 1;
        total *= 2 * bound[i] + 1;
    }
    if (total > 2e6) return std::nullopt;
    std::vector<std::vector<Rational>> vecs;
    std::vector<long> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = -bound[i];
    while (true) {
        std::vector<Rational> v(c.begin(), c.end());
        Rational val = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) val += v[i] * g(i, j) * v[j];
        if (val == m) vecs.push_back(v);
        size_t k = n;
        while (k > 0) {
            --k;
            if (++c[k] <= bound[k]) break;
            c[k] = -bound[k];
            if (k == 0) goto collected;
        }
    }
collected:
    std::vector<size_t> pick;
    auto dot = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        Rational s = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) s += x[i] * g(i, j) * y[j];
        return s;
    };
    std::function<bool(size_t)> rec = [&](size_t from) -> bool {
        if (pick.size() == n) {
            QMatrix t(n, n);
            for (size_t j = 0; j < n; ++j) t.set_column(j, vecs[pick[j]]);
            Rational d = determinant(t);
            return d == 1 || d == -1;
        }
        for (size_t i = from; i < vecs.size(); ++i) {
            bool ok = true;
            for (size_t j : pick) ok = ok && dot(vecs[i], vecs[j]) == 0;
            if (!ok) continue;
            pick.push_back(i);
            if (rec(i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    QMatrix t(n, n);
    for (size_t j = 0; j < n; ++j) t.set_column(j, vecs[pick[j]]);
    return t;
}

}  // namespace

BoundResult solve_split_matrix(const BoundInstance& inst) {
    const auto& E = inst.alg();
    if (E.factors().size() != 1) fail(ErrorCode::kUnsupported, "split solver needs a single matrix factor");
    const auto& f = E.factors()[0];
    if (f.base.kind() != BaseRing::Kind::kRational || f.entry != EntryInvolution::kIdentity || !(f.z == BMatrix::identity(f.base, f.n)))
        fail(ErrorCode::kUnsupported, "split solver needs M_n(Q) with the transpose involution");
    if (!same_order(inst.order(), OrderR::standard(E))) fail(ErrorCode::kUnsupported, "order is not M_n(Z)");
    size_t n = f.n;
    QMatrix q = to_qmatrix(inst.q()[0]);
    QMatrix a = to_qmatrix(inst.a()[0]);

    // integral rescaling of a: b = (k/g) a
    Integer k = matrix_den(a);
    QMatrix ai = a * Rational(k);
    Integer g = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g = gcd(g, ai(i, j).get_num());
    QMatrix bd = ai * Rational(1, g);
    Rational md = *scalar_value(bd.transpose() * q * bd);
    std::vector<std::string> notes;

    BoundResult best = make_result(inst, from_qmatrix(f.base, bd), "split-direct");

    // m' = m s^2 with minimal odd-prime valuations subject to m' q^-1 integral
    QMatrix qinv = *polisog::inverse(q);
    Rational dq = determinant(q);
    const Rational& m = inst.m();
    std::vector<Integer> support = prime_support(m);
    for (auto& p : prime_support(dq)) support.push_back(p);
    for (auto& p : prime_support(md)) support.push_back(p);
    for (auto& p : prime_support(determinant(bd))) support.push_back(p);
    support.push_back(2);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    Rational mp = m;
    for (auto& p : support) {
        int target;
        if (p == 2) {
            target = valuation(md, p);
        } else {
            int c = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (qinv(i, j) != 0) c = std::max(c, -valuation(qinv(i, j), p));
            target = c;
            if ((target - valuation(m, p)) % 2 != 0) ++target;
        }
        mp *= qpow(Rational(p), target - valuation(m, p));
    }
    std::vector<std::pair<Integer, QMatrix>> local;
    bool assembled = true;
    for (auto& p : support) {
        if (p == 2) {
            if (valuation(determinant(bd), p) > 0) local.emplace_back(p, bd);
            continue;
        }
        try {
            auto r = split_local_solve(q, a, mp, PadicContext(p));
            if (r.v_det_b > 0) local.emplace_back(p, r.b);
        } catch (const Error& err) {
            notes.push_back("p = " + p.get_str() + ": " + err.what());
            assembled = false;
        }
    }
    if (assembled) {
        std::vector<Integer> exps;
        std::vector<QMatrix> ints;
        for (auto& [p, lm] : local) {
            QMatrix bi = lm * Rational(matrix_den(lm));
            ints.push_back(bi);
            exps.push_back(ipow(p, valuation(determinant(bi), p)));
        }
        std::vector<std::vector<Integer>> gens;
        for (size_t j = 0; j < n; ++j) {
            std::vector<Integer> unit(n, 0);
            Integer all = 1;
            for (auto& e : exps) all *= e;
            unit[j] = all;
            gens.push_back(unit);
        }
        for (size_t s = 0; s < local.size(); ++s) {
            Integer c = 1;
            for (size_t t = 0; t < local.size(); ++t)
                if (t != s) c *= exps[t];
            for (size_t j = 0; j < n; ++j) {
                std::vector<Integer> col(n);
                for (size_t i = 0; i < n; ++i) col[i] = c * ints[s](i, j).get_num();
                gens.push_back(col);
            }
        }
        auto h = hnf_rows(gens, n);
        QMatrix basis(n, n);
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i) basis(i, j) = h[j][i];
        auto t = orthogonal_frame(basis.transpose() * q * basis, mp);
        if (t) {
            BoundResult r = make_result(inst, from_qmatrix(f.base, basis * *t), "split-assembled");
            if (r.norm_b < best.norm_b) best = r;
        } else {
            notes.push_back("assembled lattice has no orthogonal frame within the search bound");
        }
    }
    long d = inst.spec().rank_d;
    Rational db = determinant(to_qmatrix(best.b[0]));
    for (auto& p : prime_support(dq)) {
        if (p == 2) continue;
        // gamma v_p(det b) <= (d - 1/2) gamma v_p(det q)
        bool ok = 2 * valuation(db, p) <= (2 * d - 1) * valuation(dq, p);
        notes.push_back("p = " + p.get_str() + ": local bound " + (ok ? "holds" : "exceeded"));
    }
    best.notes.insert(best.notes.begin(), notes.begin(), notes.end());
    return best;
}

BoundResult solve(const BoundInstance& inst, const OracleOptions& opt) {
    const auto& f = inst.alg().factors()[0];
    bool single = inst.alg().factors().size() == 1;
    std::string why;
    try {
        if (single && f.n == 1 && f.base.kind() != BaseRing::Kind::kQuaternion) return solve_commutative(inst);
        if (single && f.base.kind() == BaseRing::Kind::kRational) return solve_split_matrix(inst);
        why = "no structural solver for this algebra";
    } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnsupported) throw;
        why = e.what();
    }
    // fallback cap: Nm(q)^(d - 1/2) rounded up, at least 1
    Rational nq = inst.norm_q();
    long d = inst.spec().rank_d;
    Rational cap = qpow(nq, d);
    cap = cap > 1 ? cap : Rational(1);
    auto r = brute_force_oracle(inst, cap, opt);
    if (!r) fail(ErrorCode::kResource, "oracle found no solution with norm <= " + to_string(cap) + " (" + why + ")");
    r->notes.insert(r->notes.begin(), "routed to oracle: " + why);
    return *r;
}

MeasureReport measure_constant(const std::vector<BoundInstance>& instances, const OracleOptions& opt) {
    MeasureReport rep;
    for (size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        if (i > 0) {
            const auto& a = instances[0];
            if (!(a.alg().factors() == inst.alg().factors()) || a.spec().gammas != inst.spec().gammas || !same_order(a.order(), inst.order()))
                fail(ErrorCode::kPrecondition, "instances must share the algebra, involution, order and norm");
        }
        MeasureRow row{solve(inst, opt), std::nullopt};
        row.oracle = brute_force_oracle(inst, row.solver.norm_b, opt);
        if (row.solver.ratio_sq > rep.max_ratio_sq_solver) rep.max_ratio_sq_solver = row.solver.ratio_sq;
        if (row.oracle && row.oracle->ratio_sq > rep.max_ratio_sq_oracle) rep.max_ratio_sq_oracle = row.oracle->ratio_sq;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

/* Lattice {v in Q^2 : M v in Z^N}, M of rank 2, as a 2x2 basis matrix. */
QMatrix preimage_lattice(const QMatrix& M) {
    size_t N = M.rows();
    for (size_t i = 0; i < N; ++i)
        for (size_t j = i + 1; j < N; ++j) {
            QMatrix m0 = QMatrix::from_rows({{M(i, 0), M(i, 1)}, {M(j, 0), M(j, 1)}});
            auto inv = polisog::inverse(m0);
            if (!inv) continue;
            QMatrix A = M * *inv;
            Integer delta = A.denominator();
            if (delta * delta > 4000000) fail(ErrorCode::kResource, "conductor lattice denominator too large");
            long dl = delta.get_si();
            std::vector<std::vector<Integer>> gens{{delta, 0}, {0, delta}};
            for (long y0 = 0; y0 < dl; ++y0)
                for (long y1 = 0; y1 < dl; ++y1) {
                    bool ok = true;
                    for (size_t r = 0; r < N && ok; ++r) ok = Rational(A(r, 0) * y0 + A(r, 1) * y1).get_den() == 1;
                    if (ok && (y0 || y1)) gens.push_back({y0, y1});
                }
            auto h = hnf_rows(gens, 2);
            QMatrix k(2, 2);
            for (size_t c = 0; c < 2; ++c)
                for (size_t r = 0; r < 2; ++r) k(r, c) = h[c][r];
            return *inv * k;
        }
    fail(ErrorCode::kPrecondition, "x generates no quadratic subalgebra");
}

}  // namespace

TorusCheck torus_conductor_check(const OrderR& order, const AlgElem& x, const Integer& p) {
    const auto& E = order.algebra();
    if (!is_prime(p)) fail(ErrorCode::kPrecondition, "not a prime: " + p.get_str());
    if (E.as_rational(x)) fail(ErrorCode::kPrecondition, "x is rational");
    AlgElem one = E.one(), x2 = E.mul(x, x);
    // x^2 = s + t x
    size_t w = E.dim_q();
    QMatrix sys(w, 3);
    sys.set_column(0, E.flatten(one));
    sys.set_column(1, E.flatten(x));
    sys.set_column(2, E.flatten(x2));
    QMatrix ns = nullspace(sys);
    if (ns.cols() != 1 || ns(2, 0) == 0) fail(ErrorCode::kPrecondition, "x does not satisfy a quadratic equation over Q");
    Rational s = -ns(0, 0) / ns(2, 0), t = -ns(1, 0) / ns(2, 0);
    Rational disc = t * t + 4 * s;
    if (disc == 0) fail(ErrorCode::kPrecondition, "Q[x] is not reduced");
    // maximal order of L in (1, x) coordinates
    QMatrix ol(2, 2);
    ol(0, 0) = 1;
    if (is_square(disc)) {
        Rational r = exact_sqrt(disc), r2 = (t - r) / 2;
        ol(0, 1) = -r2 / r;
        ol(1, 1) = 1 / r;
    } else {
        Integer dl = square_class(disc);
        Rational f0 = exact_sqrt(disc / Rational(dl));
        // sqrt(dl) = (2x - t) / f0
        Rational c0 = -t / f0, c1 = 2 / f0;
        if (Integer((dl % 4 + 4) % 4) == 1) {
            c0 = (1 + c0) / 2;
            c1 = c1 / 2;
        }
        ol(0, 1) = c0;
        ol(1, 1) = c1;
    }
    QMatrix M(order.basis().size(), 2);
    M.set_column(0, order.coords(one));
    M.set_column(1, order.coords(x));
    QMatrix rl = preimage_lattice(M);
    Rational index = abs(determinant(rl) / determinant(ol));
    if (index.get_den() != 1) fail(ErrorCode::kInternal, "R cap L is not inside the maximal order of L");
    TorusCheck out;
    out.conductor = index.get_num();
    out.c_p = ipow(p, valuation(out.conductor, p));
    auto p_integral = [&](const AlgElem& y) {
        for (auto& c : order.coords(y))
            if (c.get_den() % p == 0) return false;
        return true;
    };
    out.x_square_in_Rp = p_integral(x2);
    out.holds = p_integral(E.scale(x, Rational(out.c_p)));
    return out;
}

}  // namespace polisog
