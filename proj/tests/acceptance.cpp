#include "commands.hpp"
#include "gen.hpp"
#include "lattices_local.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

using namespace polisog;
using io::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

json form_json(const QMatrix& g) { return io::to_json(g); }

int hasse_lookup(const FormInvariants& inv, const Place& v) {
    for (auto& [p, s] : inv.hasse)
        if (p == v) return s;
    return 1;
}

std::set<Place> hasse_places(const std::vector<const FormInvariants*>& invs) {
    std::set<Place> out{Place::infinity(), Place::prime(2)};
    for (auto* inv : invs)
        for (auto& [p, s] : inv->hasse) out.insert(p);
    return out;
}

// 1. Fourth powers of positive definite forms are isometric.
Outcome fourth_powers(uint64_t seed) {
    auto t0 = Clock::now();
    testgen::Rng r(seed);
    int ok = 0, base_differs = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        size_t n = static_cast<size_t>(r.range(1, 6));
        QMatrix g1 = testgen::random_positive_definite(r, n, 20), g2 = testgen::random_positive_definite(r, n, 20);
        auto res = run_command("fourth-power-check", json{{"forms", {form_json(g1), form_json(g2)}}}, Options{});
        const json& c = res.body["result"];
        bool verified = res.status == Status::kOk && c["isometric"] == true;
        // recompute the invariants of both fourth powers independently
        FormInvariants a = invariants(GramForm::symmetric_q(g1).power(4)), b = invariants(GramForm::symmetric_q(g2).power(4));
        verified = verified && a.det_class == b.det_class && a.signatures == b.signatures;
        for (auto& v : hasse_places({&a, &b})) verified = verified && hasse_lookup(a, v) == hasse_lookup(b, v);
        verified = verified && c["invariants"][0] == io::to_json(a) && c["invariants"][1] == io::to_json(b);
        ok += verified;
        base_differs += c["base_isometric"] == false;
    }
    double t = seconds_since(t0);
    return {ok == total && base_differs >= 30 && t < 30,
            std::to_string(ok) + "/" + std::to_string(total) + " verified, " + std::to_string(base_differs) +
                " base pairs not isometric, " + fmt("%.2f s", t)};
}

// 2. Hilbert reciprocity and the Hasse sum rule.
Outcome reciprocity(uint64_t seed) {
    testgen::Rng r(seed + 1);
    int failures = 0;
    for (int i = 0; i < 500; ++i) {
        Rational a(r.nonzero(-2000, 2000), r.range(1, 50)), b(r.nonzero(-2000, 2000), r.range(1, 50));
        a.canonicalize();
        b.canonicalize();
        std::vector<Rational> e{a, b};
        int prod = 1;
        for (auto& v : support_places(e)) prod *= hilbert_symbol(a, b, v);
        failures += prod != 1;
    }
    int checked_places = 0;
    for (int i = 0; i < 200; ++i) {
        size_t n1 = static_cast<size_t>(r.range(1, 3)), n2 = static_cast<size_t>(r.range(1, 3));
        QMatrix g1 = testgen::random_symmetric(r, n1, 9), g2 = testgen::random_symmetric(r, n2, 9);
        if (determinant(g1) == 0 || determinant(g2) == 0) {
            --i;
            continue;
        }
        GramForm f1 = GramForm::symmetric_q(g1), f2 = GramForm::symmetric_q(g2);
        FormInvariants a = invariants(f1), b = invariants(f2), s = invariants(f1.direct_sum(f2));
        Rational d1 = determinant(g1), d2 = determinant(g2);
        for (auto& v : hasse_places({&a, &b, &s})) {
            ++checked_places;
            failures += hasse_lookup(s, v) != hasse_lookup(a, v) * hasse_lookup(b, v) * hilbert_symbol(d1, d2, v);
        }
    }
    return {failures == 0, "500 symbol products, 200 form pairs over " + std::to_string(checked_places) + " places, " +
                               std::to_string(failures) + " failures"};
}

// 3. Invariant decisions against the height-3 witness search.
Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    long disagreements = 0, one_way = 0, conclusive = 0, pairs = 0, classes_total = 0, raw_checked = 0;
    testgen::Rng sample(3);
    for (int n = 1; n <= 3; ++n) {
        std::vector<std::pair<int, int>> idx;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) idx.push_back({i, j});
        long total = 1;
        for (size_t k = 0; k < idx.size(); ++k) total *= 7;
        auto to_matrix = [&](const std::vector<int>& key) {
            QMatrix q(n, n);
            size_t t = 0;
            for (auto [i, j] : idx) q(i, j) = q(j, i) = key[t++];
            return q;
        };
        // canonical representatives under signed permutations (explicit isometries)
        std::map<std::vector<int>, std::vector<std::vector<int>>> classes;
        for (long code = 0; code < total; ++code) {
            long c = code;
            std::vector<std::vector<int>> g(n, std::vector<int>(n));
            std::vector<int> raw;
            for (auto [i, j] : idx) {
                int v = static_cast<int>(c % 7) - 3;
                c /= 7;
                g[i][j] = g[j][i] = v;
                raw.push_back(v);
            }
            if (determinant(to_matrix(raw)) == 0) continue;
            std::vector<int> perm(n), best;
            for (int i = 0; i < n; ++i) perm[i] = i;
            do {
                for (int s = 0; s < (1 << n); ++s) {
                    std::vector<int> key;
                    for (auto [i, j] : idx) key.push_back(g[perm[i]][perm[j]] * ((((s >> i) ^ (s >> j)) & 1) ? -1 : 1));
                    if (best.empty() || key < best) best = key;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            classes[best].push_back(raw);
        }
        classes_total += static_cast<long>(classes.size());
        // raw forms against their representative: all of them for n <= 2, a sample for n = 3
        for (auto& [rep, members] : classes)
            for (auto& raw : members) {
                if (n == 3 && sample.range(0, 19) != 0) continue;
                ++raw_checked;
                disagreements += !isometric(GramForm::symmetric_q(to_matrix(raw)), GramForm::symmetric_q(to_matrix(rep))).isometric;
            }
        // a witness U forces det g2 = det(U)^2 det g1 and equal signatures, so only these buckets can meet
        std::map<std::pair<Integer, int>, std::vector<QMatrix>> buckets;
        for (auto& [rep, members] : classes) {
            QMatrix q = to_matrix(rep);
            buckets[{square_class(determinant(q)), signature(q).first}].push_back(q);
        }
        // isometric() reads only the invariants, so one call per pair of invariant keys
        std::map<std::pair<std::string, std::string>, bool> decided;
        for (auto& [key, forms] : buckets) {
            std::vector<WitnessSearcher> searchers;
            std::vector<std::string> keys;
            for (auto& f : forms) {
                searchers.emplace_back(f, 3);
                json inv = io::to_json(invariants(GramForm::symmetric_q(f)));
                inv.erase("det");
                keys.push_back(inv.dump());
            }
            size_t m = forms.size();
            std::vector<std::vector<char>> found(m, std::vector<char>(m));
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < m; ++j) found[i][j] = searchers[i].find(forms[j]).has_value();
            for (size_t i = 0; i < m; ++i)
                for (size_t j = i; j < m; ++j) {
                    ++pairs;
                    auto memo = decided.find({keys[i], keys[j]});
                    if (memo == decided.end())
                        memo = decided.emplace(std::make_pair(keys[i], keys[j]),
                                               isometric(GramForm::symmetric_q(forms[i]), GramForm::symmetric_q(forms[j])).isometric)
                                   .first;
                    bool iso = memo->second;
                    bool any = found[i][j] || found[j][i];
                    conclusive += any;
                    if (any && !iso) ++disagreements;
                    if (iso && found[i][j] != found[j][i]) ++one_way;
                }
        }
    }
    return {disagreements == 0 && one_way == 0,
            std::to_string(classes_total) + " classes, " + std::to_string(pairs) + " pairs (" + std::to_string(conclusive) +
                " with a witness), " + std::to_string(raw_checked) + " raw forms, " + std::to_string(disagreements) +
                " disagreements, " + std::to_string(one_way) + " one-way witnesses, " + fmt("%.1f s", seconds_since(t0))};
}

// 4. Maximal completions of independent sublattices.
Outcome maximal_lattices(uint64_t seed) {
    testgen::Rng r(seed + 4);
    int ok = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        long p = std::vector<long>{3, 5, 7}[static_cast<size_t>(i % 3)];
        PadicContext ctx{Integer(p)};
        size_t n = static_cast<size_t>(r.range(2, 4));
        QMatrix g = testgen::random_symmetric(r, n, 20);
        if (determinant(g) == 0) {
            --i;
            continue;
        }
        int t = scale(PadicLattice::standard(ctx, g));
        PadicLattice l1(ctx, testgen::random_invertible(r, n, 5), g), l2(ctx, testgen::random_invertible(r, n, 5), g);
        PadicLattice c1 = maximal_completion(l1, t), c2 = maximal_completion(l2, t);
        bool good = is_maximal(c1) && is_maximal(c2) && c1.contains(l1) && c2.contains(l2);
        QMatrix n1 = c1.gram() * qpow(Rational(p), -t), n2 = c2.gram() * qpow(Rational(p), -t);
        bool unimodular = valuation(determinant(n1), ctx.p) == 0 && valuation(determinant(n2), ctx.p) == 0;
        good = good && (unimodular ? unimodular_isometric(n1, n2, ctx.p) : lattices_isometric(n1, n2, ctx.p));
        ok += good;
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " completions maximal, containing and isometric"};
}

AlgElem quad_elem(const BaseRing& b, const QuadElem& x) {
    BMatrix m(b, 1, 1);
    m(0, 0) = b.from_quad(x);
    return {m};
}

// 5. Commutative degree bound with oracle confirmation.
Outcome commutative_bound(uint64_t seed) {
    auto t0 = Clock::now();
    testgen::Rng r(seed + 5);
    int ok = 0, total = 0;
    std::string constants;
    for (long D : {5L, 2L, 13L}) {
        BaseRing base = BaseRing::quadratic(Integer(D));
        QuadField f{Integer(D)};
        AlgebraWithInvolution alg({SimpleFactor::make(base, 1, EntryInvolution::kIdentity)});
        OrderR order = OrderR::standard(alg);
        NormSpec spec = NormSpec::make(alg, {1});
        Rational worst = 0;
        for (int made = 0; made < 10;) {
            QuadElem s = QuadElem::from_omega(f, r.range(-12, 12), r.nonzero(-6, 6));
            Rational k = r.nonzero(-6, 6);
            QuadElem q = s * s * k;
            if (s.norm() == 0 || abs(q.norm()) > 10000) continue;
            ++made;
            ++total;
            BoundInstance inst(order, spec, quad_elem(base, q), quad_elem(base, s.inverse()));
            BoundResult b = solve_commutative(inst);
            auto o = brute_force_oracle(inst, b.norm_b);
            ok += o.has_value() && o->norm_b <= b.norm_b;
            if (b.ratio_sq > worst) worst = b.ratio_sq;
        }
        constants += (constants.empty() ? "" : ", ") + std::string("Q(sqrt ") + std::to_string(D) + ") c = " +
                     fmt("%.4f", std::sqrt(worst.get_d()));
    }
    double t = seconds_since(t0);
    return {ok == total && t < 60, std::to_string(ok) + "/" + std::to_string(total) + " verified and oracle-confirmed; " + constants +
                                        ", " + fmt("%.2f s", t)};
}

// max over nonzero entries of -v_p
int denominator_exponent(const QMatrix& m, const Integer& p) {
    std::optional<int> e;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) e = std::max(e.value_or(-(1 << 20)), -valuation(m(i, j), p));
    return *e;
}

QMatrix unit_at(testgen::Rng& r, long p) {
    for (;;) {
        QMatrix v = testgen::random_matrix(r, 2, 2, 3);
        Rational d = determinant(v);
        if (d != 0 && valuation(d, Integer(p)) == 0) return v;
    }
}

// 6. Local bound for split matrix instances.
Outcome split_local(uint64_t seed) {
    testgen::Rng r(seed + 6);
    int ok = 0, total = 0, transport = 0;
    std::string first_failure;
    // rows of W are isotropic mod 5, so a = V W / 5 has a a^T integral while a is not
    QMatrix w5 = QMatrix::from_rows({{1, 7}, {7, -1}}) * Rational(1, 5);
    for (long p : {3L, 5L, 7L})
        for (int made = 0; made < 4;) {
            PadicContext ctx{Integer(p)};
            QMatrix a = p == 5 && made < 2 ? unit_at(r, p) * w5 : testgen::random_invertible(r, 2, 4) * qpow(Rational(p), r.range(-1, 1));
            if (determinant(a) == 0) continue;
            // a^T q a = m I forces q = m (a a^T)^{-1}; m = u p^k with k minimal for an integral q
            QMatrix aat = a * a.transpose(), aat_inv = *inverse(aat);
            Rational m = qpow(Rational(p), denominator_exponent(aat_inv, ctx.p)) * Rational(r.range(1, 2));
            QMatrix q = aat_inv * m;
            // m' = m p^{2j} with j minimal for an integral m' q^{-1} = p^{2j} a a^T
            int need = denominator_exponent(aat, ctx.p);
            int j = need >= 0 ? (need + 1) / 2 : -((-need) / 2);
            Rational mp = m * qpow(Rational(p), 2 * j);
            // unimodular q with odd v_p(m) is the unit case, outside this bound
            if (valuation(determinant(q), ctx.p) == 0 && valuation(m, ctx.p) % 2 != 0) continue;
            ++made;
            ++total;
            LocalSolveResult res;
            try {
                res = split_local_solve(q, a, mp, ctx);
            } catch (const Error& e) {
                if (first_failure.empty())
                    first_failure = "; first failure p = " + std::to_string(p) + ", q = " + to_string(q) + ", a = " + to_string(a) +
                                    ", m' = " + to_string(mp) + ": " + e.what();
                continue;
            }
            transport += res.route == "transport";
            bool good = res.b.transpose() * q * res.b == QMatrix::identity(2) * mp && is_p_integral(res.b, ctx.p);
            // Nm_p(b) <= Nm_p(q)^{3/2} for d = 2
            good = good && 2 * res.v_det_b <= 3 * res.v_det_q;
            ok += good;
            if (!good && first_failure.empty())
                first_failure = "; first failure p = " + std::to_string(p) + ", q = " + to_string(q) + ", a = " + to_string(a) +
                                ", b = " + to_string(res.b) + ", v(det b) = " + std::to_string(res.v_det_b) +
                                ", v(det q) = " + std::to_string(res.v_det_q);
        }
    return {ok == total && total >= 10, std::to_string(ok) + "/" + std::to_string(total) + " within p^(3/2 v(det q)) (" +
                                            std::to_string(transport) + " via transport)" + first_failure};
}

// n q = u^2 r for u = c0 + c1 w with |c0|, |c1| <= h and 0 < |n| <= h, in integers.
bool witness_exists(const QuadElem& q, const QuadElem& r, long h) {
    const Integer& D = q.D();
    auto twice = [](const QuadElem& x) { return std::pair<Integer, Integer>{Rational(2 * x.x()).get_num(), Rational(2 * x.y()).get_num()}; };
    auto [q0, q1] = twice(q);
    auto [r0, r1] = twice(r);
    QuadField f{D};
    for (long c0 = -h; c0 <= h; ++c0)
        for (long c1 = -h; c1 <= h; ++c1) {
            if (!c0 && !c1) continue;
            auto [x, y] = twice(QuadElem::from_omega(f, c0, c1));
            // 4 u^2 = A + B sqrt D, 8 u^2 r = (A r0 + D B r1) + (A r1 + B r0) sqrt D, 8 n q = 4 n (q0 + q1 sqrt D)
            Integer A = x * x + D * y * y, B = 2 * x * y;
            Integer e0 = A * r0 + D * B * r1, e1 = A * r1 + B * r0;
            Integer n;
            if (q0 != 0) {
                if (e0 % (4 * q0) != 0) continue;
                n = e0 / (4 * q0);
            } else {
                if (e1 % (4 * q1) != 0) continue;
                n = e1 / (4 * q1);
            }
            if (n == 0 || abs(n) > h) continue;
            if (4 * n * q0 == e0 && 4 * n * q1 == e1) return true;
        }
    return false;
}

// 7. Pairwise inequivalent representatives.
Outcome separation() {
    auto t0 = Clock::now();
    bool good = true;
    int searches = 0, witnesses = 0;
    for (long D : {5L, 2L}) {
        auto res = run_command("hecke-classes", json{{"D", D}, {"count", 10}}, Options{});
        const json& out = res.body["result"];
        QuadField f{Integer(D)};
        std::vector<PolClassRep> reps;
        for (auto& j : out["representatives"]) reps.push_back(PolClassRep::make(io::quad_elem(f, j, "rep")));
        good = good && reps.size() == 10;
        for (auto& rep : reps) good = good && is_totally_positive(rep.q);
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = 0; j < reps.size(); ++j) {
                bool eq = out["equivalent"][i][j].get<bool>();
                if (eq) {
                    auto e = equivalent(reps[i], reps[j]);
                    bool verified = e.witness && reps[i].q * Rational(e.witness->n) == e.witness->u * e.witness->u * reps[j].q;
                    witnesses += verified;
                    good = good && verified && i == j;
                } else {
                    ++searches;
                    good = good && !witness_exists(reps[i].q, reps[j].q, 20);
                }
            }
    }
    double t = seconds_since(t0);
    return {good && t < 60, std::to_string(searches) + " inequivalent ordered pairs with no height-20 witness, " + std::to_string(witnesses) +
                                " verified witnesses, " + fmt("%.2f s", t)};
}

BMatrix random_invertible(testgen::Rng& r, const BaseRing& b, size_t n) {
    for (;;) {
        BMatrix m(b, n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (auto& c : m(i, j)) c = r.range(-3, 3);
        if (m.inverse()) return m;
    }
}

// 8. Positivity of adjoint involutions and of psi_q for q = b b^dagger.
Outcome positivity(uint64_t seed) {
    testgen::Rng r(seed + 8);
    std::vector<std::pair<FormKind, BaseRing>> kinds{
        {FormKind::kSymmetric, BaseRing::rational()},
        {FormKind::kHermitian, BaseRing::quadratic(Integer(-1))},
        {FormKind::kHermitian, BaseRing::quadratic(Integer(-7))},
        {FormKind::kHermitian, BaseRing::quaternion(-1, -1)},
    };
    int ok = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        auto& [kind, base] = kinds[static_cast<size_t>(i) % kinds.size()];
        size_t n = static_cast<size_t>(r.range(1, 3));
        EntryInvolution inv = base.natural_involution();
        BMatrix c = random_invertible(r, base, n);
        BMatrix g = c.star_transpose(inv) * c;
        GramForm f(kind, g);
        bool good = is_positive_definite(f).positive;
        good = good && AlgebraWithInvolution({adjoint_involution(f)}).is_positive_involution();
        BMatrix b = random_invertible(r, base, n);
        BMatrix bdag = *g.inverse() * b.star_transpose(inv) * g;
        good = good && is_positive_definite(f.twisted(b * bdag)).positive;
        ok += good;
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " positive"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    uint64_t seed = 20240611;
    std::vector<size_t> only;
    app.add_option("--seed", seed, "Seed for the random instances");
    app.add_option("--only", only, "Run only these criteria (1-8)");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"fourth-power isometry", [&] { return fourth_powers(seed); }},
        {"reciprocity and sum rule", [&] { return reciprocity(seed); }},
        {"isometry oracle equivalence", [] { return oracle_equivalence(); }},
        {"maximal lattices", [&] { return maximal_lattices(seed); }},
        {"commutative degree bound", [&] { return commutative_bound(seed); }},
        {"split local bound", [&] { return split_local(seed); }},
        {"class separation", [] { return separation(); }},
        {"positivity", [&] { return positivity(seed); }},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), i + 1) == only.end()) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const Error& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
