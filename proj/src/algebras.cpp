#include "algebras.hpp"

namespace polisog {

SimpleFactor SimpleFactor::make(const BaseRing& base, size_t n, EntryInvolution entry) {
    return make(base, n, entry, BMatrix::identity(base, n));
}

SimpleFactor SimpleFactor::make(const BaseRing& base, size_t n, EntryInvolution entry, const BMatrix& z) {
    if (n < 1 || n > 6) fail(ErrorCode::kUnsupported, "matrix size must be between 1 and 6");
    if (!base.supports(entry))
        fail(ErrorCode::kPrecondition, std::string(entry_involution_name(entry)) + " is not an involution of " + base.describe());
    if (z.rows() != n || z.cols() != n || !(z.base() == base)) fail(ErrorCode::kSchema, "conjugating matrix has the wrong shape");
    auto zi = z.inverse();
    if (!zi) fail(ErrorCode::kPrecondition, "conjugating matrix is singular");
    BMatrix zt = z.star_transpose(entry);
    BMatrix minus = BMatrix(base, n, n) - z;
    if (!(zt == z) && !(zt == minus))
        fail(ErrorCode::kPrecondition, "conjugating matrix must satisfy z^T = z or z^T = -z under the entry involution");
    SimpleFactor f;
    f.base = base;
    f.n = n;
    f.entry = entry;
    f.z = z;
    f.z_inv = *zi;
    return f;
}

BMatrix SimpleFactor::apply(const BMatrix& x) const { return z_inv * x.star_transpose(entry) * z; }

bool SimpleFactor::operator==(const SimpleFactor& o) const {
    return base == o.base && n == o.n && entry == o.entry && z == o.z;
}

AlgebraWithInvolution::AlgebraWithInvolution(std::vector<SimpleFactor> factors, std::vector<std::pair<size_t, size_t>> swaps)
    : factors_(std::move(factors)), swaps_(std::move(swaps)) {
    if (factors_.empty()) fail(ErrorCode::kSchema, "an algebra needs at least one factor");
    partner_.resize(factors_.size());
    for (size_t i = 0; i < factors_.size(); ++i) partner_[i] = i;
    for (auto [i, j] : swaps_) {
        if (i >= factors_.size() || j >= factors_.size() || i == j)
            fail(ErrorCode::kSchema, "swap pair refers to invalid factor indices");
        if (partner_[i] != i || partner_[j] != j) fail(ErrorCode::kSchema, "a factor appears in two swap pairs");
        if (!(factors_[i] == factors_[j])) fail(ErrorCode::kUnsupported, "swapped factors must be identical");
        partner_[i] = j;
        partner_[j] = i;
    }
}

size_t AlgebraWithInvolution::dim_q() const {
    size_t d = 0;
    for (auto& f : factors_) d += f.dim_q();
    return d;
}

AlgElem AlgebraWithInvolution::zero() const {
    AlgElem x;
    for (auto& f : factors_) x.emplace_back(f.base, f.n, f.n);
    return x;
}

AlgElem AlgebraWithInvolution::one() const { return scalar(1); }

AlgElem AlgebraWithInvolution::scalar(const Rational& r) const {
    AlgElem x;
    for (auto& f : factors_) x.push_back(BMatrix::identity(f.base, f.n).scaled(f.base.from_rational(r)));
    return x;
}

AlgElem AlgebraWithInvolution::add(const AlgElem& x, const AlgElem& y) const {
    AlgElem r;
    for (size_t i = 0; i < x.size(); ++i) r.push_back(x[i] + y[i]);
    return r;
}

AlgElem AlgebraWithInvolution::sub(const AlgElem& x, const AlgElem& y) const {
    AlgElem r;
    for (size_t i = 0; i < x.size(); ++i) r.push_back(x[i] - y[i]);
    return r;
}

AlgElem AlgebraWithInvolution::mul(const AlgElem& x, const AlgElem& y) const {
    AlgElem r;
    for (size_t i = 0; i < x.size(); ++i) r.push_back(x[i] * y[i]);
    return r;
}

AlgElem AlgebraWithInvolution::scale(const AlgElem& x, const Rational& s) const {
    AlgElem r;
    for (size_t i = 0; i < x.size(); ++i) r.push_back(x[i].scaled(factors_[i].base.from_rational(s)));
    return r;
}

AlgElem AlgebraWithInvolution::involution(const AlgElem& x) const {
    AlgElem r;
    for (size_t i = 0; i < x.size(); ++i) r.push_back(factors_[i].apply(x[partner_[i]]));
    return r;
}

std::optional<AlgElem> AlgebraWithInvolution::inverse(const AlgElem& x) const {
    AlgElem r;
    for (auto& m : x) {
        auto mi = m.inverse();
        if (!mi) return std::nullopt;
        r.push_back(*mi);
    }
    return r;
}

bool AlgebraWithInvolution::equal(const AlgElem& x, const AlgElem& y) const { return x == y; }

std::optional<Rational> AlgebraWithInvolution::as_rational(const AlgElem& x) const {
    Rational r = x[0](0, 0)[0];
    return equal(x, scalar(r)) ? std::optional<Rational>(r) : std::nullopt;
}

std::vector<Rational> AlgebraWithInvolution::flatten(const AlgElem& x) const {
    std::vector<Rational> v;
    for (auto& m : x) {
        auto f = m.flatten();
        v.insert(v.end(), f.begin(), f.end());
    }
    return v;
}

AlgElem AlgebraWithInvolution::unflatten(const std::vector<Rational>& v) const {
    if (v.size() != dim_q()) fail(ErrorCode::kSchema, "algebra element has the wrong number of coordinates");
    AlgElem x;
    size_t off = 0;
    for (auto& f : factors_) {
        x.push_back(BMatrix::unflatten(f.base, f.n, v, off));
        off += f.dim_q();
    }
    return x;
}

AlgElem AlgebraWithInvolution::basis_element(size_t k) const {
    std::vector<Rational> v(dim_q());
    v[k] = 1;
    return unflatten(v);
}

QMatrix AlgebraWithInvolution::left_regular(const AlgElem& x) const {
    size_t n = dim_q();
    QMatrix m(n, n);
    for (size_t k = 0; k < n; ++k) m.set_column(k, flatten(mul(x, basis_element(k))));
    return m;
}

Rational AlgebraWithInvolution::trace_q(const AlgElem& x) const {
    Rational t = 0;
    for (auto& m : x) t += m.trace_q();
    return t;
}

QMatrix AlgebraWithInvolution::involution_trace_form() const {
    size_t n = dim_q();
    std::vector<AlgElem> e, et;
    for (size_t k = 0; k < n; ++k) {
        e.push_back(basis_element(k));
        et.push_back(involution(e.back()));
    }
    QMatrix g(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g(i, j) = trace_q(mul(e[i], et[j]));
    return g;
}

bool AlgebraWithInvolution::is_positive_involution() const {
    QMatrix g = involution_trace_form();
    return g.is_symmetric() && is_positive_definite(g);
}

NormSpec NormSpec::make(const AlgebraWithInvolution& alg, std::vector<long> gammas, std::optional<long> rank_d) {
    if (gammas.size() != alg.factors().size()) fail(ErrorCode::kSchema, "need exactly one gamma per factor");
    long d = 0;
    for (size_t i = 0; i < gammas.size(); ++i) {
        if (gammas[i] < 1) fail(ErrorCode::kPrecondition, "gammas must be positive integers");
        if (gammas[i] != gammas[alg.partner(i)]) fail(ErrorCode::kPrecondition, "swapped factors need equal gammas");
        d += gammas[i] * alg.factors()[i].norm_degree();
    }
    if (rank_d && *rank_d != d)
        fail(ErrorCode::kPrecondition, "rank d = " + std::to_string(*rank_d) + " is inconsistent with the gammas (expected " + std::to_string(d) + ")");
    return NormSpec{std::move(gammas), d};
}

std::vector<Rational> factor_norms(const AlgebraWithInvolution&, const AlgElem& x) {
    std::vector<Rational> out;
    for (auto& m : x) out.push_back(m.norm_q());
    return out;
}

Rational norm(const AlgebraWithInvolution& alg, const AlgElem& x, const NormSpec& spec) {
    Rational r = 1;
    auto ns = factor_norms(alg, x);
    for (size_t i = 0; i < ns.size(); ++i) r *= qpow(abs(ns[i]), spec.gammas[i]);
    return r;
}

Rational local_norm(const AlgebraWithInvolution& alg, const AlgElem& x, const Integer& p, const NormSpec& spec) {
    if (!is_prime(p)) fail(ErrorCode::kPrecondition, "not a prime: " + p.get_str());
    long e = 0;
    auto ns = factor_norms(alg, x);
    for (size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] == 0) fail(ErrorCode::kUndefined, "element is not invertible at p = " + p.get_str());
        e += spec.gammas[i] * valuation(ns[i], p);
    }
    return qpow(Rational(p), e);
}

OrderR::OrderR(AlgebraWithInvolution alg, std::vector<AlgElem> basis) : alg_(std::move(alg)), basis_(std::move(basis)) {
    size_t n = alg_.dim_q();
    if (basis_.size() != n) fail(ErrorCode::kPrecondition, "order basis must have " + std::to_string(n) + " elements");
    QMatrix b(n, n);
    for (size_t k = 0; k < n; ++k) b.set_column(k, alg_.flatten(basis_[k]));
    auto bi = polisog::inverse(b);
    if (!bi) fail(ErrorCode::kPrecondition, "order basis is not of full rank");
    basis_inv_ = *bi;
    if (!contains(alg_.one())) fail(ErrorCode::kPrecondition, "order does not contain 1");
    for (auto& x : basis_) {
        if (!contains(alg_.involution(x))) fail(ErrorCode::kPrecondition, "order is not stable under the involution");
        for (auto& y : basis_)
            if (!contains(alg_.mul(x, y))) fail(ErrorCode::kPrecondition, "order basis is not closed under multiplication");
    }
}

OrderR OrderR::standard(const AlgebraWithInvolution& alg) {
    std::vector<AlgElem> basis;
    size_t off = 0;
    for (auto& f : alg.factors()) {
        size_t k = f.base.dim();
        for (size_t pos = 0; pos < f.n * f.n; ++pos)
            for (size_t t = 0; t < k; ++t) {
                std::vector<Rational> v(alg.dim_q());
                if (f.base.kind() == BaseRing::Kind::kQuadratic && t == 1) {
                    QuadElem w = QuadElem::from_omega(f.base.field(), 0, 1);
                    v[off + pos * k] = w.x();
                    v[off + pos * k + 1] = w.y();
                } else {
                    v[off + pos * k + t] = 1;
                }
                basis.push_back(alg.unflatten(v));
            }
        off += f.dim_q();
    }
    return OrderR(alg, std::move(basis));
}

std::vector<Rational> OrderR::coords(const AlgElem& x) const { return basis_inv_ * alg_.flatten(x); }

bool OrderR::contains(const AlgElem& x) const {
    for (auto& c : coords(x))
        if (c.get_den() != 1) return false;
    return true;
}

AlgElem OrderR::from_coords(const std::vector<Integer>& c) const {
    AlgElem x = alg_.zero();
    for (size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0) x = alg_.add(x, alg_.scale(basis_[k], Rational(c[k])));
    return x;
}

AlgElem norm_times_inverse(const OrderR& order, const AlgElem& x, const NormSpec& spec) {
    const auto& alg = order.algebra();
    auto xi = alg.inverse(x);
    if (!xi) fail(ErrorCode::kUndefined, "element is not invertible");
    AlgElem y = alg.scale(*xi, norm(alg, x, spec));
    if (!order.contains(y)) fail(ErrorCode::kInternal, "Nm(x) x^-1 is not in the order");
    return y;
}

}  // namespace polisog
