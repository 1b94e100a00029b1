#include "base_ring.hpp"

namespace polisog {

const char* entry_involution_name(EntryInvolution e) {
    switch (e) {
        case EntryInvolution::kIdentity: return "identity";
        case EntryInvolution::kConjugation: return "conjugation";
        case EntryInvolution::kCanonical: return "canonical";
    }
    return "?";
}

BaseRing BaseRing::quadratic(const Integer& D) {
    QuadField f(D);  // validates D
    BaseRing r(Kind::kQuadratic);
    r.D_ = f.D();
    return r;
}

BaseRing BaseRing::quaternion(const Rational& a, const Rational& b) {
    if (a == 0 || b == 0) fail(ErrorCode::kPrecondition, "quaternion structure constants must be nonzero");
    BaseRing r(Kind::kQuaternion);
    r.a_ = a;
    r.b_ = b;
    return r;
}

size_t BaseRing::dim() const {
    switch (kind_) {
        case Kind::kRational: return 1;
        case Kind::kQuadratic: return 2;
        case Kind::kQuaternion: return 4;
    }
    return 0;
}

std::string BaseRing::describe() const {
    switch (kind_) {
        case Kind::kRational: return "Q";
        case Kind::kQuadratic: return "Q(sqrt " + D_.get_str() + ")";
        case Kind::kQuaternion: return "(" + a_.get_str() + "," + b_.get_str() + "/Q)";
    }
    return "?";
}

Scalar BaseRing::from_rational(const Rational& r) const {
    Scalar s(dim());
    s[0] = r;
    return s;
}

bool BaseRing::is_zero(const Scalar& x) const {
    for (auto& c : x)
        if (c != 0) return false;
    return true;
}

bool BaseRing::is_rational(const Scalar& x) const {
    for (size_t i = 1; i < x.size(); ++i)
        if (x[i] != 0) return false;
    return true;
}

Scalar BaseRing::add(const Scalar& x, const Scalar& y) const {
    Scalar r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Scalar BaseRing::sub(const Scalar& x, const Scalar& y) const {
    Scalar r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Scalar BaseRing::neg(const Scalar& x) const {
    Scalar r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    return r;
}

Scalar BaseRing::scale(const Scalar& x, const Rational& s) const {
    Scalar r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] * s;
    return r;
}

Scalar BaseRing::mul(const Scalar& x, const Scalar& y) const {
    switch (kind_) {
        case Kind::kRational: return {x[0] * y[0]};
        case Kind::kQuadratic: return {x[0] * y[0] + D_ * x[1] * y[1], x[0] * y[1] + x[1] * y[0]};
        case Kind::kQuaternion: {
            const Rational &a = a_, &b = b_;
            return {
                x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
                x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
                x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
                x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1],
            };
        }
    }
    return {};
}

Scalar BaseRing::conj(const Scalar& x) const {
    switch (kind_) {
        case Kind::kRational: return x;
        case Kind::kQuadratic: return {x[0], -x[1]};
        case Kind::kQuaternion: return {x[0], -x[1], -x[2], -x[3]};
    }
    return {};
}

EntryInvolution BaseRing::natural_involution() const {
    switch (kind_) {
        case Kind::kRational: return EntryInvolution::kIdentity;
        case Kind::kQuadratic: return EntryInvolution::kConjugation;
        case Kind::kQuaternion: return EntryInvolution::kCanonical;
    }
    return EntryInvolution::kIdentity;
}

bool BaseRing::supports(EntryInvolution e) const {
    switch (e) {
        case EntryInvolution::kIdentity: return kind_ != Kind::kQuaternion;
        case EntryInvolution::kConjugation: return kind_ == Kind::kQuadratic;
        case EntryInvolution::kCanonical: return kind_ == Kind::kQuaternion;
    }
    return false;
}

Scalar BaseRing::apply(EntryInvolution e, const Scalar& x) const {
    if (!supports(e)) fail(ErrorCode::kPrecondition, std::string(entry_involution_name(e)) + " is not an involution of " + describe());
    return e == EntryInvolution::kIdentity ? x : conj(x);
}

Rational BaseRing::norm_q(const Scalar& x) const {
    switch (kind_) {
        case Kind::kRational: return x[0];
        case Kind::kQuadratic: return x[0] * x[0] - D_ * x[1] * x[1];
        case Kind::kQuaternion:
            return x[0] * x[0] - a_ * x[1] * x[1] - b_ * x[2] * x[2] + a_ * b_ * x[3] * x[3];
    }
    return 0;
}

Rational BaseRing::trace_q(const Scalar& x) const { return kind_ == Kind::kRational ? x[0] : 2 * x[0]; }

Scalar BaseRing::inv(const Scalar& x) const {
    Rational n = norm_q(x);
    if (n == 0) fail(ErrorCode::kUndefined, "element of " + describe() + " is not invertible");
    if (kind_ == Kind::kRational) return {1 / x[0]};
    return scale(conj(x), 1 / n);
}

QMatrix BaseRing::left_mult(const Scalar& x) const {
    size_t k = dim();
    QMatrix m(k, k);
    for (size_t j = 0; j < k; ++j) {
        Scalar e(k);
        e[j] = 1;
        Scalar c = mul(x, e);
        for (size_t i = 0; i < k; ++i) m(i, j) = c[i];
    }
    return m;
}

QuadElem BaseRing::to_quad(const Scalar& x) const {
    if (kind_ != Kind::kQuadratic) fail(ErrorCode::kInternal, "not a quadratic base");
    return QuadElem(field(), x[0], x[1]);
}

Scalar BaseRing::from_quad(const QuadElem& x) const { return {x.x(), x.y()}; }

BMatrix::BMatrix(BaseRing base, size_t rows, size_t cols)
    : base_(std::move(base)), rows_(rows), cols_(cols), data_(rows * cols, Scalar(base_.dim())) {}

BMatrix BMatrix::identity(const BaseRing& base, size_t n) {
    BMatrix m(base, n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = base.one();
    return m;
}

BMatrix BMatrix::from_rational(const BaseRing& base, const QMatrix& q) {
    BMatrix m(base, q.rows(), q.cols());
    for (size_t i = 0; i < q.rows(); ++i)
        for (size_t j = 0; j < q.cols(); ++j) m(i, j) = base.from_rational(q(i, j));
    return m;
}

BMatrix BMatrix::operator*(const BMatrix& o) const {
    if (cols_ != o.rows_ || !(base_ == o.base_)) fail(ErrorCode::kInternal, "matrix product mismatch");
    BMatrix r(base_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (base_.is_zero(a)) continue;
            for (size_t j = 0; j < o.cols_; ++j) r(i, j) = base_.add(r(i, j), base_.mul(a, o(k, j)));
        }
    return r;
}

BMatrix BMatrix::operator+(const BMatrix& o) const {
    BMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = base_.add(data_[i], o.data_[i]);
    return r;
}

BMatrix BMatrix::operator-(const BMatrix& o) const {
    BMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = base_.sub(data_[i], o.data_[i]);
    return r;
}

BMatrix BMatrix::scaled(const Scalar& s) const {
    BMatrix r = *this;
    for (auto& x : r.data_) x = base_.mul(s, x);
    return r;
}

bool BMatrix::operator==(const BMatrix& o) const {
    return base_ == o.base_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool BMatrix::is_zero() const {
    for (auto& x : data_)
        if (!base_.is_zero(x)) return false;
    return true;
}

BMatrix BMatrix::star_transpose(EntryInvolution e) const {
    BMatrix r(base_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r(j, i) = base_.apply(e, (*this)(i, j));
    return r;
}

QMatrix BMatrix::rational_rep() const {
    size_t k = base_.dim();
    QMatrix m(rows_ * k, cols_ * k);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) {
            QMatrix b = base_.left_mult((*this)(i, j));
            for (size_t r = 0; r < k; ++r)
                for (size_t c = 0; c < k; ++c) m(i * k + r, j * k + c) = b(r, c);
        }
    return m;
}

std::optional<BMatrix> BMatrix::inverse() const {
    if (rows_ != cols_) return std::nullopt;
    auto q = polisog::inverse(rational_rep());
    if (!q) return std::nullopt;
    size_t k = base_.dim();
    BMatrix r(base_, rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            for (size_t t = 0; t < k; ++t) r(i, j)[t] = (*q)(i * k + t, j * k);
    return r;
}

Rational BMatrix::norm_q() const {
    Rational d = determinant(rational_rep());
    if (base_.kind() != BaseRing::Kind::kQuaternion) return d;
    return exact_sqrt(abs(d));
}

Rational BMatrix::trace_q() const {
    Rational t = 0;
    for (size_t i = 0; i < std::min(rows_, cols_); ++i) t += base_.trace_q((*this)(i, i));
    return t;
}

std::vector<Rational> BMatrix::flatten() const {
    std::vector<Rational> v;
    for (auto& x : data_) v.insert(v.end(), x.begin(), x.end());
    return v;
}

BMatrix BMatrix::unflatten(const BaseRing& base, size_t n, const std::vector<Rational>& v, size_t offset) {
    BMatrix m(base, n, n);
    size_t k = base.dim();
    for (size_t i = 0; i < n * n; ++i)
        for (size_t t = 0; t < k; ++t) m.data_[i][t] = v[offset + i * k + t];
    return m;
}

}  // namespace polisog
