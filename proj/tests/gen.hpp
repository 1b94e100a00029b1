#ifndef POLISOG_TESTS_GEN_HPP
#define POLISOG_TESTS_GEN_HPP

#include "linalg.hpp"

#include <cstdint>

namespace testgen {

using polisog::Integer;
using polisog::QMatrix;
using polisog::Rational;

// splitmix64
class Rng {
  public:
    explicit Rng(uint64_t seed) : s_(seed) {}
    uint64_t next() {
        uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1)); }
    long nonzero(long lo, long hi) {
        for (;;) {
            long v = range(lo, hi);
            if (v != 0) return v;
        }
    }

  private:
    uint64_t s_;
};

inline QMatrix random_matrix(Rng& r, size_t rows, size_t cols, long bound) {
    QMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) m(i, j) = r.range(-bound, bound);
    return m;
}

inline QMatrix random_symmetric(Rng& r, size_t n, long bound) {
    QMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) m(i, j) = m(j, i) = r.range(-bound, bound);
    return m;
}

/// B^T B + diag for a random integral B: positive definite, entries bounded.
inline QMatrix random_positive_definite(Rng& r, size_t n, long bound) {
    for (;;) {
        QMatrix b = random_matrix(r, n, n, 2);
        QMatrix g = b.transpose() * b;
        for (size_t i = 0; i < n; ++i) g(i, i) += r.range(1, 3);
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i)
            for (size_t j = 0; j < n && ok; ++j) ok = abs(g(i, j)) <= bound;
        if (ok && polisog::is_positive_definite(g)) return g;
    }
}

inline QMatrix random_invertible(Rng& r, size_t n, long bound) {
    for (;;) {
        QMatrix m = random_matrix(r, n, n, bound);
        if (polisog::determinant(m) != 0) return m;
    }
}

}  // namespace testgen

#endif
