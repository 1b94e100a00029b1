#ifndef POLISOG_HECKE_CLASSES_HPP
#define POLISOG_HECKE_CLASSES_HPP

#include "quadfield.hpp"

#include <optional>

namespace polisog {

/// A totally positive integral element of a real quadratic field.
struct PolClassRep {
    QuadField field;
    QuadElem q;
    std::optional<Integer> source_prime;

    static PolClassRep make(const QuadElem& q, std::optional<Integer> source_prime = {});
};

struct EquivalenceWitness {
    Integer n;
    QuadElem u;  // n q = u^2 r
};

struct EquivalenceResult {
    bool equivalent = false;
    Rational norm_ratio;  // Nm(q) / Nm(r)
    std::optional<EquivalenceWitness> witness;
};

/* q ~ r iff q/r lies in Q^x F^x2.  With s = q/r and t^2 = Nm(s),
 * (t + s)^2 = s (Tr s + 2t), which gives the witness; when Nm(s) is not a
 * rational square no witness can exist. */
EquivalenceResult equivalent(const PolClassRep& q, const PolClassRep& r);

bool rosati_transport_check(const QuadElem& q, const QuadElem& r, const QuadElem& u, const Integer& n);

/* 1 followed by totally positive generators of principal primes above split
 * rational primes, in increasing order of the prime, skipping primes whose
 * generator cannot be made totally positive or that are equivalent to an
 * earlier representative. */
std::vector<PolClassRep> generate_classes(const QuadField& f, size_t count, long prime_limit = 100000);

}  // namespace polisog

#endif
