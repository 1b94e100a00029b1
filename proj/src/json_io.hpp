#ifndef POLISOG_JSON_IO_HPP
#define POLISOG_JSON_IO_HPP

#include "degree_bound.hpp"
#include "forms.hpp"
#include "hecke_classes.hpp"

#include <json.hpp>

namespace polisog::io {

using json = nlohmann::json;

/* Rationals: JSON integers, or strings "n" / "n/d".  Output uses numbers
 * for integers within 64 bits and strings otherwise. */
Rational rational(const json& j, const std::string& where);
json to_json(const Rational& x);
json to_json(const Integer& x);

QMatrix qmatrix(const json& j, const std::string& where);
json to_json(const QMatrix& m);

/* "Q", {"type": "quadratic", "D": d}, {"type": "quaternion", "a": a, "b": b}. */
BaseRing base_ring(const json& j, const std::string& where);
json to_json(const BaseRing& b);

/* Q: a rational.  Quadratic: a rational or {"x": x, "y": y} for x + y sqrt D.
 * Quaternion: a rational or [a0, a1, a2, a3] for a0 + a1 i + a2 j + a3 ij. */
Scalar scalar(const BaseRing& b, const json& j, const std::string& where);
json scalar_json(const BaseRing& b, const Scalar& x);

BMatrix bmatrix(const BaseRing& b, const json& j, const std::string& where);
json to_json(const BMatrix& m);

QuadElem quad_elem(const QuadField& f, const json& j, const std::string& where);
json to_json(const QuadElem& x);

json to_json(const Place& v);

/* {"kind": "symmetric", "base": "Q", "gram": [[...]]}; kind and base optional. */
GramForm form(const json& j, const std::string& where);
json to_json(const FormInvariants& inv);

/* {"factors": [{"base": ..., "n": 2, "involution": "identity", "z": [[...]]}],
 *  "swaps": [[0, 1]]} */
AlgebraWithInvolution algebra(const json& j, const std::string& where);
json to_json(const AlgebraWithInvolution& alg);

/* {"factors": [m_0, m_1, ...]}, a matrix (one factor), or a scalar (one
 * factor of size 1). */
AlgElem element(const AlgebraWithInvolution& alg, const json& j, const std::string& where);
json to_json(const AlgebraWithInvolution& alg, const AlgElem& x);

/* {"algebra": ..., "gammas": [...], "d": optional, "order": optional [elements],
 *  "q": element, "a": element} */
BoundInstance bound_instance(const json& j, const std::string& where);
json to_json(const BoundInstance& inst, const BoundResult& r);

json to_json(const PolClassRep& r);

const json& field(const json& j, const char* key, const std::string& where);
long integer_field(const json& j, const char* key, const std::string& where);

}  // namespace polisog::io

#endif
