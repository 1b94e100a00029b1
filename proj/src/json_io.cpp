#include "json_io.hpp"

#include <cmath>
#include <cstdio>

namespace polisog::io {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) { fail(ErrorCode::kSchema, where + ": " + what); }

EntryInvolution parse_involution(const std::string& s, const std::string& where) {
    for (auto e : {EntryInvolution::kIdentity, EntryInvolution::kConjugation, EntryInvolution::kCanonical})
        if (s == entry_involution_name(e)) return e;
    schema(where, "unknown involution '" + s + "'");
}

}  // namespace

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) schema(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema(where, std::string("missing field '") + key + "'");
    return *it;
}

long integer_field(const json& j, const char* key, const std::string& where) {
    Rational r = rational(field(j, key, where), where + "." + key);
    if (r.get_den() != 1 || !r.get_num().fits_slong_p()) schema(where + "." + key, "expected an integer");
    return r.get_num().get_si();
}

Rational rational(const json& j, const std::string& where) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Rational(Integer(std::to_string(j.get<unsigned long long>())));
        return Rational(Integer(std::to_string(j.get<long long>())));
    }
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error&) {
            schema(where, "not a rational: '" + j.get<std::string>() + "'");
        }
    }
    if (j.is_number_float()) schema(where, "floating-point numbers are not accepted; use \"n/d\"");
    schema(where, "expected a rational");
}

json to_json(const Integer& x) {
    if (x.fits_slong_p()) return json(static_cast<long long>(x.get_si()));
    return json(x.get_str());
}

json to_json(const Rational& x) {
    if (x.get_den() == 1) return to_json(x.get_num());
    return json(x.get_str());
}

QMatrix qmatrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema(where, "expected a nonempty array of rows");
    size_t rows = j.size(), cols = 0;
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array()) schema(where, "row " + std::to_string(i) + " is not an array");
        if (i == 0) cols = j[i].size();
        if (j[i].size() != cols || cols == 0) schema(where, "rows have inconsistent lengths");
    }
    QMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < cols; ++k) m(i, k) = rational(j[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    return m;
}

json to_json(const QMatrix& m) {
    json out = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        out.push_back(row);
    }
    return out;
}

BaseRing base_ring(const json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "Q") return BaseRing::rational();
    if (!j.is_object()) schema(where, "expected \"Q\" or an object with a type");
    std::string type = field(j, "type", where).is_string() ? j["type"].get<std::string>() : "";
    if (type == "rational") return BaseRing::rational();
    if (type == "quadratic") return BaseRing::quadratic(rational(field(j, "D", where), where + ".D").get_num());
    if (type == "quaternion")
        return BaseRing::quaternion(rational(field(j, "a", where), where + ".a"), rational(field(j, "b", where), where + ".b"));
    schema(where, "unknown base type '" + type + "'");
}

json to_json(const BaseRing& b) {
    switch (b.kind()) {
        case BaseRing::Kind::kRational: return "Q";
        case BaseRing::Kind::kQuadratic: return {{"type", "quadratic"}, {"D", to_json(b.D())}};
        case BaseRing::Kind::kQuaternion: return {{"type", "quaternion"}, {"a", to_json(b.qa())}, {"b", to_json(b.qb())}};
    }
    return nullptr;
}

Scalar scalar(const BaseRing& b, const json& j, const std::string& where) {
    if (j.is_number() || j.is_string()) return b.from_rational(rational(j, where));
    switch (b.kind()) {
        case BaseRing::Kind::kRational: schema(where, "expected a rational");
        case BaseRing::Kind::kQuadratic: {
            if (!j.is_object()) schema(where, "expected a rational or {\"x\", \"y\"}");
            Scalar s{0, 0};
            if (j.contains("x")) s[0] = rational(j["x"], where + ".x");
            if (j.contains("y")) s[1] = rational(j["y"], where + ".y");
            return s;
        }
        case BaseRing::Kind::kQuaternion: {
            if (!j.is_array() || j.size() != 4) schema(where, "expected a rational or [a0, a1, a2, a3]");
            Scalar s(4);
            for (size_t i = 0; i < 4; ++i) s[i] = rational(j[i], where + "[" + std::to_string(i) + "]");
            return s;
        }
    }
    schema(where, "unreachable");
}

json scalar_json(const BaseRing& b, const Scalar& x) {
    if (b.is_rational(x)) return to_json(x[0]);
    if (b.kind() == BaseRing::Kind::kQuadratic) return {{"x", to_json(x[0])}, {"y", to_json(x[1])}};
    json out = json::array();
    for (auto& c : x) out.push_back(to_json(c));
    return out;
}

BMatrix bmatrix(const BaseRing& b, const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema(where, "expected a nonempty array of rows");
    size_t rows = j.size(), cols = 0;
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array()) schema(where, "row " + std::to_string(i) + " is not an array");
        if (i == 0) cols = j[i].size();
        if (j[i].size() != cols || cols == 0) schema(where, "rows have inconsistent lengths");
    }
    BMatrix m(b, rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < cols; ++k) m(i, k) = scalar(b, j[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    return m;
}

json to_json(const BMatrix& m) {
    json out = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_json(m.base(), m(i, k)));
        out.push_back(row);
    }
    return out;
}

QuadElem quad_elem(const QuadField& f, const json& j, const std::string& where) {
    BaseRing b = BaseRing::quadratic(f.D());
    return b.to_quad(scalar(b, j, where));
}

json to_json(const QuadElem& x) {
    auto [c0, c1] = x.omega_coords();
    return {{"x", to_json(x.x())}, {"y", to_json(x.y())}, {"omega", {to_json(c0), to_json(c1)}}, {"text", x.to_string()}};
}

json to_json(const Place& v) { return v.is_infinite() ? json("inf") : to_json(v.p()); }

GramForm form(const json& j, const std::string& where) {
    if (j.is_array()) return GramForm::symmetric_q(qmatrix(j, where));
    FormKind kind = FormKind::kSymmetric;
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) schema(where + ".kind", "expected a string");
        kind = parse_form_kind(j["kind"].get<std::string>());
    }
    BaseRing b = j.contains("base") ? base_ring(j["base"], where + ".base") : BaseRing::rational();
    BMatrix g = bmatrix(b, field(j, "gram", where), where + ".gram");
    if (g.rows() != g.cols()) schema(where + ".gram", "Gram matrix must be square");
    return GramForm(kind, g);
}

namespace {

json scalar_generic(const Scalar& x) {
    if (x.size() == 1) return to_json(x[0]);
    if (x.size() == 2) return {{"x", to_json(x[0])}, {"y", to_json(x[1])}};
    json out = json::array();
    for (auto& c : x) out.push_back(to_json(c));
    return out;
}

}  // namespace

json to_json(const FormInvariants& inv) {
    json out;
    out["kind"] = form_kind_name(inv.kind);
    out["base"] = inv.base;
    out["dim"] = inv.dim;
    out["det"] = scalar_generic(inv.det);
    out["det_class"] = inv.det_class;
    json hasse = json::array();
    for (auto& [v, s] : inv.hasse) hasse.push_back({{"place", to_json(v)}, {"value", s}});
    out["hasse"] = hasse;
    json sig = json::array();
    for (auto& [pos, neg] : inv.signatures) sig.push_back({pos, neg});
    out["signatures"] = sig;
    json obs = json::array();
    for (auto& v : inv.norm_obstructions) obs.push_back(to_json(v));
    out["norm_obstructions"] = obs;
    out["complete"] = inv.complete;
    out["classification"] = inv.classification;
    return out;
}

AlgebraWithInvolution algebra(const json& j, const std::string& where) {
    const json& fs = field(j, "factors", where);
    if (!fs.is_array() || fs.empty()) schema(where + ".factors", "expected a nonempty array");
    std::vector<SimpleFactor> factors;
    for (size_t i = 0; i < fs.size(); ++i) {
        std::string w = where + ".factors[" + std::to_string(i) + "]";
        const json& f = fs[i];
        BaseRing b = f.contains("base") ? base_ring(f["base"], w + ".base") : BaseRing::rational();
        long n = f.contains("n") ? integer_field(f, "n", w) : 1;
        if (n < 1 || n > 6) fail(ErrorCode::kUnsupported, w + ".n: matrix size must be between 1 and 6");
        EntryInvolution e = b.natural_involution();
        if (f.contains("involution")) {
            if (!f["involution"].is_string()) schema(w + ".involution", "expected a string");
            e = parse_involution(f["involution"].get<std::string>(), w + ".involution");
        }
        if (f.contains("z")) {
            BMatrix z = bmatrix(b, f["z"], w + ".z");
            factors.push_back(SimpleFactor::make(b, static_cast<size_t>(n), e, z));
        } else {
            factors.push_back(SimpleFactor::make(b, static_cast<size_t>(n), e));
        }
    }
    std::vector<std::pair<size_t, size_t>> swaps;
    if (j.contains("swaps")) {
        const json& s = j["swaps"];
        if (!s.is_array()) schema(where + ".swaps", "expected an array of pairs");
        for (auto& p : s) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
                schema(where + ".swaps", "expected pairs of factor indices");
            swaps.emplace_back(p[0].get<size_t>(), p[1].get<size_t>());
        }
    }
    return AlgebraWithInvolution(std::move(factors), std::move(swaps));
}

json to_json(const AlgebraWithInvolution& alg) {
    json fs = json::array();
    for (auto& f : alg.factors())
        fs.push_back({{"base", to_json(f.base)}, {"n", f.n}, {"involution", entry_involution_name(f.entry)}, {"z", to_json(f.z)}});
    json sw = json::array();
    for (auto& [a, b] : alg.swaps()) sw.push_back({a, b});
    return {{"factors", fs}, {"swaps", sw}};
}

AlgElem element(const AlgebraWithInvolution& alg, const json& j, const std::string& where) {
    const auto& fs = alg.factors();
    AlgElem x;
    auto check = [&](const BMatrix& m, size_t i, const std::string& w) {
        if (m.rows() != fs[i].n || m.cols() != fs[i].n) schema(w, "expected a " + std::to_string(fs[i].n) + "x" + std::to_string(fs[i].n) + " matrix");
    };
    if (j.is_object() && j.contains("factors")) {
        const json& parts = j["factors"];
        if (!parts.is_array() || parts.size() != fs.size()) schema(where, "expected one matrix per factor");
        for (size_t i = 0; i < fs.size(); ++i) {
            std::string w = where + ".factors[" + std::to_string(i) + "]";
            x.push_back(bmatrix(fs[i].base, parts[i], w));
            check(x.back(), i, w);
        }
        return x;
    }
    if (fs.size() != 1) schema(where, "an algebra with several factors needs {\"factors\": [...]}");
    if (j.is_array() && !j.empty() && j[0].is_array()) {
        x.push_back(bmatrix(fs[0].base, j, where));
        check(x.back(), 0, where);
        return x;
    }
    if (fs[0].n != 1) schema(where, "expected a matrix");
    BMatrix m(fs[0].base, 1, 1);
    m(0, 0) = scalar(fs[0].base, j, where);
    x.push_back(m);
    return x;
}

json to_json(const AlgebraWithInvolution& alg, const AlgElem& x) {
    if (alg.factors().size() == 1) {
        if (alg.factors()[0].n == 1) return scalar_json(x[0].base(), x[0](0, 0));
        return to_json(x[0]);
    }
    json parts = json::array();
    for (auto& m : x) parts.push_back(to_json(m));
    return {{"factors", parts}};
}

BoundInstance bound_instance(const json& j, const std::string& where) {
    AlgebraWithInvolution alg = algebra(field(j, "algebra", where), where + ".algebra");
    const json& g = field(j, "gammas", where);
    if (!g.is_array()) schema(where + ".gammas", "expected an array of positive integers");
    std::vector<long> gammas;
    for (size_t i = 0; i < g.size(); ++i) {
        Rational r = rational(g[i], where + ".gammas[" + std::to_string(i) + "]");
        if (r.get_den() != 1 || !r.get_num().fits_slong_p()) schema(where + ".gammas", "expected integers");
        gammas.push_back(r.get_num().get_si());
    }
    std::optional<long> d;
    if (j.contains("d")) d = integer_field(j, "d", where);
    NormSpec spec = NormSpec::make(alg, gammas, d);
    OrderR order = OrderR::standard(alg);
    if (j.contains("order")) {
        const json& ob = j["order"];
        if (!ob.is_array()) schema(where + ".order", "expected an array of basis elements");
        std::vector<AlgElem> basis;
        for (size_t i = 0; i < ob.size(); ++i) basis.push_back(element(alg, ob[i], where + ".order[" + std::to_string(i) + "]"));
        order = OrderR(alg, std::move(basis));
    }
    AlgElem q = element(alg, field(j, "q", where), where + ".q");
    AlgElem a = element(alg, field(j, "a", where), where + ".a");
    return BoundInstance(std::move(order), std::move(spec), std::move(q), std::move(a));
}

json to_json(const BoundInstance& inst, const BoundResult& r) {
    json out;
    out["b"] = to_json(inst.alg(), r.b);
    json coords = json::array();
    for (auto& c : r.coords) coords.push_back(to_json(c));
    out["coords"] = coords;
    out["value"] = to_json(r.value);
    out["norm_b"] = to_json(r.norm_b);
    out["norm_q"] = to_json(r.norm_q);
    out["d"] = r.rank_d;
    out["ratio_squared"] = to_json(r.ratio_sq);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", std::sqrt(r.ratio_sq.get_d()));
    out["ratio_decimal"] = buf;
    out["within_exponent"] = {{"(d-1)/2", r.within_local}, {"d-1/2", r.within_global}, {"(3d-1)/2", r.within_sketch}};
    out["route"] = r.route;
    out["notes"] = r.notes;
    return out;
}

json to_json(const PolClassRep& r) {
    json out = to_json(r.q);
    out["norm"] = to_json(r.q.norm());
    out["source_prime"] = r.source_prime ? to_json(*r.source_prime) : json(nullptr);
    return out;
}

}  // namespace polisog::io
