#include "commands.hpp"

#include "lattices_local.hpp"

#include <functional>
#include <map>

namespace polisog {

using io::json;

namespace {

std::pair<GramForm, GramForm> form_pair(const json& in) {
    const json& fs = io::field(in, "forms", "input");
    if (!fs.is_array() || fs.size() != 2) fail(ErrorCode::kSchema, "input.forms: expected exactly two forms");
    return {io::form(fs[0], "input.forms[0]"), io::form(fs[1], "input.forms[1]")};
}

PadicContext padic(const json& in, const Options& opt) {
    long p = io::integer_field(in, "p", "input");
    int prec = in.contains("precision") ? static_cast<int>(io::integer_field(in, "precision", "input")) : opt.precision;
    return PadicContext(Integer(p), prec);
}

CommandResult classify_form(const json& in, const Options&, bool dry) {
    GramForm f = io::form(io::field(in, "form", "input"), "input.form");
    if (dry) return {};
    json out;
    out["invariants"] = io::to_json(invariants(f));
    if (f.kind() == FormKind::kSymmetric || f.kind() == FormKind::kHermitian) {
        auto pd = is_positive_definite(f);
        out["positive_definite"] = pd.positive;
        if (!pd.warning.empty()) out["positivity_warning"] = pd.warning;
    }
    return {Status::kOk, out};
}

CommandResult isometric_cmd(const json& in, const Options& opt, bool dry) {
    auto [f1, f2] = form_pair(in);
    if (dry) return {};
    auto d = isometric(f1, f2);
    json out{{"isometric", d.isometric}, {"complete", d.complete}, {"reason", d.reason}};
    if (f1.kind() == FormKind::kSymmetric && f1.base().kind() == BaseRing::Kind::kRational &&
        f2.kind() == FormKind::kSymmetric && f2.base().kind() == BaseRing::Kind::kRational && f1.dim() == f2.dim() && f1.dim() <= 3) {
        auto w = search_isometry_witness(f1.rational_gram(), f2.rational_gram(), opt.height);
        out["witness_height"] = opt.height;
        out["witness"] = w ? io::to_json(*w) : json(nullptr);
    }
    return {d.isometric ? Status::kOk : Status::kNegative, out};
}

CommandResult fourth_power(const json& in, const Options&, bool dry) {
    auto [f1, f2] = form_pair(in);
    if (dry) return {};
    auto c = fourth_power_isometric(f1, f2);
    json out{{"isometric", c.isometric},
             {"invariants", {io::to_json(c.inv1), io::to_json(c.inv2)}},
             {"checks", c.checks},
             {"base_isometric", c.base_isometric}};
    return {c.isometric ? Status::kOk : Status::kNegative, out};
}

json lattice_json(const PadicLattice& l) {
    return {{"basis", io::to_json(l.basis())}, {"gram", io::to_json(l.gram())}, {"scale", scale(l)}, {"is_maximal", is_maximal(l)}};
}

CommandResult maximal_lattice(const json& in, const Options& opt, bool dry) {
    PadicContext ctx = padic(in, opt);
    QMatrix g = io::qmatrix(io::field(in, "form", "input"), "input.form");
    QMatrix b = in.contains("basis") ? io::qmatrix(in["basis"], "input.basis") : QMatrix::identity(g.rows());
    PadicLattice l(ctx, b, g);
    std::optional<long> target;
    if (in.contains("target_scale")) target = io::integer_field(in, "target_scale", "input");
    if (dry) return {};
    json out = lattice_json(l);
    PadicLattice done = maximal_completion(l, target ? static_cast<int>(*target) : scale(l));
    json c = lattice_json(done);
    c["contains_input"] = done.contains(l);
    out["completion"] = c;
    out["target_scale"] = target ? *target : scale(l);
    json jd = json::array();
    for (auto& comp : jordan_decomposition(done.gram(), ctx.p))
        jd.push_back({{"scale", comp.scale}, {"dim", comp.dim}, {"det_legendre", comp.det_legendre}});
    out["completion_jordan"] = jd;
    return {Status::kOk, out};
}

CommandResult local_solve(const json& in, const Options& opt, bool dry) {
    PadicContext ctx = padic(in, opt);
    std::string mode = in.contains("mode") && in["mode"].is_string() ? in["mode"].get<std::string>() : "split";
    if (mode == "unimodular-isometric") {
        QMatrix g1 = io::qmatrix(io::field(in, "g1", "input"), "input.g1");
        QMatrix g2 = io::qmatrix(io::field(in, "g2", "input"), "input.g2");
        if (dry) return {};
        bool iso = unimodular_isometric(g1, g2, ctx.p);
        return {iso ? Status::kOk : Status::kNegative, {{"isometric", iso}}};
    }
    QMatrix q = io::qmatrix(io::field(in, "q", "input"), "input.q");
    QMatrix a = io::qmatrix(io::field(in, "a", "input"), "input.a");
    if (mode == "unit-case") {
        if (dry) return {};
        auto r = unit_case_parity(q, a, ctx);
        json out{{"case", r.even_valuation ? "even-valuation" : "isometry-witness"}, {"v_m", r.v_m}};
        if (r.witness) {
            out["witness"] = io::to_json(*r.witness);
            out["precision"] = r.precision;
        }
        return {Status::kOk, out};
    }
    if (mode != "split") fail(ErrorCode::kSchema, "input.mode: unknown mode '" + mode + "'");
    Rational mp = io::rational(io::field(in, "m_prime", "input"), "input.m_prime");
    long gamma = in.contains("gamma") ? io::integer_field(in, "gamma", "input") : 1;
    if (gamma < 1) fail(ErrorCode::kSchema, "input.gamma: expected a positive integer");
    if (dry) return {};
    auto r = split_local_solve(q, a, mp, ctx);
    long n = static_cast<long>(q.rows()), d = n * gamma;
    Rational pr(ctx.p);
    json out{{"b", io::to_json(r.b)},
             {"route", r.route},
             {"m", io::to_json(r.m)},
             {"m_prime", io::to_json(mp)},
             {"v_det_b", r.v_det_b},
             {"v_det_q", r.v_det_q},
             {"local_norm_b", io::to_json(qpow(pr, gamma * r.v_det_b))},
             {"local_norm_q", io::to_json(qpow(pr, gamma * r.v_det_q))},
             {"bound_exponent", std::to_string(2 * d - 1) + "/2"},
             {"bound_holds", 2 * gamma * r.v_det_b <= (2 * d - 1) * gamma * r.v_det_q}};
    return {Status::kOk, out};
}

OracleOptions oracle_options(const json& in) {
    OracleOptions o;
    if (in.contains("oracle_radius")) o.radius = io::integer_field(in, "oracle_radius", "input");
    if (in.contains("oracle_budget")) o.budget = io::integer_field(in, "oracle_budget", "input");
    return o;
}

CommandResult degree_bound(const json& in, const Options& opt, bool dry) {
    BoundInstance inst = io::bound_instance(in, "input");
    std::string method = in.contains("method") && in["method"].is_string() ? in["method"].get<std::string>() : "auto";
    if (method != "auto" && method != "commutative" && method != "split" && method != "oracle")
        fail(ErrorCode::kSchema, "input.method: unknown method '" + method + "'");
    OracleOptions oo = oracle_options(in);
    if (dry) return {};
    if (method == "oracle") {
        Rational cap = opt.norm_cap ? *opt.norm_cap : qpow(inst.norm_q(), inst.spec().rank_d);
        auto r = brute_force_oracle(inst, cap, oo);
        if (!r) return {Status::kNegative, {{"found", false}, {"norm_cap", io::to_json(cap)}}};
        json out = io::to_json(inst, *r);
        out["found"] = true;
        out["norm_cap"] = io::to_json(cap);
        return {Status::kOk, out};
    }
    BoundResult r = method == "commutative" ? solve_commutative(inst) : method == "split" ? solve_split_matrix(inst) : solve(inst, oo);
    json out = io::to_json(inst, r);
    if (in.contains("oracle_check") && in["oracle_check"].is_boolean() && in["oracle_check"].get<bool>()) {
        auto o = brute_force_oracle(inst, r.norm_b, oo);
        out["oracle"] = o ? io::to_json(inst, *o) : json(nullptr);
    }
    return {Status::kOk, out};
}

CommandResult hecke_classes(const json& in, const Options&, bool dry) {
    QuadField f(Integer(io::integer_field(in, "D", "input")));
    if (in.contains("q") || in.contains("r")) {
        PolClassRep q = PolClassRep::make(io::quad_elem(f, io::field(in, "q", "input"), "input.q"));
        PolClassRep r = PolClassRep::make(io::quad_elem(f, io::field(in, "r", "input"), "input.r"));
        if (dry) return {};
        auto e = equivalent(q, r);
        json out{{"equivalent", e.equivalent}, {"norm_ratio", io::to_json(e.norm_ratio)}};
        if (e.witness) out["witness"] = {{"n", io::to_json(e.witness->n)}, {"u", io::to_json(e.witness->u)}};
        return {e.equivalent ? Status::kOk : Status::kNegative, out};
    }
    long count = io::integer_field(in, "count", "input");
    if (count < 1) fail(ErrorCode::kPrecondition, "input.count: must be at least 1");
    if (dry) return {};
    auto reps = generate_classes(f, static_cast<size_t>(count));
    json list = json::array(), matrix = json::array();
    for (auto& r : reps) list.push_back(io::to_json(r));
    for (auto& a : reps) {
        json row = json::array();
        for (auto& b : reps) row.push_back(equivalent(a, b).equivalent);
        matrix.push_back(row);
    }
    return {Status::kOk, {{"D", io::to_json(f.D())}, {"representatives", list}, {"equivalent", matrix}}};
}

CommandResult measure(const json& in, const Options&, bool dry) {
    const json& items = io::field(in, "instances", "input");
    if (!items.is_array() || items.empty()) fail(ErrorCode::kSchema, "input.instances: expected a nonempty array");
    std::vector<BoundInstance> insts;
    for (size_t i = 0; i < items.size(); ++i) {
        json merged = in;
        merged.erase("instances");
        for (auto& [k, v] : items[i].items()) merged[k] = v;
        insts.push_back(io::bound_instance(merged, "input.instances[" + std::to_string(i) + "]"));
    }
    OracleOptions oo = oracle_options(in);
    if (dry) return {};
    auto rep = measure_constant(insts, oo);
    json rows = json::array();
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        auto& row = rep.rows[i];
        rows.push_back({{"solver", io::to_json(insts[i], row.solver)},
                        {"oracle", row.oracle ? io::to_json(insts[i], *row.oracle) : json(nullptr)}});
    }
    return {Status::kOk,
            {{"rows", rows},
             {"max_ratio_squared_solver", io::to_json(rep.max_ratio_sq_solver)},
             {"max_ratio_squared_oracle", io::to_json(rep.max_ratio_sq_oracle)}}};
}

using Handler = std::function<CommandResult(const json&, const Options&, bool)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"classify-form", classify_form},   {"isometric", isometric_cmd},     {"fourth-power-check", fourth_power},
        {"maximal-lattice", maximal_lattice}, {"local-solve", local_solve},   {"degree-bound", degree_bound},
        {"hecke-classes", hecke_classes},   {"measure-constant", measure},
    };
    return h;
}

const Handler& handler(const std::string& verb) {
    auto it = handlers().find(verb);
    if (it == handlers().end()) fail(ErrorCode::kSchema, "unknown verb '" + verb + "'");
    return it->second;
}

}  // namespace

const std::vector<std::string>& verbs() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> out;
        for (auto& [k, h] : handlers()) out.push_back(k);
        return out;
    }();
    return v;
}

CommandResult run_command(const std::string& verb, const json& input, const Options& opt) {
    if (!input.is_object()) fail(ErrorCode::kSchema, "input must be a JSON object");
    CommandResult r = handler(verb)(input, opt, false);
    r.body = json{{"verb", verb}, {"status", r.status == Status::kOk ? "ok" : "negative"}, {"result", r.body}};
    return r;
}

json validate_input(const std::string& requested, const json& input) {
    json errors = json::array();
    std::string verb = requested;
    try {
        if (!input.is_object()) fail(ErrorCode::kSchema, "input must be a JSON object");
        if (verb.empty()) {
            if (!input.contains("verb") || !input["verb"].is_string()) fail(ErrorCode::kSchema, "input.verb: missing; pass the verb explicitly");
            verb = input["verb"].get<std::string>();
        }
        handler(verb)(input, Options{}, true);
    } catch (const Error& e) {
        errors.push_back(error_json(e.code(), e.what())["error"]);
    }
    return {{"verb", verb}, {"valid", errors.empty()}, {"errors", errors}};
}

json error_json(ErrorCode code, const std::string& message) {
    return {{"status", "error"}, {"error", {{"code", static_cast<int>(code)}, {"name", error_code_name(code)}, {"message", message}}}};
}

}  // namespace polisog
