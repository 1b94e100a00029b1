#include <polisog/polisog.h>

#include "commands.hpp"

#include <cstdlib>
#include <cstring>

using polisog::ErrorCode;
using polisog::io::json;

struct polisog_session {
    polisog::Options opt;
    int last_code = 0;
    std::string last_message;
};

namespace {

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int set_error(polisog_session* s, ErrorCode code, const std::string& msg) {
    if (s) {
        s->last_code = static_cast<int>(code);
        s->last_message = msg;
    }
    return static_cast<int>(code);
}

json parse_input(const char* text) {
    if (!text) polisog::fail(ErrorCode::kSchema, "input: null");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        polisog::fail(ErrorCode::kSchema, std::string("input: invalid JSON: ") + e.what());
    }
}

}  // namespace

extern "C" {

const char* polisog_version(void) { return "0.1.0"; }

polisog_session* polisog_session_new(void) { return new (std::nothrow) polisog_session(); }

void polisog_session_free(polisog_session* s) { delete s; }

int polisog_set_seed(polisog_session* s, unsigned long long seed) {
    if (!s) return POLISOG_ERR_PRECONDITION;
    s->opt.seed = seed;
    return POLISOG_OK;
}

int polisog_set_precision(polisog_session* s, int precision) {
    if (!s) return POLISOG_ERR_PRECONDITION;
    if (precision < 1 || precision > 1000) return set_error(s, ErrorCode::kPrecondition, "precision must lie in 1..1000");
    s->opt.precision = precision;
    return POLISOG_OK;
}

int polisog_set_norm_cap(polisog_session* s, const char* cap) {
    if (!s) return POLISOG_ERR_PRECONDITION;
    if (!cap) {
        s->opt.norm_cap.reset();
        return POLISOG_OK;
    }
    try {
        polisog::Rational c = polisog::io::rational(json(cap), "norm_cap");
        if (c <= 0) return set_error(s, ErrorCode::kPrecondition, "norm_cap must be positive");
        s->opt.norm_cap = c;
        return POLISOG_OK;
    } catch (const polisog::Error& e) {
        return set_error(s, e.code(), e.what());
    }
}

int polisog_set_height(polisog_session* s, int height) {
    if (!s) return POLISOG_ERR_PRECONDITION;
    if (height < 1 || height > 10) return set_error(s, ErrorCode::kPrecondition, "height must lie in 1..10");
    s->opt.height = height;
    return POLISOG_OK;
}

const char* polisog_verbs(void) {
    static const std::string list = [] {
        std::string out;
        for (auto& v : polisog::verbs()) out += (out.empty() ? "" : ",") + v;
        return out;
    }();
    return list.c_str();
}

int polisog_run(polisog_session* s, const char* verb, const char* input_json, char** out) {
    if (!s || !verb || !out) return POLISOG_ERR_PRECONDITION;
    *out = nullptr;
    json body;
    int code;
    try {
        auto r = polisog::run_command(verb, parse_input(input_json), s->opt);
        body = std::move(r.body);
        code = static_cast<int>(r.status);
        s->last_code = 0;
        s->last_message.clear();
    } catch (const polisog::Error& e) {
        code = set_error(s, e.code(), e.what());
        body = polisog::error_json(e.code(), e.what());
    } catch (const std::bad_alloc&) {
        code = set_error(s, ErrorCode::kResource, "out of memory");
        body = polisog::error_json(ErrorCode::kResource, "out of memory");
    } catch (const std::exception& e) {
        code = set_error(s, ErrorCode::kInternal, e.what());
        body = polisog::error_json(ErrorCode::kInternal, e.what());
    }
    *out = dup(body.dump(2));
    return code;
}

int polisog_validate(const char* verb, const char* input_json, char** out) {
    if (!out) return POLISOG_ERR_PRECONDITION;
    std::string v = verb ? verb : "";
    json body;
    int code = POLISOG_OK;
    try {
        body = polisog::validate_input(v, parse_input(input_json));
        if (!body["valid"].get<bool>()) code = body["errors"][0]["code"].get<int>();
    } catch (const polisog::Error& e) {
        code = static_cast<int>(e.code());
        body = {{"verb", v}, {"valid", false}, {"errors", {polisog::error_json(e.code(), e.what())["error"]}}};
    }
    *out = dup(body.dump(2));
    return code;
}

int polisog_last_error_code(const polisog_session* s) { return s ? s->last_code : POLISOG_ERR_PRECONDITION; }

const char* polisog_last_error_message(const polisog_session* s) { return s ? s->last_message.c_str() : ""; }

void polisog_string_free(char* str) { std::free(str); }

}
