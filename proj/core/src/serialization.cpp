#include "contagion/serialization.hpp"

#include <cstdint>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "contagion/errors.hpp"

namespace contagion {

using nlohmann::json;

namespace {

json mark_json(const MarkDistribution& d) {
    json params = json::object();
    switch (d.kind()) {
        case MarkKind::Zero: break;
        case MarkKind::PointMass: params["value"] = d.value(); break;
        case MarkKind::Exponential: params["rate"] = d.rate(); break;
        case MarkKind::Gamma:
            params["shape"] = d.shape();
            params["scale"] = d.scale();
            break;
    }
    return json{{"kind", std::string(to_string(d.kind()))}, {"params", params}};
}

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
    throw ValidationError("config " + pointer + ": " + what);
}

double number_at(const json& obj, const std::string& key, const std::string& pointer) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(pointer, "missing required key '" + key + "'");
    if (!it->is_number()) schema_error(pointer + "/" + key, "expected a number");
    return it->get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& pointer) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.contains(it.key()))
            schema_error(pointer + "/" + it.key(), "unknown key");
    }
}

MarkDistribution parse_mark(const json& j, const std::string& pointer) {
    if (!j.is_object()) schema_error(pointer, "expected an object {kind, params}");
    reject_unknown(j, {"kind", "params"}, pointer);
    auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string())
        schema_error(pointer, "missing string 'kind'");
    const json empty = json::object();
    auto params_it = j.find("params");
    const json& params = params_it == j.end() ? empty : *params_it;
    if (!params.is_object()) schema_error(pointer + "/params", "expected an object");
    const std::string pp = pointer + "/params";
    try {
        switch (mark_kind_from_string(kind_it->get<std::string>())) {
            case MarkKind::Zero:
                reject_unknown(params, {}, pp);
                return MarkDistribution::zero();
            case MarkKind::PointMass:
                reject_unknown(params, {"value"}, pp);
                return MarkDistribution::point_mass(number_at(params, "value", pp));
            case MarkKind::Exponential:
                reject_unknown(params, {"rate"}, pp);
                return MarkDistribution::exponential(number_at(params, "rate", pp));
            case MarkKind::Gamma:
                reject_unknown(params, {"shape", "scale"}, pp);
                return MarkDistribution::gamma(number_at(params, "shape", pp),
                                               number_at(params, "scale", pp));
        }
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        if (what.rfind("config ", 0) == 0) throw;
        schema_error(pointer, what);
    }
    return {};
}

json params_json(const ModelParams& p) {
    return json{{"delta1", p.delta1},
                {"delta2", p.delta2},
                {"rho1", p.rho1},
                {"rho2", p.rho2},
                {"lambda0", {p.lambda0[0], p.lambda0[1]}},
                {"h1", mark_json(p.h1)},
                {"h2", mark_json(p.h2)},
                {"g11", mark_json(p.g11)},
                {"g12", mark_json(p.g12)},
                {"g21", mark_json(p.g21)},
                {"g22", mark_json(p.g22)}};
}

}  // namespace

std::string mark_to_json(const MarkDistribution& dist) { return mark_json(dist).dump(); }

std::string params_to_json(const ModelParams& params, int indent) {
    return params_json(params).dump(indent);
}

ModelParams params_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) schema_error("", "model must be a JSON object");
    reject_unknown(j,
                   {"delta1", "delta2", "rho1", "rho2", "lambda0", "h1", "h2", "g11", "g12",
                    "g21", "g22"},
                   "");

    ModelParams p;
    p.delta1 = number_at(j, "delta1", "");
    p.delta2 = number_at(j, "delta2", "");
    p.rho1 = number_at(j, "rho1", "");
    p.rho2 = number_at(j, "rho2", "");

    auto l0 = j.find("lambda0");
    if (l0 == j.end()) schema_error("", "missing required key 'lambda0'");
    if (!l0->is_array() || l0->size() != 2 || !(*l0)[0].is_number() || !(*l0)[1].is_number())
        schema_error("/lambda0", "expected [a, b]");
    p.lambda0 = {(*l0)[0].get<double>(), (*l0)[1].get<double>()};

    auto mark = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end()) schema_error("", std::string("missing required key '") + key + "'");
        return parse_mark(*it, std::string("/") + key);
    };
    p.h1 = mark("h1");
    p.h2 = mark("h2");
    p.g11 = mark("g11");
    p.g12 = mark("g12");
    p.g21 = mark("g21");
    p.g22 = mark("g22");

    require_valid(p);
    return p;
}

std::string params_hash(const ModelParams& params) {
    const std::string canonical = params_json(params).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace contagion
