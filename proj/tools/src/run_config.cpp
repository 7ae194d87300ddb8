#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "contagion/errors.hpp"
#include "contagion/serialization.hpp"

namespace contagion::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw ValidationError("config " + pointer + ": " + what);
}

const json* block(const json& root, const char* key, const std::set<std::string>& allowed) {
    auto it = root.find(key);
    if (it == root.end()) return nullptr;
    const std::string ptr = std::string("/") + key;
    if (!it->is_object()) fail(ptr, "expected an object");
    for (auto f = it->begin(); f != it->end(); ++f)
        if (!allowed.contains(f.key())) fail(ptr + "/" + f.key(), "unknown key");
    return &*it;
}

template <class T>
std::optional<T> field(const json* obj, const char* key, const char* block_name) {
    if (!obj) return std::nullopt;
    auto it = obj->find(key);
    if (it == obj->end() || it->is_null()) return std::nullopt;
    try {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) throw std::invalid_argument("expected a string");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer() || (std::is_unsigned_v<T> && it->get<long long>() < 0))
                throw std::invalid_argument("expected a non-negative integer");
        } else {
            if (!it->is_number()) throw std::invalid_argument("expected a number");
        }
        return it->get<T>();
    } catch (const std::exception& e) {
        fail(std::string("/") + block_name + "/" + key, e.what());
    }
}

VPanel panel(const json* obj, const char* key, const char* block_name) {
    VPanel out;
    if (!obj) return out;
    auto it = obj->find(key);
    if (it == obj->end()) return out;
    const std::string ptr = std::string("/") + block_name + "/" + key;
    if (!it->is_array()) fail(ptr, "expected an array of [v1, v2] pairs");
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& p = (*it)[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            fail(ptr + "/" + std::to_string(i), "expected [v1, v2]");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) fail("", "expected a JSON object");

    RunConfig c;
    if (!root.contains("model")) {
        c.model = params_from_json(text);
        return c;
    }
    for (auto it = root.begin(); it != root.end(); ++it) {
        static const std::set<std::string> top{"model", "simulate", "laplace", "moments", "verify",
                                               "output"};
        if (!top.contains(it.key())) fail("/" + it.key(), "unknown key");
    }
    try {
        c.model = params_from_json(root["model"].dump());
    } catch (const ValidationError& e) {
        std::string what = e.what();
        if (what.rfind("config ", 0) == 0) what.insert(7, "/model");
        throw ValidationError(what);
    }

    const json* sim =
        block(root, "simulate", {"horizon", "paths", "seed", "algorithm", "generations", "dt"});
    c.simulate.horizon = field<double>(sim, "horizon", "simulate");
    c.simulate.paths = field<std::size_t>(sim, "paths", "simulate");
    c.simulate.seed = field<std::uint64_t>(sim, "seed", "simulate");
    c.simulate.algorithm = field<std::string>(sim, "algorithm", "simulate");
    c.simulate.generations = field<int>(sim, "generations", "simulate");
    c.simulate.dt = field<double>(sim, "dt", "simulate");

    const json* lap = block(root, "laplace", {"v", "n", "tol"});
    c.laplace.v = panel(lap, "v", "laplace");
    c.laplace.n = field<int>(lap, "n", "laplace");
    c.laplace.tol = field<double>(lap, "tol", "laplace");

    block(root, "moments", {});

    const json* ver =
        block(root, "verify", {"paths", "horizon", "burn_in", "seed", "z_threshold", "v"});
    c.verify.paths = field<std::size_t>(ver, "paths", "verify");
    c.verify.horizon = field<double>(ver, "horizon", "verify");
    c.verify.burn_in = field<double>(ver, "burn_in", "verify");
    c.verify.seed = field<std::uint64_t>(ver, "seed", "verify");
    c.verify.z_threshold = field<double>(ver, "z_threshold", "verify");
    c.verify.v = panel(ver, "v", "verify");

    const json* out = block(root, "output", {"dir", "formats"});
    c.output.dir = field<std::string>(out, "dir", "output");
    if (out && out->contains("formats")) {
        const json& f = (*out)["formats"];
        if (!f.is_array()) fail("/output/formats", "expected an array of strings");
        for (const auto& s : f) {
            if (!s.is_string() || (s != "json" && s != "csv" && s != "text"))
                fail("/output/formats", "formats are \"json\", \"csv\" and \"text\"");
            c.output.formats.push_back(s.get<std::string>());
        }
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace contagion::cli
