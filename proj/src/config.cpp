#include "fracdyn/config.hpp"

#include <json.hpp>
#include <stdexcept>

namespace fracdyn::cli {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& key, double fallback, bool required) {
    if (!j.contains(key)) {
        if (required)
            throw std::invalid_argument("config." + key + ": missing required field");
        return fallback;
    }
    if (!j[key].is_number())
        throw std::invalid_argument("config." + key + ": expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer())
        throw std::invalid_argument("config." + key + ": expected an integer");
    return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string())
        throw std::invalid_argument("config." + key + ": expected a string");
    return j[key].get<std::string>();
}

template <class T>
std::vector<T> get_array(const json& j, const std::string& key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array())
        throw std::invalid_argument("config." + key + ": expected an array");
    std::vector<T> out;
    for (const auto& v : j[key]) {
        if (!v.is_number())
            throw std::invalid_argument("config." + key + ": expected numeric entries");
        out.push_back(v.get<T>());
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");

    RunConfig c;
    c.alpha = get_number(j, "alpha", c.alpha, /*required=*/true);
    c.p = get_number(j, "p", c.p, false);
    c.T = get_number(j, "T", c.T, false);
    c.N = get_int(j, "N", c.N);
    c.beta = get_number(j, "beta", c.beta, false);
    c.r = get_string(j, "r", c.r);
    c.F = get_string(j, "F", c.F);
    c.phi = get_string(j, "phi", c.phi);
    c.psi = get_string(j, "psi", c.psi);
    c.h = get_number(j, "h", c.h, false);
    c.tol = get_number(j, "tol", c.tol, false);
    c.max_iter = get_int(j, "max_iter", c.max_iter);
    c.lambda = get_number(j, "lambda", c.lambda, false);
    c.H = get_number(j, "H", c.H, false);
    c.eps_list = get_array<double>(j, "eps_list", c.eps_list);
    c.N_list = get_array<int>(j, "N_list", c.N_list);

    if (!(c.alpha > 0.0 && c.alpha <= 1.0))
        throw std::invalid_argument("config.alpha: alpha must lie in (0,1]");
    if (!(c.p >= 2.0)) throw std::invalid_argument("config.p: p must be >= 2");
    if (!(c.T > 0.0)) throw std::invalid_argument("config.T: T must be positive");
    if (c.N < 2) throw std::invalid_argument("config.N: N must be >= 2");
    if (!(c.beta > 0.0)) throw std::invalid_argument("config.beta: beta must be positive");
    if (!(c.h > 0.0)) throw std::invalid_argument("config.h: h must be positive");
    if (!(c.tol > 0.0)) throw std::invalid_argument("config.tol: tol must be positive");
    if (c.max_iter < 1) throw std::invalid_argument("config.max_iter: must be >= 1");
    if (!(c.lambda >= 1.0)) throw std::invalid_argument("config.lambda: lambda must be >= 1");
    if (!(c.H >= 0.0)) throw std::invalid_argument("config.H: H must be >= 0");
    for (double e : c.eps_list)
        if (!(e > 0.0)) throw std::invalid_argument("config.eps_list: entries must be positive");
    if (c.N_list.size() < 2)
        throw std::invalid_argument("config.N_list: need at least two truncation lengths");
    return c;
}

}  // namespace fracdyn::cli
