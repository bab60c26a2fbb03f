#include "sks/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace sks {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(std::string(key), "expected a real number, got '" + std::string(v) + "'");
    return out;
}

int parse_int(std::string_view key, std::string_view v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(v) + "'");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Field {
    std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
    std::function<std::string(const RunConfig&)> get;
};

// `get` is a generic lambda returning a reference into the config, usable on
// both const and mutable instances.
template <class Get>
Field real(Get get) {
    return {[get](RunConfig& c, std::string_view k, std::string_view v) { get(c) = parse_double(k, v); },
            [get](const RunConfig& c) { return format_double(get(c)); }};
}

template <class Get>
Field integer(Get get) {
    return {[get](RunConfig& c, std::string_view k, std::string_view v) { get(c) = parse_int(k, v); },
            [get](const RunConfig& c) { return std::to_string(get(c)); }};
}

template <class Get>
Field boolean(Get get) {
    return {[get](RunConfig& c, std::string_view k, std::string_view v) { get(c) = parse_bool(k, v); },
            [get](const RunConfig& c) { return std::string(get(c) ? "true" : "false"); }};
}

#define SKS_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<std::pair<std::string, Field>>& table() {
    static const std::vector<std::pair<std::string, Field>> t = {
        {"domain.half_length", real(SKS_REF(domain.half_length))},
        {"domain.shift", real(SKS_REF(domain.shift))},
        {"domain.modes", integer(SKS_REF(domain.modes))},
        {"noise.sigma", real(SKS_REF(sigma))},
        {"noise.decay", real(SKS_REF(decay))},
        {"solver.dt", real(SKS_REF(solver.dt))},
        {"solver.T", real(SKS_REF(horizon))},
        {"solver.picard_tol", real(SKS_REF(solver.picard_tol))},
        {"solver.picard_max_iters", integer(SKS_REF(solver.picard_max_iters))},
        {"solver.save_stride", integer(SKS_REF(solver.save_stride))},
        {"solver.quad_substeps", integer(SKS_REF(solver.quad_substeps))},
        {"solver.local_min_steps", integer(SKS_REF(solver.local_min_steps))},
        {"solver.cross_check", boolean(SKS_REF(solver.picard_cross_check))},
        {"initial.amplitude", real(SKS_REF(initial_amplitude))},
        {"initial.mode", integer(SKS_REF(initial_mode))},
        {"checks.slack", real(SKS_REF(slack))},
        {"checks.calibration_samples", integer(SKS_REF(calibration_samples))},
        {"checks.sweep_size", integer(SKS_REF(sweep_size))},
        {"checks.dependence_paths", integer(SKS_REF(dependence_paths))},
        {"output.snapshots", boolean(SKS_REF(snapshots))},
    };
    return t;
}

#undef SKS_REF

const Field& lookup(std::string_view key) {
    for (const auto& [name, field] : table())
        if (name == key) return field;
    throw ConfigError(std::string(key), "unknown configuration key");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, field] : table()) k.push_back(name);
        return k;
    }();
    return keys;
}

std::string env_name(std::string_view key) {
    std::string out = "SKS_";
    for (char ch : key) out += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    lookup(key).set(cfg, key, trim(value));
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) { return lookup(key).get(cfg); }

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_env_overrides(RunConfig& cfg, const EnvLookup& lookup_env) {
    for (const auto& key : config_keys()) {
        const std::string name = env_name(key);
        std::optional<std::string> value;
        if (lookup_env) {
            value = lookup_env(name);
        } else if (const char* raw = std::getenv(name.c_str())) {
            value = raw;
        }
        if (value) set_config_value(cfg, key, *value);
    }
}

void validate(const RunConfig& c) {
    auto require = [](bool ok, const char* key, const char* message) {
        if (!ok) throw ConfigError(key, message);
    };
    require(c.domain.half_length > 0.0, "domain.half_length", "must be > 0");
    require(c.domain.shift > 0.25, "domain.shift", "must exceed 1/4 so that every eigenvalue is negative");
    require(c.domain.modes >= 1, "domain.modes", "must be >= 1");
    require(c.sigma >= 0.0, "noise.sigma", "must be >= 0");
    require(c.decay > 1.0, "noise.decay", "must exceed 1 (trace-class covariance)");
    require(c.solver.dt > 0.0, "solver.dt", "must be > 0");
    require(c.horizon > 0.0, "solver.T", "must be > 0");
    require(c.horizon >= c.solver.dt, "solver.T", "must be >= solver.dt");
    require(c.solver.picard_tol > 0.0, "solver.picard_tol", "must be > 0");
    require(c.solver.picard_max_iters >= 1, "solver.picard_max_iters", "must be >= 1");
    require(c.solver.save_stride >= 1, "solver.save_stride", "must be >= 1");
    require(c.solver.quad_substeps >= 1, "solver.quad_substeps", "must be >= 1");
    require(c.solver.local_min_steps >= 1, "solver.local_min_steps", "must be >= 1");
    require(c.initial_mode >= 1 && c.initial_mode <= c.domain.modes, "initial.mode", "must lie in 1..domain.modes");
    require(c.slack >= 0.0, "checks.slack", "must be >= 0");
    require(c.calibration_samples >= 100, "checks.calibration_samples", "must be >= 100");
    require(c.sweep_size >= 1, "checks.sweep_size", "must be >= 1");
    require(c.dependence_paths >= 1, "checks.dependence_paths", "must be >= 1");
}

std::string serialize(const RunConfig& cfg) {
    std::string out;
    for (const auto& [name, field] : table()) out += name + " = " + field.get(cfg) + "\n";
    return out;
}

}  // namespace sks
