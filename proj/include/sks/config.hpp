#pragma once

// Run configuration: UTF-8 "key = value" lines with dotted section keys.
// Blank lines and lines starting with '#' are ignored; unknown keys are
// errors. Any key can be overridden from the environment as
// SKS_<KEY> with dots replaced by underscores and upper-cased, e.g.
// SKS_DOMAIN_HALF_LENGTH=8.

#include "sks/mild_solver.hpp"
#include "sks/noise.hpp"
#include "sks/spectral.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sks {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    DomainSpec domain;
    double sigma = 0.1;
    double decay = 4.0;
    SolverConfig solver;
    double horizon = 1.0;  // solver.T

    double initial_amplitude = 0.1;
    int initial_mode = 1;

    double slack = 0.05;
    int calibration_samples = 10000;
    int sweep_size = 100;
    int dependence_paths = 10;

    bool snapshots = false;

    NoiseSpec noise() const { return NoiseSpec::power_law(sigma, decay, domain.modes); }
    SpectralField initial_condition() const {
        return SpectralField::single_mode(domain.modes, initial_mode, initial_amplitude);
    }
};

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

/// Environment variable consulted for `key`.
std::string env_name(std::string_view key);

RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Applies SKS_* overrides; the default lookup reads the process environment.
void apply_env_overrides(RunConfig& cfg, const EnvLookup& lookup = {});

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view key);

/// Throws ConfigError naming the first violated key.
void validate(const RunConfig& cfg);

/// Canonical "key = value" rendering (round-trips through parse_config).
std::string serialize(const RunConfig& cfg);

}  // namespace sks
