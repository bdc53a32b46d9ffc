#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "cbf/simulation.hpp"
#include "cbf/sweep.hpp"

namespace cbf {

/// Malformed or incomplete configuration. `key()` names the offending key when there is one.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(message), key_(std::move(key))
    {
    }

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. Blank lines and text after '#' are ignored.
/// Duplicate keys and lines without '=' raise ConfigError.
[[nodiscard]] KeyValues parse_key_values(std::istream& in);

/// Builds a simulation config. Every key of the experiment table is required except gamma and
/// bound_gamma_r1 (default 0); lambda2 is required only for approach = hocbf.
[[nodiscard]] SimConfig sim_config_from_keys(const KeyValues& kv);

/// Same base keys as a simulation config plus optional lambda1_{min,max,step} and
/// lambda2_{min,max,step}. lambda1 / lambda2 are accepted and ignored.
[[nodiscard]] SweepSpec sweep_spec_from_keys(const KeyValues& kv);

[[nodiscard]] SimConfig load_sim_config(const std::string& path);
[[nodiscard]] SweepSpec load_sweep_spec(const std::string& path);

/// Inverse of sim_config_from_keys; values printed in shortest round-trip form.
[[nodiscard]] std::string to_config_text(const SimConfig& config);

}  // namespace cbf
