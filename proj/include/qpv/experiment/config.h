#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpv {

/// Invalid configuration (CLI exit code 2). The message names the key.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {
    }
};

/// A module precondition failed while running (CLI exit code 3).
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {
    }
};

inline const std::vector<std::string>& experiment_commands() {
    static const std::vector<std::string> c = {"simulate", "attack", "bounds", "thresholds", "sample-f", "sweep"};
    return c;
}

/// Flat key/value configuration for one command. Keys use dashes;
/// underscores are accepted and normalized.
struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> values;

    static std::string normalize_key(const std::string& key);

    /// `key = value` lines; `#` starts a comment; blank lines ignored.
    /// Throws ConfigError with the line number on malformed input.
    static ExperimentConfig parse(std::istream& in, const std::string& source = "<config>");
    /// Throws IoError when the file cannot be opened.
    static ExperimentConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::optional<std::string> find(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::optional<double> get_optional_double(const std::string& key) const;

    /// The master seed; throws ConfigError when absent.
    std::uint64_t seed() const;
    std::uint64_t trials() const { return get_u64("trials", 0); }
};

/// Keys accepted by `command`. For sweep this includes the base command's keys.
std::vector<std::string> known_keys(const std::string& command, const std::string& sweep_base = "");

/// Checks the command name, the key set and the master seed.
void check_keys(const ExperimentConfig& config);

/// Comma-separated list, whitespace trimmed.
std::vector<std::string> split_list(const std::string& s);

}  // namespace qpv
