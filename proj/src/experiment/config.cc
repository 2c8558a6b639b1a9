#include "qpv/experiment/config.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>

#include "qpv/errors.h"

namespace qpv {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::vector<std::string> kCommon = {"seed", "trials", "threads", "output"};
const std::vector<std::string> kGeometry = {"v0",        "pos",          "v1",          "alice", "bob",
                                            "tolerance", "prover-delay", "alice-delay", "bob-delay"};
const std::vector<std::string> kFunction = {"function", "function-seed", "function-file"};

std::vector<std::string> command_keys(const std::string& command) {
    std::vector<std::string> k;
    auto add = [&](const std::vector<std::string>& v) { k.insert(k.end(), v.begin(), v.end()); };
    if (command == "simulate") {
        add({"variant", "n", "m", "gamma", "noise", "quantum-speed", "picture", "check"});
        add(kGeometry);
        add(kFunction);
    } else if (command == "attack") {
        add({"name", "variant", "n", "m", "gamma", "epsilon", "delta", "c", "check", "destination", "resolution",
             "strategy-file", "quantum-speed"});
        add(kGeometry);
        add(kFunction);
    } else if (command == "bounds") {
        add({"variant", "n", "m", "gamma", "epsilon", "delta", "c", "tight-routing-m1"});
    } else if (command == "thresholds") {
        add({"variant", "n", "delta", "c", "tol"});
    } else if (command == "sample-f") {
        add({"n", "m", "epsilon", "star", "member-output"});
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return k;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
    throw ConfigError("key '" + key + "': expected " + expected + ", got '" + value + "'");
}

}  // namespace

std::string ExperimentConfig::normalize_key(const std::string& key) {
    std::string k = trim(key);
    while (!k.empty() && k.front() == '-') {
        k.erase(k.begin());
    }
    std::replace(k.begin(), k.end(), '_', '-');
    return k;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::string& source) {
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = normalize_key(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        }
        std::string value = trim(line.substr(eq + 1));
        if (key == "command") {
            c.command = value;
        } else {
            c.values[key] = value;
        }
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return parse(in, path);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    values[normalize_key(key)] = value;
}

bool ExperimentConfig::has(const std::string& key) const {
    return values.count(key) != 0;
}

std::optional<std::string> ExperimentConfig::find(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
    return find(key).value_or(fallback);
}

std::string ExperimentConfig::require_string(const std::string& key) const {
    auto v = find(key);
    if (!v || v->empty()) {
        throw ConfigError("missing required key '" + key + "'");
    }
    return *v;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const {
    auto v = find(key);
    if (!v) {
        return fallback;
    }
    errno = 0;
    char* end = nullptr;
    long long r = std::strtoll(v->c_str(), &end, 10);
    if (v->empty() || *end != '\0' || errno == ERANGE) {
        bad_value(key, *v, "an integer");
    }
    return r;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto v = find(key);
    if (!v) {
        return fallback;
    }
    errno = 0;
    char* end = nullptr;
    unsigned long long r = std::strtoull(v->c_str(), &end, 10);
    if (v->empty() || (*v)[0] == '-' || *end != '\0' || errno == ERANGE) {
        bad_value(key, *v, "a non-negative integer");
    }
    return r;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    auto v = get_optional_double(key);
    return v ? *v : fallback;
}

std::optional<double> ExperimentConfig::get_optional_double(const std::string& key) const {
    auto v = find(key);
    if (!v) {
        return std::nullopt;
    }
    char* end = nullptr;
    double r = std::strtod(v->c_str(), &end);
    if (v->empty() || *end != '\0' || !std::isfinite(r)) {
        bad_value(key, *v, "a finite number");
    }
    return r;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    auto v = find(key);
    if (!v) {
        return fallback;
    }
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") {
        return true;
    }
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") {
        return false;
    }
    bad_value(key, *v, "a boolean");
}

std::uint64_t ExperimentConfig::seed() const {
    if (!has("seed")) {
        throw ConfigError("missing required key 'seed' (the master seed)");
    }
    return get_u64("seed", 0);
}

std::vector<std::string> known_keys(const std::string& command, const std::string& sweep_base) {
    std::vector<std::string> k = kCommon;
    if (command == "sweep") {
        if (sweep_base.empty() || sweep_base == "sweep") {
            throw ConfigError("key 'base': sweep needs a base command other than sweep");
        }
        for (const auto& s : {"base", "param", "values", "param2", "values2", "csv"}) {
            k.push_back(s);
        }
        auto b = command_keys(sweep_base);
        k.insert(k.end(), b.begin(), b.end());
    } else {
        auto c = command_keys(command);
        k.insert(k.end(), c.begin(), c.end());
    }
    return k;
}

void check_keys(const ExperimentConfig& config) {
    if (config.command.empty()) {
        throw ConfigError("no command given");
    }
    if (std::find(experiment_commands().begin(), experiment_commands().end(), config.command) ==
        experiment_commands().end()) {
        throw ConfigError("unknown command '" + config.command + "'");
    }
    auto keys = known_keys(config.command, config.get_string("base", ""));
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : config.values) {
        if (!allowed.count(k)) {
            throw ConfigError("key '" + k + "' is not accepted by " + config.command);
        }
    }
    config.seed();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) {
            comma = s.size();
        }
        std::string item = trim(s.substr(start, comma - start));
        if (!item.empty()) {
            out.push_back(item);
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace qpv
