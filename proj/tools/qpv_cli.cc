// qpv: experiment runner. One subcommand per capability; every key of the
// config file is also a --key flag, and flags win over the file.

#include <iostream>
#include <map>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "qpv/errors.h"
#include "qpv/experiment/runner.h"

namespace {

std::vector<std::string> all_keys(const std::string& command) {
    if (command != "sweep") {
        return qpv::known_keys(command);
    }
    std::set<std::string> keys;
    for (const auto& base : qpv::experiment_commands()) {
        if (base == "sweep") {
            continue;
        }
        for (const auto& k : qpv::known_keys("sweep", base)) {
            keys.insert(k);
        }
    }
    return {keys.begin(), keys.end()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Position-verification experiment runner"};
    app.set_version_flag("--version", std::string("qpv ") + qpv::kToolVersion);
    app.require_subcommand(1);

    struct Sub {
        CLI::App* app;
        std::string config_path;
        std::map<std::string, std::string> flags;
        std::string name;
    };
    std::map<std::string, Sub> subs;
    for (const auto& command : qpv::experiment_commands()) {
        Sub& s = subs[command];
        s.app = app.add_subcommand(command, "run the " + command + " experiment");
        s.app->add_option("--config", s.config_path, "key = value file");
        if (command == "attack") {
            s.app->add_option("attack", s.name, "attack name (same as --name)");
        }
        for (const auto& key : all_keys(command)) {
            std::string flag = "--" + key;
            std::string alias = key;
            std::replace(alias.begin(), alias.end(), '-', '_');
            if (alias != key) {
                flag += ",--" + alias;
            }
            s.app->add_option(flag, s.flags[key], key);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (auto& [command, s] : subs) {
        if (!s.app->parsed()) {
            continue;
        }
        try {
            qpv::ExperimentConfig config;
            if (!s.config_path.empty()) {
                config = qpv::ExperimentConfig::load(s.config_path);
                if (!config.command.empty() && config.command != command) {
                    throw qpv::ConfigError("config file is for '" + config.command + "', not '" + command + "'");
                }
            }
            config.command = command;
            for (const auto& [key, value] : s.flags) {
                if (s.app->count("--" + key) > 0) {
                    config.set(key, value);
                }
            }
            if (!s.name.empty()) {
                config.set("name", s.name);
            }
            qpv::Report report = qpv::run_experiment(config);
            if (report.table) {
                qpv::emit_csv(*report.table, config.get_string("csv", ""));
            }
            if (config.has("output")) {
                qpv::emit_report(report, config.get_string("output", ""));
            } else {
                std::cout << qpv::report_to_json(report) << "\n";
            }
        } catch (const std::exception& e) {
            int code = qpv::exit_code_for(e);
            const char* kind = code == 2 ? "invalid config" : code == 4 ? "I/O error" : "precondition violated";
            std::cerr << "qpv " << command << ": " << kind << ": " << e.what() << "\n";
            return code;
        }
    }
    return 0;
}
