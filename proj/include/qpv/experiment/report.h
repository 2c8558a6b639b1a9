#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpv/experiment/monte_carlo.h"
#include "qpv/stats.h"

namespace qpv {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exact metrics carry a method tag; sampled metrics carry an interval and
/// their trial count.
struct Metric {
    std::string name;
    double value = 0;
    bool exact = true;
    std::string method;
    Interval interval;
    std::uint64_t trials = 0;

    static Metric exact_value(std::string name, double value, std::string method);
    static Metric sampled(std::string name, const MonteCarloResult& r);

    bool operator==(const Metric& o) const;
};

/// Sweep output: one row per parameter point.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::string command;
    std::map<std::string, std::string> config;
    std::vector<Metric> metrics;
    std::string version = kToolVersion;
    double duration_s = 0;
    /// Not part of the JSON document.
    std::optional<CsvTable> table;

    const Metric* find(const std::string& name) const;

    /// Compares the JSON fields only.
    bool operator==(const Report& o) const;
};

/// JSON document with keys config, metrics, version, duration_s. The
/// command name is echoed as config.command. Non-finite values are written
/// as the strings "inf", "-inf", "nan".
std::string report_to_json(const Report& r, int indent = 2);
/// Throws std::invalid_argument on malformed documents.
Report report_from_json(const std::string& text);

/// Throws IoError when the file cannot be written.
void emit_report(const Report& r, const std::string& path);
Report read_report(const std::string& path);

std::string csv_to_string(const CsvTable& t);
void emit_csv(const CsvTable& t, const std::string& path);

}  // namespace qpv
