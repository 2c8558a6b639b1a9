#include "qpv/experiment/report.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qpv/errors.h"

namespace qpv {

using nlohmann::json;

namespace {

json number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

double to_number(const json& j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "nan") {
            return std::nan("");
        }
        if (s == "inf") {
            return INFINITY;
        }
        if (s == "-inf") {
            return -INFINITY;
        }
    }
    throw std::invalid_argument("report: expected a number, got " + j.dump());
}

bool same_number(double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

}  // namespace

Metric Metric::exact_value(std::string name, double value, std::string method) {
    Metric m;
    m.name = std::move(name);
    m.value = value;
    m.exact = true;
    m.method = std::move(method);
    return m;
}

Metric Metric::sampled(std::string name, const MonteCarloResult& r) {
    Metric m;
    m.name = std::move(name);
    m.value = r.mean;
    m.exact = false;
    m.interval = r.interval;
    m.trials = r.trials;
    return m;
}

bool Metric::operator==(const Metric& o) const {
    if (name != o.name || !same_number(value, o.value) || exact != o.exact) {
        return false;
    }
    if (exact) {
        return method == o.method;
    }
    return same_number(interval.lo, o.interval.lo) && same_number(interval.hi, o.interval.hi) && trials == o.trials;
}

const Metric* Report::find(const std::string& name) const {
    for (const auto& m : metrics) {
        if (m.name == name) {
            return &m;
        }
    }
    return nullptr;
}

bool Report::operator==(const Report& o) const {
    return command == o.command && config == o.config && metrics == o.metrics && version == o.version &&
           same_number(duration_s, o.duration_s);
}

std::string report_to_json(const Report& r, int indent) {
    json config = json::object();
    config["command"] = r.command;
    for (const auto& [k, v] : r.config) {
        config[k] = v;
    }
    json metrics = json::array();
    for (const auto& m : r.metrics) {
        json j;
        j["name"] = m.name;
        j["value"] = number(m.value);
        if (m.exact) {
            j["exact"] = true;
            j["method"] = m.method;
        } else {
            j["interval"] = json::array({number(m.interval.lo), number(m.interval.hi)});
            j["trials"] = m.trials;
        }
        metrics.push_back(std::move(j));
    }
    json doc;
    doc["config"] = std::move(config);
    doc["metrics"] = std::move(metrics);
    doc["version"] = r.version;
    doc["duration_s"] = number(r.duration_s);
    return doc.dump(indent);
}

Report report_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("report: ") + e.what());
    }
    try {
        Report r;
        for (const auto& [k, v] : doc.at("config").items()) {
            if (k == "command") {
                r.command = v.get<std::string>();
            } else {
                r.config[k] = v.get<std::string>();
            }
        }
        for (const auto& j : doc.at("metrics")) {
            Metric m;
            m.name = j.at("name").get<std::string>();
            m.value = to_number(j.at("value"));
            if (j.contains("interval")) {
                m.exact = false;
                m.interval.lo = to_number(j.at("interval").at(0));
                m.interval.hi = to_number(j.at("interval").at(1));
                m.trials = j.at("trials").get<std::uint64_t>();
            } else {
                m.exact = j.at("exact").get<bool>();
                m.method = j.at("method").get<std::string>();
            }
            r.metrics.push_back(std::move(m));
        }
        r.version = doc.at("version").get<std::string>();
        r.duration_s = to_number(doc.at("duration_s"));
        return r;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("report: ") + e.what());
    }
}

void emit_report(const Report& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << report_to_json(r) << "\n";
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

Report read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

std::string csv_to_string(const CsvTable& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); i++) {
            if (i) {
                out += ',';
            }
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& row : t.rows) {
        line(row);
    }
    return out;
}

void emit_csv(const CsvTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << csv_to_string(t);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

}  // namespace qpv
