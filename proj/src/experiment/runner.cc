#include "qpv/experiment/runner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qpv/adversary.h"
#include "qpv/attacks.h"
#include "qpv/bounds.h"
#include "qpv/errors.h"
#include "qpv/experiment/monte_carlo.h"
#include "qpv/fgen.h"
#include "qpv/protocols.h"
#include "qpv/strategy_io.h"

namespace qpv {

namespace {

// Runs a module validator; its std::invalid_argument becomes a ConfigError.
template <typename F>
auto as_config(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

int get_int_in(const ExperimentConfig& c, const std::string& key, long long fallback, long long lo, long long hi) {
    long long v = c.get_int(key, fallback);
    if (v < lo || v > hi) {
        throw ConfigError("key '" + key + "' must be in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "], got " + std::to_string(v));
    }
    return static_cast<int>(v);
}

int threads_of(const ExperimentConfig& c) {
    return get_int_in(c, "threads", 0, 0, 4096);
}

Geometry geometry_of(const ExperimentConfig& c) {
    Geometry g = symmetric_geometry(1.0);
    g.v0 = c.get_double("v0", g.v0);
    g.pos = c.get_double("pos", g.pos);
    g.v1 = c.get_double("v1", g.v1);
    g.alice = c.get_optional_double("alice");
    g.bob = c.get_optional_double("bob");
    g.tolerance = c.get_double("tolerance", g.tolerance);
    g.prover_delay = c.get_double("prover-delay", g.prover_delay);
    g.alice_delay = c.get_double("alice-delay", g.alice_delay);
    g.bob_delay = c.get_double("bob-delay", g.bob_delay);
    if (g.alice.has_value() != g.bob.has_value()) {
        throw ConfigError("keys 'alice' and 'bob' must be given together");
    }
    as_config("geometry", [&] { g.validate(); });
    return g;
}

// f for (n, m) from the function keys. Reading a file can throw IoError.
FunctionTable function_of(const ExperimentConfig& c, int n, int m) {
    std::string kind = c.get_string("function", "seeded");
    FunctionTable f = as_config("key 'function'", [&]() -> FunctionTable {
        if (kind == "seeded") {
            std::uint64_t s = c.get_u64("function-seed", c.seed());
            return sample_function(n, m, s, n <= kMaxExplicitN && m <= 64 ? FunctionForm::explicit_table : FunctionForm::seeded);
        }
        if (kind == "xor") {
            return FunctionTable::xor_function(n);
        }
        if (kind == "select-y") {
            return FunctionTable::select_y(n);
        }
        if (kind == "constant") {
            return FunctionTable::constant(n, BitString(static_cast<std::size_t>(m)));
        }
        if (kind == "file") {
            return FunctionTable::load(c.require_string("function-file"));
        }
        throw ConfigError("key 'function': expected seeded, xor, select-y, constant or file, got '" + kind + "'");
    });
    if (f.n() != n || f.m() != m) {
        throw ConfigError("key 'function': f has (n, m) = (" + std::to_string(f.n()) + ", " + std::to_string(f.m()) +
                          ") but the experiment needs (" + std::to_string(n) + ", " + std::to_string(m) + ")");
    }
    return f;
}

Picture picture_of(const ExperimentConfig& c) {
    std::string p = c.get_string("picture", "prepare-and-measure");
    if (p == "prepare-and-measure") {
        return Picture::prepare_and_measure;
    }
    if (p == "purified") {
        return Picture::purified;
    }
    throw ConfigError("key 'picture': expected prepare-and-measure or purified, got '" + p + "'");
}

RoutingCheck check_of(const ExperimentConfig& c, RoutingCheck fallback) {
    if (!c.has("check")) {
        return fallback;
    }
    return as_config("key 'check'", [&] { return parse_routing_check(c.get_string("check", "")); });
}

ProtocolVariant variant_of(const ExperimentConfig& c, ProtocolVariant fallback) {
    if (!c.has("variant")) {
        return fallback;
    }
    return as_config("key 'variant'", [&] { return parse_protocol_variant(c.get_string("variant", "")); });
}

BoundParams bound_params_of(const ExperimentConfig& c) {
    BoundParams p;
    p.variant = as_config("key 'variant'", [&] { return parse_bound_variant(c.get_string("variant", "bb84")); });
    p.n = get_int_in(c, "n", p.n, 0, 1 << 20);
    p.m = get_int_in(c, "m", p.m, 0, 1 << 20);
    p.gamma = c.get_double("gamma", p.gamma);
    p.epsilon = c.get_double("epsilon", p.epsilon);
    p.delta = c.get_double("delta", p.delta);
    p.c = c.get_double("c", p.c);
    p.tight_routing_m1 = c.get_bool("tight-routing-m1", p.tight_routing_m1);
    as_config("bound parameters", [&] { p.validate(false); });
    return p;
}

// ---- simulate ----

struct SimulatePlan {
    ProtocolParams params;
    Geometry geom;
    RoundOptions options;
    std::optional<FunctionTable> f;
};

SimulatePlan plan_simulate(const ExperimentConfig& c) {
    SimulatePlan p;
    p.params.variant = variant_of(c, ProtocolVariant::fbb84);
    p.params.n = get_int_in(c, "n", 4, 0, 1 << 20);
    p.params.m = get_int_in(c, "m", 8, 1, 1 << 20);
    p.params.gamma = c.get_double("gamma", 0.0);
    p.params.noise = as_config("key 'noise'", [&] { return parse_noise(c.get_string("noise", "none")); });
    p.params.quantum_speed = c.get_double("quantum-speed", 1.0);
    as_config("protocol parameters", [&] { p.params.validate(); });
    p.geom = geometry_of(c);
    p.options.picture = picture_of(c);
    p.options.check = check_of(c, RoutingCheck::delayed_basis);
    if (p.options.picture == Picture::purified && p.params.m > kMaxQubits - 1) {
        throw ConfigError("key 'm': the purified picture simulates at most " + std::to_string(kMaxQubits - 1) +
                          " qubits per round");
    }
    if (is_plain(p.params.variant)) {
        p.f = FunctionTable::select_y(1);
    } else {
        p.f = function_of(c, p.params.n, p.params.m);
    }
    return p;
}

void exec_simulate(const ExperimentConfig& c, const SimulatePlan& p, Report& r) {
    std::uint64_t trials = c.trials();
    if (trials == 0) {
        return;
    }
    const FunctionTable& f = *p.f;
    auto mc = monte_carlo(
        [&](Rng& rng) { return run_round(p.params, f, p.geom, rng, p.options).verdict == Verdict::accept; }, trials,
        c.seed(), threads_of(c));
    r.metrics.push_back(Metric::sampled("acceptance", mc));
    r.metrics.push_back(Metric::exact_value(
        "acceptance_analytic", analytic_acceptance(p.params, p.options.picture, p.options.check), "binomial-tail"));
    r.metrics.push_back(Metric::exact_value(
        "error_rate", honest_error_rate(p.params, p.options.picture, p.options.check), "closed-form"));
    r.metrics.push_back(Metric::exact_value("error_budget", error_budget(p.params.gamma, p.params.m), "closed-form"));
}

// ---- attack ----

struct AttackPlan {
    std::string name;
    ProtocolVariant variant = ProtocolVariant::fbb84;
    int n = 2;
    int m = 1;
    double gamma = 0;
    RoutingCheck check = RoutingCheck::bell_projection;
    Geometry geom;
    std::optional<Strategy> dense;
    std::optional<Strategy> component;
    std::optional<FunctionTable> f;
    int resolution = 100;
};

// Largest m for which each named attack is built densely.
int dense_limit(const std::string& name) {
    if (name == "routing-guess") {
        return 4;
    }
    if (name == "routing-forward") {
        return 3;
    }
    return 6;
}

AttackPlan plan_attack(const ExperimentConfig& c) {
    AttackPlan p;
    p.name = c.require_string("name");
    p.m = get_int_in(c, "m", 1, 1, 1 << 20);
    p.gamma = c.get_double("gamma", 0.0);
    if (p.gamma < 0 || p.gamma >= 0.5) {
        throw ConfigError("key 'gamma' must be in [0, 0.5)");
    }
    p.check = check_of(c, RoutingCheck::bell_projection);
    p.geom = geometry_of(c);
    if (p.name == "brute-force-fis") {
        p.resolution = get_int_in(c, "resolution", 100, 2, 2000);
        return p;
    }
    if (p.name == "epr-teleport") {
        p.variant = variant_of(c, ProtocolVariant::plain_bb84);
        return p;
    }
    std::set<std::string> names = {"breidbart", "computational-guess", "routing-guess", "routing-forward", "file"};
    if (!names.count(p.name)) {
        std::string all;
        for (const auto& s : named_attacks()) {
            all += s + ", ";
        }
        throw ConfigError("key 'name': unknown attack '" + p.name + "' (known: " + all + "brute-force-fis, file)");
    }
    int destination = get_int_in(c, "destination", 0, 0, 1);
    auto build = [&](int m) {
        return p.name == "routing-forward" ? routing_forward_attack(m, destination) : make_named_attack(p.name, m);
    };
    if (p.name == "file") {
        p.dense = load_strategy(c.require_string("strategy-file"));
        if (c.has("m") && p.dense->m != p.m) {
            throw ConfigError("key 'm' disagrees with the strategy file (m = " + std::to_string(p.dense->m) + ")");
        }
        p.m = p.dense->m;
    } else {
        if (p.m <= dense_limit(p.name)) {
            p.dense = build(p.m);
        }
        p.component = build(1);
    }
    StrategyKind kind = p.dense ? p.dense->kind : p.component->kind;
    p.variant = variant_of(c, kind == StrategyKind::bb84 ? ProtocolVariant::fbb84 : ProtocolVariant::frouting);
    if (is_routing(p.variant) != (kind == StrategyKind::routing)) {
        throw ConfigError("key 'variant': " + to_string(p.variant) + " does not match a " +
                          (kind == StrategyKind::bb84 ? "BB84" : "routing") + " strategy");
    }
    if (is_plain(p.variant)) {
        if (p.m > kMaxTableN) {
            throw ConfigError("key 'm': plain variants tabulate z = y, so m <= " + std::to_string(kMaxTableN));
        }
        p.n = p.m;
        p.f = FunctionTable::select_y(p.m);
    } else {
        int fallback = p.dense && !p.dense->depends_only_on_z() ? p.dense->n : 2;
        p.n = get_int_in(c, "n", fallback, 1, kMaxTableN);
        p.f = function_of(c, p.n, p.m);
    }
    return p;
}

void push_bound_reference(const ExperimentConfig& c, const AttackPlan& p, Report& r) {
    BoundParams b;
    b.variant = is_routing(p.variant) ? BoundVariant::routing : BoundVariant::bb84;
    b.n = p.n;
    b.m = p.m;
    b.gamma = p.gamma;
    b.delta = c.get_double("delta", b.delta);
    b.c = c.get_double("c", b.c);
    b.epsilon = c.get_double("epsilon", b.epsilon);
    r.metrics.push_back(Metric::exact_value("soundness_asymptote", soundness_asymptote(b), "closed-form"));
}

void exec_attack(const ExperimentConfig& c, const AttackPlan& p, Report& r) {
    std::uint64_t trials = c.trials();
    if (p.name == "brute-force-fis") {
        FisOptimum opt = brute_force_fis_m1(p.resolution);
        r.metrics.push_back(Metric::exact_value("success", opt.best, "grid-search"));
        r.metrics.push_back(Metric::exact_value("breidbart_fidelity", opt.breidbart_fidelity, "grid-search"));
        r.metrics.push_back(Metric::exact_value("grid_points", static_cast<double>(opt.points), "grid-search"));
        r.metrics.push_back(Metric::exact_value("lambda0", lambda0(), "closed-form"));
        return;
    }
    if (p.name == "epr-teleport") {
        EprTeleportResult res = epr_teleport_attack(p.variant, p.m, p.geom);
        r.metrics.push_back(Metric::exact_value("success", res.success, "branch-enumeration"));
        r.metrics.push_back(Metric::exact_value("success_per_round", res.per_round, "branch-enumeration"));
        r.metrics.push_back(Metric::exact_value("timing_ok", res.timing_ok ? 1.0 : 0.0, "light-cone"));
        r.metrics.push_back(Metric::exact_value("qubits", p.m, "declared"));
        if (trials > 0) {
            int m = p.m;
            r.metrics.push_back(Metric::sampled(
                "success_sampled",
                monte_carlo([m](Rng& rng) { return epr_teleport_round(m, rng); }, trials, c.seed(), threads_of(c))));
        }
        return;
    }
    EvalOptions opts;
    opts.check = p.check;
    const FunctionTable& f = *p.f;
    if (p.dense) {
        r.metrics.push_back(
            Metric::exact_value("success", attack_success(*p.dense, f, p.gamma, opts).mean, "dense-statevector"));
    } else {
        r.metrics.push_back(
            Metric::exact_value("success", product_success(*p.component, p.m, f, p.gamma, opts).mean, "product-dp"));
    }
    int q = p.dense ? p.dense->q : p.component->q * p.m;
    r.metrics.push_back(Metric::exact_value("qubits", q, "declared"));
    push_bound_reference(c, p, r);
    if (trials > 0) {
        if (!p.dense) {
            throw PreconditionError("sampling needs the dense strategy; attack '" + p.name + "' is dense only for m <= " +
                                    std::to_string(dense_limit(p.name)));
        }
        AttackSampler sampler(*p.dense, f, p.gamma, p.check);
        r.metrics.push_back(Metric::sampled(
            "success_sampled",
            monte_carlo([&sampler](Rng& rng) { return sampler.sample(rng); }, trials, c.seed(), threads_of(c))));
    }
}

// ---- bounds ----

void exec_bounds(const BoundParams& p, Report& r) {
    SoundnessBound b = soundness_bound(p);
    Interval ci = chernoff_interval(p.n, p.m, p.epsilon);
    r.metrics.push_back(Metric::exact_value("soundness_bound", b.value, "closed-form"));
    r.metrics.push_back(Metric::exact_value("soundness_trivial", b.trivial ? 1.0 : 0.0, "closed-form"));
    r.metrics.push_back(Metric::exact_value("soundness_asymptote", soundness_asymptote(p), "closed-form"));
    r.metrics.push_back(Metric::exact_value("rate_constant", rate_constant(p.variant, p.gamma), "closed-form"));
    r.metrics.push_back(Metric::exact_value("base_rate", base_rate(p), "closed-form"));
    r.metrics.push_back(Metric::exact_value("qubit_threshold", qubit_threshold(p), "closed-form"));
    r.metrics.push_back(Metric::exact_value("max_qubits", max_qubits(p), "closed-form"));
    r.metrics.push_back(Metric::exact_value("failure_probability_log2", failure_probability_log2(p), "closed-form"));
    r.metrics.push_back(Metric::exact_value("f_star_condition", f_star_condition(p.n, p.m, p.epsilon) ? 1.0 : 0.0,
                                            "closed-form"));
    r.metrics.push_back(Metric::exact_value("concentration_lo", ci.lo, "closed-form"));
    r.metrics.push_back(Metric::exact_value("concentration_hi", ci.hi, "closed-form"));
}

// ---- thresholds ----

struct ThresholdPlan {
    std::vector<BoundVariant> variants;
    int n = 100;
    double delta = 1e-5;
    double c = 0.999;
    double tol = 1e-6;
};

ThresholdPlan plan_thresholds(const ExperimentConfig& c) {
    ThresholdPlan p;
    std::string v = c.get_string("variant", "both");
    if (v == "both") {
        p.variants = {BoundVariant::bb84, BoundVariant::routing};
    } else {
        p.variants = {as_config("key 'variant'", [&] { return parse_bound_variant(v); })};
    }
    p.n = get_int_in(c, "n", p.n, 2, 1 << 20);
    p.delta = c.get_double("delta", p.delta);
    p.c = c.get_double("c", p.c);
    p.tol = c.get_double("tol", p.tol);
    if (!(p.tol > 0 && p.tol < 0.1)) {
        throw ConfigError("key 'tol' must be in (0, 0.1)");
    }
    for (auto variant : p.variants) {
        BoundParams b;
        b.variant = variant;
        b.n = p.n;
        b.delta = p.delta;
        b.c = p.c;
        as_config("threshold parameters", [&] { b.validate(false); });
    }
    return p;
}

void exec_thresholds(const ThresholdPlan& p, Report& r) {
    for (auto v : p.variants) {
        std::string s = to_string(v);
        BoundParams b;
        b.variant = v;
        b.n = p.n;
        b.m = 1;
        b.gamma = 0;
        b.delta = p.delta;
        b.c = p.c;
        r.metrics.push_back(Metric::exact_value("critical_gamma_" + s, critical_gamma(v, p.delta, p.tol), "bisection"));
        r.metrics.push_back(
            Metric::exact_value("sequential_tolerance_" + s, sequential_tolerance(v, p.delta, p.c), "closed-form"));
        r.metrics.push_back(Metric::exact_value("one_round_asymptote_" + s, soundness_asymptote(b), "closed-form"));
        r.metrics.push_back(Metric::exact_value("qubit_threshold_" + s, qubit_threshold(b), "closed-form"));
        r.metrics.push_back(
            Metric::exact_value("max_qubits_offset_" + s, max_qubits(b) - p.n / 2.0, "closed-form"));
    }
}

// ---- sample-f ----

struct SamplePlan {
    int n = 6;
    int m = 2;
    double epsilon = 0.05;
    bool star = false;
};

SamplePlan plan_sample(const ExperimentConfig& c) {
    SamplePlan p;
    p.n = get_int_in(c, "n", p.n, 1, kMaxEnumerationBits / 2);
    p.m = get_int_in(c, "m", p.m, 1, kMaxDistributionM);
    p.epsilon = c.get_double("epsilon", p.epsilon);
    if (!(p.epsilon > 0 && p.epsilon < 1)) {
        throw ConfigError("key 'epsilon' must be in (0, 1)");
    }
    p.star = c.get_bool("star", false);
    if (p.n > kMaxExplicitN) {
        throw ConfigError("key 'n': membership is checked on explicit tables, n <= " + std::to_string(kMaxExplicitN));
    }
    return p;
}

void exec_sample(const ExperimentConfig& c, const SamplePlan& p, Report& r) {
    Interval ci = chernoff_interval(p.n, p.m, p.epsilon);
    r.metrics.push_back(Metric::exact_value("concentration_lo", ci.lo, "closed-form"));
    r.metrics.push_back(Metric::exact_value("concentration_hi", ci.hi, "closed-form"));
    r.metrics.push_back(
        Metric::exact_value("membership_floor", 1 - p.epsilon * std::ldexp(1.0, p.m), "union-bound"));
    std::uint64_t trials = c.trials();
    if (trials > 0) {
        auto mc = monte_carlo(
            [&p](Rng& rng) { return membership(sample_function(p.n, p.m, rng.next_u64()), p.epsilon, p.star); },
            trials, c.seed(), threads_of(c));
        r.metrics.push_back(Metric::sampled("membership_rate", mc));
    }
    if (c.has("member-output")) {
        MemberSample s = resample_until_member(p.n, p.m, p.epsilon, p.star, c.seed());
        s.f.save(c.get_string("member-output", ""));
        r.metrics.push_back(Metric::exact_value("resample_attempts", s.attempts, "resample-until-member"));
    }
}

// ---- dispatch ----

const std::set<std::string> kSweepKeys = {"base", "param", "values", "param2", "values2", "csv"};

Report run_single(const ExperimentConfig& c);

struct SweepPlan {
    std::string param;
    std::vector<std::string> values;
    std::string param2;
    std::vector<std::string> values2;
    std::vector<ExperimentConfig> points;
};

SweepPlan plan_sweep(const ExperimentConfig& c) {
    SweepPlan p;
    std::string base = c.require_string("base");
    c.require_string("csv");
    p.param = ExperimentConfig::normalize_key(c.require_string("param"));
    p.values = split_list(c.require_string("values"));
    if (p.values.empty()) {
        throw ConfigError("key 'values' lists no points");
    }
    if (c.has("param2") != c.has("values2")) {
        throw ConfigError("keys 'param2' and 'values2' must be given together");
    }
    if (c.has("param2")) {
        p.param2 = ExperimentConfig::normalize_key(c.get_string("param2", ""));
        p.values2 = split_list(c.get_string("values2", ""));
        if (p.values2.empty()) {
            throw ConfigError("key 'values2' lists no points");
        }
    } else {
        p.values2 = {""};
    }
    auto base_keys = known_keys(base);
    auto check_param = [&](const std::string& k, const std::string& key_name) {
        if (k == "seed" || std::find(base_keys.begin(), base_keys.end(), k) == base_keys.end()) {
            throw ConfigError("key '" + key_name + "': '" + k + "' is not a sweepable key of " + base);
        }
    };
    check_param(p.param, "param");
    if (!p.param2.empty()) {
        check_param(p.param2, "param2");
        if (p.param2 == p.param) {
            throw ConfigError("keys 'param' and 'param2' must differ");
        }
    }
    ExperimentConfig proto;
    proto.command = base;
    for (const auto& [k, v] : c.values) {
        if (!kSweepKeys.count(k) && k != "output") {
            proto.values[k] = v;
        }
    }
    for (const auto& v1 : p.values) {
        for (const auto& v2 : p.values2) {
            ExperimentConfig point = proto;
            point.values[p.param] = v1;
            if (!p.param2.empty()) {
                point.values[p.param2] = v2;
            }
            validate_config(point);
            p.points.push_back(std::move(point));
        }
    }
    return p;
}

std::string format_number(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

void exec_sweep(const SweepPlan& p, Report& r) {
    CsvTable table;
    table.header.push_back(p.param);
    if (!p.param2.empty()) {
        table.header.push_back(p.param2);
    }
    std::size_t fixed = table.header.size();
    for (const auto& point : p.points) {
        Report sub = run_single(point);
        if (table.header.size() == fixed) {
            for (const auto& m : sub.metrics) {
                table.header.push_back(m.name);
                if (!m.exact) {
                    table.header.push_back(m.name + "_lo");
                    table.header.push_back(m.name + "_hi");
                    table.header.push_back(m.name + "_trials");
                }
            }
        }
        std::vector<std::string> row(table.header.size());
        row[0] = point.get_string(p.param, "");
        std::string label = p.param + "=" + row[0];
        if (!p.param2.empty()) {
            row[1] = point.get_string(p.param2, "");
            label += "," + p.param2 + "=" + row[1];
        }
        for (const auto& m : sub.metrics) {
            Metric tagged = m;
            tagged.name = m.name + "[" + label + "]";
            r.metrics.push_back(tagged);
            auto it = std::find(table.header.begin() + static_cast<long>(fixed), table.header.end(), m.name);
            if (it == table.header.end()) {
                continue;
            }
            auto col = static_cast<std::size_t>(it - table.header.begin());
            row[col] = format_number(m.value);
            if (!m.exact && col + 3 < row.size() && table.header[col + 1] == m.name + "_lo") {
                row[col + 1] = format_number(m.interval.lo);
                row[col + 2] = format_number(m.interval.hi);
                row[col + 3] = std::to_string(m.trials);
            }
        }
        table.rows.push_back(std::move(row));
    }
    r.table = std::move(table);
}

struct Plan {
    std::optional<SimulatePlan> simulate;
    std::optional<AttackPlan> attack;
    std::optional<BoundParams> bounds;
    std::optional<ThresholdPlan> thresholds;
    std::optional<SamplePlan> sample;
    std::optional<SweepPlan> sweep;
};

Plan make_plan(const ExperimentConfig& c) {
    check_keys(c);
    threads_of(c);
    c.trials();
    Plan p;
    if (c.command == "simulate") {
        p.simulate = plan_simulate(c);
    } else if (c.command == "attack") {
        p.attack = plan_attack(c);
    } else if (c.command == "bounds") {
        p.bounds = bound_params_of(c);
    } else if (c.command == "thresholds") {
        p.thresholds = plan_thresholds(c);
    } else if (c.command == "sample-f") {
        p.sample = plan_sample(c);
    } else {
        p.sweep = plan_sweep(c);
    }
    return p;
}

Report execute(const ExperimentConfig& c, const Plan& p) {
    Report r;
    r.command = c.command;
    r.config = c.values;
    try {
        if (p.simulate) {
            exec_simulate(c, *p.simulate, r);
        } else if (p.attack) {
            exec_attack(c, *p.attack, r);
        } else if (p.bounds) {
            exec_bounds(*p.bounds, r);
        } else if (p.thresholds) {
            exec_thresholds(*p.thresholds, r);
        } else if (p.sample) {
            exec_sample(c, *p.sample, r);
        } else if (p.sweep) {
            exec_sweep(*p.sweep, r);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const PreconditionError&) {
        throw;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw PreconditionError(c.command + ": " + e.what());
    }
    return r;
}

Report run_single(const ExperimentConfig& c) {
    return execute(c, make_plan(c));
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
    make_plan(config);
}

Report run_experiment(const ExperimentConfig& config) {
    auto start = std::chrono::steady_clock::now();
    Report r = run_single(config);
    r.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) {
        return 2;
    }
    if (dynamic_cast<const IoError*>(&e)) {
        return 4;
    }
    return 3;
}

}  // namespace qpv
