#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "qpv/bounds.h"
#include "qpv/errors.h"
#include "qpv/experiment/config.h"
#include "qpv/experiment/monte_carlo.h"
#include "qpv/experiment/report.h"
#include "qpv/experiment/runner.h"
#include "qpv/protocols.h"

using namespace qpv;

namespace {

ExperimentConfig make(const std::string& command, std::map<std::string, std::string> values) {
    ExperimentConfig c;
    c.command = command;
    c.values = std::move(values);
    return c;
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qpv_test_" + name)).string();
}

Report without_duration(Report r) {
    r.duration_s = 0;
    return r;
}

}  // namespace

TEST(config, parse_file_syntax) {
    std::istringstream in(
        "# comment\n"
        "seed = 42\n"
        "\n"
        "quantum_speed = 0.5   # trailing comment\n"
        "  noise=flip:0.1\n"
        "command = simulate\n");
    auto c = ExperimentConfig::parse(in);
    EXPECT_EQ(c.command, "simulate");
    EXPECT_EQ(c.seed(), 42u);
    EXPECT_DOUBLE_EQ(c.get_double("quantum-speed", 1), 0.5);
    EXPECT_EQ(c.get_string("noise", ""), "flip:0.1");
    EXPECT_EQ(c.values.size(), 3u);
}

TEST(config, malformed_line_names_line) {
    std::istringstream in("seed = 1\nnot a pair\n");
    try {
        ExperimentConfig::parse(in, "f.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("f.cfg:2"), std::string::npos);
    }
}

TEST(config, typed_getters_reject_garbage) {
    auto c = make("simulate", {{"seed", "1"}, {"m", "3x"}, {"gamma", "nan"}, {"star", "maybe"}, {"trials", "-4"}});
    EXPECT_THROW(c.get_int("m", 0), ConfigError);
    EXPECT_THROW(c.get_double("gamma", 0), ConfigError);
    EXPECT_THROW(c.get_bool("star", false), ConfigError);
    EXPECT_THROW(c.trials(), ConfigError);
    EXPECT_EQ(c.get_int("absent", 7), 7);
}

TEST(config, seed_is_mandatory) {
    EXPECT_THROW(validate_config(make("bounds", {})), ConfigError);
    EXPECT_NO_THROW(validate_config(make("bounds", {{"seed", "0"}})));
}

TEST(config, unknown_key_and_command) {
    EXPECT_THROW(validate_config(make("bounds", {{"seed", "1"}, {"noise", "none"}})), ConfigError);
    EXPECT_THROW(validate_config(make("frobnicate", {{"seed", "1"}})), ConfigError);
}

TEST(config, module_preconditions_checked_before_running) {
    auto expect_config_error = [](const ExperimentConfig& c, const std::string& fragment) {
        try {
            validate_config(c);
            FAIL() << fragment;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_config_error(make("simulate", {{"seed", "1"}, {"gamma", "0.7"}}), "protocol parameters");
    expect_config_error(make("simulate", {{"seed", "1"}, {"noise", "flip:2"}}), "noise");
    expect_config_error(make("simulate", {{"seed", "1"}, {"pos", "5"}}), "geometry");
    expect_config_error(make("simulate", {{"seed", "1"}, {"variant", "bb85"}}), "variant");
    expect_config_error(make("attack", {{"seed", "1"}}), "name");
    expect_config_error(make("attack", {{"seed", "1"}, {"name", "breidbart"}, {"variant", "frouting"}}), "variant");
    expect_config_error(make("bounds", {{"seed", "1"}, {"delta", "-1"}}), "bound parameters");
    expect_config_error(make("sample-f", {{"seed", "1"}, {"epsilon", "0"}}), "epsilon");
    expect_config_error(make("sweep", {{"seed", "1"}, {"base", "bounds"}, {"param", "m"}, {"values", "1"}}), "csv");
    expect_config_error(
        make("sweep", {{"seed", "1"}, {"base", "bounds"}, {"param", "noise"}, {"values", "1"}, {"csv", "x"}}),
        "sweepable");
}

TEST(monte_carlo, constant_true) {
    auto r = monte_carlo([](Rng&) { return true; }, 500, 1);
    EXPECT_EQ(r.successes, 500u);
    EXPECT_DOUBLE_EQ(r.mean, 1.0);
    EXPECT_DOUBLE_EQ(r.interval.hi, 1.0);
    EXPECT_TRUE(r.interval.contains(1.0));
}

TEST(monte_carlo, zero_trials) {
    auto r = monte_carlo([](Rng&) { return true; }, 0, 1);
    EXPECT_EQ(r.trials, 0u);
    EXPECT_DOUBLE_EQ(r.interval.lo, 0);
    EXPECT_DOUBLE_EQ(r.interval.hi, 1);
}

TEST(monte_carlo, fair_coin) {
    auto r = monte_carlo([](Rng& rng) { return rng.bit(); }, 10000, 99);
    EXPECT_NEAR(r.mean, 0.5, 0.02);
    EXPECT_TRUE(r.interval.contains(r.mean));
}

TEST(monte_carlo, width_scales_as_inverse_sqrt) {
    auto coin = [](Rng& rng) { return rng.bit(); };
    double w1 = monte_carlo(coin, 1000, 5).interval.width();
    double w2 = monte_carlo(coin, 100000, 5).interval.width();
    EXPECT_NEAR(w1 / w2, 10.0, 2.0);
}

TEST(monte_carlo, independent_of_thread_count) {
    auto est = [](Rng& rng) { return rng.uniform() < 0.3; };
    auto a = monte_carlo(est, 12345, 77, 1);
    for (int t : {2, 3, 8}) {
        auto b = monte_carlo(est, 12345, 77, t);
        EXPECT_EQ(a.successes, b.successes);
    }
    EXPECT_NE(a.successes, monte_carlo(est, 12345, 78, 1).successes);
}

TEST(monte_carlo, trial_seeds_are_derived) {
    std::uint64_t first = 0;
    monte_carlo(
        [&first](Rng& rng) {
            first = rng.next_u64();
            return true;
        },
        1, 1234, 1);
    EXPECT_EQ(first, Rng(derive_seed(1234, 0)).next_u64());
}

TEST(monte_carlo, rethrows_trial_errors) {
    EXPECT_THROW(monte_carlo([](Rng&) -> bool { throw std::invalid_argument("x"); }, 10, 1, 2),
                 std::invalid_argument);
}

TEST(monte_carlo, qpv_threads_env) {
    setenv("QPV_THREADS", "2", 1);
    EXPECT_EQ(effective_threads(8), 2);
    EXPECT_EQ(effective_threads(1), 1);
    setenv("QPV_THREADS", "0", 1);
    EXPECT_THROW(effective_threads(4), ConfigError);
    setenv("QPV_THREADS", "two", 1);
    EXPECT_THROW(effective_threads(4), ConfigError);
    unsetenv("QPV_THREADS");
}

TEST(report, round_trip) {
    Report r;
    r.command = "attack";
    r.config = {{"seed", "3"}, {"name", "breidbart"}};
    r.metrics.push_back(Metric::exact_value("success", 0.1 + 0.2, "dense-statevector"));
    r.metrics.push_back(Metric::exact_value("threshold", -INFINITY, "closed-form"));
    MonteCarloResult mc;
    mc.trials = 1000;
    mc.successes = 853;
    mc.mean = 0.853;
    mc.interval = wilson_interval(853, 1000);
    r.metrics.push_back(Metric::sampled("success_sampled", mc));
    r.duration_s = 1.0 / 3;
    Report back = report_from_json(report_to_json(r));
    EXPECT_EQ(back, r);
    std::string path = tmp_path("report.json");
    emit_report(r, path);
    EXPECT_EQ(read_report(path), r);
    std::filesystem::remove(path);
}

TEST(report, schema_keys) {
    Report r;
    r.command = "bounds";
    r.metrics.push_back(Metric::exact_value("x", 1, "closed-form"));
    std::string j = report_to_json(r);
    for (const char* key : {"\"config\"", "\"metrics\"", "\"version\"", "\"duration_s\"", "\"exact\"", "\"method\""}) {
        EXPECT_NE(j.find(key), std::string::npos) << key;
    }
}

TEST(report, missing_directory_is_io_error) {
    Report r;
    EXPECT_THROW(emit_report(r, "/nonexistent_dir_qpv/r.json"), IoError);
    EXPECT_THROW(emit_csv(CsvTable{}, "/nonexistent_dir_qpv/r.csv"), IoError);
}

TEST(report, malformed_json) {
    EXPECT_THROW(report_from_json("{"), std::invalid_argument);
    EXPECT_THROW(report_from_json("{\"config\": {}}"), std::invalid_argument);
}

TEST(run_experiment, simulate_zero_trials_has_no_metrics) {
    auto r = run_experiment(make("simulate", {{"seed", "5"}, {"trials", "0"}}));
    EXPECT_TRUE(r.metrics.empty());
    EXPECT_EQ(r.config.at("seed"), "5");
    EXPECT_EQ(r.command, "simulate");
}

TEST(run_experiment, breidbart_exact) {
    auto r = run_experiment(make("attack", {{"seed", "1"}, {"name", "breidbart"}, {"m", "1"}}));
    const Metric* s = r.find("success");
    ASSERT_NE(s, nullptr);
    EXPECT_TRUE(s->exact);
    EXPECT_FALSE(s->method.empty());
    EXPECT_NEAR(s->value, 0.8535533906, 1e-10);
}

TEST(run_experiment, deterministic_modulo_duration) {
    auto c = make("simulate", {{"seed", "11"},
                               {"trials", "3000"},
                               {"variant", "frouting"},
                               {"n", "3"},
                               {"m", "4"},
                               {"gamma", "0.25"},
                               {"noise", "depolarizing:0.1"}});
    c.values["threads"] = "1";
    Report a = run_experiment(c);
    c.values["threads"] = "4";
    Report b = run_experiment(c);
    a.config.erase("threads");
    b.config.erase("threads");
    EXPECT_EQ(report_to_json(without_duration(a)), report_to_json(without_duration(b)));
    EXPECT_EQ(report_to_json(without_duration(run_experiment(c))), report_to_json(without_duration(run_experiment(c))));
}

TEST(run_experiment, simulate_matches_analytic) {
    auto r = run_experiment(make("simulate", {{"seed", "2"},
                                              {"trials", "20000"},
                                              {"n", "5"},
                                              {"m", "20"},
                                              {"gamma", "0.1"},
                                              {"noise", "flip:0.08"}}));
    const Metric* mc = r.find("acceptance");
    const Metric* exact = r.find("acceptance_analytic");
    ASSERT_TRUE(mc && exact);
    EXPECT_FALSE(mc->exact);
    EXPECT_EQ(mc->trials, 20000u);
    double sigma = std::sqrt(exact->value * (1 - exact->value) / 20000);
    EXPECT_NEAR(mc->value, exact->value, 4 * sigma);
}

TEST(run_experiment, attack_sampled_agrees_with_exact) {
    auto r = run_experiment(
        make("attack", {{"seed", "4"}, {"name", "routing-guess"}, {"m", "2"}, {"n", "2"}, {"trials", "4000"}}));
    double exact = r.find("success")->value;
    const Metric* s = r.find("success_sampled");
    ASSERT_NE(s, nullptr);
    EXPECT_NEAR(exact, 0.5625, 1e-12);
    EXPECT_NEAR(s->value, exact, 4 * std::sqrt(exact * (1 - exact) / 4000));
}

TEST(run_experiment, product_evaluation_for_large_m) {
    auto r = run_experiment(make("attack", {{"seed", "1"}, {"name", "routing-guess"}, {"m", "6"}}));
    EXPECT_NEAR(r.find("success")->value, std::pow(0.75, 6), 1e-12);
    EXPECT_EQ(r.find("success")->method, "product-dp");
}

TEST(run_experiment, epr_teleport) {
    auto r = run_experiment(make("attack", {{"seed", "1"}, {"name", "epr-teleport"}, {"m", "4"}, {"trials", "50"}}));
    EXPECT_NEAR(r.find("success")->value, 1.0, 1e-12);
    EXPECT_EQ(r.find("timing_ok")->value, 1.0);
    EXPECT_EQ(r.find("success_sampled")->value, 1.0);
    EXPECT_THROW(run_experiment(make("attack", {{"seed", "1"}, {"name", "epr-teleport"}, {"variant", "fbb84"}})),
                 PreconditionError);
}

TEST(run_experiment, bounds_and_thresholds) {
    auto b = run_experiment(make("bounds", {{"seed", "1"}, {"n", "200"}}));
    EXPECT_NEAR(b.find("soundness_bound")->value, 0.853909, 1e-4);
    auto t = run_experiment(make("thresholds", {{"seed", "1"}}));
    EXPECT_NEAR(t.find("max_qubits_offset_bb84")->value, -17.8797, 1e-3);
    EXPECT_NEAR(t.find("max_qubits_offset_routing")->value, -17.449, 1e-3);
    EXPECT_NEAR(t.find("critical_gamma_routing")->value, 0.0306, 5e-4);
    EXPECT_NEAR(t.find("sequential_tolerance_routing")->value, 0.2496, 1e-3);
    EXPECT_DOUBLE_EQ(t.find("critical_gamma_bb84")->value, critical_gamma(BoundVariant::bb84, 1e-5));
}

TEST(run_experiment, sample_f) {
    std::string path = tmp_path("member.qpvf");
    auto r = run_experiment(make("sample-f", {{"seed", "1"}, {"trials", "200"}, {"member-output", path}}));
    EXPECT_GE(r.find("membership_rate")->value, r.find("membership_floor")->value - 0.1);
    EXPECT_GE(r.find("resample_attempts")->value, 1.0);
    auto f = FunctionTable::load(path);
    EXPECT_EQ(f.n(), 6);
    EXPECT_EQ(f.m(), 2);
    std::filesystem::remove(path);
}

TEST(run_experiment, io_errors) {
    try {
        run_experiment(make("simulate", {{"seed", "1"}, {"function", "file"}, {"function-file", "/no/such/f"}}));
        FAIL();
    } catch (const std::exception& e) {
        EXPECT_EQ(exit_code_for(e), 4);
    }
    try {
        run_experiment(make("attack", {{"seed", "1"}, {"name", "file"}, {"strategy-file", "/no/such/s"}}));
        FAIL();
    } catch (const std::exception& e) {
        EXPECT_EQ(exit_code_for(e), 4);
    }
}

TEST(run_experiment, exit_codes) {
    EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
    EXPECT_EQ(exit_code_for(PreconditionError("x")), 3);
    EXPECT_EQ(exit_code_for(IoError("x")), 4);
}

TEST(sweep, one_row_per_point_fixed_header) {
    auto r = run_experiment(make("sweep", {{"seed", "1"},
                                           {"base", "bounds"},
                                           {"param", "m"},
                                           {"values", "1, 2, 4"},
                                           {"param2", "gamma"},
                                           {"values2", "0,0.01"},
                                           {"csv", "unused.csv"}}));
    ASSERT_TRUE(r.table.has_value());
    const CsvTable& t = *r.table;
    EXPECT_EQ(t.rows.size(), 6u);
    ASSERT_GE(t.header.size(), 3u);
    EXPECT_EQ(t.header[0], "m");
    EXPECT_EQ(t.header[1], "gamma");
    EXPECT_EQ(t.header[2], "soundness_bound");
    for (const auto& row : t.rows) {
        EXPECT_EQ(row.size(), t.header.size());
    }
    EXPECT_EQ(t.rows[5][0], "4");
    EXPECT_EQ(t.rows[5][1], "0.01");
    std::string csv = csv_to_string(t);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 7u);
    ASSERT_NE(r.find("soundness_bound[m=2,gamma=0.01]"), nullptr);
}

TEST(sweep, sampled_columns) {
    auto r = run_experiment(make("sweep", {{"seed", "1"},
                                           {"base", "simulate"},
                                           {"trials", "200"},
                                           {"m", "4"},
                                           {"param", "noise"},
                                           {"values", "none,flip:0.1"},
                                           {"csv", "unused.csv"}}));
    const CsvTable& t = *r.table;
    EXPECT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.header[1], "acceptance");
    EXPECT_EQ(t.header[2], "acceptance_lo");
    EXPECT_EQ(t.header[3], "acceptance_hi");
    EXPECT_EQ(t.header[4], "acceptance_trials");
    EXPECT_EQ(t.rows[0][1], "1");
    EXPECT_EQ(t.rows[0][4], "200");
}
