/*
   Copyright 2026 The ltlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// ltlab command-line interface. Exit codes: 0 pass, 1 failed check,
// 2 invalid configuration or arguments, 3 numerical or I/O error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "ltlab/localtime.hpp"
#include "ltlab/paths.hpp"
#include "ltlab/population.hpp"
#include "ltlab/scale.hpp"
#include "ltlab/suites.hpp"

namespace {

using namespace ltlab;

struct ModelArgs {
    double alpha = 1.5;
    double kappa = 0.4;
    std::int64_t n = 1;
    std::uint64_t seed = 42;
    std::string out;
};

void add_model_args(CLI::App *app, ModelArgs &m) {
    app->add_option("--alpha", m.alpha, "tail index in (1,2)");
    app->add_option("--kappa", m.kappa, "birth rate, kappa <= alpha - 1");
    app->add_option("--n", m.n, "scaling index");
    app->add_option("--seed", m.seed, "master seed");
    app->add_option("--out", m.out, "output file (default stdout)");
}

/// Writes to --out or stdout.
class Sink {
public:
    explicit Sink(const std::string &path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot write " + path);
        }
    }
    std::ostream &os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Start parse_start(const std::string &s) {
    if (s == "lifetime") return Start::lifetime();
    if (s == "size_biased") return Start::size_biased();
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used == s.size()) return Start::at(x);
    } catch (const std::exception &) {
    }
    throw std::invalid_argument("start must be a number, 'lifetime' or 'size_biased'");
}

InitLaw parse_init(const std::string &s) {
    if (s == "lifetime") return InitLaw::Lifetime;
    if (s == "size_biased") return InitLaw::SizeBiased;
    throw std::invalid_argument("init must be 'lifetime' or 'size_biased'");
}

void write_step_path(std::ostream &os, const StepPath &p) {
    os << std::setprecision(17) << "time,value\n";
    for (const auto &pt : p.points) os << pt.time << "," << pt.value << "\n";
    os << p.end_time << "," << (p.points.empty() ? 0.0 : p.points.back().value) << "\n";
}

struct SuiteArgs {
    std::string config;
    std::string suite;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replicas;
    std::optional<unsigned> threads;
    std::optional<double> alpha, kappa;
    std::optional<std::int64_t> n;
    std::vector<std::string> set;
    bool csv = false;
};

void add_suite_args(CLI::App *app, SuiteArgs &s) {
    app->add_option("--config", s.config, "key=value config file");
    app->add_option("--seed", s.seed, "master seed");
    app->add_option("--replicas", s.replicas, "replica count (default per suite)");
    app->add_option("--threads", s.threads, "worker threads, 0 = hardware");
    app->add_option("--alpha", s.alpha, "override alpha");
    app->add_option("--kappa", s.kappa, "override kappa");
    app->add_option("--n", s.n, "override n");
    app->add_option("--set", s.set, "suite option key=value (repeatable)");
    app->add_option("--out", s.out, "directory for <suite>.json");
    app->add_flag("--csv", s.csv, "also write <suite>.csv with raw samples");
}

ExperimentConfig build_config(const SuiteArgs &s) {
    ExperimentConfig cfg;
    if (!s.config.empty()) cfg = parse_config_file(s.config);
    if (!s.suite.empty()) cfg.suite = s.suite;
    if (s.seed) cfg.seed = *s.seed;
    if (s.replicas) cfg.replicas = *s.replicas;
    if (s.threads) cfg.threads = *s.threads;
    if (s.alpha) cfg.alpha = *s.alpha;
    if (s.kappa) cfg.kappa = *s.kappa;
    if (s.n) cfg.n = *s.n;
    for (const auto &kv : s.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.options[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return cfg;
}

void emit(const std::vector<Report> &rs, const SuiteArgs &s) {
    if (s.out.empty()) return;
    for (const auto &r : rs) {
        emit_report(r, s.out, ReportFormat::Json);
        if (s.csv) emit_report(r, s.out, ReportFormat::Csv);
    }
}

void summarize(const std::vector<Report> &rs) {
    for (const auto &r : rs) std::cerr << (r.pass ? "PASS " : "FAIL ") << r.suite << "\n";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"ltlab: local times of spectrally positive Levy processes with Pareto jumps"};
    app.require_subcommand(1);

    ModelArgs m;
    double step = 1e-3, x_max = 20.0;
    auto *scale = app.add_subcommand("scale-table", "tabulate the scale function w on [0, x_max] as CSV");
    add_model_args(scale, m);
    scale->add_option("--step", step, "grid step");
    scale->add_option("--x-max", x_max, "right end of the grid");

    std::string start = "lifetime";
    double horizon = std::numeric_limits<double>::infinity();
    std::int64_t max_events = kDefaultMaxEvents;
    auto *path = app.add_subcommand("simulate-path", "one path until T(0) as CSV of events");
    add_model_args(path, m);
    path->add_option("--start", start, "number, lifetime or size_biased");
    path->add_option("--horizon", horizon, "stop time");
    path->add_option("--max-events", max_events, "event cap");

    auto *profile = app.add_subcommand("profile", "visit-count profile a -> L(a) of one path until T(0)");
    add_model_args(profile, m);
    profile->add_option("--start", start, "number, lifetime or size_biased");
    bool rescaled = false;
    profile->add_flag("--rescaled", rescaled, "levels / s_n and counts / r_n");

    std::int64_t z0 = 1;
    std::string init = "lifetime";
    auto *cmj = app.add_subcommand("simulate-cmj", "CMJ population path as CSV");
    auto *ps = app.add_subcommand("simulate-ps", "Processor-Sharing queue-length path as CSV");
    for (auto *sub : {cmj, ps}) {
        add_model_args(sub, m);
        sub->add_option("--z0", z0, "initial individuals");
        sub->add_option("--init", init, "lifetime or size_biased");
        sub->add_option("--horizon", horizon, "stop time");
        sub->add_option("--max-events", max_events, "event cap");
    }

    SuiteArgs sa;
    auto *verify = app.add_subcommand("verify", "run one verification suite, JSON report to stdout");
    verify->add_option("suite", sa.suite, "suite name")->required();
    auto *conv = app.add_subcommand("converge-fdd", "self-convergence diagnostic across n");
    auto *all = app.add_subcommand("run-all", "run every suite, JSON report list to stdout");
    auto *list = app.add_subcommand("list", "print suite names");
    for (auto *sub : {verify, conv, all}) add_suite_args(sub, sa);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*scale) {
            const auto table = solve_scale(ModelParams(m.alpha, m.kappa, m.n), step, x_max);
            Sink sink(m.out);
            sink.os() << std::setprecision(12) << "x,w,wprime\n";
            const auto w = table.values();
            for (std::size_t k = 0; k < w.size(); ++k) {
                const double x = step * static_cast<double>(k);
                sink.os() << x << "," << w[k] << "," << table.w_prime(x) << "\n";
            }
            return 0;
        }
        if (*path || *profile) {
            const ModelParams p(m.alpha, m.kappa, m.n);
            RandomStream rng(m.seed, 0);
            std::vector<StopRule> rules{HitZero{}, MaxEvents{max_events}};
            if (std::isfinite(horizon)) rules.push_back(Horizon{horizon});
            const auto sk = simulate(p, parse_start(start), rules, rng);
            Sink sink(m.out);
            auto &os = sink.os();
            os << std::setprecision(17);
            if (*path) {
                os << "time,pre_jump_value,jump\n";
                for (const auto &e : sk.events) os << e.time << "," << e.pre_jump_value << "," << e.jump << "\n";
                const nlohmann::json footer = {
                    {"x0", sk.x0}, {"end_time", sk.end_time}, {"end_reason", std::string(to_string(sk.end_reason))}};
                os << footer.dump() << "\n";
            } else {
                const auto prof = rescaled ? profile_from_path(sk, p) : profile_from_path(sk);
                os << "level,count\n";
                // count on (level, next level]
                std::int64_t running = 0;
                for (const auto &b : prof.breakpoints()) {
                    running += b.delta;
                    os << b.level << "," << prof.normalization() * static_cast<double>(running) << "\n";
                }
            }
            return 0;
        }
        if (*cmj || *ps) {
            const ModelParams p(m.alpha, m.kappa, m.n);
            RandomStream rng(m.seed, 0);
            const PopulationStop stop{horizon, max_events};
            Sink sink(m.out);
            if (*cmj)
                write_step_path(sink.os(), simulate_cmj(z0, parse_init(init), p, stop, rng).population);
            else
                write_step_path(sink.os(), simulate_ps(z0, parse_init(init), p, stop, rng).queue_length);
            return 0;
        }
        if (*list) {
            for (const auto &s : suite_names()) std::cout << s << "\n";
            return 0;
        }
        auto cfg = build_config(sa);
        std::vector<Report> reports;
        if (*all) {
            reports = run_all(cfg);
            std::cout << report_list_json(reports);
        } else {
            if (*conv) cfg.suite = "converge-fdd";
            if (cfg.suite.empty()) throw ConfigError("no suite given");
            reports = {run_suite(cfg)};
            std::cout << report_json(reports.front());
        }
        emit(reports, sa);
        summarize(reports);
        return std::all_of(reports.begin(), reports.end(), [](const Report &r) { return r.pass; }) ? 0 : 1;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
