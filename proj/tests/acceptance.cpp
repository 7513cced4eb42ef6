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

// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance <ltlab-cli>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ltlab/suites.hpp"

namespace {

using namespace ltlab;

struct Criterion {
    int id;
    std::string title;
    double limit_seconds; // 0: no limit
    std::vector<ExperimentConfig> runs;
};

ExperimentConfig cfg(std::string suite, std::optional<double> alpha, std::optional<double> kappa,
                     std::optional<std::int64_t> replicas, std::map<std::string, std::string> options = {}) {
    ExperimentConfig c;
    c.suite = std::move(suite);
    c.alpha = alpha;
    c.kappa = kappa;
    c.n = 100;
    c.replicas = replicas;
    c.seed = 42;
    c.options = std::move(options);
    return c;
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string detail(const Report &r) {
    std::ostringstream s;
    for (const auto &t : r.tests)
        s << "\n      " << (t.pass ? "ok   " : "FAIL ") << t.name << ": " << t.statistic << " vs " << t.threshold;
    return s.str();
}

bool determinism(const std::string &cli, double &seconds) {
    const auto dir = std::filesystem::temp_directory_path() / "ltlab_acceptance";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
        const auto out = dir / ("run" + std::to_string(k));
        const auto stdout_file = dir / ("stdout" + std::to_string(k) + ".json");
        const std::string cmd = "\"" + cli + "\" run-all --seed 42 --out \"" + out.string() + "\" > \"" +
                                stdout_file.string() + "\" 2>/dev/null";
        const int rc = std::system(cmd.c_str());
        if (rc == -1) return false;
        outputs[k] = read_file(stdout_file);
        for (const auto &e : std::filesystem::directory_iterator(out))
            outputs[k] += e.path().filename().string() + "\n" + read_file(e.path());
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return !outputs[0].empty() && outputs[0] == outputs[1];
}

} // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <path to ltlab cli>\n";
        return 2;
    }
    const std::vector<Criterion> criteria = {
        {1, "occupation identity on 1e4 killed paths", 60, {cfg("occupation", 1.5, 0.5, 10000)}},
        {2, "exit identity x=5, b=20, N=1e5", 120, {cfg("exit-prob", 1.5, 0.4, 100000, {{"x", "5"}, {"b", "20"}})}},
        {3, "overshoot = Lambda*, N=1e5, KS <= 1.628/sqrt(N)", 120, {cfg("overshoot", 1.9, 0.4, 100000)}},
        {4, "never-return, kappa=0.4, alpha=1.5, M=1e3", 120,
         {cfg("never-return", 1.5, 0.4, 100000, {{"cutoff", "1000"}})}},
        {5, "geometric visits from level 5, N=1e5", 0, {cfg("geometric-visits", 1.5, 0.5, 100000, {{"level", "5"}})}},
        {6, "scale solver, step 1e-3, x_max 40", 0,
         {cfg("scale-laplace", 1.5, 0.4, std::nullopt,
              {{"step", "0.001"}, {"x_max", "40"}, {"lambdas", "0.5,1,2"}})}},
        {7, "Laplace transform of T(0) from x=3, N=1e5", 0,
         {cfg("laplace-T0", 1.5, 0.4, 100000, {{"x", "3"}, {"lambdas", "0.5,1"}})}},
        {8, "two-sided exit, levels (-2, 3)", 0,
         {cfg("two-sided-exit", 1.5, 0.4, 100000, {{"lower", "-2"}, {"upper", "3"}})}},
        {9, "first-passage density, 20x20 cells, N=1e6", 600,
         {cfg("passage-density", 1.5, 0.4, 1000000, {{"cells_y", "20"}, {"cells_o", "20"}, {"mass", "0.95"}})}},
        {10, "level-difference decomposition vs direct, N=5e4", 0,
         {cfg("fd-compare", 1.5, 0.4, 50000, {{"triples", "2,2.5,3;1,4,5"}})}},
        {11, "CMJ population vs visit counts at t in {0.5,1,2}, N=5e4", 0,
         {cfg("cmj-localtime", 1.5, 0.4, 50000, {{"times", "0.5,1,2"}})}},
        {12, "PS queue vs Lamperti-transformed CMJ, 1e4 excursions", 0,
         {cfg("ps-lamperti", 1.5, 0.4, 10000), cfg("lamperti-roundtrip", 1.5, 0.4, 10000)}},
        {13, "C_i bound, n in {1e2, 1e4}", 0, {cfg("ci-bound", 1.5, 0.4, std::nullopt, {{"ns", "100,10000"}})}},
        {14, "convergence diagnostic at a=0.5, n in {1e2,1e3,1e4}", 0,
         {cfg("converge-fdd", 1.5, 0.5, 100000, {{"ns", "100,1000,10000"}, {"a", "0.5"}})}},
    };
    bool all = true;
    for (const auto &c : criteria) {
        bool ok = true;
        std::string notes;
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto &run : c.runs) {
            try {
                const auto r = run_suite(run);
                ok = ok && r.pass;
                notes += detail(r);
            } catch (const std::exception &e) {
                ok = false;
                notes += std::string("\n      error: ") + e.what();
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_seconds == 0 || secs <= c.limit_seconds;
        all = all && ok && in_time;
        std::printf("criterion %2d: %s  %s (%.1f s%s)%s\n", c.id, ok && in_time ? "PASS" : "FAIL", c.title.c_str(), secs,
                    c.limit_seconds > 0 ? (in_time ? ", within limit" : ", OVER LIMIT") : "", notes.c_str());
        std::fflush(stdout);
    }
    double secs = 0.0;
    const bool same = determinism(argv[1], secs);
    all = all && same;
    std::printf("criterion 15: %s  run-all --seed 42 twice gives byte-identical reports (%.1f s)\n",
                same ? "PASS" : "FAIL", secs);
    return all ? 0 : 1;
}
