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

#include <sstream>

#include "doctest.h"
#include "ltlab/suites.hpp"

using namespace ltlab;

namespace {

ExperimentConfig parse(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig small(const std::string &suite, std::int64_t replicas = 200) {
    ExperimentConfig c;
    c.suite = suite;
    c.replicas = replicas;
    return c;
}

} // namespace

TEST_CASE("config parsing") {
    const auto c = parse("# comment\nsuite = exit-prob\nalpha=1.6\nkappa = 0.5 # trailing\nn=10\nreplicas=500\n"
                         "seed=7\nthreads=2\nx=4\nlambdas=0.5,1\n\n");
    CHECK(c.suite == "exit-prob");
    CHECK(*c.alpha == 1.6);
    CHECK(*c.kappa == 0.5);
    CHECK(*c.n == 10);
    CHECK(*c.replicas == 500);
    CHECK(c.seed == 7);
    CHECK(c.threads == 2);
    CHECK(c.options.at("x") == "4");
    CHECK(c.options.at("lambdas") == "0.5,1");
}

TEST_CASE("malformed configs are rejected") {
    CHECK_THROWS_AS(parse("suite"), ConfigError);
    CHECK_THROWS_AS(parse("alpha=abc"), ConfigError);
    CHECK_THROWS_AS(parse("alpha=1.5x"), ConfigError);
    CHECK_THROWS_AS(parse("n=1.5"), ConfigError);
    CHECK_THROWS_AS(parse("seed=-1"), ConfigError);
    CHECK_THROWS_AS(parse("x=1\nx=2"), ConfigError);
    CHECK_THROWS_AS(parse("x="), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("suite-level validation") {
    CHECK_THROWS_AS(run_suite(small("no-such-suite")), ConfigError);
    CHECK_THROWS_AS(run_suite(small("exit-prob", 10)), ConfigError);
    auto unknown = small("exit-prob");
    unknown.options["level"] = "5";
    CHECK_THROWS_AS(run_suite(unknown), ConfigError);
    auto bad_levels = small("exit-prob");
    bad_levels.options = {{"x", "30"}, {"b", "20"}};
    CHECK_THROWS_AS(run_suite(bad_levels), ConfigError);
    auto bad_params = small("exit-prob");
    bad_params.kappa = 0.9;
    CHECK_THROWS_AS(run_suite(bad_params), ConfigError);
    auto bad_list = small("laplace-T0");
    bad_list.options["lambdas"] = "0.5,,1";
    CHECK_THROWS_AS(run_suite(bad_list), ConfigError);
    auto subcritical = small("converge-fdd");
    subcritical.kappa = 0.4;
    CHECK_THROWS_AS(run_suite(subcritical), ConfigError);
    ExperimentConfig all;
    all.options["nonsense"] = "1";
    CHECK_THROWS_AS(run_all(all), ConfigError);
}

TEST_CASE("suite names are unique and end with converge-fdd") {
    const auto &names = suite_names();
    CHECK(names.size() == 15);
    CHECK(names.back() == "converge-fdd");
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) CHECK(names[i] != names[j]);
}

TEST_CASE("small suites produce complete reports") {
    for (const auto *suite : {"exit-prob", "occupation", "two-sided-exit", "laplace-T0", "scale-laplace", "ci-bound",
                              "lamperti-roundtrip", "ps-lamperti", "cmj-localtime"}) {
        CAPTURE(suite);
        const auto r = run_suite(small(suite));
        CHECK(r.suite == suite);
        CHECK_FALSE(r.identity.empty());
        CHECK_FALSE(r.tests.empty());
        CHECK_FALSE(r.estimates.empty());
        CHECK(r.seed == 42);
        CHECK(r.n == 100);
        CHECK_FALSE(r.samples.columns.empty());
        for (const auto &row : r.samples.rows) CHECK(row.size() == r.samples.columns.size());
    }
}

TEST_CASE("reports do not depend on the thread count") {
    for (const auto *suite : {"exit-prob", "overshoot", "geometric-visits", "fd-compare", "converge-fdd"}) {
        CAPTURE(suite);
        auto one = small(suite);
        one.threads = 1;
        auto three = small(suite);
        three.threads = 3;
        if (std::string(suite) == "converge-fdd") {
            one.options["ns"] = three.options["ns"] = "100,200,400";
        }
        const auto a = run_suite(one), b = run_suite(three);
        CHECK(report_json(a) == report_json(b));
        CHECK(a.samples.rows == b.samples.rows);
    }
}

TEST_CASE("the seed changes the samples") {
    auto a = small("exit-prob"), b = small("exit-prob");
    b.seed = 43;
    CHECK(run_suite(a).samples.rows != run_suite(b).samples.rows);
}

TEST_CASE("options reach the suite") {
    auto c = small("two-sided-exit");
    c.options = {{"lower", "-1"}, {"upper", "4"}};
    const auto r = run_suite(c);
    CHECK(r.references.at(0).formula.find("a=1, b=4") != std::string::npos);
    auto d = small("converge-fdd", 100);
    d.options = {{"ns", "100,200,400"}, {"ks_bound", "1"}};
    const auto conv = converge_fdd(d);
    CHECK(conv.suite == "converge-fdd");
    CHECK(conv.estimate("budget_z_n100").value == 5.0);
}
