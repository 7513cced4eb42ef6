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

#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ltlab/rng.hpp"
#include "ltlab/stats.hpp"

using namespace ltlab;

TEST_CASE("two-sample KS basics") {
    std::vector<double> xs(200), ys(300);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = double(i) / xs.size();
    auto same = ks_two_sample(xs, xs);
    CHECK(same.statistic == 0.0);
    CHECK(same.pass);
    CHECK(same.threshold == doctest::Approx(1.628 * std::sqrt(400.0 / 40000.0)));

    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = 0.5 + double(i) / ys.size();
    auto shifted = ks_two_sample(xs, ys);
    CHECK(shifted.statistic == doctest::Approx(0.5).epsilon(0.02));
    CHECK_FALSE(shifted.pass);
    CHECK(ks_two_sample(xs, ys, 1.0).pass);

    // ties across samples collapse to one step
    std::vector<std::int64_t> a(100, 3), b(100, 3);
    CHECK(ks_two_sample(std::span<const std::int64_t>(a), std::span<const std::int64_t>(b)).statistic == 0.0);
    CHECK_THROWS_AS(ks_two_sample(std::vector<double>(10), ys), std::invalid_argument);
}

TEST_CASE("chi-square merges sparse cells") {
    std::vector<std::int64_t> obs{50, 30, 15, 4, 1, 0};
    std::vector<double> p{0.5, 0.3, 0.15, 0.04, 0.009, 0.001};
    auto r = chi_square_counts(obs, p);
    CHECK(r.n2 == 4);
    CHECK(r.pass);
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    std::vector<double> bad{0.5, 0.5};
    CHECK_THROWS_AS(chi_square_counts(obs, bad), std::invalid_argument);
    std::vector<std::int64_t> skew{100, 0};
    CHECK_FALSE(chi_square_counts(skew, std::vector<double>{0.5, 0.5}).pass);
}

TEST_CASE("Wilson interval") {
    auto iv = proportion_ci(50, 100, 0.95);
    CHECK(iv.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(iv.hi == doctest::Approx(0.5962).epsilon(1e-3));
    auto zero = proportion_ci(0, 1000, 0.99);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi > 0.0);
    CHECK(zero.hi < 0.01);
    CHECK(proportion_ci(7, 7, 0.99).hi == 1.0);
    CHECK_THROWS_AS(proportion_ci(8, 7, 0.99), std::invalid_argument);
    CHECK(normal_quantile(0.99) == doctest::Approx(2.5758).epsilon(1e-4));
}

TEST_CASE("mean and proportion tests") {
    CHECK(mean_ci_test("m", 1.0, 0.1, 1.25).pass);
    CHECK_FALSE(mean_ci_test("m", 1.0, 0.1, 1.35).pass);
    CHECK(proportion_test("p", 500, 1000, 0.5).pass);
    CHECK_FALSE(proportion_test("p", 600, 1000, 0.5).pass);
    double xs[] = {1.0, 2.0, 3.0, 4.0};
    auto ms = mean_and_se(xs);
    CHECK(ms.mean == 2.5);
    CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    for (auto m : {TestMethod::KS1, TestMethod::KS2, TestMethod::ChiSq, TestMethod::PropCI, TestMethod::MeanCI})
        CHECK(test_method_from_string(to_string(m)) == m);
    CHECK_THROWS(test_method_from_string("t-test"));
}

TEST_CASE("null rejection rates over 200 seeds stay at most 4%") {
    const int seeds = 200, n = 1000;
    int ks1 = 0, ks2 = 0, chi = 0, prop = 0;
    for (int s = 0; s < seeds; ++s) {
        RandomStream rng(1000 + s, 7);
        std::vector<double> u(n), v(n), e(n);
        for (auto &x : u) x = rng.uniform();
        for (auto &x : v) x = rng.uniform();
        for (auto &x : e) x = rng.exponential(2.0);
        ks1 += !ks_one_sample(e, [](double x) { return 1.0 - std::exp(-2.0 * x); }).pass;
        ks2 += !ks_two_sample(u, v).pass;
        // geometric(0.6) counts with tail cell
        std::vector<std::int64_t> obs(12, 0);
        std::vector<double> p(12);
        double acc = 0.0;
        for (int k = 0; k < 11; ++k) acc += p[k] = 0.4 * std::pow(0.6, k);
        p[11] = 1.0 - acc;
        for (int i = 0; i < n; ++i) {
            auto k = static_cast<int>(std::floor(std::log(rng.uniform()) / std::log(0.6)));
            ++obs[std::min(k, 11)];
        }
        chi += !chi_square_counts(obs, p).pass;
        int hits = 0;
        for (int i = 0; i < n; ++i) hits += rng.uniform() < 0.3;
        prop += !proportion_ci(hits, n, 0.99).contains(0.3);
    }
    MESSAGE("rejections: ks1 " << ks1 << " ks2 " << ks2 << " chi " << chi << " prop " << prop);
    CHECK(ks1 <= 8);
    CHECK(ks2 <= 8);
    CHECK(chi <= 8);
    CHECK(prop <= 8);
}
