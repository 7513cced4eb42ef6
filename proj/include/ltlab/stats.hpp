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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltlab {

enum class TestMethod { KS1, KS2, ChiSq, PropCI, MeanCI };

std::string_view to_string(TestMethod m);
TestMethod test_method_from_string(std::string_view s);

/// Outcome of one statistical comparison. pass <=> statistic <= threshold.
struct TestReport {
    std::string name;
    TestMethod method = TestMethod::MeanCI;
    double statistic = 0.0;
    double threshold = 0.0;
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    bool pass = false;
};

/// Asymptotic Kolmogorov constant at the 1% level.
inline constexpr double kKsCritical01 = 1.628;

/// Two-sample KS; threshold c(0.01) sqrt((n1+n2)/(n1 n2)) + slack.
TestReport ks_two_sample(std::vector<double> xs, std::vector<double> ys, double slack = 0.0);
TestReport ks_two_sample(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys, double slack = 0.0);

/// One-sample KS against a continuous cdf; threshold 1.628/sqrt(n).
TestReport ks_one_sample(std::vector<double> xs, const std::function<double(double)> &cdf);

/// Pearson chi-square at 1% with (cells-1) degrees of freedom. Adjacent
/// cells are merged left to right until each expected count is >= 5; the
/// last cell should carry the tail probability.
TestReport chi_square_counts(std::span<const std::int64_t> observed, std::span<const double> expected_probs);

struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Wilson score interval.
Interval proportion_ci(std::int64_t successes, std::int64_t trials, double confidence);

/// Two-sided standard normal quantile for the given confidence.
double normal_quantile(double confidence);

/// |estimate - reference| <= k se.
TestReport mean_ci_test(std::string name, double estimate, double se, double reference, double k = 3.0,
                        std::int64_t n = 0);
/// |p_hat - p| <= k sqrt(p (1-p) / trials).
TestReport proportion_test(std::string name, std::int64_t successes, std::int64_t trials, double reference,
                           double k = 3.0);

struct MeanSe {
    double mean;
    double se;
};
MeanSe mean_and_se(std::span<const double> xs);

} // namespace ltlab
