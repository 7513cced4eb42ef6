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

#include "ltlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace ltlab {

std::string_view to_string(TestMethod m) {
    switch (m) {
    case TestMethod::KS1: return "KS1";
    case TestMethod::KS2: return "KS2";
    case TestMethod::ChiSq: return "ChiSq";
    case TestMethod::PropCI: return "PropCI";
    case TestMethod::MeanCI: return "MeanCI";
    }
    return "?";
}

TestMethod test_method_from_string(std::string_view s) {
    for (auto m : {TestMethod::KS1, TestMethod::KS2, TestMethod::ChiSq, TestMethod::PropCI, TestMethod::MeanCI})
        if (to_string(m) == s) return m;
    throw std::invalid_argument("unknown test method: " + std::string(s));
}

TestReport ks_two_sample(std::vector<double> xs, std::vector<double> ys, double slack) {
    if (xs.size() < 50 || ys.size() < 50) throw std::invalid_argument("ks_two_sample: need at least 50 points per sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n1 = static_cast<double>(xs.size()), n2 = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        // consume ties on both sides before comparing the ECDFs
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    TestReport r;
    r.method = TestMethod::KS2;
    r.statistic = d;
    r.threshold = kKsCritical01 * std::sqrt((n1 + n2) / (n1 * n2)) + slack;
    r.n1 = static_cast<std::int64_t>(xs.size());
    r.n2 = static_cast<std::int64_t>(ys.size());
    r.pass = r.statistic <= r.threshold;
    return r;
}

TestReport ks_two_sample(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys, double slack) {
    return ks_two_sample(std::vector<double>(xs.begin(), xs.end()), std::vector<double>(ys.begin(), ys.end()),
                         slack);
}

TestReport ks_one_sample(std::vector<double> xs, const std::function<double(double)> &cdf) {
    if (xs.size() < 50) throw std::invalid_argument("ks_one_sample: need at least 50 points");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = cdf(xs[i]);
        d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
    }
    TestReport r;
    r.method = TestMethod::KS1;
    r.statistic = d;
    r.threshold = kKsCritical01 / std::sqrt(n);
    r.n1 = static_cast<std::int64_t>(xs.size());
    r.pass = r.statistic <= r.threshold;
    return r;
}

TestReport chi_square_counts(std::span<const std::int64_t> observed, std::span<const double> expected_probs) {
    if (observed.size() != expected_probs.size() || observed.empty())
        throw std::invalid_argument("chi_square_counts: size mismatch");
    double total = 0.0, psum = 0.0;
    for (auto o : observed) total += static_cast<double>(o);
    for (double p : expected_probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("chi_square_counts: negative probability");
        psum += p;
    }
    if (total <= 0.0 || std::abs(psum - 1.0) > 1e-6)
        throw std::invalid_argument("chi_square_counts: probabilities must sum to one over a nonempty sample");

    std::vector<double> obs, expct;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        o_acc += static_cast<double>(observed[k]);
        e_acc += expected_probs[k] * total;
        if (e_acc >= 5.0) {
            obs.push_back(o_acc);
            expct.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (expct.empty()) throw std::invalid_argument("chi_square_counts: degenerate cells");
        obs.back() += o_acc;
        expct.back() += e_acc;
    }
    if (obs.size() < 2) throw std::invalid_argument("chi_square_counts: fewer than two cells after merging");
    double stat = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) stat += (obs[k] - expct[k]) * (obs[k] - expct[k]) / expct[k];
    boost::math::chi_squared dist(static_cast<double>(obs.size() - 1));
    TestReport r;
    r.method = TestMethod::ChiSq;
    r.statistic = stat;
    r.threshold = boost::math::quantile(dist, 0.99);
    r.n1 = static_cast<std::int64_t>(total);
    r.n2 = static_cast<std::int64_t>(obs.size());
    r.pass = r.statistic <= r.threshold;
    return r;
}

double normal_quantile(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0,1)");
    return boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
}

Interval proportion_ci(std::int64_t successes, std::int64_t trials, double confidence) {
    if (trials < 1 || successes < 0 || successes > trials) throw std::invalid_argument("proportion_ci: bad counts");
    const double z = normal_quantile(confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == trials) iv.hi = 1.0;
    if (successes == 0) iv.lo = 0.0;
    return iv;
}

TestReport mean_ci_test(std::string name, double estimate, double se, double reference, double k, std::int64_t n) {
    TestReport r;
    r.name = std::move(name);
    r.method = TestMethod::MeanCI;
    r.statistic = std::abs(estimate - reference);
    r.threshold = k * se;
    r.n1 = n;
    r.pass = r.statistic <= r.threshold;
    return r;
}

TestReport proportion_test(std::string name, std::int64_t successes, std::int64_t trials, double reference, double k) {
    if (trials < 1) throw std::invalid_argument("proportion_test: no trials");
    const double n = static_cast<double>(trials);
    TestReport r;
    r.name = std::move(name);
    r.method = TestMethod::PropCI;
    r.statistic = std::abs(static_cast<double>(successes) / n - reference);
    r.threshold = k * std::sqrt(reference * (1.0 - reference) / n);
    r.n1 = trials;
    r.pass = r.statistic <= r.threshold;
    return r;
}

MeanSe mean_and_se(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("mean_and_se: need two points");
    const double n = static_cast<double>(xs.size());
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n;
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= (n - 1.0);
    return {m, std::sqrt(v / n)};
}

} // namespace ltlab
