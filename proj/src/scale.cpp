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

#include "ltlab/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ltlab {

namespace {

// Four accumulators so the loop vectorizes without reassociation flags.
double dot(const double *a, const double *b, std::size_t n) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

} // namespace

double default_scale_step(double x_max) { return 1e-3 * std::max(1.0, x_max / 40.0); }

ScaleTable solve_scale(const ModelParams &params, double step, double x_max) {
    if (!(step > 0.0)) throw std::invalid_argument("scale step must be positive");
    if (!(x_max >= 10.0 * step)) throw std::invalid_argument("x_max must be at least 10 steps");
    const auto K = static_cast<std::size_t>(std::ceil(x_max / step - 1e-9));
    const double a = params.alpha();
    const double k = params.kappa();
    const double h = step;

    ScaleTable t(params, h);
    // tail and density stored in reverse so the convolution runs forward
    std::vector<double> tail_rev(K + 1);
    t.density_.resize(K + 1);
    for (std::size_t i = 0; i <= K; ++i) {
        const double s = static_cast<double>(i) * h;
        tail_rev[K - i] = std::pow(1.0 + s, -a);
        t.density_[i] = a * std::pow(1.0 + s, -a - 1.0);
    }
    auto &w = t.values_;
    w.assign(K + 1, 0.0);
    w[0] = 1.0;
    const double denom = 1.0 - 0.5 * k * h;
    for (std::size_t m = 1; m <= K; ++m) {
        // sum_{j=1}^{m-1} Fbar((m-j)h) w_j
        const double inner = m > 1 ? dot(&tail_rev[K - m + 1], &w[1], m - 1) : 0.0;
        const double end0 = 0.5 * tail_rev[K - m] * w[0];
        w[m] = (1.0 + k * h * (end0 + inner)) / denom;
        // concavity with w'(0) = kappa bounds w by the tangent line at 0
        if (!(w[m] <= (1.0 + k * static_cast<double>(m) * h) * (1.0 + 1e-9)))
            throw NumericError("scale solver unstable at x=" + std::to_string(static_cast<double>(m) * h) +
                               "; step " + std::to_string(h) + " too coarse");
    }
    return t;
}

void ScaleTable::check_range(double x) const {
    if (!(x >= 0.0) || x > x_max() * (1.0 + 1e-12))
        throw std::out_of_range("scale table queried at x=" + std::to_string(x) +
                                " outside [0, " + std::to_string(x_max()) + "]");
}

double ScaleTable::w(double x) const {
    check_range(x);
    const double u = x / step_;
    const auto K = values_.size() - 1;
    auto m = static_cast<std::size_t>(std::floor(u));
    if (m >= K) return values_[K];
    const double frac = u - static_cast<double>(m);
    if (frac == 0.0) return values_[m];
    return values_[m] + frac * (values_[m + 1] - values_[m]);
}

double ScaleTable::w_prime(double x) const {
    check_range(x);
    const double k = params_.kappa();
    const double a = params_.alpha();
    const auto K = values_.size() - 1;
    const double u = x / step_;
    auto m = std::min(static_cast<std::size_t>(std::floor(u)), K);
    const double xm = static_cast<double>(m) * step_;
    const double wx = w(x);
    double integral = 0.0;
    if (xm == x || m == K) {
        // node: f((m-j)h) is tabulated
        if (m > 0) {
            double s = 0.5 * (density_[m] * values_[0] + density_[0] * values_[m]);
            for (std::size_t j = 1; j < m; ++j) s += density_[m - j] * values_[j];
            integral = step_ * s;
        }
        return k * values_[m] - k * integral;
    }
    auto f = [&](double s) { return a * std::pow(1.0 + s, -a - 1.0); };
    if (m > 0) {
        double s = 0.5 * (f(x) * values_[0] + f(x - xm) * values_[m]);
        for (std::size_t j = 1; j < m; ++j) s += f(x - static_cast<double>(j) * step_) * values_[j];
        integral = step_ * s;
    }
    integral += 0.5 * (x - xm) * (f(x - xm) * values_[m] + f(0.0) * wx);
    return k * wx - k * integral;
}

double ScaleTable::w_infinity() const {
    if (params_.critical()) return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - params_.load());
}

double ScaleTable::t0() const {
    auto it = std::find_if(values_.begin(), values_.end(), [](double v) { return v >= 2.0; });
    if (it == values_.end())
        throw std::domain_error("scale table never reaches 2; enlarge x_max or kappa");
    return static_cast<double>(it - values_.begin()) * step_;
}

RescaledScale rescaled_scale(const ScaleTable &table, double a) {
    const auto &p = table.params();
    if (!(a >= 0.0)) throw std::out_of_range("rescaled level must be nonnegative");
    const double x = a * p.s_n();
    const double W = table.w(x) / p.r_n();
    const double Wp = table.w_prime(x) * p.s_n() / p.r_n();
    const double winf = table.w_infinity();
    return {W, Wp, std::isinf(winf) ? winf : winf / p.r_n()};
}

LaplaceCheck laplace_check(const ScaleTable &table, double lambda, const LevyExponent &exponent) {
    if (!(lambda > exponent.eta())) throw std::domain_error("lambda must exceed eta");
    const auto v = table.values();
    const double h = table.step();
    const std::size_t K = v.size() - 1;
    double s = 0.5 * (v[0] + std::exp(-lambda * static_cast<double>(K) * h) * v[K]);
    for (std::size_t j = 1; j < K; ++j) s += std::exp(-lambda * static_cast<double>(j) * h) * v[j];
    const double body = h * s;
    // concave w: w(X) <= w(x) <= w(X) + w'(X)(x - X) for x >= X
    const double X = table.x_max();
    const double e = std::exp(-lambda * X);
    const double lo = e * v[K] / lambda;
    const double hi = lo + e * table.w_prime(X) / (lambda * lambda);
    const double total = body + 0.5 * (lo + hi);
    return {std::abs(total - 1.0 / exponent.psi(lambda)), 0.5 * (hi - lo)};
}

double cutoff_bias(const ScaleTable &table, double M) {
    return 1.0 / table.w(M) - 1.0 / table.w_infinity();
}

double limit_scale(double x, double d, double c, double alpha) {
    if (!(x >= 0.0) || !(d >= 0.0) || !(c > 0.0) || !(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("limit_scale: need x >= 0, d >= 0, c > 0, alpha in (1,2)");
    if (x == 0.0) return 0.0;
    const long double b = alpha - 1.0L;
    const long double lx = std::log(static_cast<long double>(x));
    if (d == 0.0) return static_cast<double>(std::exp(b * lx - std::lgamma(static_cast<long double>(alpha))) / c);
    const long double lr = std::log(static_cast<long double>(d) / c);
    long double sum = 0.0L;
    long double largest = 0.0L;
    bool decreasing = false;
    long double prev = std::numeric_limits<long double>::infinity();
    for (int k = 0; k < 20000; ++k) {
        const long double kk = k;
        const long double lt = kk * lr + (kk + 1.0L) * b * lx - std::lgamma(alpha + kk * b);
        const long double term = std::exp(lt);
        sum += (k % 2 ? -term : term);
        largest = std::max(largest, term);
        if (term < prev) decreasing = true;
        prev = term;
        if (decreasing && term < 1e-12L * std::abs(sum)) {
            if (largest > 1e6L * std::abs(sum))
                throw NumericError("limit_scale: cancellation too severe at x=" + std::to_string(x));
            return static_cast<double>(sum / c);
        }
    }
    throw NumericError("limit_scale: series did not converge at x=" + std::to_string(x));
}

std::size_t concavity_violations(const ScaleTable &table) {
    const auto v = table.values();
    std::size_t bad = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
        if (d2 > 4.0 * std::numeric_limits<double>::epsilon() * v[i + 1]) ++bad;
    }
    return bad;
}

} // namespace ltlab
