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

#include <span>
#include <utility>
#include <vector>

#include "ltlab/model.hpp"

namespace ltlab {

/// Grid solution of w(x) = 1 + kappa int_0^x P(Lambda > x-y) w(y) dy.
///
/// Immutable once built. All coordinates are unscaled.
class ScaleTable {
public:
    const ModelParams &params() const { return params_; }
    double step() const { return step_; }
    double x_max() const { return step_ * static_cast<double>(values_.size() - 1); }
    std::span<const double> values() const { return values_; }

    /// w(x) by linear interpolation; exact on grid nodes.
    double w(double x) const;
    /// w'(x) = kappa w(x) - kappa int_0^x f(x-y) w(y) dy, trapezoid on the grid.
    double w_prime(double x) const;
    std::pair<double, double> eval(double x) const { return {w(x), w_prime(x)}; }

    /// w(inf) = 1/(1 - kappa E(Lambda)); +inf in the critical case.
    double w_infinity() const;
    /// First grid point with w >= 2.
    double t0() const;

private:
    friend ScaleTable solve_scale(const ModelParams &, double, double);
    ScaleTable(ModelParams p, double h) : params_(p), step_(h) {}
    void check_range(double x) const;

    ModelParams params_;
    double step_;
    std::vector<double> values_;
    std::vector<double> density_; // f(k h), k = 0..K
};

double default_scale_step(double x_max);

ScaleTable solve_scale(const ModelParams &params, double step, double x_max);
inline ScaleTable solve_scale(const ModelParams &params, double x_max) {
    return solve_scale(params, default_scale_step(x_max), x_max);
}

inline std::pair<double, double> scale_eval(const ScaleTable &t, double x) { return t.eval(x); }

struct RescaledScale {
    double W;
    double W_prime;
    double W_infinity;
};

/// (W_n(a), W_n'(a), W_n(inf)) with W_n(a) = w(a s_n)/r_n.
RescaledScale rescaled_scale(const ScaleTable &table, double a);

struct LaplaceCheck {
    double residual;   // |trapezoid + tail estimate - 1/psi|
    double tail_bound; // half-width of the tail enclosure
};

LaplaceCheck laplace_check(const ScaleTable &table, double lambda, const LevyExponent &exponent);
inline double laplace_residual(const ScaleTable &table, double lambda,
                               const LevyExponent &exponent) {
    return laplace_check(table, lambda, exponent).residual;
}

/// 1/w(M) - 1/w(inf): probability from 0 of reaching -M and still passing above 0 later.
double cutoff_bias(const ScaleTable &table, double M);

/// Scale function of the exponent d lambda + c lambda^alpha (series form).
double limit_scale(double x, double d, double c, double alpha);

/// Discrete second differences above the rounding level 4 eps w.
std::size_t concavity_violations(const ScaleTable &table);

} // namespace ltlab
