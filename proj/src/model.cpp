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

#include "ltlab/model.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ltlab {

ModelParams::ModelParams(double alpha, double kappa, std::int64_t n)
    : alpha_(alpha), kappa_(kappa), n_(n) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (1,2)");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (kappa > alpha - 1.0)
        throw std::invalid_argument("kappa must not exceed alpha - 1 (process drifts to +inf)");
    if (n < 1) throw std::invalid_argument("n must be a positive integer");
    s_n_ = std::pow(static_cast<double>(n), 1.0 / alpha);
    r_n_ = static_cast<double>(n) / s_n_;
}

bool ModelParams::critical() const { return kappa_ >= alpha_ - 1.0; }

ParetoLifetime::ParetoLifetime(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (1,2)");
}

LevyExponent::LevyExponent(ModelParams params, double quadrature_tol)
    : params_(params), tol_(quadrature_tol) {
    if (!(quadrature_tol > 0.0)) throw std::invalid_argument("quadrature_tol must be positive");
}

double LevyExponent::tail_transform(double lambda) const {
    using boost::math::quadrature::gauss_kronrod;
    const double a = params_.alpha();
    if (lambda == 0.0) return 1.0 / (a - 1.0);

    // s = e^v - 1; beyond v_max the integrand is below e^{-50} times its scale
    const double v_max = std::log1p(50.0 / lambda);
    auto f = [&](double v) {
        return std::exp(-lambda * std::expm1(v) + (1.0 - a) * v);
    };
    double err = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(f, 0.0, v_max, 30, tol_, &err);
    if (!std::isfinite(value) || err > 10.0 * tol_ * std::abs(value))
        throw NumericError("lifetime Laplace transform quadrature did not converge at lambda=" +
                           std::to_string(lambda));
    return value;
}

double LevyExponent::lifetime_laplace(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    // 1 - m(lambda) = lambda * int e^{-lambda s} P(Lambda > s) ds
    return 1.0 - lambda * tail_transform(lambda);
}

double LevyExponent::psi(double lambda) const {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (lambda == 0.0) return 0.0;
    return lambda * (1.0 - params_.kappa() * tail_transform(lambda));
}

double LevyExponent::phi(double q) const {
    if (q < 0.0) throw std::invalid_argument("q must be nonnegative");
    if (q == 0.0) return eta();
    double lo = eta();
    double hi = 1.0;
    for (int i = 0; psi(hi) <= q; ++i) {
        if (i > 1100) throw NumericError("phi: could not bracket the root");
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 400 && hi - lo > 1e-10 * std::min(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (psi(mid) < q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double LevyExponent::rescaled_psi(double lambda) const {
    return static_cast<double>(params_.n()) * psi(lambda / params_.s_n());
}

double LevyExponent::rescaled_phi(double lambda) const {
    return params_.s_n() * phi(lambda / static_cast<double>(params_.n()));
}

std::pair<double, double> LevyExponent::rescaled_exponents(double lambda) const {
    return {rescaled_psi(lambda), rescaled_phi(lambda)};
}

} // namespace ltlab
