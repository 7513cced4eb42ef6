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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "ltlab/rng.hpp"

namespace ltlab {

/// Raised when a quadrature or root search fails to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (alpha, kappa, n) with the derived space and local-time scales.
class ModelParams {
public:
    ModelParams(double alpha, double kappa, std::int64_t n = 1);

    double alpha() const { return alpha_; }
    double kappa() const { return kappa_; }
    std::int64_t n() const { return n_; }
    double s_n() const { return s_n_; }
    double r_n() const { return r_n_; }

    /// E(Lambda) = 1/(alpha-1).
    double mean_lifetime() const { return 1.0 / (alpha_ - 1.0); }
    /// kappa * E(Lambda); 1 in the critical case.
    double load() const { return kappa_ * mean_lifetime(); }
    bool critical() const;

    ModelParams with_n(std::int64_t n) const { return {alpha_, kappa_, n}; }

private:
    double alpha_;
    double kappa_;
    std::int64_t n_;
    double s_n_;
    double r_n_;
};

/// Pareto-type lifetime with P(Lambda >= s) = (1+s)^{-alpha}.
class ParetoLifetime {
public:
    explicit ParetoLifetime(double alpha);

    double alpha() const { return alpha_; }
    double mean() const { return 1.0 / (alpha_ - 1.0); }

    double tail(double s) const { return std::pow(1.0 + s, -alpha_); }
    double density(double s) const { return alpha_ * std::pow(1.0 + s, -alpha_ - 1.0); }
    /// P(Lambda* >= x) = (1+x)^{1-alpha}.
    double size_biased_tail(double x) const { return std::pow(1.0 + x, 1.0 - alpha_); }

    double from_uniform(double u) const { return std::pow(u, -1.0 / alpha_) - 1.0; }
    double size_biased_from_uniform(double u) const {
        return std::pow(u, -1.0 / (alpha_ - 1.0)) - 1.0;
    }

    double sample(RandomStream &rng) const { return from_uniform(rng.uniform()); }
    double sample_size_biased(RandomStream &rng) const {
        return size_biased_from_uniform(rng.uniform());
    }

private:
    double alpha_;
};

/// psi(lambda) = lambda - kappa E(1 - e^{-lambda Lambda}) and its inverse.
class LevyExponent {
public:
    explicit LevyExponent(ModelParams params, double quadrature_tol = 1e-10);

    const ModelParams &params() const { return params_; }
    double quadrature_tol() const { return tol_; }

    /// E(e^{-lambda Lambda}).
    double lifetime_laplace(double lambda) const;
    double psi(double lambda) const;
    /// Largest root of psi; zero whenever kappa <= alpha - 1.
    double eta() const { return 0.0; }
    double phi(double q) const;

    double rescaled_psi(double lambda) const;
    double rescaled_phi(double lambda) const;
    std::pair<double, double> rescaled_exponents(double lambda) const;

private:
    // int_0^inf e^{-lambda s} (1+s)^{-alpha} ds
    double tail_transform(double lambda) const;

    ModelParams params_;
    double tol_;
};

} // namespace ltlab
