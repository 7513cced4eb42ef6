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

// Reference computations used only by tests. They are written
// independently of the library code paths they check.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)> &f, double lo, double hi, int panels) {
    if (panels % 2) ++panels;
    const double h = (hi - lo) / panels;
    double s = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// int_0^inf e^{-l s} (1+s)^{-alpha} ds after t = (1+s)^{-(alpha-1)}
inline double tail_transform(double alpha, double lambda, int panels = 400000) {
    const double p = 1.0 / (alpha - 1.0);
    auto g = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::exp(-lambda * (std::pow(t, -p) - 1.0));
    };
    return simpson(g, 0.0, 1.0, panels) / (alpha - 1.0);
}

inline double psi(double alpha, double kappa, double lambda) {
    // lambda - kappa (1 - m), with 1 - m = lambda * tail_transform
    return lambda - kappa * lambda * tail_transform(alpha, lambda);
}

inline double bisect(const std::function<double(double)> &f, double target, double lo, double hi,
                     double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle
