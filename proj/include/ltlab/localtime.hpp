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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ltlab/model.hpp"
#include "ltlab/paths.hpp"
#include "ltlab/scale.hpp"

namespace ltlab {

struct Breakpoint {
    double level;
    std::int64_t delta;
};

/// Piecewise-constant visit-count function a -> L(a).
///
/// count(a) is the sum of the deltas at breakpoints strictly below a, so a
/// descent h_start -> h_end contributes +1 on (h_end, h_start]. Levels are in
/// view coordinates (unscaled, or divided by s_n for the rescaled view).
class LocalTimeProfile {
public:
    LocalTimeProfile() = default;
    LocalTimeProfile(std::vector<Breakpoint> breakpoints, double normalization, double level_scale);

    std::span<const Breakpoint> breakpoints() const { return breakpoints_; }
    double normalization() const { return normalization_; }
    double level_scale() const { return level_scale_; }
    double domain_end() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back().level; }

    std::int64_t count(double a) const;
    double value(double a) const { return normalization_ * static_cast<double>(count(a)); }
    /// Integral of value(a) over all levels.
    double integral() const;

private:
    std::vector<Breakpoint> breakpoints_;
    std::vector<std::int64_t> cumulative_; // count on (level_i, level_{i+1}]
    double normalization_ = 1.0;
    double level_scale_ = 1.0;
};

/// Raw visit counts (normalization 1, unscaled levels).
LocalTimeProfile profile_from_path(const PathSkeleton &path);
/// Rescaled view: levels / s_n, counts / r_n.
LocalTimeProfile profile_from_path(const PathSkeleton &path, const ModelParams &params);

/// Number of descent segments whose level set (h_end, h_start] holds level.
/// Unlike visit_count this includes the start point.
std::int64_t profile_count(const PathSkeleton &path, double level);

/// |int count - T(0)| for a path killed at zero.
double occupation_residual(const PathSkeleton &path);

/// p = 1 - w(0)/w(u): probability of returning to level u before zero.
double geometric_visit_param(const ScaleTable &table, double u);

/// G with P(G = k) = (1-p) p^k.
std::int64_t sample_geometric(double p, RandomStream &rng);
double geometric_pmf(double p, std::int64_t k);
/// E G, E G^2, E G^3.
std::array<double, 3> geometric_moments(double p);

struct FdLevels {
    double a, b, c;
};

struct FdSample {
    std::int64_t delta1;
    std::int64_t delta2;
};

/// Start law for the level-difference samplers: a fixed x0, or Lambda*
/// conditioned on T(a) < T(0) by rejection.
struct FdStart {
    enum class Kind { Fixed, SizeBiasedConditioned };
    Kind kind = Kind::Fixed;
    double x0 = 0.0;

    static FdStart at(double x) { return {Kind::Fixed, x}; }
    static FdStart size_biased() { return {Kind::SizeBiasedConditioned, 0.0}; }
};

struct FdDirectResult {
    std::vector<FdSample> samples;
    std::int64_t attempts = 0;
    std::int64_t censored = 0;
    double acceptance_rate() const {
        return attempts ? static_cast<double>(samples.size()) / static_cast<double>(attempts) : 0.0;
    }
};

FdDirectResult fd_direct_sample(const ModelParams &params, FdLevels levels, FdStart start,
                                std::size_t N, std::uint64_t seed, unsigned threads = 1);

/// Probabilities feeding the decomposition. Closed forms where available,
/// nested Monte Carlo (with standard errors) otherwise.
struct FdProbabilities {
    double p_G_a = 0;      // returns to a before 0
    double p_G_ba = 0;     // returns to b before a
    double p_G_cb = 0;     // returns to c before b
    double p_xi_a = 0;     // P^a(T(b) < T(a) | T(a) < T(0))
    double p_theta_b = 0;  // P^b(T(c) < T(b) | T(b) < T(a))
    // start law: {xi = -1}, {xi >= 0, theta = -1}, {xi >= 0, theta >= 0}
    std::array<double, 3> start{1, 0, 0};
    std::array<double, 3> start_se{0, 0, 0};
    double p_theta_a = 0;  // P^a(T(c) < T(b) | T(b) < T(a) < T(0))
    double p_theta_a_se = 0;
    std::int64_t nested_size = 0;
    double start_acceptance = 1.0;
};

FdProbabilities fd_probabilities(const ScaleTable &table, FdLevels levels, FdStart start,
                                 std::size_t nested_mc, std::uint64_t seed, unsigned threads = 1);

struct FdDecompositionResult {
    std::vector<FdSample> samples;
    FdProbabilities probabilities;
};

FdDecompositionResult fd_decomposition_sample(const ScaleTable &table, FdLevels levels, FdStart start,
                                              std::size_t N, std::size_t nested_mc, std::uint64_t seed,
                                              unsigned threads = 1);

/// Closed forms for the start-at-a case.
double xi_mean(const ScaleTable &table, FdLevels levels);
double p_xi_at_a(const ScaleTable &table, double a, double b);

/// u_{n,a}(x0, y) h_n(z) in rescaled coordinates.
double passage_density(const ScaleTable &table, double x0, double a, double y, double z);
/// Same density in unscaled coordinates.
double passage_density_unscaled(const ScaleTable &table, double x0, double a, double y, double z);
/// P^{x0}(upward exit of (0,a) with X(tau-) in [y0,y1), jump in [z0,z1)), unscaled.
double upward_exit_cell(const ScaleTable &table, double x0, double a, double y0, double y1, double z0,
                        double z1);
double upward_exit_probability(const ScaleTable &table, double x0, double a);
/// Z with P(jump < Z | upward exit) = q.
double upward_exit_jump_quantile(const ScaleTable &table, double x0, double a, double q);

/// z = ceil(zeta r_n), with r_n values within 1e-12 of an integer taken as exact.
std::int64_t local_time_budget(const ModelParams &params, double zeta);

struct BudgetLocalTime {
    std::vector<double> values; // rescaled L(a, T^L(z/r_n))
    std::int64_t pieces = 0;    // excursions above 0 simulated
    std::int64_t reached = 0;   // of which reached level a
};

/// Local time at rescaled level a > 0 up to the z-th visit to 0, critical case.
///
/// Each of the z excursions above 0 starts from a Lambda* overshoot o. A
/// start above a s_n is moved to a s_n (the path descends through it first).
/// The exit of (0, a s_n) is simulated; on an upward exit the excursion
/// visits a s_n 1 + G times, G geometric with parameter 1 - 1/w(a s_n).
BudgetLocalTime sample_budget_local_time(const ScaleTable &table, double a, std::int64_t z, std::size_t N,
                                         std::uint64_t seed, unsigned threads = 1);

/// Same cell with the overshoot o = y + z - a in [o0,o1) instead of the jump.
double upward_exit_overshoot_cell(const ScaleTable &table, double x0, double a, double y0, double y1, double o0,
                                  double o1);
/// O with P(overshoot < O | upward exit) = q.
double upward_exit_overshoot_quantile(const ScaleTable &table, double x0, double a, double q);

} // namespace ltlab
