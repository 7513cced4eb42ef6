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
#include <limits>
#include <vector>

#include "ltlab/model.hpp"
#include "ltlab/paths.hpp"
#include "ltlab/rng.hpp"

namespace ltlab {

struct StepPoint {
    double time;
    double value;
};

/// Right-continuous step function: points[i].value holds on
/// [points[i].time, points[i+1].time), the last value up to end_time.
struct StepPath {
    std::vector<StepPoint> points;
    double end_time = 0.0;
    bool censored = false;

    double value_at(double t) const;
    double duration() const { return end_time; }
};

struct Individual {
    double birth_time;
    double lifetime;
};

enum class InitLaw { Lifetime, SizeBiased };

struct PopulationStop {
    double horizon = std::numeric_limits<double>::infinity();
    std::int64_t max_events = kDefaultMaxEvents;
};

struct CmjRun {
    StepPath population;
    std::vector<Individual> individuals;
    bool extinct() const { return !population.points.empty() && population.points.back().value == 0.0; }
};

/// Crump-Mode-Jagers process: each alive individual gives birth at rate kappa,
/// lifetimes are Pareto(alpha). Starts with z0 individuals at time 0.
CmjRun simulate_cmj(std::int64_t z0, InitLaw init, const ModelParams &params, PopulationStop stop,
                    RandomStream &rng);

struct PsRun {
    StepPath queue_length;
    /// Workload after each event; it decreases at unit rate in between.
    StepPath workload;
    /// Service requirements in arrival order, initial customers first.
    std::vector<double> services;
    /// Initial work plus all arrived service requirements.
    double total_work = 0.0;
    bool emptied() const { return !queue_length.points.empty() && queue_length.points.back().value == 0.0; }
};

/// M/G/1 Processor-Sharing queue with arrival rate kappa and Pareto(alpha)
/// services, started with z0 customers.
PsRun simulate_ps(std::int64_t z0, InitLaw init, const ModelParams &params, PopulationStop stop,
                  RandomStream &rng);

/// Time change: a piece of value v and duration d becomes value v, duration v d.
StepPath lamperti(const StepPath &e);
/// Inverse time change: durations are divided by the piece value.
StepPath lamperti_inverse(const StepPath &q);

/// Sum of value x duration over the pieces.
double total_area(const StepPath &p);

/// Visit-count profile a -> L(a) of a path as a step path on [0, domain_end].
StepPath profile_as_excursion(const PathSkeleton &path);

} // namespace ltlab
