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
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "ltlab/model.hpp"

namespace ltlab {

// Stop rules. Visits are counted at times t > 0 only.
struct HitZero {};
struct FirstPassageAbove {
    double level;
};
struct KthVisit {
    double level;
    std::int64_t k;
};
struct ZeroVisits {
    std::int64_t count;
};
struct ExitInterval {
    double upper; // exit of (0, upper)
};
struct CutoffBelow {
    double depth; // stop on reaching -depth
};
struct MaxEvents {
    std::int64_t cap;
};
struct Horizon {
    double time;
};

using StopRule = std::variant<HitZero, FirstPassageAbove, KthVisit, ZeroVisits, ExitInterval,
                              CutoffBelow, MaxEvents, Horizon>;

enum class EndReason { HitZero, HitLevel, KthVisit, LocalTimeBudget, CutoffBelow, MaxEvents, Horizon };

std::string_view to_string(EndReason r);

inline constexpr std::int64_t kDefaultMaxEvents = 10'000'000;

/// Where the path starts: a fixed point, a Lambda draw, or a Lambda* draw.
struct Start {
    enum class Kind { Fixed, Lifetime, SizeBiased };
    Kind kind = Kind::Fixed;
    double x = 0.0;

    static Start at(double x) { return {Kind::Fixed, x}; }
    static Start lifetime() { return {Kind::Lifetime, 0.0}; }
    static Start size_biased() { return {Kind::SizeBiased, 0.0}; }
};

struct PathEvent {
    double time;
    double pre_jump_value;
    double jump;
};

/// Exact event-level trajectory of X(t) = compound Poisson - t.
///
/// Between events the path has slope -1. With floor_at_zero set (reflected
/// skeletons) the path is max(., 0) between events instead.
struct PathSkeleton {
    double x0 = 0.0;
    std::vector<PathEvent> events;
    double end_time = 0.0;
    double end_value = 0.0;
    EndReason end_reason = EndReason::MaxEvents;
    std::optional<StopRule> stopped_by;
    bool floor_at_zero = false;

    double value_at(double t) const;

    /// Calls f(t_start, h_start, h_end, last) for each descent segment.
    template <class F> void for_each_descent(F &&f) const {
        double t = 0.0;
        double h = x0;
        for (std::size_t i = 0; i <= events.size(); ++i) {
            const bool last = i == events.size();
            const double h_end = last ? end_value : events[i].pre_jump_value;
            f(t, h, h_end, last);
            if (!last) {
                t = events[i].time;
                h = events[i].pre_jump_value + events[i].jump;
            }
        }
    }
};

PathSkeleton simulate(const ModelParams &params, Start start, const std::vector<StopRule> &rules,
                      RandomStream &rng);

struct Passage {
    double time;
    double value;
};

/// k-th visit to a level (f(t) or f(t-) equal to level, t > 0).
std::optional<Passage> first_passage(const PathSkeleton &path, double level, std::int64_t k = 1);

/// Number of visits to a level at times t > 0.
std::int64_t visit_count(const PathSkeleton &path, double level);

/// X(T((level, inf))) - level.
std::optional<double> overshoot_above(const PathSkeleton &path, double level);

struct UpwardExit {
    double y; // X(tau-)
    double z; // jump at tau
};
struct DownwardExit {
    double time;
};
using ExitState = std::variant<UpwardExit, DownwardExit>;

ExitState exit_state(const PathSkeleton &path, double a);

PathSkeleton reflect(const PathSkeleton &path);

/// Overshoot above 0 of a path started at 0, simulated with CutoffBelow(cutoff).
/// Absent when the path reaches -cutoff first.
std::optional<double> sample_passage_overshoot(const ModelParams &params, RandomStream &rng, double cutoff = 1e3);

} // namespace ltlab
