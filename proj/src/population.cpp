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

#include "ltlab/population.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

#include "ltlab/localtime.hpp"

namespace ltlab {

double StepPath::value_at(double t) const {
    if (points.empty() || t < points.front().time || t > end_time)
        throw std::out_of_range("StepPath::value_at: time outside the path");
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double v, const StepPoint &p) { return v < p.time; });
    return std::prev(it)->value;
}

namespace {

using MinHeap = std::priority_queue<double, std::vector<double>, std::greater<>>;

double initial_draw(const ParetoLifetime &life, InitLaw init, RandomStream &rng) {
    return init == InitLaw::Lifetime ? life.sample(rng) : life.sample_size_biased(rng);
}

void check_population_args(std::int64_t z0, const PopulationStop &stop) {
    if (z0 < 1) throw std::invalid_argument("initial population must be positive");
    if (!(stop.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (stop.max_events < 1) throw std::invalid_argument("max_events must be positive");
}

} // namespace

CmjRun simulate_cmj(std::int64_t z0, InitLaw init, const ModelParams &params, PopulationStop stop,
                    RandomStream &rng) {
    check_population_args(z0, stop);
    const ParetoLifetime life(params.alpha());
    CmjRun run;
    MinHeap deaths;
    for (std::int64_t i = 0; i < z0; ++i) {
        const double l = initial_draw(life, init, rng);
        run.individuals.push_back({0.0, l});
        deaths.push(l);
    }
    auto &path = run.population;
    path.points.push_back({0.0, static_cast<double>(z0)});
    double t = 0.0;
    std::int64_t events = 0;
    while (!deaths.empty()) {
        if (events >= stop.max_events) {
            path.censored = true;
            path.end_time = t;
            return run;
        }
        const double z = static_cast<double>(deaths.size());
        const double birth = t + rng.exponential(params.kappa() * z);
        const double death = deaths.top();
        const double next = std::min(birth, death);
        if (next > stop.horizon) {
            path.end_time = stop.horizon;
            return run;
        }
        t = next;
        if (birth < death) {
            const double l = life.sample(rng);
            run.individuals.push_back({t, l});
            deaths.push(t + l);
        } else {
            deaths.pop();
        }
        ++events;
        path.points.push_back({t, static_cast<double>(deaths.size())});
    }
    path.end_time = t;
    return run;
}

PsRun simulate_ps(std::int64_t z0, InitLaw init, const ModelParams &params, PopulationStop stop,
                  RandomStream &rng) {
    check_population_args(z0, stop);
    const ParetoLifetime life(params.alpha());
    PsRun run;
    // finish tags in virtual time: each customer receives dV of service per unit V
    MinHeap tags;
    double V = 0.0, tag_sum = 0.0;
    for (std::int64_t i = 0; i < z0; ++i) {
        const double s = initial_draw(life, init, rng);
        tags.push(s);
        tag_sum += s;
        run.services.push_back(s);
        run.total_work += s;
    }
    auto workload = [&] { return tag_sum - static_cast<double>(tags.size()) * V; };
    run.queue_length.points.push_back({0.0, static_cast<double>(z0)});
    run.workload.points.push_back({0.0, run.total_work});
    double t = 0.0;
    std::int64_t events = 0;
    while (!tags.empty()) {
        auto finish = [&](double end) {
            run.queue_length.end_time = run.workload.end_time = end;
        };
        if (events >= stop.max_events) {
            run.queue_length.censored = run.workload.censored = true;
            finish(t);
            return run;
        }
        const double q = static_cast<double>(tags.size());
        const double arrival = t + rng.exponential(params.kappa());
        const double departure = t + (tags.top() - V) * q;
        const double next = std::min(arrival, departure);
        if (next > stop.horizon) {
            finish(stop.horizon);
            return run;
        }
        if (arrival < departure) {
            V += (arrival - t) / q;
            t = arrival;
            const double s = life.sample(rng);
            tags.push(V + s);
            tag_sum += V + s;
            run.services.push_back(s);
            run.total_work += s;
        } else {
            V = tags.top();
            t = departure;
            tag_sum -= tags.top();
            tags.pop();
        }
        ++events;
        run.queue_length.points.push_back({t, static_cast<double>(tags.size())});
        run.workload.points.push_back({t, tags.empty() ? 0.0 : std::max(0.0, workload())});
        if (tags.empty()) {
            tag_sum = 0.0;
            finish(t);
        }
    }
    return run;
}

namespace {

void check_excursion(const StepPath &e) {
    if (e.points.empty() || e.points.front().time != 0.0) throw std::invalid_argument("excursion must start at 0");
    for (std::size_t i = 0; i < e.points.size(); ++i) {
        const bool terminal = i + 1 == e.points.size() && e.points[i].time == e.end_time;
        if (e.points[i].value < 0.0 || (e.points[i].value == 0.0 && !terminal))
            throw std::invalid_argument("not a positive excursion: zero or negative piece before the end");
        if (i > 0 && !(e.points[i].time > e.points[i - 1].time))
            throw std::invalid_argument("step path times must increase");
    }
    if (e.end_time < e.points.back().time) throw std::invalid_argument("end_time before the last point");
}

// Rewrites piece durations with g(value, duration); the terminal zero point is kept.
template <class G> StepPath retime(const StepPath &e, G &&g) {
    check_excursion(e);
    StepPath out;
    out.censored = e.censored;
    out.points.reserve(e.points.size());
    double tau = 0.0;
    for (std::size_t i = 0; i < e.points.size(); ++i) {
        out.points.push_back({tau, e.points[i].value});
        const double next = i + 1 < e.points.size() ? e.points[i + 1].time : e.end_time;
        tau += g(e.points[i].value, next - e.points[i].time);
    }
    out.end_time = tau;
    return out;
}

} // namespace

StepPath lamperti(const StepPath &e) {
    return retime(e, [](double v, double d) { return v * d; });
}

StepPath lamperti_inverse(const StepPath &q) {
    return retime(q, [](double v, double d) { return v > 0.0 ? d / v : 0.0; });
}

double total_area(const StepPath &p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        const double next = i + 1 < p.points.size() ? p.points[i + 1].time : p.end_time;
        s += p.points[i].value * (next - p.points[i].time);
    }
    return s;
}

StepPath profile_as_excursion(const PathSkeleton &path) {
    if (path.end_reason != EndReason::HitZero || !(path.x0 > 0.0))
        throw std::invalid_argument("profile_as_excursion: need a positive start and a path killed at zero");
    const auto L = profile_from_path(path);
    StepPath out;
    const auto bp = L.breakpoints();
    std::int64_t run = 0;
    for (const auto &b : bp) {
        run += b.delta;
        out.points.push_back({b.level, static_cast<double>(run)});
    }
    out.end_time = bp.back().level;
    return out;
}

} // namespace ltlab
