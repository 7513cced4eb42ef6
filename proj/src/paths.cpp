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

#include "ltlab/paths.hpp"

#include <algorithm>
#include <limits>

namespace ltlab {

std::string_view to_string(EndReason r) {
    switch (r) {
    case EndReason::HitZero: return "HitZero";
    case EndReason::HitLevel: return "HitLevel";
    case EndReason::KthVisit: return "KthVisit";
    case EndReason::LocalTimeBudget: return "LocalTimeBudget";
    case EndReason::CutoffBelow: return "CutoffBelow";
    case EndReason::MaxEvents: return "MaxEvents";
    case EndReason::Horizon: return "Horizon";
    }
    return "?";
}

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void validate(const StopRule &rule) {
    std::visit(overloaded{
                   [](const HitZero &) {},
                   [](const FirstPassageAbove &r) {
                       if (!std::isfinite(r.level)) throw std::invalid_argument("FirstPassageAbove: level");
                   },
                   [](const KthVisit &r) {
                       if (!std::isfinite(r.level) || r.k < 1) throw std::invalid_argument("KthVisit: need k >= 1");
                   },
                   [](const ZeroVisits &r) {
                       if (r.count < 1) throw std::invalid_argument("ZeroVisits: need count >= 1");
                   },
                   [](const ExitInterval &r) {
                       if (!(r.upper > 0.0)) throw std::invalid_argument("ExitInterval: need upper > 0");
                   },
                   [](const CutoffBelow &r) {
                       if (!(r.depth > 0.0)) throw std::invalid_argument("CutoffBelow: need depth > 0");
                   },
                   [](const MaxEvents &r) {
                       if (r.cap < 1) throw std::invalid_argument("MaxEvents: need cap >= 1");
                   },
                   [](const Horizon &r) {
                       if (!(r.time > 0.0)) throw std::invalid_argument("Horizon: need time > 0");
                   },
               },
               rule);
}

// Level l is visited on the descent x -> y starting at time t iff y < l <= x,
// the start point itself only counting when t > 0.
inline bool crosses(double l, double x, double y, double t) {
    return y < l && (l < x || (l == x && t > 0.0));
}

} // namespace

PathSkeleton simulate(const ModelParams &params, Start start, const std::vector<StopRule> &rules,
                      RandomStream &rng) {
    for (const auto &r : rules) validate(r);
    const ParetoLifetime life(params.alpha());
    const double kappa = params.kappa();

    PathSkeleton p;
    switch (start.kind) {
    case Start::Kind::Fixed:
        if (!std::isfinite(start.x)) throw std::invalid_argument("start must be finite");
        p.x0 = start.x;
        break;
    case Start::Kind::Lifetime: p.x0 = life.sample(rng); break;
    case Start::Kind::SizeBiased: p.x0 = life.sample_size_biased(rng); break;
    }

    std::int64_t cap = kDefaultMaxEvents;
    std::optional<std::size_t> cap_rule;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (auto m = std::get_if<MaxEvents>(&rules[i]); m && m->cap < cap) {
            cap = m->cap;
            cap_rule = i;
        }
        if (auto e = std::get_if<ExitInterval>(&rules[i]);
            e && start.kind == Start::Kind::Fixed && !(p.x0 > 0.0))
            throw std::invalid_argument("ExitInterval needs a start inside (0, upper)");
    }

    auto finish = [&](double t, double v, EndReason why, std::size_t rule) {
        p.end_time = t;
        p.end_value = v;
        p.end_reason = why;
        p.stopped_by = rules[rule];
        return std::move(p);
    };

    // immediate exits at time 0
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (auto r = std::get_if<FirstPassageAbove>(&rules[i]); r && p.x0 > r->level)
            return finish(0.0, p.x0, EndReason::HitLevel, i);
        if (auto r = std::get_if<ExitInterval>(&rules[i]); r && p.x0 >= r->upper)
            return finish(0.0, p.x0, EndReason::HitLevel, i);
    }

    std::vector<std::int64_t> counts(rules.size(), 0);
    double t = 0.0;
    double x = p.x0;
    const double inf = std::numeric_limits<double>::infinity();
    for (;;) {
        const double gap = rng.exponential(kappa);
        const double y = x - gap;

        // earliest stop inside the descent segment
        double best_t = inf;
        double best_v = 0.0;
        EndReason best_reason = EndReason::MaxEvents;
        std::size_t best_rule = 0;
        auto propose = [&](double level, EndReason why, std::size_t i) {
            const double ts = t + (x - level);
            if (ts < best_t) {
                best_t = ts;
                best_v = level;
                best_reason = why;
                best_rule = i;
            }
        };
        for (std::size_t i = 0; i < rules.size(); ++i) {
            std::visit(overloaded{
                           [&](const HitZero &) {
                               if (crosses(0.0, x, y, t)) propose(0.0, EndReason::HitZero, i);
                           },
                           [&](const ExitInterval &) {
                               if (crosses(0.0, x, y, t)) propose(0.0, EndReason::HitZero, i);
                           },
                           [&](const KthVisit &r) {
                               if (crosses(r.level, x, y, t) && counts[i] + 1 == r.k)
                                   propose(r.level, EndReason::KthVisit, i);
                           },
                           [&](const ZeroVisits &r) {
                               if (crosses(0.0, x, y, t) && counts[i] + 1 == r.count)
                                   propose(0.0, EndReason::LocalTimeBudget, i);
                           },
                           [&](const CutoffBelow &r) {
                               if (crosses(-r.depth, x, y, t)) propose(-r.depth, EndReason::CutoffBelow, i);
                           },
                           [&](const Horizon &r) {
                               if (t + gap > r.time && r.time < best_t) {
                                   best_t = r.time;
                                   best_v = x - (r.time - t);
                                   best_reason = EndReason::Horizon;
                                   best_rule = i;
                               }
                           },
                           [](const FirstPassageAbove &) {},
                           [](const MaxEvents &) {},
                       },
                       rules[i]);
        }
        if (best_t < inf) return finish(best_t, best_v, best_reason, best_rule);

        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (auto r = std::get_if<KthVisit>(&rules[i]); r && crosses(r->level, x, y, t)) ++counts[i];
            if (std::holds_alternative<ZeroVisits>(rules[i]) && crosses(0.0, x, y, t)) ++counts[i];
        }

        t += gap;
        const double jump = life.sample(rng);
        p.events.push_back({t, y, jump});
        x = y + jump;

        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (auto r = std::get_if<FirstPassageAbove>(&rules[i]); r && x > r->level)
                return finish(t, x, EndReason::HitLevel, i);
            if (auto r = std::get_if<ExitInterval>(&rules[i]); r && x >= r->upper)
                return finish(t, x, EndReason::HitLevel, i);
        }
        if (static_cast<std::int64_t>(p.events.size()) >= cap) {
            p.end_time = t;
            p.end_value = x;
            p.end_reason = EndReason::MaxEvents;
            p.stopped_by = cap_rule ? rules[*cap_rule] : StopRule{MaxEvents{cap}};
            return p;
        }
    }
}

double PathSkeleton::value_at(double t) const {
    if (!(t >= 0.0) || t > end_time) throw std::out_of_range("value_at: time outside [0, end_time]");
    if (t == end_time) return end_value;
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double s, const PathEvent &e) { return s < e.time; });
    double ts = 0.0, h = x0;
    if (it != events.begin()) {
        --it;
        ts = it->time;
        h = it->pre_jump_value + it->jump;
    }
    const double v = h - (t - ts);
    return floor_at_zero ? std::max(v, 0.0) : v;
}

namespace {

bool ends_at_level(const PathSkeleton &p) {
    switch (p.end_reason) {
    case EndReason::HitZero:
    case EndReason::KthVisit:
    case EndReason::LocalTimeBudget:
    case EndReason::CutoffBelow: return true;
    default: return false;
    }
}

template <class F> void for_each_visit(const PathSkeleton &p, double level, F &&f) {
    const bool closed_end = ends_at_level(p);
    p.for_each_descent([&](double ts, double hs, double he, bool last) {
        const bool below = he < level || (he == level && ((last && closed_end) || p.floor_at_zero));
        const bool above = level < hs || (level == hs && ts > 0.0);
        if (below && above) f(ts + (hs - level));
    });
}

} // namespace

std::optional<Passage> first_passage(const PathSkeleton &path, double level, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("first_passage: k must be positive");
    std::int64_t seen = 0;
    std::optional<Passage> out;
    for_each_visit(path, level, [&](double time) {
        if (!out && ++seen == k) out = Passage{time, level};
    });
    return out;
}

std::int64_t visit_count(const PathSkeleton &path, double level) {
    std::int64_t n = 0;
    for_each_visit(path, level, [&](double) { ++n; });
    return n;
}

std::optional<double> overshoot_above(const PathSkeleton &path, double level) {
    if (path.x0 > level) return path.x0 - level;
    for (const auto &e : path.events) {
        const double landing = e.pre_jump_value + e.jump;
        if (landing > level) return landing - level;
    }
    return std::nullopt;
}

ExitState exit_state(const PathSkeleton &path, double a) {
    const auto *rule = path.stopped_by ? std::get_if<ExitInterval>(&*path.stopped_by) : nullptr;
    if (!rule || rule->upper != a) throw std::invalid_argument("exit_state: path not stopped by ExitInterval(0, a)");
    if (path.end_reason == EndReason::HitZero) return DownwardExit{path.end_time};
    if (path.events.empty()) throw std::invalid_argument("exit_state: start outside (0, a)");
    const auto &e = path.events.back();
    return UpwardExit{e.pre_jump_value, e.jump};
}

PathSkeleton reflect(const PathSkeleton &path) {
    PathSkeleton r = path;
    r.floor_at_zero = true;
    // running minimum of min(0, f); minima sit just before jumps or at the end
    double m = std::min(0.0, path.x0);
    r.x0 = path.x0 - m;
    for (auto &e : r.events) {
        m = std::min(m, e.pre_jump_value);
        e.pre_jump_value -= m;
    }
    m = std::min(m, path.end_value);
    r.end_value = path.end_value - m;
    return r;
}

std::optional<double> sample_passage_overshoot(const ModelParams &params, RandomStream &rng, double cutoff) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("sample_passage_overshoot: cutoff must be positive");
    auto path = simulate(params, Start::at(0.0), {FirstPassageAbove{0.0}, CutoffBelow{cutoff}}, rng);
    if (path.end_reason == EndReason::HitLevel) return path.end_value;
    if (path.end_reason != EndReason::CutoffBelow)
        throw NumericError("sample_passage_overshoot: path censored by the event cap");
    return std::nullopt;
}

} // namespace ltlab
