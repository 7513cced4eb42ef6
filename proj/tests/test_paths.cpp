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

#include "doctest.h"

#include <cmath>

#include "ltlab/paths.hpp"
#include "ltlab/scale.hpp"
#include "ltlab/stats.hpp"

using namespace ltlab;

namespace {

PathSkeleton drift_path(double x0, double end_time, EndReason why) {
    PathSkeleton p;
    p.x0 = x0;
    p.end_time = end_time;
    p.end_value = x0 - end_time;
    p.end_reason = why;
    return p;
}

bool same(const PathSkeleton &a, const PathSkeleton &b) {
    if (a.x0 != b.x0 || a.end_time != b.end_time || a.end_value != b.end_value ||
        a.end_reason != b.end_reason || a.events.size() != b.events.size())
        return false;
    for (std::size_t i = 0; i < a.events.size(); ++i)
        if (a.events[i].time != b.events[i].time || a.events[i].pre_jump_value != b.events[i].pre_jump_value ||
            a.events[i].jump != b.events[i].jump)
            return false;
    return true;
}

void check_skeleton(const PathSkeleton &p) {
    double t = 0.0, h = p.x0;
    for (const auto &e : p.events) {
        REQUIRE(e.time > t);
        REQUIRE(e.jump > 0.0);
        REQUIRE(e.pre_jump_value == doctest::Approx(h - (e.time - t)).epsilon(1e-12).scale(std::abs(h) + 1));
        t = e.time;
        h = e.pre_jump_value + e.jump;
    }
    REQUIRE(p.end_time >= t);
    if (p.end_reason == EndReason::HitZero) REQUIRE(p.end_value == 0.0);
}

const ModelParams kSub(1.5, 0.4, 100);

} // namespace

TEST_CASE("stop rule validation") {
    RandomStream rng(1, 1);
    CHECK_THROWS_AS(simulate(kSub, Start::at(1.0), {KthVisit{1.0, 0}}, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(kSub, Start::at(1.0), {ZeroVisits{0}}, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(kSub, Start::at(1.0), {MaxEvents{0}}, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(kSub, Start::at(1.0), {CutoffBelow{0.0}}, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(kSub, Start::at(1.0), {Horizon{-1.0}}, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(kSub, Start::at(1.0), {ExitInterval{0.0}}, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate(kSub, Start::at(0.0), {ExitInterval{5.0}}, rng), std::invalid_argument);
}

TEST_CASE("pure drift from 1 hits zero at time 1") {
    bool found = false;
    for (std::uint64_t s = 0; s < 50 && !found; ++s) {
        RandomStream rng(7, s);
        auto p = simulate(kSub, Start::at(1.0), {HitZero{}}, rng);
        if (p.events.empty()) {
            found = true;
            CHECK(p.end_time == 1.0);
            CHECK(p.end_value == 0.0);
            CHECK(p.end_reason == EndReason::HitZero);
        }
    }
    CHECK(found);
}

TEST_CASE("skeleton invariants and determinism") {
    for (std::uint64_t s = 0; s < 300; ++s) {
        RandomStream a(11, s), b(11, s);
        auto p = simulate(kSub, Start::lifetime(), {HitZero{}, CutoffBelow{100.0}}, a);
        auto q = simulate(kSub, Start::lifetime(), {HitZero{}, CutoffBelow{100.0}}, b);
        check_skeleton(p);
        CHECK(same(p, q));
        CHECK((p.end_reason == EndReason::HitZero || p.end_reason == EndReason::CutoffBelow));
    }
}

TEST_CASE("ZeroVisits stops at the requested zero") {
    ModelParams crit(1.5, 0.5, 100);
    int checked = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        RandomStream rng(5, s);
        auto p = simulate(crit, Start::at(0.0), {ZeroVisits{3}, MaxEvents{100000}}, rng);
        if (p.end_reason != EndReason::LocalTimeBudget) continue;
        ++checked;
        CHECK(p.end_value == 0.0);
        CHECK(visit_count(p, 0.0) == 3);
        CHECK(first_passage(p, 0.0, 3)->time == p.end_time);
    }
    CHECK(checked > 100);
}

TEST_CASE("MaxEvents returns a flagged partial path") {
    RandomStream rng(3, 3);
    auto p = simulate(kSub, Start::at(50.0), {HitZero{}, MaxEvents{5}}, rng);
    CHECK(p.end_reason == EndReason::MaxEvents);
    CHECK(p.events.size() == 5);
    CHECK(p.end_time == p.events.back().time);
}

TEST_CASE("Horizon stops at the horizon time") {
    RandomStream rng(3, 4);
    auto p = simulate(kSub, Start::at(50.0), {HitZero{}, Horizon{10.0}}, rng);
    CHECK(p.end_reason == EndReason::Horizon);
    CHECK(p.end_time == 10.0);
    CHECK(p.value_at(10.0) == p.end_value);
}

TEST_CASE("first_passage on hand-built paths") {
    auto p = drift_path(1.0, 1.0, EndReason::HitZero);
    auto fp = first_passage(p, 0.5, 1);
    REQUIRE(fp);
    CHECK(fp->time == 0.5);
    CHECK(fp->value == 0.5);
    CHECK_FALSE(first_passage(p, 0.5, 2));
    CHECK_FALSE(first_passage(p, 1.0, 1)); // start point at t = 0 is not a visit
    CHECK(first_passage(p, 0.0, 1)->time == 1.0);
    CHECK_THROWS(first_passage(p, 0.5, 0));

    // 2 -> 0.5, jump 2 -> 2.5 -> 0
    PathSkeleton q;
    q.x0 = 2.0;
    q.events = {{1.5, 0.5, 2.0}};
    q.end_time = 4.0;
    q.end_value = 0.0;
    q.end_reason = EndReason::HitZero;
    CHECK(first_passage(q, 1.0, 1)->time == 1.0);
    CHECK(first_passage(q, 1.0, 2)->time == 3.0);
    CHECK(visit_count(q, 1.0) == 2);
    CHECK(visit_count(q, 2.2) == 1);
    CHECK(visit_count(q, 0.2) == 1);
    CHECK(q.value_at(1.5) == 2.5);
    CHECK(q.value_at(1.0) == 1.0);
}

TEST_CASE("first_passage agrees with a fine grid scan") {
    const double h = 1e-5;
    int used = 0;
    for (std::uint64_t s = 0; used < 100; ++s) {
        RandomStream rng(99, s);
        auto p = simulate(kSub, Start::at(3.0), {HitZero{}}, rng);
        if (p.end_time > 30.0) continue;
        ++used;
        for (double level : {0.7, 2.5}) {
            // scan: downward crossings between grid points with no jump inside
            std::vector<double> scan;
            std::size_t next_event = 0;
            const auto steps = static_cast<std::size_t>(p.end_time / h);
            double prev = p.value_at(0.0);
            for (std::size_t i = 1; i <= steps; ++i) {
                const double t = std::min(i * h, p.end_time);
                bool jumped = false;
                while (next_event < p.events.size() && p.events[next_event].time <= t) {
                    jumped = true;
                    ++next_event;
                }
                const double v = p.value_at(t);
                if (!jumped && prev >= level && v < level) scan.push_back(t);
                prev = v;
            }
            for (std::size_t k = 1; k <= scan.size(); ++k) {
                auto fp = first_passage(p, level, k);
                REQUIRE(fp);
                CHECK(std::abs(fp->time - scan[k - 1]) <= h * 1.01);
            }
            CHECK(visit_count(p, level) >= static_cast<std::int64_t>(scan.size()));
            CHECK(visit_count(p, level) <= static_cast<std::int64_t>(scan.size()) + 1);
        }
    }
}

TEST_CASE("overshoot_above") {
    auto p = drift_path(1.0, 1.0, EndReason::HitZero);
    CHECK_FALSE(overshoot_above(p, 3.0));
    PathSkeleton q;
    q.x0 = 1.0;
    q.events = {{0.5, 0.5, 4.0}};
    q.end_time = 5.0;
    q.end_reason = EndReason::HitZero;
    CHECK(*overshoot_above(q, 3.0) == 1.5);
    CHECK_FALSE(overshoot_above(q, 4.6));
}

TEST_CASE("exit_state") {
    auto p = drift_path(2.0, 2.0, EndReason::HitZero);
    CHECK_THROWS_AS(exit_state(p, 5.0), std::invalid_argument);
    p.stopped_by = ExitInterval{5.0};
    auto e = exit_state(p, 5.0);
    REQUIRE(std::holds_alternative<DownwardExit>(e));
    CHECK(std::get<DownwardExit>(e).time == 2.0);

    const auto table = solve_scale(kSub, 1e-3, 10.0);
    const int N = 20000;
    int up = 0;
    for (int i = 0; i < N; ++i) {
        RandomStream rng(17, i);
        auto path = simulate(kSub, Start::at(2.0), {ExitInterval{5.0}}, rng);
        auto st = exit_state(path, 5.0);
        if (auto u = std::get_if<UpwardExit>(&st)) {
            ++up;
            REQUIRE(u->y < 5.0);
            REQUIRE(u->y + u->z >= 5.0);
            REQUIRE(u->y > 0.0);
        }
    }
    const double ref = 1.0 - table.w(3.0) / table.w(5.0);
    CHECK(std::abs(up / double(N) - ref) < 3.0 * std::sqrt(ref * (1 - ref) / N));
}

TEST_CASE("reflect") {
    auto d = drift_path(0.0, 3.0, EndReason::Horizon);
    auto r = reflect(d);
    for (double t : {0.0, 1.0, 3.0}) CHECK(r.value_at(t) == 0.0);

    for (std::uint64_t s = 0; s < 100; ++s) {
        RandomStream rng(23, s);
        auto p = simulate(kSub, Start::at(1.0), {Horizon{20.0}}, rng);
        auto q = reflect(p);
        REQUIRE(q.events.size() == p.events.size());
        for (std::size_t i = 0; i < p.events.size(); ++i) {
            CHECK(q.events[i].time == p.events[i].time);
            CHECK(q.events[i].jump == p.events[i].jump);
            CHECK(q.events[i].pre_jump_value >= 0.0);
        }
        double running_min = 0.0;
        std::size_t ev = 0;
        for (double t = 0.0; t <= 20.0; t += 0.01) {
            // the infimum is attained at left limits before jumps
            while (ev < p.events.size() && p.events[ev].time <= t)
                running_min = std::min(running_min, p.events[ev++].pre_jump_value);
            const double v = p.value_at(t);
            running_min = std::min(running_min, v);
            const double rv = q.value_at(t);
            CHECK(rv >= 0.0);
            CHECK(rv == doctest::Approx(v - running_min).epsilon(1e-9).scale(1.0));
        }
        // paths killed at zero never go negative: reflection is the identity
        RandomStream rng2(29, s);
        auto k = simulate(kSub, Start::at(1.0), {HitZero{}}, rng2);
        CHECK(same(reflect(k), k));
    }
}

TEST_CASE("exit identity, first-passage Laplace transform, two-sided exit (small N)") {
    const auto table = solve_scale(kSub, 1e-3, 40.0);
    const LevyExponent ex(kSub);
    const int N = 20000;
    int down = 0, two_sided = 0;
    double lap = 0.0, lap2 = 0.0;
    const double lambda = 1.0, x = 3.0;
    for (int i = 0; i < N; ++i) {
        RandomStream r1(31, i), r2(37, i), r3(41, i);
        auto p = simulate(kSub, Start::at(5.0), {ExitInterval{20.0}}, r1);
        down += p.end_reason == EndReason::HitZero;
        auto q = simulate(kSub, Start::at(x), {HitZero{}, Horizon{100.0 / lambda}}, r2);
        const double v = q.end_reason == EndReason::HitZero ? std::exp(-lambda * q.end_time) : 0.0;
        lap += v;
        lap2 += v * v;
        auto z = simulate(kSub, Start::at(0.0), {HitZero{}, KthVisit{-2.0, 1}, FirstPassageAbove{3.0}}, r3);
        two_sided += z.end_reason != EndReason::HitZero;
    }
    const double p_ref = table.w(15.0) / table.w(20.0);
    CHECK(std::abs(down / double(N) - p_ref) < 3.0 * std::sqrt(p_ref * (1 - p_ref) / N));
    const double m = lap / N;
    const double se = std::sqrt((lap2 / N - m * m) / N);
    CHECK(std::abs(m - std::exp(-ex.phi(lambda) * x)) < 3.0 * se);
    const double t_ref = (1.0 / table.w(2.0)) / (table.w(3.0) / table.w(5.0));
    CHECK(std::abs(two_sided / double(N) - t_ref) < 3.0 * std::sqrt(t_ref * (1 - t_ref) / N));
}

TEST_CASE("hitting probability from a lifetime-distributed start") {
    const auto table = solve_scale(kSub, 1e-3, 10.0);
    const int N = 20000;
    const double a = 3.0;
    int hit = 0;
    for (int i = 0; i < N; ++i) {
        RandomStream rng(43, i);
        auto p = simulate(kSub, Start::lifetime(), {HitZero{}, KthVisit{a, 1}, FirstPassageAbove{a}}, rng);
        hit += p.end_reason != EndReason::HitZero;
    }
    // rescaled form W_n'(a)/(kappa s_n W_n(a)) at a/s_n equals the unscaled ratio
    const auto r = rescaled_scale(table, a / kSub.s_n());
    const double ref = r.W_prime / (kSub.kappa() * kSub.s_n() * r.W);
    CHECK(ref == doctest::Approx(table.w_prime(a) / (kSub.kappa() * table.w(a))).epsilon(1e-9));
    CHECK(std::abs(hit / double(N) - ref) < 3.0 * std::sqrt(ref * (1 - ref) / N));
}

TEST_CASE("overshoot above 0 has the size-biased law") {
    const ModelParams p(1.9, 0.4, 100);
    const ParetoLifetime life(p.alpha());
    const double M = 1e3;
    std::vector<double> xs;
    int cut = 0;
    for (int i = 0; xs.size() < 20000; ++i) {
        RandomStream rng(53, i);
        if (auto o = sample_passage_overshoot(p, rng, M))
            xs.push_back(*o);
        else
            ++cut;
    }
    auto r = ks_one_sample(xs, [&](double x) { return 1.0 - life.size_biased_tail(x); });
    MESSAGE("ks " << r.statistic << " / " << r.threshold);
    CHECK(r.pass);
    // fraction of paths that never pass: 1 - kappa E(Lambda), up to the cutoff bias
    const double coarse = cutoff_bias(solve_scale(p, 0.1, M), M);
    const double bias = (4.0 * cutoff_bias(solve_scale(p, 0.05, M), M) - coarse) / 3.0;
    const double never = static_cast<double>(cut) / (cut + 20000.0);
    const double ref = 1.0 - p.load();
    CHECK(bias > 0.0);
    CHECK(bias < 0.01);
    CHECK(std::abs(never - ref) <= 3.0 * std::sqrt(ref * (1.0 - ref) / (cut + 20000.0)) + bias);
    RandomStream rng(1, 1);
    CHECK_THROWS_AS(sample_passage_overshoot(p, rng, 0.0), std::invalid_argument);
}
