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

#include "ltlab/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "ltlab/parallel.hpp"

namespace ltlab {

namespace {
constexpr std::uint64_t kFdDirectStream = 0x11;
constexpr std::uint64_t kFdStartStream = 0x12;
constexpr std::uint64_t kFdThetaStream = 0x13;
constexpr std::uint64_t kFdDecompStream = 0x14;
constexpr std::uint64_t kBudgetStream = 0x15;
} // namespace

LocalTimeProfile::LocalTimeProfile(std::vector<Breakpoint> breakpoints, double normalization,
                                   double level_scale)
    : normalization_(normalization), level_scale_(level_scale) {
    std::sort(breakpoints.begin(), breakpoints.end(),
              [](const Breakpoint &x, const Breakpoint &y) { return x.level < y.level; });
    for (const auto &b : breakpoints) {
        if (!breakpoints_.empty() && breakpoints_.back().level == b.level)
            breakpoints_.back().delta += b.delta;
        else
            breakpoints_.push_back(b);
    }
    std::erase_if(breakpoints_, [](const Breakpoint &b) { return b.delta == 0; });
    cumulative_.resize(breakpoints_.size());
    std::int64_t run = 0;
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        run += breakpoints_[i].delta;
        if (run < 0) throw std::logic_error("local time profile went negative");
        cumulative_[i] = run;
    }
}

std::int64_t LocalTimeProfile::count(double a) const {
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), a,
                               [](const Breakpoint &b, double v) { return b.level < v; });
    const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
    return idx == 0 ? 0 : cumulative_[idx - 1];
}

double LocalTimeProfile::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        s += static_cast<double>(cumulative_[i]) * (breakpoints_[i + 1].level - breakpoints_[i].level);
    return normalization_ * s;
}

namespace {
LocalTimeProfile build_profile(const PathSkeleton &path, double normalization, double level_scale) {
    std::vector<Breakpoint> bp;
    bp.reserve(2 * path.events.size() + 2);
    path.for_each_descent([&](double, double hs, double he, bool) {
        if (hs > he) {
            bp.push_back({he * level_scale, +1});
            bp.push_back({hs * level_scale, -1});
        }
    });
    return {std::move(bp), normalization, level_scale};
}
} // namespace

LocalTimeProfile profile_from_path(const PathSkeleton &path) { return build_profile(path, 1.0, 1.0); }

LocalTimeProfile profile_from_path(const PathSkeleton &path, const ModelParams &params) {
    return build_profile(path, 1.0 / params.r_n(), 1.0 / params.s_n());
}

std::int64_t profile_count(const PathSkeleton &path, double level) {
    std::int64_t n = 0;
    path.for_each_descent([&](double, double hs, double he, bool) { n += he < level && level <= hs; });
    return n;
}

double occupation_residual(const PathSkeleton &path) {
    if (path.end_reason != EndReason::HitZero)
        throw std::invalid_argument("occupation_residual: path must be killed at zero");
    return std::abs(profile_from_path(path).integral() - path.end_time);
}

double geometric_visit_param(const ScaleTable &table, double u) {
    if (!(u >= 0.0)) throw std::out_of_range("geometric_visit_param: u must be nonnegative");
    return 1.0 - table.w(0.0) / table.w(u);
}

std::int64_t sample_geometric(double p, RandomStream &rng) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) throw std::invalid_argument("geometric parameter must be < 1");
    return static_cast<std::int64_t>(std::floor(std::log(rng.uniform()) / std::log(p)));
}

double geometric_pmf(double p, std::int64_t k) {
    if (k < 0) return 0.0;
    return (1.0 - p) * std::pow(p, static_cast<double>(k));
}

std::array<double, 3> geometric_moments(double p) {
    const double q = 1.0 - p;
    return {p / q, p * (1.0 + p) / (q * q), p * (1.0 + 4.0 * p + p * p) / (q * q * q)};
}

double xi_mean(const ScaleTable &t, FdLevels l) {
    return (t.w(l.b) - t.w(l.a) - t.w(l.b - l.a) + 1.0) / (t.w(l.a) - 1.0);
}

double p_xi_at_a(const ScaleTable &t, double a, double b) {
    if (!(0.0 < a && a < b)) throw std::invalid_argument("p_xi_at_a: need 0 < a < b");
    const double wba = t.w(b - a);
    return 1.0 - (wba * t.w(a) - t.w(b)) / (wba * (t.w(a) - 1.0));
}

namespace {

void check_levels(FdLevels l) {
    if (!(0.0 < l.a && l.a < l.b && l.b < l.c)) throw std::invalid_argument("fd levels: need 0 < a < b < c");
}

// first time the profile picks up the level (start point included)
double first_profile_visit(const PathSkeleton &path, double level) {
    double out = std::numeric_limits<double>::infinity();
    path.for_each_descent([&](double ts, double hs, double he, bool) {
        if (std::isinf(out) && he < level && level <= hs) out = ts + (hs - level);
    });
    return out;
}

struct Attempt {
    bool accepted = false;
    bool censored = false;
    FdSample sample{};
};

Attempt direct_attempt(const ModelParams &params, FdLevels l, FdStart start, RandomStream &rng) {
    double x0 = start.x0;
    if (start.kind == FdStart::Kind::SizeBiasedConditioned) {
        x0 = ParetoLifetime(params.alpha()).sample_size_biased(rng);
        // above c the path must come down through c first: same law as a start at c
        x0 = std::min(x0, l.c);
    }
    auto path = simulate(params, Start::at(x0), {HitZero{}}, rng);
    Attempt out;
    if (path.end_reason == EndReason::MaxEvents) {
        out.censored = true;
        return out;
    }
    const auto na = profile_count(path, l.a);
    if (na == 0) return out;
    const auto nb = profile_count(path, l.b);
    const auto nc = profile_count(path, l.c);
    out.accepted = true;
    out.sample = {nb - na, nc - nb};
    return out;
}

} // namespace

FdDirectResult fd_direct_sample(const ModelParams &params, FdLevels levels, FdStart start, std::size_t N,
                                std::uint64_t seed, unsigned threads) {
    check_levels(levels);
    if (start.kind == FdStart::Kind::Fixed && !(start.x0 > 0.0))
        throw std::invalid_argument("fd_direct_sample: fixed start must be positive");
    FdDirectResult res;
    res.samples.reserve(N);
    const std::size_t batch = std::max<std::size_t>(1024, N / 4);
    std::vector<Attempt> buf(batch);
    std::uint64_t next = 0;
    while (res.samples.size() < N) {
        parallel_for(batch, threads, [&](std::size_t i) {
            RandomStream rng(seed, stream_id(kFdDirectStream, next + i));
            buf[i] = direct_attempt(params, levels, start, rng);
        });
        for (std::size_t i = 0; i < batch && res.samples.size() < N; ++i) {
            ++res.attempts;
            res.censored += buf[i].censored;
            if (buf[i].accepted) res.samples.push_back(buf[i].sample);
        }
        next += batch;
        if (res.attempts >= 10000 && res.acceptance_rate() < 1e-4)
            throw std::runtime_error("fd_direct_sample: acceptance rate " + std::to_string(res.acceptance_rate()) +
                                     " below 1e-4 after " + std::to_string(res.attempts) + " attempts");
    }
    return res;
}

namespace {

// Rejection loop that stops after `target` accepted outcomes; outcome < 0 means rejected.
template <class F>
std::vector<int> accepted_outcomes(std::size_t target, std::uint64_t seed, std::uint64_t purpose,
                                   unsigned threads, std::int64_t &attempts, F &&trial) {
    std::vector<int> out;
    out.reserve(target);
    const std::size_t batch = std::max<std::size_t>(4096, target / 4);
    std::vector<int> buf(batch);
    std::uint64_t next = 0;
    attempts = 0;
    while (out.size() < target) {
        parallel_for(batch, threads, [&](std::size_t i) {
            RandomStream rng(seed, stream_id(purpose, next + i));
            buf[i] = trial(rng);
        });
        for (std::size_t i = 0; i < batch && out.size() < target; ++i) {
            ++attempts;
            if (buf[i] >= 0) out.push_back(buf[i]);
        }
        next += batch;
        if (attempts >= 100000 && static_cast<double>(out.size()) < 1e-4 * static_cast<double>(attempts))
            throw std::runtime_error("nested Monte Carlo: conditioning event too rare");
    }
    return out;
}

} // namespace

FdProbabilities fd_probabilities(const ScaleTable &table, FdLevels l, FdStart start, std::size_t nested_mc,
                                 std::uint64_t seed, unsigned threads) {
    check_levels(l);
    if (l.c > table.x_max()) throw std::out_of_range("fd levels exceed the scale table range");
    const ModelParams &params = table.params();
    FdProbabilities p;
    p.p_G_a = geometric_visit_param(table, l.a);
    p.p_G_ba = geometric_visit_param(table, l.b - l.a);
    p.p_G_cb = geometric_visit_param(table, l.c - l.b);
    p.p_xi_a = p_xi_at_a(table, l.a, l.b);
    // translate by -a: P^{b-a}(T(c-a) < T(b-a) | T(b-a) < T(0))
    p.p_theta_b = p_xi_at_a(table, l.b - l.a, l.c - l.a);
    p.nested_size = static_cast<std::int64_t>(nested_mc);
    if (nested_mc < 1000) throw std::invalid_argument("nested_mc table too small");

    const double n = static_cast<double>(nested_mc);
    auto se = [n](double q) { return std::sqrt(q * (1.0 - q) / n); };

    // start categories: 0 = {xi = -1}, 1 = {xi >= 0, theta = -1}, 2 = {xi >= 0, theta >= 0}
    const bool start_at_a = start.kind == FdStart::Kind::Fixed && start.x0 == l.a;
    if (!start_at_a) {
        const ParetoLifetime life(params.alpha());
        std::int64_t attempts = 0;
        auto cats = accepted_outcomes(nested_mc, seed, kFdStartStream, threads, attempts, [&](RandomStream &rng) {
            double x0 = start.x0;
            if (start.kind == FdStart::Kind::SizeBiasedConditioned) x0 = life.sample_size_biased(rng);
            if (x0 >= l.c) return 2;
            auto path = simulate(params, Start::at(x0), {HitZero{}, KthVisit{l.a, 1}}, rng);
            if (path.end_reason != EndReason::KthVisit) return -1;
            const double tb = first_profile_visit(path, l.b);
            if (std::isinf(tb)) return 0;
            return first_profile_visit(path, l.c) < tb ? 2 : 1;
        });
        std::array<double, 3> freq{0, 0, 0};
        for (int c : cats) freq[c] += 1.0;
        for (int k = 0; k < 3; ++k) {
            p.start[k] = freq[k] / n;
            p.start_se[k] = se(p.start[k]);
        }
        p.start_acceptance = n / static_cast<double>(attempts);
    }

    std::int64_t attempts = 0;
    auto theta = accepted_outcomes(nested_mc, seed, kFdThetaStream, threads, attempts, [&](RandomStream &rng) {
        auto path = simulate(params, Start::at(l.a), {HitZero{}, KthVisit{l.a, 1}, KthVisit{l.b, 1}}, rng);
        if (path.end_reason != EndReason::KthVisit || path.end_value != l.b) return -1;
        return profile_count(path, l.c) > 0 ? 1 : 0;
    });
    double hits = 0;
    for (int v : theta) hits += v;
    p.p_theta_a = hits / n;
    p.p_theta_a_se = se(p.p_theta_a);

    const double worst = std::max({p.start_se[0], p.start_se[1], p.start_se[2], p.p_theta_a_se});
    if (worst > 0.01)
        throw std::runtime_error("nested Monte Carlo standard error " + std::to_string(worst) + " above 0.01");
    return p;
}

FdDecompositionResult fd_decomposition_sample(const ScaleTable &table, FdLevels levels, FdStart start,
                                              std::size_t N, std::size_t nested_mc, std::uint64_t seed,
                                              unsigned threads) {
    FdDecompositionResult res;
    res.probabilities = fd_probabilities(table, levels, start, nested_mc, seed, threads);
    const FdProbabilities &p = res.probabilities;
    res.samples.resize(N);
    parallel_for(N, threads, [&](std::size_t i) {
        RandomStream rng(seed, stream_id(kFdDecompStream, i));
        auto bernoulli = [&](double q) { return rng.uniform() < q; };
        // xi or theta draw: -1 on failure, else a geometric count
        auto draw = [&](double success, double geom) -> std::int64_t {
            return bernoulli(success) ? sample_geometric(geom, rng) : -1;
        };

        const double u = rng.uniform();
        const int cat = u < p.start[0] ? 0 : (u < p.start[0] + p.start[1] ? 1 : 2);
        const std::int64_t xi0 = cat == 0 ? -1 : sample_geometric(p.p_G_ba, rng);
        const std::int64_t theta0 = cat == 2 ? sample_geometric(p.p_G_cb, rng) : -1;

        const std::int64_t g = sample_geometric(p.p_G_a, rng);
        std::int64_t delta1 = xi0;
        std::int64_t n_a = 0;
        std::int64_t n_b = std::max<std::int64_t>(xi0, 0);
        for (std::int64_t k = 0; k < g; ++k) {
            const std::int64_t xi = draw(p.p_xi_a, p.p_G_ba);
            delta1 += xi;
            n_a += xi >= 0;
            n_b += std::max<std::int64_t>(xi, 0);
        }
        std::int64_t delta2 = xi0 >= 0 ? theta0 : 0;
        for (std::int64_t k = 0; k < n_a; ++k) delta2 += draw(p.p_theta_a, p.p_G_cb);
        for (std::int64_t k = 0; k < n_b; ++k) delta2 += draw(p.p_theta_b, p.p_G_cb);
        res.samples[i] = {delta1, delta2};
    });
    return res;
}

namespace {

void check_density_domain(double x0, double a, double y, double z) {
    if (!(0.0 < x0 && x0 < a) || !(0.0 <= y && y < a) || !(a <= y + z))
        throw std::domain_error("passage density: need 0 < x0 < a, 0 <= y < a <= y + z");
}

double u_unscaled(const ScaleTable &t, double x0, double a, double y) {
    double u = t.w(a - x0) * t.w(y) / t.w(a);
    if (y >= x0) u -= t.w(y - x0);
    return u;
}

// Levy tail kappa (1+z)^{-alpha}
double levy_tail(const ModelParams &p, double z) { return p.kappa() * std::pow(1.0 + z, -p.alpha()); }

template <class F> double integrate_pieces(F &&f, std::vector<double> cuts) {
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        constexpr int m = 4;
        for (int j = 0; j < m; ++j) {
            const double l = lo + (hi - lo) * j / m, r = lo + (hi - lo) * (j + 1) / m;
            s += boost::math::quadrature::gauss<double, 20>::integrate(f, l, r);
        }
    }
    return s;
}

double upward_tail(const ScaleTable &t, double x0, double a, double Z) {
    const auto &p = t.params();
    auto f = [&](double y) { return u_unscaled(t, x0, a, y) * levy_tail(p, std::max(Z, a - y)); };
    std::vector<double> cuts{0.0, a, x0};
    if (a - Z > 0.0) cuts.push_back(a - Z);
    return integrate_pieces(f, cuts);
}

double overshoot_tail(const ScaleTable &t, double x0, double a, double O) {
    const auto &p = t.params();
    auto f = [&](double y) { return u_unscaled(t, x0, a, y) * levy_tail(p, a - y + O); };
    return integrate_pieces(f, {0.0, x0, a});
}

} // namespace

double passage_density_unscaled(const ScaleTable &t, double x0, double a, double y, double z) {
    check_density_domain(x0, a, y, z);
    const auto &p = t.params();
    return u_unscaled(t, x0, a, y) * p.kappa() * p.alpha() * std::pow(1.0 + z, -p.alpha() - 1.0);
}

double passage_density(const ScaleTable &t, double x0, double a, double y, double z) {
    check_density_domain(x0, a, y, z);
    const auto &p = t.params();
    const double s = p.s_n(), r = p.r_n();
    auto W = [&](double v) { return t.w(v * s) / r; };
    double u = W(a - x0) * W(y) / W(a);
    if (y >= x0) u -= W(y - x0);
    const double h = p.alpha() * p.kappa() * std::pow(s, p.alpha() + 1.0) * std::pow(1.0 + z * s, -p.alpha() - 1.0);
    return u * h;
}

double upward_exit_cell(const ScaleTable &t, double x0, double a, double y0, double y1, double z0, double z1) {
    if (!(0.0 < x0 && x0 < a) || !(0.0 <= y0 && y0 <= y1 && y1 <= a) || !(0.0 <= z0 && z0 <= z1))
        throw std::domain_error("upward_exit_cell: bad cell");
    const auto &p = t.params();
    auto f = [&](double y) {
        const double lo = std::max(z0, a - y), hi = std::max(z1, a - y);
        const double mass = levy_tail(p, lo) - (std::isinf(hi) ? 0.0 : levy_tail(p, hi));
        return u_unscaled(t, x0, a, y) * mass;
    };
    std::vector<double> cuts{y0, y1};
    for (double c : {x0, a - z0, a - z1})
        if (c > y0 && c < y1) cuts.push_back(c);
    return integrate_pieces(f, cuts);
}

double upward_exit_probability(const ScaleTable &t, double x0, double a) {
    if (!(0.0 < x0 && x0 < a)) throw std::domain_error("upward_exit_probability: need 0 < x0 < a");
    return 1.0 - t.w(a - x0) / t.w(a);
}

double upward_exit_jump_quantile(const ScaleTable &t, double x0, double a, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile level must be in (0,1)");
    const double total = upward_tail(t, x0, a, 0.0);
    const double target = (1.0 - q) * total;
    double lo = 0.0, hi = 1.0;
    while (upward_tail(t, x0, a, hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("jump quantile bracket failed");
    }
    for (int i = 0; i < 100 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (upward_tail(t, x0, a, mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double upward_exit_overshoot_cell(const ScaleTable &t, double x0, double a, double y0, double y1, double o0,
                                  double o1) {
    if (!(0.0 < x0 && x0 < a) || !(0.0 <= y0 && y0 <= y1 && y1 <= a) || !(0.0 <= o0 && o0 <= o1))
        throw std::domain_error("upward_exit_overshoot_cell: bad cell");
    const auto &p = t.params();
    auto f = [&](double y) {
        const double hi = std::isinf(o1) ? 0.0 : levy_tail(p, a - y + o1);
        return u_unscaled(t, x0, a, y) * (levy_tail(p, a - y + o0) - hi);
    };
    std::vector<double> cuts{y0, y1};
    if (x0 > y0 && x0 < y1) cuts.push_back(x0);
    return integrate_pieces(f, cuts);
}

double upward_exit_overshoot_quantile(const ScaleTable &t, double x0, double a, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile level must be in (0,1)");
    if (!(0.0 < x0 && x0 < a)) throw std::domain_error("upward_exit_overshoot_quantile: need 0 < x0 < a");
    const double target = (1.0 - q) * overshoot_tail(t, x0, a, 0.0);
    double lo = 0.0, hi = 1.0;
    while (overshoot_tail(t, x0, a, hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("overshoot quantile bracket failed");
    }
    for (int i = 0; i < 100 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (overshoot_tail(t, x0, a, mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::int64_t local_time_budget(const ModelParams &params, double zeta) {
    if (!(zeta > 0.0)) throw std::invalid_argument("local time budget: zeta must be positive");
    const double target = zeta * params.r_n();
    const double nearest = std::round(target);
    if (std::abs(target - nearest) <= 1e-12 * target) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(target));
}

BudgetLocalTime sample_budget_local_time(const ScaleTable &table, double a, std::int64_t z, std::size_t N,
                                         std::uint64_t seed, unsigned threads) {
    const ModelParams &p = table.params();
    if (!p.critical()) throw std::invalid_argument("sample_budget_local_time: needs the critical case");
    if (!(a > 0.0) || z < 1) throw std::invalid_argument("sample_budget_local_time: need a > 0 and z >= 1");
    const double A = a * p.s_n();
    const double g = geometric_visit_param(table, A);
    const ParetoLifetime life(p.alpha());
    BudgetLocalTime res;
    res.values.resize(N);
    std::vector<std::int64_t> reached(N, 0);
    parallel_for(N, threads, [&](std::size_t i) {
        RandomStream rng(seed, stream_id(kBudgetStream, i));
        std::int64_t visits = 0;
        for (std::int64_t k = 0; k < z; ++k) {
            const double o = life.sample_size_biased(rng);
            bool up = o >= A;
            if (!up) {
                const auto path = simulate(p, Start::at(o), {ExitInterval{A}}, rng);
                if (path.end_reason == EndReason::MaxEvents)
                    throw NumericError("sample_budget_local_time: exit path hit the event cap");
                up = path.end_reason == EndReason::HitLevel;
            }
            if (!up) continue;
            ++reached[i];
            visits += 1 + sample_geometric(g, rng);
        }
        res.values[i] = static_cast<double>(visits) / p.r_n();
    });
    res.pieces = z * static_cast<std::int64_t>(N);
    for (auto r : reached) res.reached += r;
    return res;
}

} // namespace ltlab
