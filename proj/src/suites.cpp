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

#include "ltlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "ltlab/localtime.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/paths.hpp"
#include "ltlab/population.hpp"
#include "ltlab/scale.hpp"

namespace ltlab {

namespace {

// stream purposes, disjoint from the library's own
constexpr std::uint64_t kOccupation = 0x30;
constexpr std::uint64_t kExit = 0x31;
constexpr std::uint64_t kOvershoot = 0x32;
constexpr std::uint64_t kNever = 0x33;
constexpr std::uint64_t kGeometric = 0x34;
constexpr std::uint64_t kLaplace = 0x35;
constexpr std::uint64_t kTwoSided = 0x36;
constexpr std::uint64_t kDensity = 0x37;
constexpr std::uint64_t kCmj = 0x38;
constexpr std::uint64_t kCmjPath = 0x39;
constexpr std::uint64_t kPs = 0x3a;
constexpr std::uint64_t kPsCmj = 0x3b;
constexpr std::uint64_t kRoundTrip = 0x3c;
constexpr std::uint64_t kRoundTripCmj = 0x3d;

constexpr std::int64_t kMinReplicas = 100;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double parse_real(const std::string &key, const std::string &text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ConfigError("config: " + key + " is not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw ConfigError("config: " + key + " is not a number: '" + text + "'");
    return v;
}

std::int64_t parse_integer(const std::string &key, const std::string &text) {
    const double v = parse_real(key, text);
    if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError("config: " + key + " must be an integer");
    return static_cast<std::int64_t>(v);
}

std::vector<double> parse_list(const std::string &key, const std::string &text, char sep = ',') {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, sep);) out.push_back(parse_real(key, cell));
    if (out.empty()) throw ConfigError("config: " + key + " is empty");
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

class Options {
public:
    explicit Options(const std::map<std::string, std::string> &kv) : kv_(kv) {}
    double real(const std::string &key, double def) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? def : parse_real(key, it->second);
    }
    std::int64_t integer(const std::string &key, std::int64_t def) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? def : parse_integer(key, it->second);
    }
    std::vector<double> reals(const std::string &key, std::vector<double> def) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? def : parse_list(key, it->second);
    }
    std::string text(const std::string &key, std::string def) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? def : it->second;
    }

private:
    const std::map<std::string, std::string> &kv_;
};

struct Context {
    ModelParams params;
    std::uint64_t seed;
    unsigned threads;
    std::size_t N;
    Options opt;
};

void require(bool ok, const std::string &what) {
    if (!ok) throw ConfigError("config: " + what);
}

Report new_report(const std::string &suite, const std::string &identity, const Context &c) {
    Report r;
    r.suite = suite;
    r.identity = identity;
    r.alpha = c.params.alpha();
    r.kappa = c.params.kappa();
    r.n = c.params.n();
    r.seed = c.seed;
    return r;
}

/// |value - reference| <= tol, for deterministic checks.
TestReport tolerance_test(std::string name, double value, double reference, double tol) {
    TestReport t;
    t.name = std::move(name);
    t.method = TestMethod::MeanCI;
    t.statistic = std::abs(value - reference);
    t.threshold = tol;
    t.pass = t.statistic <= tol;
    return t;
}

/// value <= bound.
TestReport bound_test(std::string name, double value, double bound, std::int64_t n = 0) {
    TestReport t;
    t.name = std::move(name);
    t.method = TestMethod::MeanCI;
    t.statistic = value;
    t.threshold = bound;
    t.n1 = n;
    t.pass = value <= bound;
    return t;
}

/// Reference contained in [lo, hi].
TestReport interval_test(std::string name, Interval ci, double reference, std::int64_t n) {
    TestReport t;
    t.name = std::move(name);
    t.method = TestMethod::PropCI;
    t.statistic = std::abs(reference - 0.5 * (ci.lo + ci.hi));
    t.threshold = 0.5 * (ci.hi - ci.lo);
    t.n1 = n;
    t.pass = ci.contains(reference);
    return t;
}

double ratio_spread(const std::vector<double> &xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi / *lo;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

double value_or_zero(const StepPath &p, double t) { return t > p.end_time ? 0.0 : p.value_at(t); }

// scale-function bias 1/w(M) - 1/w(inf), extrapolated from steps 0.1 and 0.05
double extrapolated_cutoff_bias(const ModelParams &p, double M) {
    const double coarse = cutoff_bias(solve_scale(p, 0.1, M), M);
    const double fine = cutoff_bias(solve_scale(p, 0.05, M), M);
    return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------

Report occupation(const Context &c) {
    auto r = new_report("occupation", "occupation density: int L(a, T(0)) da = T(0) on every path killed at 0", c);
    const auto cap = c.opt.integer("max_events", kDefaultMaxEvents);
    require(cap > 0, "max_events must be positive");
    struct Row {
        bool killed;
        double T, integral, rel, rel_rescaled;
    };
    std::vector<Row> rows(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kOccupation, i));
        auto path = simulate(c.params, Start::lifetime(), {HitZero{}, MaxEvents{cap}}, rng);
        if (path.end_reason != EndReason::HitZero) {
            rows[i] = {false, path.end_time, 0, 0, 0};
            return;
        }
        const double T = path.end_time;
        const double unscaled = profile_from_path(path).integral();
        const double rescaled = profile_from_path(path, c.params).integral();
        const double Tn = T / static_cast<double>(c.params.n());
        rows[i] = {true, T, unscaled, occupation_residual(path) / T, std::abs(rescaled - Tn) / Tn};
    });
    double worst = 0.0, worst_rescaled = 0.0;
    std::int64_t censored = 0;
    std::vector<double> times;
    r.samples.columns = {"T0", "integral", "relative_residual"};
    for (const auto &row : rows) {
        if (!row.killed) {
            ++censored;
            continue;
        }
        worst = std::max(worst, row.rel);
        worst_rescaled = std::max(worst_rescaled, row.rel_rescaled);
        times.push_back(row.T);
        r.samples.rows.push_back({row.T, row.integral, row.rel});
    }
    const auto T = mean_and_se(times);
    const double cens = static_cast<double>(censored) / static_cast<double>(c.N);
    r.estimates = {{"max_relative_residual", worst, 0.0},
                   {"max_relative_residual_rescaled", worst_rescaled, 0.0},
                   {"mean_T0", T.mean, T.se},
                   {"censored_fraction", cens, 0.0}};
    r.references = {{"int L(a) da - T(0)", 0.0}, {"rescaled: int L(a) da - T(0)/n", 0.0}};
    r.tests = {bound_test("int L(a, T(0)) da = T(0), max relative residual", worst, 1e-9, std::ssize(times)),
               bound_test("rescaled int L(a) da = T(0)/n, max relative residual", worst_rescaled, 1e-9,
                          std::ssize(times)),
               bound_test("censoring fraction", cens, 1e-3, static_cast<std::int64_t>(c.N))};
    return r;
}

Report exit_prob(const Context &c) {
    auto r = new_report("exit-prob", "exit identity: P^x(T(0) < T((b, inf))) = w(b - x)/w(b)", c);
    const double x = c.opt.real("x", 5.0), b = c.opt.real("b", 20.0), step = c.opt.real("step", 1e-3);
    require(0.0 < x && x < b, "exit-prob needs 0 < x < b");
    require(step > 0.0 && step <= 1.0, "step must be in (0, 1]");
    const auto table = solve_scale(c.params, step, b);
    std::vector<int> down(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kExit, i));
        auto path = simulate(c.params, Start::at(x), {HitZero{}, FirstPassageAbove{b}}, rng);
        down[i] = path.end_reason == EndReason::HitZero ? 1 : path.end_reason == EndReason::HitLevel ? 0 : -1;
    });
    std::int64_t hits = 0, trials = 0;
    r.samples.columns = {"hit_zero_first"};
    for (int d : down) {
        if (d < 0) continue;
        hits += d;
        ++trials;
        r.samples.rows.push_back({static_cast<double>(d)});
    }
    const double ref = table.w(b - x) / table.w(b);
    const double ph = static_cast<double>(hits) / static_cast<double>(trials);
    r.estimates = {{"p_hit_zero_first", ph, std::sqrt(ref * (1 - ref) / static_cast<double>(trials))},
                   {"censored", static_cast<double>(static_cast<std::int64_t>(c.N) - trials), 0.0}};
    r.references = {{"w(b-x)/w(b) with x=" + fmt(x) + ", b=" + fmt(b), ref}};
    r.tests = {proportion_test("P^x(T(0) < T((b,inf))) = w(b-x)/w(b), 3 SE", hits, trials, ref)};
    return r;
}

Report overshoot(const Context &c) {
    auto r = new_report("overshoot", "overshoot above 0 from 0, given passage, has the law Lambda*", c);
    const double M = c.opt.real("cutoff", 3e3);
    require(M > 0.0, "cutoff must be positive");
    std::vector<double> xs;
    xs.reserve(c.N);
    std::int64_t used = 0, next = 0;
    const double load = std::min(1.0, c.params.load());
    while (xs.size() < c.N) {
        const auto missing = static_cast<double>(c.N - xs.size());
        const auto batch = static_cast<std::size_t>(std::max(1000.0, 1.1 * missing / load));
        std::vector<std::optional<double>> out(batch);
        parallel_for(batch, c.threads, [&](std::size_t i) {
            RandomStream rng(c.seed, stream_id(kOvershoot, static_cast<std::uint64_t>(next) + i));
            out[i] = sample_passage_overshoot(c.params, rng, M);
        });
        next += static_cast<std::int64_t>(batch);
        for (const auto &o : out) {
            if (xs.size() == c.N) break;
            ++used;
            if (o) xs.push_back(*o);
        }
    }
    const ParetoLifetime life(c.params.alpha());
    auto ks = ks_one_sample(xs, [&](double v) { return 1.0 - life.size_biased_tail(v); });
    ks.name = "overshoot ~ Lambda*, P(Lambda* > x) = (1+x)^(1-alpha), one-sample KS";
    const double bias = c.params.critical() ? 0.0 : extrapolated_cutoff_bias(c.params, M) / c.params.load();
    r.samples.columns = {"overshoot"};
    for (double v : xs) r.samples.rows.push_back({v});
    r.estimates = {{"ks_statistic", ks.statistic, 0.0},
                   {"attempts", static_cast<double>(used), 0.0},
                   {"cut_fraction", 1.0 - static_cast<double>(xs.size()) / static_cast<double>(used), 0.0},
                   {"cutoff_bias_bound", bias, 0.0}};
    r.references = {{"1.628/sqrt(N)", ks.threshold},
                    {"never-pass probability 1 - kappa E(Lambda)", 1.0 - load},
                    {"mass of passages after reaching -M: (1/w(M) - 1/w(inf))/(kappa E(Lambda)), M=" + fmt(M), bias}};
    r.tests = {ks};
    return r;
}

Report never_return(const Context &c) {
    auto r = new_report("never-return", "P^0(T(0) = inf) = 1/w(inf) = 1 - kappa E(Lambda)", c);
    const double M = c.opt.real("cutoff", 1e3);
    require(M > 0.0, "cutoff must be positive");
    require(!c.params.critical(), "never-return needs kappa < alpha - 1");
    std::vector<int> outcome(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kNever, i));
        auto path = simulate(c.params, Start::at(0.0), {HitZero{}, CutoffBelow{M}}, rng);
        outcome[i] = path.end_reason == EndReason::CutoffBelow ? 1 : path.end_reason == EndReason::HitZero ? 0 : -1;
    });
    std::int64_t never = 0, trials = 0;
    r.samples.columns = {"cut_without_return"};
    for (int o : outcome) {
        if (o < 0) continue;
        never += o;
        ++trials;
        r.samples.rows.push_back({static_cast<double>(o)});
    }
    const double ref = 1.0 - c.params.load();
    const double bias = extrapolated_cutoff_bias(c.params, M);
    auto ci = proportion_ci(never, trials, 0.99);
    // the cut fraction overestimates by at most the bias
    ci.lo -= bias;
    r.estimates = {{"p_never_return", static_cast<double>(never) / static_cast<double>(trials),
                    std::sqrt(ref * (1 - ref) / static_cast<double>(trials))},
                   {"ci_low", ci.lo, 0.0},
                   {"ci_high", ci.hi, 0.0},
                   {"cutoff_bias", bias, 0.0}};
    r.references = {{"1/w(inf) = 1 - kappa E(Lambda)", ref}, {"1/w(M) - 1/w(inf), M=" + fmt(M), bias}};
    r.tests = {interval_test("Wilson 99% interval, widened by the cutoff bias, holds 1 - kappa E(Lambda)", ci, ref,
                             trials)};
    return r;
}

Report geometric_visits(const Context &c) {
    auto r = new_report("geometric-visits", "returns to the start level u before T(0) ~ Geometric(1 - 1/w(u))", c);
    const double u = c.opt.real("level", 5.0);
    const auto cap = c.opt.integer("max_events", kDefaultMaxEvents);
    require(u > 0.0, "level must be positive");
    require(cap > 0, "max_events must be positive");
    const auto table = solve_scale(c.params, 1e-3, u);
    const double p = geometric_visit_param(table, u);
    std::vector<std::int64_t> visits(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kGeometric, i));
        auto path = simulate(c.params, Start::at(u), {HitZero{}, MaxEvents{cap}}, rng);
        visits[i] = path.end_reason == EndReason::HitZero ? visit_count(path, u) : -1;
    });
    const double dN = static_cast<double>(c.N);
    const auto K = static_cast<std::int64_t>(std::ceil(std::log(5.0 / dN) / std::log(p))) + 1;
    std::vector<std::int64_t> observed(static_cast<std::size_t>(K) + 1, 0);
    std::vector<double> probs(static_cast<std::size_t>(K) + 1);
    for (std::int64_t k = 0; k < K; ++k) probs[static_cast<std::size_t>(k)] = geometric_pmf(p, k);
    probs[static_cast<std::size_t>(K)] = std::pow(p, static_cast<double>(K));
    std::int64_t censored = 0;
    std::vector<double> values;
    r.samples.columns = {"returns"};
    for (auto v : visits) {
        if (v < 0) {
            ++censored;
            continue;
        }
        ++observed[static_cast<std::size_t>(std::min(v, K))];
        values.push_back(static_cast<double>(v));
        r.samples.rows.push_back({static_cast<double>(v)});
    }
    auto chi = chi_square_counts(observed, probs);
    chi.name = "return count ~ Geometric(1 - 1/w(u)), chi-square";
    const auto m = mean_and_se(values);
    const double cens = static_cast<double>(censored) / dN;
    r.estimates = {{"mean_returns", m.mean, m.se}, {"chi_square", chi.statistic, 0.0}, {"censored_fraction", cens, 0.0}};
    r.references = {{"p = 1 - 1/w(u), u=" + fmt(u), p}, {"E G = p/(1-p)", p / (1 - p)}};
    r.tests = {chi, bound_test("censoring fraction", cens, 1e-3, static_cast<std::int64_t>(c.N))};
    return r;
}

Report scale_laplace(const Context &c) {
    auto r = new_report("scale-laplace",
                        "int e^(-lambda x) w(x) dx = 1/psi(lambda), w(0) = 1, w'(0) = kappa, w concave", c);
    const double step = c.opt.real("step", 1e-3), x_max = c.opt.real("x_max", 40.0);
    const auto lambdas = c.opt.reals("lambdas", {0.5, 1.0, 2.0});
    require(step > 0.0 && x_max > 10 * step, "need step > 0 and x_max > 10 step");
    for (double l : lambdas) require(l > 0.0, "lambdas must be positive");
    const auto table = solve_scale(c.params, step, x_max);
    const LevyExponent ex(c.params);
    for (double l : lambdas) {
        const auto chk = laplace_check(table, l, ex);
        r.estimates.push_back({"laplace_residual_lambda_" + fmt(l), chk.residual, 0.0});
        r.estimates.push_back({"tail_bound_lambda_" + fmt(l), chk.tail_bound, 0.0});
        r.references.push_back({"1/psi(" + fmt(l) + ")", 1.0 / ex.psi(l)});
        r.tests.push_back(bound_test("Laplace transform of w equals 1/psi at lambda=" + fmt(l), chk.residual, 1e-3));
    }
    const auto w = table.values();
    const double slope = (w[1] - w[0]) / step;
    const auto bad = static_cast<double>(concavity_violations(table));
    r.estimates.push_back({"w0", w[0], 0.0});
    r.estimates.push_back({"forward_difference_w_prime_0", slope, 0.0});
    r.estimates.push_back({"concavity_violations", bad, 0.0});
    r.estimates.push_back({"t0", table.t0(), 0.0});
    r.references.push_back({"w(0)", 1.0});
    r.references.push_back({"w'(0) = kappa", c.params.kappa()});
    r.tests.push_back(tolerance_test("w(0) = 1 exactly", w[0], 1.0, 0.0));
    r.tests.push_back(tolerance_test("forward difference w'(0) = kappa", slope, c.params.kappa(), 1e-2));
    r.tests.push_back(bound_test("discrete concavity violations", bad, 0.0));
    r.samples.columns = {"x", "w"};
    for (std::size_t k = 0; k < w.size(); ++k) r.samples.rows.push_back({step * static_cast<double>(k), w[k]});
    return r;
}

Report laplace_t0(const Context &c) {
    auto r = new_report("laplace-T0", "E^x(e^(-lambda T(0))) = e^(-phi(lambda) x)", c);
    const double x = c.opt.real("x", 3.0);
    const auto lambdas = c.opt.reals("lambdas", {0.5, 1.0});
    require(x > 0.0, "x must be positive");
    for (double l : lambdas) require(l > 0.0, "lambdas must be positive");
    const double horizon = 100.0 / *std::min_element(lambdas.begin(), lambdas.end());
    std::vector<double> T(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kLaplace, i));
        auto path = simulate(c.params, Start::at(x), {HitZero{}, Horizon{horizon}}, rng);
        T[i] = path.end_reason == EndReason::HitZero ? path.end_time : std::numeric_limits<double>::infinity();
    });
    const LevyExponent ex(c.params);
    for (double l : lambdas) {
        std::vector<double> v(c.N);
        for (std::size_t i = 0; i < c.N; ++i) v[i] = std::exp(-l * T[i]);
        const auto m = mean_and_se(v);
        const double ref = std::exp(-ex.phi(l) * x);
        r.estimates.push_back({"mean_exp_lambda_" + fmt(l), m.mean, m.se});
        r.references.push_back({"exp(-phi(" + fmt(l) + ") x), x=" + fmt(x), ref});
        r.tests.push_back(mean_ci_test("E e^(-lambda T(0)) = e^(-phi(lambda) x) at lambda=" + fmt(l) + ", 3 SE", m.mean,
                                       m.se, ref, 3.0, static_cast<std::int64_t>(c.N)));
    }
    r.samples.columns = {"killed", "T0"};
    for (double t : T) r.samples.rows.push_back({std::isfinite(t) ? 1.0 : 0.0, std::isfinite(t) ? t : horizon});
    return r;
}

Report two_sided(const Context &c) {
    auto r = new_report("two-sided-exit", "P^0(T(-a) ^ T(b) < T(0)) = (w(0)/w(a)) / (w(b)/w(b+a))", c);
    const double lower = c.opt.real("lower", -2.0), upper = c.opt.real("upper", 3.0);
    require(lower < 0.0 && upper > 0.0, "two-sided-exit needs lower < 0 < upper");
    const double a = -lower;
    const auto table = solve_scale(c.params, 1e-3, upper + a);
    std::vector<int> out(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kTwoSided, i));
        auto path = simulate(c.params, Start::at(0.0), {HitZero{}, KthVisit{lower, 1}, FirstPassageAbove{upper}}, rng);
        out[i] = path.end_reason == EndReason::MaxEvents ? -1 : path.end_reason != EndReason::HitZero;
    });
    std::int64_t hits = 0, trials = 0;
    r.samples.columns = {"exit_before_return"};
    for (int o : out) {
        if (o < 0) continue;
        hits += o;
        ++trials;
        r.samples.rows.push_back({static_cast<double>(o)});
    }
    const double ref = (table.w(0.0) / table.w(a)) / (table.w(upper) / table.w(upper + a));
    r.estimates = {{"p_exit_before_return", static_cast<double>(hits) / static_cast<double>(trials),
                    std::sqrt(ref * (1 - ref) / static_cast<double>(trials))}};
    r.references = {{"(w(0)/w(a))/(w(b)/w(b+a)), a=" + fmt(a) + ", b=" + fmt(upper), ref}};
    r.tests = {proportion_test("two-sided identity, 3 SE", hits, trials, ref)};
    return r;
}

Report passage_density_suite(const Context &c) {
    auto r = new_report("passage-density",
                        "upward exit of (0,a): (X(tau-), jump) has density u_a(x0,y) h(z) on y < a <= y+z", c);
    const double x0 = c.opt.real("x0", 2.0), a = c.opt.real("a", 5.0), mass = c.opt.real("mass", 0.95);
    const auto ny = c.opt.integer("cells_y", 20), no = c.opt.integer("cells_o", 20);
    require(0.0 < x0 && x0 < a, "passage-density needs 0 < x0 < a");
    require(mass > 0.0 && mass < 1.0, "mass must be in (0,1)");
    require(ny > 0 && no > 0, "cell counts must be positive");
    const auto table = solve_scale(c.params, 1e-3, a);
    const double o_max = upward_exit_overshoot_quantile(table, x0, a, mass);
    struct Exit {
        int kind; // 1 up, 0 down, -1 censored
        double y, z;
    };
    std::vector<Exit> ex(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream rng(c.seed, stream_id(kDensity, i));
        auto path = simulate(c.params, Start::at(x0), {ExitInterval{a}}, rng);
        if (path.end_reason == EndReason::MaxEvents) {
            ex[i] = {-1, 0, 0};
            return;
        }
        const auto st = exit_state(path, a);
        if (const auto *u = std::get_if<UpwardExit>(&st))
            ex[i] = {1, u->y, u->z};
        else
            ex[i] = {0, 0, 0};
    });
    const auto cells = static_cast<std::size_t>(ny * no);
    std::vector<std::int64_t> counts(cells, 0);
    std::int64_t up = 0, trials = 0;
    r.samples.columns = {"y", "z"};
    for (const auto &e : ex) {
        if (e.kind < 0) continue;
        ++trials;
        if (e.kind == 0) continue;
        ++up;
        r.samples.rows.push_back({e.y, e.z});
        const double o = e.y + e.z - a;
        if (o >= o_max) continue;
        const auto iy = std::min<std::int64_t>(ny - 1, static_cast<std::int64_t>(e.y / a * static_cast<double>(ny)));
        const auto io = std::min<std::int64_t>(no - 1, static_cast<std::int64_t>(o / o_max * static_cast<double>(no)));
        ++counts[static_cast<std::size_t>(iy * no + io)];
    }
    const double dT = static_cast<double>(trials);
    double worst = 0.0, covered = 0.0;
    for (std::int64_t i = 0; i < ny; ++i)
        for (std::int64_t j = 0; j < no; ++j) {
            const double y0 = a * static_cast<double>(i) / static_cast<double>(ny);
            const double y1 = a * static_cast<double>(i + 1) / static_cast<double>(ny);
            const double o0 = o_max * static_cast<double>(j) / static_cast<double>(no);
            const double o1 = o_max * static_cast<double>(j + 1) / static_cast<double>(no);
            const double p = upward_exit_overshoot_cell(table, x0, a, y0, y1, o0, o1);
            const double se = std::sqrt(p * (1.0 - p) / dT);
            const double f = static_cast<double>(counts[static_cast<std::size_t>(i * no + j)]) / dT;
            covered += f;
            worst = std::max(worst, std::abs(f - p) / se);
        }
    const double p_up = upward_exit_probability(table, x0, a);
    r.estimates = {{"max_cell_deviation_in_se", worst, 0.0},
                   {"p_upward_exit", static_cast<double>(up) / dT, std::sqrt(p_up * (1 - p_up) / dT)},
                   {"covered_fraction", covered, 0.0},
                   {"overshoot_quantile", o_max, 0.0}};
    r.references = {{"P^x0(upward exit) = 1 - w(a-x0)/w(a)", p_up}, {"covered mass = " + fmt(mass) + " P(upward exit)",
                                                                      mass * p_up}};
    TestReport cellsr;
    cellsr.name = "all " + std::to_string(cells) + " cells (pre-exit level x overshoot) within 4 SE of u h";
    cellsr.method = TestMethod::PropCI;
    cellsr.statistic = worst;
    cellsr.threshold = 4.0;
    cellsr.n1 = trials;
    cellsr.n2 = static_cast<std::int64_t>(cells);
    cellsr.pass = worst <= 4.0;
    r.tests = {cellsr, proportion_test("upward exit probability 1 - w(a-x0)/w(a), 3 SE", up, trials, p_up)};
    return r;
}

std::vector<FdLevels> parse_triples(const std::string &text) {
    std::vector<FdLevels> out;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ';');) {
        const auto v = parse_list("triples", cell);
        require(v.size() == 3 && 0.0 < v[0] && v[0] < v[1] && v[1] < v[2], "triples need 0 < a < b < c");
        out.push_back({v[0], v[1], v[2]});
    }
    require(!out.empty(), "triples is empty");
    return out;
}

Report fd_compare(const Context &c) {
    auto r = new_report("fd-compare",
                        "level-difference decomposition: (L(b)-L(a), L(c)-L(b)) from geometric sums has the law of "
                        "direct visit counts",
                        c);
    const auto triples = parse_triples(c.opt.text("triples", "2,2.5,3;1,4,5"));
    const auto nested = c.opt.integer("nested", 100000);
    const auto start_text = c.opt.text("start", "size_biased");
    require(nested >= 100000, "nested must be at least 1e5");
    FdStart start = FdStart::size_biased();
    if (start_text != "size_biased") start = FdStart::at(parse_real("start", start_text));
    double x_max = 0.0;
    for (const auto &t : triples) x_max = std::max(x_max, t.c);
    const auto table = solve_scale(c.params, 1e-3, x_max);
    r.samples.columns = {"triple", "decomposition", "delta1", "delta2"};
    for (std::size_t k = 0; k < triples.size(); ++k) {
        const auto &L = triples[k];
        const std::string tag = "(" + fmt(L.a) + "," + fmt(L.b) + "," + fmt(L.c) + ")";
        const auto direct = fd_direct_sample(c.params, L, start, c.N, mix_seed(c.seed, 2 * k), c.threads);
        const auto dec =
            fd_decomposition_sample(table, L, start, c.N, static_cast<std::size_t>(nested), mix_seed(c.seed, 2 * k + 1),
                                    c.threads);
        const auto &P = dec.probabilities;
        const double slack = 3.0 * std::max({P.start_se[0], P.start_se[1], P.start_se[2], P.p_theta_a_se});
        std::vector<std::int64_t> d1, d2, e1, e2;
        for (const auto &s : direct.samples) {
            d1.push_back(s.delta1);
            d2.push_back(s.delta2);
            r.samples.rows.push_back({static_cast<double>(k), 0.0, static_cast<double>(s.delta1),
                                      static_cast<double>(s.delta2)});
        }
        for (const auto &s : dec.samples) {
            e1.push_back(s.delta1);
            e2.push_back(s.delta2);
            r.samples.rows.push_back({static_cast<double>(k), 1.0, static_cast<double>(s.delta1),
                                      static_cast<double>(s.delta2)});
        }
        auto k1 = ks_two_sample(d1, e1, slack);
        auto k2 = ks_two_sample(d2, e2, slack);
        k1.name = "delta1 = L(b)-L(a), direct vs decomposition " + tag + ", KS + nested slack";
        k2.name = "delta2 = L(c)-L(b), direct vs decomposition " + tag + ", KS + nested slack";
        r.estimates.push_back({"ks_delta1" + tag, k1.statistic, 0.0});
        r.estimates.push_back({"ks_delta2" + tag, k2.statistic, 0.0});
        r.estimates.push_back({"nested_slack" + tag, slack, 0.0});
        r.estimates.push_back({"direct_acceptance" + tag, direct.acceptance_rate(), 0.0});
        r.estimates.push_back({"direct_censored" + tag, static_cast<double>(direct.censored), 0.0});
        r.references.push_back({"KS threshold " + tag, k1.threshold});
        r.tests.push_back(k1);
        r.tests.push_back(k2);
    }
    return r;
}

Report cmj_localtime(const Context &c) {
    auto r = new_report("cmj-localtime", "CMJ population Z(t) has the law of the visit count of X to level t", c);
    const auto times = c.opt.reals("times", {0.5, 1.0, 2.0});
    for (double t : times) require(t > 0.0, "times must be positive");
    const double horizon = *std::max_element(times.begin(), times.end()) + 1.0;
    const std::size_t m = times.size();
    std::vector<double> z(c.N * m), v(c.N * m);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream r1(c.seed, stream_id(kCmj, i)), r2(c.seed, stream_id(kCmjPath, i));
        const auto run = simulate_cmj(1, InitLaw::Lifetime, c.params, {horizon, kDefaultMaxEvents}, r1);
        if (run.population.censored) throw NumericError("cmj-localtime: CMJ run hit the event cap");
        const auto path = simulate(c.params, Start::lifetime(), {HitZero{}}, r2);
        if (path.end_reason != EndReason::HitZero) throw NumericError("cmj-localtime: path hit the event cap");
        for (std::size_t j = 0; j < m; ++j) {
            z[i * m + j] = value_or_zero(run.population, times[j]);
            v[i * m + j] = static_cast<double>(profile_count(path, times[j]));
        }
    });
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> zs(c.N), vs(c.N);
        for (std::size_t i = 0; i < c.N; ++i) {
            zs[i] = z[i * m + j];
            vs[i] = v[i * m + j];
        }
        const auto mz = mean_and_se(zs), mv = mean_and_se(vs);
        auto ks = ks_two_sample(zs, vs);
        ks.name = "Z(" + fmt(times[j]) + ") vs visits to level " + fmt(times[j]) + ", two-sample KS";
        r.estimates.push_back({"mean_Z_" + fmt(times[j]), mz.mean, mz.se});
        r.estimates.push_back({"mean_visits_" + fmt(times[j]), mv.mean, mv.se});
        r.estimates.push_back({"ks_" + fmt(times[j]), ks.statistic, 0.0});
        r.tests.push_back(ks);
        r.samples.columns.push_back("Z_" + fmt(times[j]));
        r.samples.columns.push_back("visits_" + fmt(times[j]));
    }
    for (std::size_t i = 0; i < c.N; ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < m; ++j) {
            row.push_back(z[i * m + j]);
            row.push_back(v[i * m + j]);
        }
        r.samples.rows.push_back(std::move(row));
    }
    return r;
}

Report ps_lamperti(const Context &c) {
    auto r = new_report("ps-lamperti",
                        "PS queue length is the Lamperti transform of a CMJ excursion: busy period = CMJ area, "
                        "Q on the clock int 1/Q = Z",
                        c);
    const auto clocks = c.opt.reals("clock", {0.5, 1.0});
    for (double u : clocks) require(u > 0.0, "clock values must be positive");
    const std::size_t m = clocks.size();
    std::vector<double> busy(c.N), area(c.N), q(c.N * m), z(c.N * m);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream r1(c.seed, stream_id(kPs, i)), r2(c.seed, stream_id(kPsCmj, i));
        const auto ps = simulate_ps(1, InitLaw::Lifetime, c.params, {}, r1);
        const auto cmj = simulate_cmj(1, InitLaw::Lifetime, c.params, {}, r2);
        if (ps.queue_length.censored || cmj.population.censored)
            throw NumericError("ps-lamperti: run hit the event cap");
        busy[i] = ps.queue_length.end_time;
        area[i] = total_area(cmj.population);
        const auto clock = lamperti_inverse(ps.queue_length);
        for (std::size_t j = 0; j < m; ++j) {
            q[i * m + j] = value_or_zero(clock, clocks[j]);
            z[i * m + j] = value_or_zero(cmj.population, clocks[j]);
        }
    });
    auto ks = ks_two_sample(busy, area);
    ks.name = "PS busy period vs CMJ total area, two-sample KS";
    const auto mb = mean_and_se(busy), ma = mean_and_se(area);
    r.estimates = {{"mean_busy_period", mb.mean, mb.se}, {"mean_cmj_area", ma.mean, ma.se}, {"ks_busy_area", ks.statistic, 0}};
    r.references = {{"E busy period = E Lambda/(1 - kappa E Lambda)", c.params.critical() ? std::numeric_limits<double>::infinity()
                                                                                         : c.params.mean_lifetime() / (1.0 - c.params.load())}};
    r.tests = {ks};
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> qs(c.N), zs(c.N);
        for (std::size_t i = 0; i < c.N; ++i) {
            qs[i] = q[i * m + j];
            zs[i] = z[i * m + j];
        }
        auto k = ks_two_sample(qs, zs);
        k.name = "Q at clock int 1/Q = " + fmt(clocks[j]) + " vs Z(" + fmt(clocks[j]) + "), two-sample KS";
        r.estimates.push_back({"ks_clock_" + fmt(clocks[j]), k.statistic, 0.0});
        r.tests.push_back(k);
    }
    r.samples.columns = {"busy_period", "cmj_area"};
    for (std::size_t i = 0; i < c.N; ++i) r.samples.rows.push_back({busy[i], area[i]});
    return r;
}

Report lamperti_roundtrip(const Context &c) {
    auto r = new_report("lamperti-roundtrip",
                        "Lamperti map: L(L^-1(q)) = q, duration of L(e) = int e, CMJ area = sum of lifetimes", c);
    struct Row {
        double roundtrip, duration_gap, area_gap;
        std::size_t pieces;
    };
    std::vector<Row> rows(c.N);
    parallel_for(c.N, c.threads, [&](std::size_t i) {
        RandomStream r1(c.seed, stream_id(kRoundTrip, i)), r2(c.seed, stream_id(kRoundTripCmj, i));
        const auto ps = simulate_ps(1, InitLaw::Lifetime, c.params, {}, r1);
        const auto cmj = simulate_cmj(1, InitLaw::Lifetime, c.params, {}, r2);
        if (ps.queue_length.censored || cmj.population.censored)
            throw NumericError("lamperti-roundtrip: run hit the event cap");
        const auto &qp = ps.queue_length;
        const auto back = lamperti(lamperti_inverse(qp));
        double err = back.points.size() == qp.points.size() ? 0.0 : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < std::min(back.points.size(), qp.points.size()); ++k) {
            if (back.points[k].value != qp.points[k].value) err = std::numeric_limits<double>::infinity();
            err = std::max(err, std::abs(back.points[k].time - qp.points[k].time));
        }
        err = std::max(err, std::abs(back.end_time - qp.end_time)) / qp.end_time;
        double life = 0.0;
        for (const auto &ind : cmj.individuals) life += ind.lifetime;
        const double area = total_area(cmj.population);
        rows[i] = {err, std::abs(lamperti(cmj.population).end_time - area), std::abs(area - life) / life,
                   qp.points.size()};
    });
    double worst = 0.0, worst_area = 0.0, mismatches = 0.0;
    r.samples.columns = {"pieces", "relative_roundtrip_error", "area_vs_lifetimes"};
    for (const auto &row : rows) {
        worst = std::max(worst, row.roundtrip);
        worst_area = std::max(worst_area, row.area_gap);
        mismatches += row.duration_gap != 0.0;
        r.samples.rows.push_back({static_cast<double>(row.pieces), row.roundtrip, row.area_gap});
    }
    const auto n = static_cast<std::int64_t>(c.N);
    r.estimates = {{"max_relative_roundtrip_error", worst, 0.0},
                   {"duration_mismatches", mismatches, 0.0},
                   {"max_relative_area_vs_lifetimes", worst_area, 0.0}};
    r.tests = {bound_test("L(L^-1(q)) = q on PS excursions, max relative time error", worst, 1e-12, n),
               bound_test("duration of L(e) = int e, bitwise mismatches", mismatches, 0.0, n),
               bound_test("CMJ area = sum of lifetimes, max relative error", worst_area, 1e-11, n)};
    return r;
}

Report ci_bound(const Context &c) {
    auto r = new_report("ci-bound",
                        "E[G(delta)^i]/(delta s_n) bounded in n for delta <= t0/s_n, G geometric with parameter "
                        "1 - W_n(0)/W_n(delta)",
                        c);
    const auto ns = c.opt.reals("ns", {100.0, 10000.0});
    const double step = c.opt.real("step", 1e-3), x_max = c.opt.real("x_max", 10.0);
    require(ns.size() >= 2, "ci-bound needs at least two n values");
    for (double n : ns) require(n >= 1.0 && n == std::floor(n), "ns must be positive integers");
    std::array<std::vector<double>, 3> C;
    for (double nd : ns) {
        const ModelParams q = c.params.with_n(static_cast<std::int64_t>(nd));
        const auto table = solve_scale(q, step, x_max);
        const double t0 = table.t0();
        const double delta = t0 / (2.0 * q.s_n());
        const double W0 = rescaled_scale(table, 0.0).W;
        const double p = 1.0 - W0 / rescaled_scale(table, delta).W;
        const auto mom = geometric_moments(p);
        for (int i = 0; i < 3; ++i) {
            const double ci = mom[static_cast<std::size_t>(i)] / (delta * q.s_n());
            C[static_cast<std::size_t>(i)].push_back(ci);
            r.estimates.push_back({"C" + std::to_string(i + 1) + "_n" + fmt(nd), ci, 0.0});
        }
        r.estimates.push_back({"t0_n" + fmt(nd), t0, 0.0});
        r.estimates.push_back({"geometric_param_n" + fmt(nd), p, 0.0});
    }
    for (int i = 0; i < 3; ++i) {
        const auto &v = C[static_cast<std::size_t>(i)];
        const bool finite = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
        r.tests.push_back(bound_test("C" + std::to_string(i + 1) + " finite and within a factor 2 across n",
                                     finite ? ratio_spread(v) : std::numeric_limits<double>::infinity(), 2.0));
    }
    r.samples.columns = {"n", "C1", "C2", "C3"};
    for (std::size_t k = 0; k < ns.size(); ++k) r.samples.rows.push_back({ns[k], C[0][k], C[1][k], C[2][k]});
    return r;
}

Report converge(const Context &c) {
    auto r = new_report("converge-fdd",
                        "self-convergence diagnostic of L(a, T^L(zeta_n)) across n; not a limit-law test", c);
    const auto ns = c.opt.reals("ns", {100.0, 1000.0, 10000.0});
    const double a = c.opt.real("a", 0.5), zeta = c.opt.real("zeta", 1.0), bound = c.opt.real("ks_bound", 0.05);
    require(ns.size() >= 3, "converge-fdd needs at least three n values");
    for (std::size_t k = 0; k < ns.size(); ++k)
        require(ns[k] >= 1.0 && ns[k] == std::floor(ns[k]) && (k == 0 || ns[k] > ns[k - 1]),
                "ns must be increasing positive integers");
    require(a > 0.0 && zeta > 0.0, "a and zeta must be positive");
    require(c.params.critical(), "converge-fdd needs kappa = alpha - 1");
    std::vector<std::vector<double>> samples;
    std::vector<double> scaled_rate, zetas;
    r.samples.columns = {"n", "local_time"};
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const ModelParams q = c.params.with_n(static_cast<std::int64_t>(ns[k]));
        const double A = a * q.s_n();
        const auto table = solve_scale(q, A / 2e4, A);
        const auto z = local_time_budget(q, zeta);
        auto res = sample_budget_local_time(table, a, z, c.N, mix_seed(c.seed, k), c.threads);
        const double rate = static_cast<double>(res.reached) / static_cast<double>(res.pieces);
        const std::string tag = "_n" + fmt(ns[k]);
        scaled_rate.push_back(q.r_n() * rate);
        zetas.push_back(static_cast<double>(z) / q.r_n());
        const auto m = mean_and_se(res.values);
        r.estimates.push_back({"mean_local_time" + tag, m.mean, m.se});
        r.estimates.push_back({"budget_z" + tag, static_cast<double>(z), 0.0});
        r.estimates.push_back({"zeta_n" + tag, zetas.back(), 0.0});
        r.estimates.push_back({"r_n_times_P0_T(a)<T(0)" + tag, scaled_rate.back(),
                               q.r_n() * std::sqrt(rate * (1 - rate) / static_cast<double>(res.pieces))});
        for (double v : res.values) r.samples.rows.push_back({ns[k], v});
        samples.push_back(std::move(res.values));
    }
    std::vector<double> ks;
    for (std::size_t k = 0; k + 1 < ns.size(); ++k) {
        ks.push_back(ks_two_sample(samples[k], samples[k + 1]).statistic);
        const std::string tag = "_n" + fmt(ns[k]) + "_vs_n" + fmt(ns[k + 1]);
        r.estimates.push_back({"ks" + tag, ks.back(), 0.0});
        // at a = 0 the local time is the constant zeta_n
        r.estimates.push_back({"ks_level0" + tag, zetas[k] == zetas[k + 1] ? 0.0 : 1.0, 0.0});
        r.references.push_back({"|zeta_n1 - zeta_n2| at level 0" + tag, std::abs(zetas[k] - zetas[k + 1])});
    }
    const std::size_t last = ks.size() - 1;
    r.references.push_back({"KS bound (convention)", bound});
    r.tests.push_back(bound_test("KS distance between the two largest n", ks[last], bound, static_cast<std::int64_t>(c.N)));
    r.tests.push_back(bound_test("KS distance decreases with n (last minus previous pair)", ks[last] - ks[last - 1],
                                 -std::numeric_limits<double>::min()));
    r.estimates.push_back({"r_n_P0_T(a)<T(0)_spread_max_over_min", ratio_spread(scaled_rate), 0.0});
    return r;
}

// ---------------------------------------------------------------------------

struct SuiteDef {
    std::string name;
    double alpha, kappa;
    std::int64_t n, replicas;
    std::vector<std::string> keys;
    std::function<Report(const Context &)> run;
};

const std::vector<SuiteDef> &registry() {
    static const std::vector<SuiteDef> defs = {
        {"exit-prob", 1.5, 0.4, 100, 100000, {"x", "b", "step"}, exit_prob},
        {"geometric-visits", 1.5, 0.5, 100, 100000, {"level", "max_events"}, geometric_visits},
        {"overshoot", 1.9, 0.4, 100, 100000, {"cutoff"}, overshoot},
        {"never-return", 1.5, 0.4, 100, 100000, {"cutoff"}, never_return},
        {"occupation", 1.5, 0.5, 100, 10000, {"max_events"}, occupation},
        {"scale-laplace", 1.5, 0.4, 100, 0, {"step", "x_max", "lambdas"}, scale_laplace},
        {"laplace-T0", 1.5, 0.4, 100, 100000, {"x", "lambdas"}, laplace_t0},
        {"two-sided-exit", 1.5, 0.4, 100, 100000, {"lower", "upper"}, two_sided},
        {"passage-density", 1.5, 0.4, 100, 1000000, {"x0", "a", "mass", "cells_y", "cells_o"}, passage_density_suite},
        {"fd-compare", 1.5, 0.4, 100, 50000, {"triples", "nested", "start"}, fd_compare},
        {"cmj-localtime", 1.5, 0.4, 100, 50000, {"times"}, cmj_localtime},
        {"ps-lamperti", 1.5, 0.4, 100, 10000, {"clock"}, ps_lamperti},
        {"lamperti-roundtrip", 1.5, 0.4, 100, 10000, {}, lamperti_roundtrip},
        {"ci-bound", 1.5, 0.4, 100, 0, {"ns", "step", "x_max"}, ci_bound},
        {"converge-fdd", 1.5, 0.5, 100, 100000, {"ns", "a", "zeta", "ks_bound"}, converge},
    };
    return defs;
}

const SuiteDef &find_suite(const std::string &name) {
    for (const auto &s : registry())
        if (s.name == name) return s;
    throw ConfigError("config: unknown suite '" + name + "'");
}

Report run_def(const SuiteDef &def, const ExperimentConfig &cfg, const std::map<std::string, std::string> &options) {
    for (const auto &[k, v] : options)
        if (std::find(def.keys.begin(), def.keys.end(), k) == def.keys.end())
            throw ConfigError("config: suite " + def.name + " has no key '" + k + "'");
    const auto replicas = cfg.replicas.value_or(def.replicas);
    if (def.replicas > 0 && replicas < kMinReplicas)
        throw ConfigError("config: replicas must be at least " + std::to_string(kMinReplicas));
    const double alpha = cfg.alpha.value_or(def.alpha), kappa = cfg.kappa.value_or(def.kappa);
    const auto n = cfg.n.value_or(def.n);
    std::optional<ModelParams> params;
    try {
        params.emplace(alpha, kappa, n);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    Context ctx{*params, cfg.seed, cfg.threads, static_cast<std::size_t>(std::max<std::int64_t>(replicas, 0)),
                Options(options)};
    auto report = def.run(ctx);
    report.finalize();
    return report;
}

} // namespace

ExperimentConfig parse_config(std::istream &in) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (!seen.insert(key).second) throw ConfigError("config: duplicate key '" + key + "'");
        if (key == "suite")
            cfg.suite = value;
        else if (key == "alpha")
            cfg.alpha = parse_real(key, value);
        else if (key == "kappa")
            cfg.kappa = parse_real(key, value);
        else if (key == "n")
            cfg.n = parse_integer(key, value);
        else if (key == "replicas")
            cfg.replicas = parse_integer(key, value);
        else if (key == "seed") {
            const auto s = parse_integer(key, value);
            if (s < 0) throw ConfigError("config: seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "threads") {
            const auto t = parse_integer(key, value);
            if (t < 0 || t > 1024) throw ConfigError("config: threads must be in [0, 1024]");
            cfg.threads = static_cast<unsigned>(t);
        } else
            cfg.options[key] = value;
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    return parse_config(in);
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &s : registry()) v.push_back(s.name);
        return v;
    }();
    return names;
}

Report run_suite(const ExperimentConfig &config) {
    return run_def(find_suite(config.suite), config, config.options);
}

Report converge_fdd(const ExperimentConfig &config) {
    return run_def(find_suite("converge-fdd"), config, config.options);
}

std::vector<Report> run_all(const ExperimentConfig &config) {
    for (const auto &[k, v] : config.options) {
        bool known = false;
        for (const auto &s : registry()) known |= std::find(s.keys.begin(), s.keys.end(), k) != s.keys.end();
        if (!known) throw ConfigError("config: no suite has key '" + k + "'");
    }
    std::vector<Report> out;
    for (const auto &s : registry()) {
        std::map<std::string, std::string> own;
        for (const auto &[k, v] : config.options)
            if (std::find(s.keys.begin(), s.keys.end(), k) != s.keys.end()) own[k] = v;
        out.push_back(run_def(s, config, own));
    }
    return out;
}

} // namespace ltlab
