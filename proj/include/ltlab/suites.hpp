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
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlab/report.hpp"

namespace ltlab {

/// Invalid configuration: unknown suite or key, malformed or out-of-range value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string suite;
    std::optional<double> alpha;
    std::optional<double> kappa;
    std::optional<std::int64_t> n;
    /// Replica count; each suite has its own default.
    std::optional<std::int64_t> replicas;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    /// Suite-specific keys, e.g. x=5, lambdas=0.5,1. Unused keys are an error.
    std::map<std::string, std::string> options;
};

/// key=value lines; '#' starts a comment. Known keys: suite, alpha, kappa, n,
/// replicas, seed, threads; every other key goes to options.
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig parse_config_file(const std::string &path);

/// Suite names in run-all order (converge-fdd last).
const std::vector<std::string> &suite_names();

Report run_suite(const ExperimentConfig &config);
Report converge_fdd(const ExperimentConfig &config);
/// Every suite with the shared seed, replicas, threads and options. Options are
/// passed only to suites that use them.
std::vector<Report> run_all(const ExperimentConfig &config);

} // namespace ltlab
