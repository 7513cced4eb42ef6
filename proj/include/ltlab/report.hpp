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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ltlab/stats.hpp"

namespace ltlab {

struct Estimate {
    std::string name;
    double value = 0.0;
    double se = 0.0;
};

struct Reference {
    std::string formula;
    double value = 0.0;
};

/// Raw samples, one row per sample.
struct SampleTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string suite;
    /// The identity or property the suite checks.
    std::string identity;
    double alpha = 0.0;
    double kappa = 0.0;
    std::int64_t n = 1;
    std::uint64_t seed = 0;
    std::vector<Estimate> estimates;
    std::vector<Reference> references;
    std::vector<TestReport> tests;
    bool pass = false;
    SampleTable samples;

    /// pass = all tests pass (and there is at least one).
    void finalize();
    const Estimate &estimate(const std::string &name) const;
};

enum class ReportFormat { Json, Csv };

/// JSON text of one report (two-space indent, trailing newline). Sample rows
/// are not included, only their columns and count.
std::string report_json(const Report &r);
/// JSON text of a list of reports: {"reports": [...], "pass": bool}.
std::string report_list_json(const std::vector<Report> &rs);
Report report_from_json(const std::string &text);
std::vector<Report> report_list_from_json(const std::string &text);

/// Headered CSV, values with 17 significant digits.
void write_csv(std::ostream &out, const SampleTable &t);
SampleTable read_csv(std::istream &in);

/// Writes <dir>/<suite>.json or <dir>/<suite>.csv; returns the path.
std::filesystem::path emit_report(const Report &r, const std::filesystem::path &dir, ReportFormat format);

} // namespace ltlab
