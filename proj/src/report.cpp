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

#include "ltlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ltlab {

using nlohmann::json;

void Report::finalize() {
    pass = !tests.empty() && std::all_of(tests.begin(), tests.end(), [](const TestReport &t) { return t.pass; });
}

const Estimate &Report::estimate(const std::string &name) const {
    for (const auto &e : estimates)
        if (e.name == name) return e;
    throw std::out_of_range("report " + suite + " has no estimate " + name);
}

namespace {

// non-finite values are written as null
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num(const json &j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json to_json(const Report &r) {
    json j;
    j["suite"] = r.suite;
    j["identity"] = r.identity;
    j["params"] = {{"alpha", r.alpha}, {"kappa", r.kappa}, {"n", r.n}};
    j["seed"] = r.seed;
    j["estimates"] = json::array();
    for (const auto &e : r.estimates) j["estimates"].push_back({{"name", e.name}, {"value", num(e.value)}, {"se", num(e.se)}});
    j["references"] = json::array();
    for (const auto &f : r.references) j["references"].push_back({{"formula", f.formula}, {"value", num(f.value)}});
    j["tests"] = json::array();
    for (const auto &t : r.tests)
        j["tests"].push_back({{"name", t.name},
                              {"method", std::string(to_string(t.method))},
                              {"statistic", num(t.statistic)},
                              {"threshold", num(t.threshold)},
                              {"n1", t.n1},
                              {"n2", t.n2},
                              {"pass", t.pass}});
    j["pass"] = r.pass;
    j["samples"] = {{"columns", r.samples.columns}, {"rows", r.samples.rows.size()}};
    return j;
}

Report from_json(const json &j) {
    Report r;
    r.suite = j.at("suite").get<std::string>();
    r.identity = j.at("identity").get<std::string>();
    r.alpha = j.at("params").at("alpha").get<double>();
    r.kappa = j.at("params").at("kappa").get<double>();
    r.n = j.at("params").at("n").get<std::int64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto &e : j.at("estimates")) r.estimates.push_back({e.at("name"), num(e.at("value")), num(e.at("se"))});
    for (const auto &f : j.at("references")) r.references.push_back({f.at("formula"), num(f.at("value"))});
    for (const auto &t : j.at("tests")) {
        TestReport x;
        x.name = t.at("name").get<std::string>();
        x.method = test_method_from_string(t.at("method").get<std::string>());
        x.statistic = num(t.at("statistic"));
        x.threshold = num(t.at("threshold"));
        x.n1 = t.at("n1").get<std::int64_t>();
        x.n2 = t.at("n2").get<std::int64_t>();
        x.pass = t.at("pass").get<bool>();
        r.tests.push_back(std::move(x));
    }
    r.pass = j.at("pass").get<bool>();
    r.samples.columns = j.at("samples").at("columns").get<std::vector<std::string>>();
    r.samples.rows.resize(j.at("samples").at("rows").get<std::size_t>());
    return r;
}

json parse(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("report: malformed JSON: ") + e.what());
    }
}

} // namespace

std::string report_json(const Report &r) { return to_json(r).dump(2) + "\n"; }

std::string report_list_json(const std::vector<Report> &rs) {
    json j;
    j["reports"] = json::array();
    for (const auto &r : rs) j["reports"].push_back(to_json(r));
    j["pass"] = std::all_of(rs.begin(), rs.end(), [](const Report &r) { return r.pass; });
    return j.dump(2) + "\n";
}

Report report_from_json(const std::string &text) {
    try {
        return from_json(parse(text));
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("report: bad field: ") + e.what());
    }
}

std::vector<Report> report_list_from_json(const std::string &text) {
    std::vector<Report> out;
    try {
        const json j = parse(text);
        for (const auto &r : j.at("reports")) out.push_back(from_json(r));
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("report list: bad field: ") + e.what());
    }
    return out;
}

void write_csv(std::ostream &out, const SampleTable &t) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << "\n" << std::setprecision(17);
    for (const auto &row : t.rows) {
        if (row.size() != t.columns.size()) throw std::invalid_argument("write_csv: row width differs from header");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << "\n";
    }
}

SampleTable read_csv(std::istream &in) {
    SampleTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_csv: missing header");
    std::stringstream header(line);
    for (std::string cell; std::getline(header, cell, ',');) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            std::size_t used = 0;
            row.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument("read_csv: bad number " + cell);
        }
        if (row.size() != t.columns.size()) throw std::invalid_argument("read_csv: row width differs from header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::filesystem::path emit_report(const Report &r, const std::filesystem::path &dir, ReportFormat format) {
    std::filesystem::create_directories(dir);
    const auto path = dir / (r.suite + (format == ReportFormat::Json ? ".json" : ".csv"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (format == ReportFormat::Json)
        out << report_json(r);
    else
        write_csv(out, r.samples);
    if (!out) throw std::runtime_error("write failed: " + path.string());
    return path;
}

} // namespace ltlab
