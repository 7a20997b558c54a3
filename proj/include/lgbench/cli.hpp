// Copyright 2026 The lgbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: JSON run configuration, scenario dispatch and
// JSON / CSV report emission. The schemas live in schemas/ at the
// repository root.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lgbench/conditions.hpp"
#include "lgbench/marginals.hpp"
#include "lgbench/measure.hpp"
#include "lgbench/qops.hpp"
#include "lgbench/scenarios.hpp"

namespace lgbench::cli {

using nlohmann::json;

inline constexpr const char* kReportSchema = "lgbench.report/1";

enum class ScenarioKind { precession, eprb, fine, oracle, sweep };
enum class OutputFormat { json, csv };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::precession: return "precession";
        case ScenarioKind::eprb: return "eprb";
        case ScenarioKind::fine: return "fine";
        case ScenarioKind::oracle: return "oracle";
        case ScenarioKind::sweep: return "sweep";
    }
    return "?";
}

/// Subcommand that runs a scenario kind.
inline const char* subcommand_for(ScenarioKind k) {
    return k == ScenarioKind::precession ? "check" : to_string(k);
}

/// Configuration errors carry the offending field path.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct InitialSpec {
    std::optional<Vec3> bloch;              // explicit Bloch vector
    std::optional<SampleKind> sample;       // or a seeded random state
};

struct PrecessionSpec {
    double omega = 1.0;
    Vec3 axis = Vec3(1, 0, 0);
    Vec3 q_axis = Vec3(0, 0, 1);
    InitialSpec initial{Vec3(0, 0, 1), std::nullopt};
    std::vector<double> times;
};

struct SweepSpec {
    PrecessionSpec model;
    std::string parameter;
    std::vector<double> grid;
};

struct FineSpec {
    MomentSet moments;
};

struct OracleSpec {
    MarginalProblem problem;
    LpOptions options;
};

struct RunConfig {
    ScenarioKind kind = ScenarioKind::precession;
    double tolerance = kDefaultTolerance;
    OutputFormat format = OutputFormat::json;
    std::string output = "-";
    std::uint64_t seed = 0;
    std::variant<PrecessionSpec, EPRBModel, FineSpec, OracleSpec, SweepSpec> scenario;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!ok.count(it.key())) {
            throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
        }
    }
}

inline const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    return j;
}

inline double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(path, "expected a finite number");
    }
    return v;
}

inline std::vector<double> get_numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw ConfigError(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline Vec3 get_vec3(const json& j, const std::string& path) {
    const auto v = get_numbers(j, path);
    if (v.size() != 3) {
        throw ConfigError(path, "expected 3 components");
    }
    return Vec3(v[0], v[1], v[2]);
}

inline Vec3 get_unit_vec3(const json& j, const std::string& path) {
    const Vec3 v = get_vec3(j, path);
    const double n = v.norm();
    if (std::abs(n - 1.0) > kConstructTol) {
        throw ConfigError(path, "norm " + lgbench::detail::fmt_double(n) + " != 1");
    }
    return v;
}

inline std::vector<double> get_times(const json& j, const std::string& path) {
    auto t = get_numbers(j, path);
    if (t.size() != 3 && t.size() != 4) {
        throw ConfigError(path, "expected 3 or 4 times");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw ConfigError(path, "times must be strictly increasing");
        }
    }
    return t;
}

inline InitialSpec parse_initial(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"bloch", "sample"});
    if (j.contains("bloch") == j.contains("sample")) {
        throw ConfigError(path, "exactly one of 'bloch' or 'sample' is required");
    }
    InitialSpec out;
    if (j.contains("bloch")) {
        const Vec3 r = get_vec3(j["bloch"], path + ".bloch");
        if (r.norm() > 1.0 + kConstructTol) {
            throw ConfigError(path + ".bloch", "norm " + lgbench::detail::fmt_double(r.norm()) +
                                                   " > 1 is not a valid state");
        }
        out.bloch = r;
    } else {
        const json& s = j["sample"];
        if (s == "pure-haar") {
            out.sample = SampleKind::pure_haar;
        } else if (s == "mixed-ball") {
            out.sample = SampleKind::mixed_ball;
        } else {
            throw ConfigError(path + ".sample", "expected \"pure-haar\" or \"mixed-ball\"");
        }
    }
    return out;
}

inline PrecessionSpec parse_precession(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"omega", "axis", "q_axis", "initial", "times"});
    PrecessionSpec p;
    if (j.contains("omega")) {
        p.omega = get_number(j["omega"], path + ".omega");
    }
    if (j.contains("axis")) {
        p.axis = get_unit_vec3(j["axis"], path + ".axis");
    }
    if (j.contains("q_axis")) {
        p.q_axis = get_unit_vec3(j["q_axis"], path + ".q_axis");
    }
    if (j.contains("initial")) {
        p.initial = parse_initial(j["initial"], path + ".initial");
    }
    if (!j.contains("times")) {
        throw ConfigError(path + ".times", "required field missing");
    }
    p.times = get_times(j["times"], path + ".times");
    return p;
}

inline EPRBModel parse_eprb(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"a", "a_prime", "b", "b_prime"});
    EPRBModel m = EPRBModel::standard_chsh();
    if (j.contains("a")) m.a = get_unit_vec3(j["a"], path + ".a");
    if (j.contains("a_prime")) m.a_prime = get_unit_vec3(j["a_prime"], path + ".a_prime");
    if (j.contains("b")) m.b = get_unit_vec3(j["b"], path + ".b");
    if (j.contains("b_prime")) m.b_prime = get_unit_vec3(j["b_prime"], path + ".b_prime");
    return m;
}

inline FineSpec parse_fine(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"singles", "pairs"});
    if (!j.contains("singles")) {
        throw ConfigError(path + ".singles", "required field missing");
    }
    if (!j.contains("pairs")) {
        throw ConfigError(path + ".pairs", "required field missing");
    }
    FineSpec f;
    f.moments.singles = get_numbers(j["singles"], path + ".singles");
    if (f.moments.singles.size() != 3) {
        throw ConfigError(path + ".singles", "expected 3 values");
    }
    const json& pairs = require_object(j["pairs"], path + ".pairs");
    reject_unknown(pairs, path + ".pairs", {"12", "23", "13"});
    for (const auto& [key, i, k] : {std::tuple<const char*, std::size_t, std::size_t>{"12", 0, 1},
                                    {"23", 1, 2},
                                    {"13", 0, 2}}) {
        if (!pairs.contains(key)) {
            throw ConfigError(path + ".pairs." + key, "required field missing");
        }
        f.moments.set_pair(i, k, get_number(pairs[key], path + ".pairs." + key));
    }
    try {
        f.moments.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    return f;
}

inline OracleSpec parse_oracle(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"variables", "alphabets", "constraints", "max_denominator"});
    if (!j.contains("variables")) {
        throw ConfigError(path + ".variables", "required field missing");
    }
    if (!j["variables"].is_number_unsigned()) {
        throw ConfigError(path + ".variables", "expected a positive integer");
    }
    OracleSpec o{MarginalProblem{}, LpOptions{}};
    o.problem.variables = j["variables"].get<std::size_t>();
    if (j.contains("alphabets")) {
        const json& a = j["alphabets"];
        if (!a.is_array()) {
            throw ConfigError(path + ".alphabets", "expected an array of integers");
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number_unsigned()) {
                throw ConfigError(path + ".alphabets[" + std::to_string(i) + "]", "expected a positive integer");
            }
            o.problem.alphabets.push_back(a[i].get<std::size_t>());
        }
    } else {
        o.problem.alphabets.assign(o.problem.variables, 2);
    }
    if (j.contains("max_denominator")) {
        if (!j["max_denominator"].is_number_unsigned() || j["max_denominator"].get<std::uint64_t>() == 0) {
            throw ConfigError(path + ".max_denominator", "expected a positive integer");
        }
        o.options.max_denominator = j["max_denominator"].get<std::uint64_t>();
    }
    if (!j.contains("constraints") || !j["constraints"].is_array()) {
        throw ConfigError(path + ".constraints", "required array missing");
    }
    const json& cs = j["constraints"];
    for (std::size_t c = 0; c < cs.size(); ++c) {
        const std::string cp = path + ".constraints[" + std::to_string(c) + "]";
        require_object(cs[c], cp);
        reject_unknown(cs[c], cp, {"vars", "table"});
        if (!cs[c].contains("vars") || !cs[c]["vars"].is_array()) {
            throw ConfigError(cp + ".vars", "required array missing");
        }
        std::vector<std::size_t> vars;
        for (const auto& v : cs[c]["vars"]) {
            if (!v.is_number_unsigned()) {
                throw ConfigError(cp + ".vars", "expected variable indices");
            }
            vars.push_back(v.get<std::size_t>());
        }
        if (!cs[c].contains("table")) {
            throw ConfigError(cp + ".table", "required field missing");
        }
        auto values = get_numbers(cs[c]["table"], cp + ".table");
        try {
            std::vector<std::size_t> labels = vars;
            o.problem.constraints.push_back(
                {vars, OutcomeTable(vars.size(), std::move(values), TableKind::quasi, std::move(labels))});
        } catch (const std::invalid_argument& e) {
            throw ConfigError(cp + ".table", e.what());
        }
    }
    try {
        o.problem.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    return o;
}

inline std::vector<double> parse_grid(const json& j, const std::string& path) {
    if (j.is_array()) {
        auto g = get_numbers(j, path);
        if (g.empty()) {
            throw ConfigError(path, "grid must be non-empty");
        }
        return g;
    }
    require_object(j, path);
    reject_unknown(j, path, {"start", "stop", "count"});
    for (const char* k : {"start", "stop", "count"}) {
        if (!j.contains(k)) {
            throw ConfigError(path + "." + k, "required field missing");
        }
    }
    const double start = get_number(j["start"], path + ".start");
    const double stop = get_number(j["stop"], path + ".stop");
    if (!j["count"].is_number_unsigned() || j["count"].get<std::size_t>() == 0) {
        throw ConfigError(path + ".count", "expected a positive integer");
    }
    const std::size_t count = j["count"].get<std::size_t>();
    std::vector<double> g;
    for (std::size_t i = 0; i < count; ++i) {
        g.push_back(count == 1 ? start
                               : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return g;
}

inline SweepSpec parse_sweep(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"model", "parameter", "grid"});
    for (const char* k : {"model", "parameter", "grid"}) {
        if (!j.contains(k)) {
            throw ConfigError(path + "." + k, "required field missing");
        }
    }
    SweepSpec s;
    s.model = parse_precession(j["model"], path + ".model");
    if (!j["parameter"].is_string()) {
        throw ConfigError(path + ".parameter", "expected a string");
    }
    s.parameter = j["parameter"].get<std::string>();
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), s.parameter) == names.end()) {
        throw ConfigError(path + ".parameter", "unknown parameter '" + s.parameter + "'");
    }
    s.grid = parse_grid(j["grid"], path + ".grid");
    return s;
}

}  // namespace detail

/// Parse and fully validate a JSON run configuration.
inline RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    detail::require_object(doc, "");
    detail::reject_unknown(doc, "", {"version", "tolerance", "format", "output", "seed", "precession", "eprb",
                                     "fine", "oracle", "sweep"});
    if (doc.contains("version") && doc["version"] != 1) {
        throw ConfigError("version", "unsupported configuration version");
    }
    RunConfig cfg;
    if (doc.contains("tolerance")) {
        cfg.tolerance = detail::get_number(doc["tolerance"], "tolerance");
        if (cfg.tolerance < 0.0) {
            throw ConfigError("tolerance", "must be non-negative");
        }
    }
    if (doc.contains("format")) {
        if (doc["format"] == "json") {
            cfg.format = OutputFormat::json;
        } else if (doc["format"] == "csv") {
            cfg.format = OutputFormat::csv;
        } else {
            throw ConfigError("format", "expected \"json\" or \"csv\"");
        }
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string() || doc["output"].get<std::string>().empty()) {
            throw ConfigError("output", "expected a path or \"-\"");
        }
        cfg.output = doc["output"].get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }

    std::vector<ScenarioKind> present;
    for (ScenarioKind k : {ScenarioKind::precession, ScenarioKind::eprb, ScenarioKind::fine, ScenarioKind::oracle,
                           ScenarioKind::sweep}) {
        if (doc.contains(to_string(k))) {
            present.push_back(k);
        }
    }
    if (present.size() != 1) {
        throw ConfigError("scenario", "exactly one scenario block is required (found " +
                                          std::to_string(present.size()) + ")");
    }
    cfg.kind = present.front();
    const json& block = doc[to_string(cfg.kind)];
    const std::string path = "scenario";
    switch (cfg.kind) {
        case ScenarioKind::precession: cfg.scenario = detail::parse_precession(block, path); break;
        case ScenarioKind::eprb: cfg.scenario = detail::parse_eprb(block, path); break;
        case ScenarioKind::fine: cfg.scenario = detail::parse_fine(block, path); break;
        case ScenarioKind::oracle: cfg.scenario = detail::parse_oracle(block, path); break;
        case ScenarioKind::sweep: cfg.scenario = detail::parse_sweep(block, path); break;
    }
    return cfg;
}

struct RunResult {
    int exit_code = 0;
    std::string document;
};

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline std::string pair_key(std::size_t i, std::size_t j) { return std::to_string(i + 1) + std::to_string(j + 1); }

inline State resolve_initial(const InitialSpec& s, std::uint64_t seed) {
    if (s.bloch) {
        return density_from_bloch(*s.bloch);
    }
    return sample_state(seed, *s.sample, 2);
}

inline PrecessionModel to_model(const PrecessionSpec& p, std::uint64_t seed) {
    PrecessionModel m;
    m.omega = p.omega;
    m.axis = p.axis;
    m.q_axis = p.q_axis;
    m.initial = resolve_initial(p.initial, seed);
    m.times = p.times;
    return m;
}

inline json table_json(const OutcomeTable& t) {
    return json{{"labels", t.labels()}, {"kind", lgbench::to_string(t.kind())}, {"values", t.values()}};
}

inline json slacks_json(const std::vector<Slack>& slacks) {
    json out = json::array();
    for (const auto& s : slacks) {
        out.push_back({{"name", s.name},
                       {"value", s.value},
                       {"kind", s.kind == SlackKind::inequality ? "inequality" : "equality"}});
    }
    return out;
}

inline json moments_json(const MomentSet& m) {
    json pairs = json::object();
    for (const auto& [key, v] : m.pairs) {
        pairs[pair_key(key.first, key.second)] = v;
    }
    json out{{"singles", m.singles}, {"pairs", pairs}};
    out["triple"] = m.triple ? json(*m.triple) : json(nullptr);
    return out;
}

inline json verdicts_json(const ConditionReport& r) {
    json v{{"mr_weak", r.mr_weak}};
    v["mr_int"] = r.mr_int ? json(*r.mr_int) : json(nullptr);
    v["mr_strong"] = r.mr_strong ? json(*r.mr_strong) : json(nullptr);
    return v;
}

/// Column order: slacks as reported (LG2, LG3 or LG4, NSIT), witness,
/// interference, verdicts as 0/1.
inline std::vector<std::string> report_columns(const ConditionReport& r) {
    std::vector<std::string> cols;
    for (const auto& s : r.slacks) {
        cols.push_back(s.name);
    }
    cols.push_back("witness");
    cols.push_back("interference");
    cols.push_back("mr_weak");
    if (r.mr_int) {
        cols.push_back("mr_int");
        cols.push_back("mr_strong");
    }
    return cols;
}

inline std::vector<double> report_row(const ConditionReport& r, double witness, double interference) {
    std::vector<double> row;
    for (const auto& s : r.slacks) {
        row.push_back(s.value);
    }
    row.push_back(witness);
    row.push_back(interference);
    row.push_back(r.mr_weak ? 1.0 : 0.0);
    if (r.mr_int) {
        row.push_back(*r.mr_int ? 1.0 : 0.0);
        row.push_back(*r.mr_strong ? 1.0 : 0.0);
    }
    return row;
}

inline std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += cells[i];
    }
    out += "\n";
    return out;
}

inline std::string csv_rows(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out = csv_line(header);
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        for (double v : row) {
            cells.push_back(csv_number(v));
        }
        out += csv_line(cells);
    }
    return out;
}

/// Two-column quantity,value listing for non-tabular reports.
inline std::string csv_long(const std::vector<std::pair<std::string, double>>& items) {
    std::string out = "quantity,value\n";
    for (const auto& [k, v] : items) {
        out += k + "," + csv_number(v) + "\n";
    }
    return out;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline RunResult run_check(const RunConfig& cfg, const PrecessionSpec& spec) {
    const PrecessionModel model = to_model(spec, cfg.seed);
    const PrecessionRun run = run_precession(model, cfg.tolerance);
    if (cfg.format == OutputFormat::csv) {
        return {0, csv_rows(report_columns(run.report), {report_row(run.report, run.witness, run.interference)})};
    }
    json tables = json::object();
    for (const auto& [name, t] : run.tables) {
        tables[name] = table_json(t);
    }
    json closed = json::object();
    for (const auto& [key, v] : run.closed_form_pairs) {
        closed[pair_key(key.first, key.second)] = v;
    }
    json doc{{"schema", kReportSchema},
             {"kind", "check"},
             {"tolerance", cfg.tolerance},
             {"times", model.times},
             {"verdicts", verdicts_json(run.report)},
             {"slacks", slacks_json(run.report.slacks)},
             {"moments", moments_json(run.moments)},
             {"closed_form_pairs", closed},
             {"witness", run.witness},
             {"interference", run.interference},
             {"tables", tables}};
    return {0, dump(doc)};
}

inline RunResult run_sweep(const RunConfig& cfg, const SweepSpec& spec) {
    const PrecessionModel model = to_model(spec.model, cfg.seed);
    const auto rows = sweep(model, spec.parameter, spec.grid, cfg.tolerance);
    std::vector<std::string> header{"parameter"};
    const auto cols = report_columns(rows.front().report);
    header.insert(header.end(), cols.begin(), cols.end());
    std::vector<std::vector<double>> data;
    for (const auto& r : rows) {
        std::vector<double> line{r.parameter};
        const auto vals = report_row(r.report, r.witness, r.interference);
        line.insert(line.end(), vals.begin(), vals.end());
        data.push_back(std::move(line));
    }
    if (cfg.format == OutputFormat::csv) {
        return {0, csv_rows(header, data)};
    }
    json doc{{"schema", kReportSchema},
             {"kind", "sweep"},
             {"tolerance", cfg.tolerance},
             {"parameter", spec.parameter},
             {"columns", header},
             {"rows", data}};
    return {0, dump(doc)};
}

inline RunResult run_eprb_report(const RunConfig& cfg, const EPRBModel& model) {
    const EprbRun run = run_eprb(model);
    double ns_max = 0.0, sr24 = 0.0, sr13 = 0.0;
    for (const auto& s : run.no_signaling) ns_max = std::max(ns_max, s.value);
    for (const auto& s : run.sum_rule_s2s4) sr13 = std::max(sr13, s.value);
    for (const auto& s : run.sum_rule_s1s3) sr24 = std::max(sr24, s.value);
    if (cfg.format == OutputFormat::csv) {
        std::vector<std::pair<std::string, double>> items{{"C13", run.correlators[0]},
                                                          {"C14", run.correlators[1]},
                                                          {"C23", run.correlators[2]},
                                                          {"C24", run.correlators[3]}};
        for (const auto& s : run.chsh) items.emplace_back(s.name, s.value);
        items.emplace_back("chsh_min", min_value(run.chsh));
        items.emplace_back("no_signaling_max", ns_max);
        items.emplace_back("sum_rule_p13_max", sr13);
        items.emplace_back("sum_rule_p24_max", sr24);
        return {0, csv_long(items)};
    }
    json pairs = json::object();
    for (const auto& [name, t] : run.pairs) {
        pairs[name] = table_json(t);
    }
    json doc{{"schema", kReportSchema},
             {"kind", "eprb"},
             {"correlators", {{"13", run.correlators[0]}, {"14", run.correlators[1]},
                              {"23", run.correlators[2]}, {"24", run.correlators[3]}}},
             {"pairs", pairs},
             {"chsh", slacks_json(run.chsh)},
             {"chsh_min", min_value(run.chsh)},
             {"no_signaling", slacks_json(run.no_signaling)},
             {"no_signaling_max", ns_max},
             {"sequential", table_json(run.sequential)},
             {"sum_rule_p13", slacks_json(run.sum_rule_s2s4)},
             {"sum_rule_p24", slacks_json(run.sum_rule_s1s3)},
             {"sum_rule_p13_max", sr13},
             {"sum_rule_p24_max", sr24}};
    return {0, dump(doc)};
}

inline RunResult run_fine(const RunConfig& cfg, const FineSpec& spec, bool strict) {
    const JointConstruction jc = joint3_construct(spec.moments);
    const LpVerdict lp = lp_feasible(three_time_problem(spec.moments));
    const int code = (strict && jc.interval.empty) ? 2 : 0;
    if (cfg.format == OutputFormat::csv) {
        std::vector<std::pair<std::string, double>> items{{"d_lower", jc.interval.lower},
                                                          {"d_upper", jc.interval.upper},
                                                          {"empty", jc.interval.empty ? 1.0 : 0.0},
                                                          {"lp_feasible", lp.feasible ? 1.0 : 0.0}};
        if (jc.joint) {
            items.emplace_back("triple", *jc.triple);
            for (std::size_t i = 0; i < jc.joint->size(); ++i) {
                const auto d = jc.joint->digits(i);
                std::string name = "p(";
                for (std::size_t x : d) name += lgbench::detail::sign_char(digit_sign(x));
                items.emplace_back(name + ")", (*jc.joint)[i]);
            }
        }
        return {code, csv_long(items)};
    }
    json doc{{"schema", kReportSchema},
             {"kind", "fine"},
             {"moments", moments_json(spec.moments)},
             {"interval", {{"lower", jc.interval.lower}, {"upper", jc.interval.upper}, {"empty", jc.interval.empty}}},
             {"feasible", !jc.interval.empty},
             {"lp_feasible", lp.feasible},
             {"violated", jc.violated}};
    doc["triple"] = jc.triple ? json(*jc.triple) : json(nullptr);
    doc["joint"] = jc.joint ? table_json(*jc.joint) : json(nullptr);
    return {code, dump(doc)};
}

inline RunResult run_oracle(const RunConfig& cfg, const OracleSpec& spec) {
    const LpVerdict v = lp_feasible(spec.problem, spec.options);
    if (cfg.format == OutputFormat::csv) {
        std::vector<std::pair<std::string, double>> items{{"feasible", v.feasible ? 1.0 : 0.0},
                                                          {"rationalization_error", v.rationalization_error}};
        if (v.joint) {
            for (std::size_t i = 0; i < v.joint->size(); ++i) {
                items.emplace_back("joint[" + std::to_string(i) + "]", (*v.joint)[i]);
            }
        }
        return {0, csv_long(items)};
    }
    json doc{{"schema", kReportSchema},
             {"kind", "oracle"},
             {"feasible", v.feasible},
             {"max_denominator", spec.options.max_denominator},
             {"rationalization_error", v.rationalization_error}};
    if (v.joint) {
        json exact = json::array();
        for (const auto& r : v.exact_joint) {
            exact.push_back(r.get_str());
        }
        doc["joint"] = table_json(*v.joint);
        doc["joint_exact"] = exact;
    } else {
        doc["joint"] = nullptr;
        doc["joint_exact"] = nullptr;
    }
    return {0, dump(doc)};
}

}  // namespace detail

/// Execute a validated configuration. Verdicts never change the exit code;
/// with `strict`, an infeasible `fine` construction exits with 2.
inline RunResult run(const RunConfig& cfg, bool strict = false) {
    return std::visit(
        [&](const auto& spec) -> RunResult {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, PrecessionSpec>) {
                return detail::run_check(cfg, spec);
            } else if constexpr (std::is_same_v<T, SweepSpec>) {
                return detail::run_sweep(cfg, spec);
            } else if constexpr (std::is_same_v<T, EPRBModel>) {
                return detail::run_eprb_report(cfg, spec);
            } else if constexpr (std::is_same_v<T, FineSpec>) {
                return detail::run_fine(cfg, spec, strict);
            } else {
                return detail::run_oracle(cfg, spec);
            }
        },
        cfg.scenario);
}

}  // namespace lgbench::cli
