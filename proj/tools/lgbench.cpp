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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lgbench/cli.hpp"

namespace {

struct Flags {
    std::string config;
    std::string format;
    std::string out;
    bool strict = false;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
};

int execute(const std::string& subcommand, const Flags& flags) {
    using namespace lgbench::cli;
    std::ifstream in(flags.config, std::ios::binary);
    if (!in) {
        std::cerr << "lgbench: cannot read config '" << flags.config << "'\n";
        return 1;
    }
    std::stringstream text;
    text << in.rdbuf();

    RunConfig cfg;
    try {
        cfg = parse_config(text.str());
    } catch (const ConfigError& e) {
        std::cerr << "lgbench: config error: " << e.what() << "\n";
        return 1;
    }
    if (subcommand != subcommand_for(cfg.kind)) {
        std::cerr << "lgbench: config holds a '" << to_string(cfg.kind) << "' scenario; use the '"
                  << subcommand_for(cfg.kind) << "' subcommand\n";
        return 1;
    }
    if (flags.tolerance) {
        if (*flags.tolerance < 0.0) {
            std::cerr << "lgbench: --tolerance must be non-negative\n";
            return 1;
        }
        cfg.tolerance = *flags.tolerance;
    }
    if (flags.seed) {
        cfg.seed = *flags.seed;
    }
    if (!flags.format.empty()) {
        cfg.format = flags.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    }
    if (!flags.out.empty()) {
        cfg.output = flags.out;
    }

    RunResult result;
    try {
        result = run(cfg, flags.strict);
    } catch (const std::exception& e) {
        std::cerr << "lgbench: " << e.what() << "\n";
        return 1;
    }

    if (cfg.output == "-") {
        std::cout << result.document;
        std::cout.flush();
        if (!std::cout) {
            std::cerr << "lgbench: failed writing to standard output\n";
            return 1;
        }
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        out << result.document;
        out.close();
        if (!out) {
            std::cerr << "lgbench: cannot write '" << cfg.output << "'\n";
            return 1;
        }
    }
    if (result.exit_code == 2) {
        std::cerr << "lgbench: infeasible joint construction\n";
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leggett-Garg / NSIT / Fine's-theorem test bench"};
    app.require_subcommand(1);
    Flags flags;

    const std::pair<const char*, const char*> commands[] = {
        {"check", "Evaluate one precession scenario: full condition report"},
        {"sweep", "Sweep a precession parameter over a grid"},
        {"eprb", "Singlet EPRB probabilities, no-signaling and CHSH"},
        {"fine", "Moment set in, D-interval and joint table out"},
        {"oracle", "Exact marginal-problem feasibility"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", flags.out, "Output path, '-' for standard output");
        sub->add_flag("--strict", flags.strict, "Exit 2 when a fine construction is infeasible");
        sub->add_option("--tolerance", flags.tolerance, "Override the configured tolerance");
        sub->add_option("--seed", flags.seed, "Override the configured seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return execute(app.get_subcommands().front()->get_name(), flags);
}
