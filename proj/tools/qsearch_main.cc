/*
 * Copyright 2026 The qsearch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// qsearch command-line tool: build, run, plot, sweep.
//
// Exit status: 0 success, 1 invalid configuration or arguments, 2 runtime failure.
// Failures print a single line starting with "error:".

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qsearch/error.h"
#include "qsearch/experiment.h"

namespace {

using namespace qsearch;
using namespace qsearch::experiment;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

/// Config file plus per-flag overrides, shared by build/run/sweep.
struct ConfigFlags {
    std::string config;
    std::optional<std::string> family;
    std::optional<std::size_t> n;
    std::optional<std::string> partition;
    std::optional<std::string> oracle;
    std::optional<std::string> oracle_set;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> noise;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> style;
    std::optional<std::string> uncompute;
    std::optional<std::size_t> iterations;
    std::optional<std::size_t> diffuser_size;
    std::optional<std::size_t> ancillas;
    std::optional<unsigned> threads;

    void attach(CLI::App *app) {
        app->add_option("--config", config, "JSON experiment config");
        app->add_option("--family", family, "grover|wojter|drzewker|wielomianer|partial|wojter-aa|partial-drzewker");
        app->add_option("--n", n, "search register width");
        app->add_option("--partition", partition, "block sizes, e.g. 3,2");
        app->add_option("--oracle", oracle, "single marked pattern, e.g. 10110 (q0 first)");
        app->add_option("--oracle-set", oracle_set, "all | sample:k:seed | comma-separated masks");
        app->add_option("--shots", shots, "noisy shots per oracle (0 = exact only)");
        app->add_option("--noise", noise, "p1=..,p2=..,pm=..");
        app->add_option("--seed", seed, "run seed");
        app->add_option("--out", out, "output directory (default $QSEARCH_OUT or .)");
        app->add_option("--style", style, "plain-mcz|ancilla-relphase|ancilla-relphase-partial-uncompute|measurement-assisted");
        app->add_option("--uncompute", uncompute, "full|partial|measurement-assisted");
        app->add_option("--iterations", iterations, "Grover iterations");
        app->add_option("--diffuser-size", diffuser_size, "partial family: diffuser width");
        app->add_option("--ancillas", ancillas, "clean ancillas available");
        app->add_option("--threads", threads, "trajectory threads");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig c;
        if (const char *env = std::getenv("QSEARCH_OUT"); env != nullptr && *env != '\0') c.out = env;
        if (!config.empty()) {
            std::string env_out = c.out;
            c = load_config(config);
            // A config without "out" keeps the environment default.
            if (!config_has_out()) c.out = env_out;
        }
        if (family) c.family = families::parse_family(*family);
        if (n) c.n = *n;
        if (partition) c.partition = families::Partition::parse(*partition);
        if (oracle) {
            c.oracle_set.kind = OracleSet::Kind::List;
            c.oracle_set.masks = {*oracle};
            if (!n) c.n = oracle->size();
        }
        if (oracle_set) c.oracle_set = OracleSet::parse(*oracle_set);
        if (shots) c.shots = *shots;
        if (noise) c.noise = parse_noise(*noise);
        if (seed) c.seed = *seed;
        if (out) c.out = *out;
        if (style) c.style = synth::parse_style(*style);
        if (uncompute) c.uncompute = families::parse_uncompute(*uncompute);
        if (iterations) c.iterations = *iterations;
        if (diffuser_size) c.diffuser_size = *diffuser_size;
        if (ancillas) c.ancillas = *ancillas;
        if (threads) c.threads = *threads;
        c.validate();
        return c;
    }

   private:
    bool config_has_out() const {
        try {
            std::ifstream f(config);
            return nlohmann::json::parse(f).contains("out");
        } catch (...) {
            return false;
        }
    }
};

int fail(int code, const std::string &message) {
    std::cerr << "error: " << message << "\n";
    return code;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qsearch: unstructured-search circuit toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    ConfigFlags build_flags;
    CLI::App *build = app.add_subcommand("build", "write lowered circuits and print gate counts");
    build_flags.attach(build);

    ConfigFlags run_flags;
    std::string report_path;
    CLI::App *run_cmd = app.add_subcommand("run", "simulate every oracle and write a JSON report");
    run_flags.attach(run_cmd);
    run_cmd->add_option("--report", report_path, "report path (default <out>/report_<family>_n<n>.json)");

    std::string plot_report;
    std::string plot_stem;
    CLI::App *plot = app.add_subcommand("plot", "write <stem>.csv and <stem>.tex from a report");
    plot->add_option("report", plot_report, "report JSON")->required();
    plot->add_option("--stem", plot_stem, "output stem (default: report path without extension)");

    ConfigFlags sweep_flags;
    std::string grid_text = "0,0.005,0.01,0.02,0.05";
    std::optional<double> fit_r;
    CLI::App *sweep = app.add_subcommand("sweep", "run over an ascending p2 grid and write a CSV table");
    sweep_flags.attach(sweep);
    sweep->add_option("--grid", grid_text, "ascending p2 values");
    sweep->add_option("--fit-r", fit_r, "also report the p2 at which R reaches this value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail(kExitValidation, e.what());
    }

    try {
        if (*build) {
            cmd_build(build_flags.resolve(), std::cout);
        } else if (*run_cmd) {
            cmd_run(run_flags.resolve(), std::cout, report_path);
        } else if (*plot) {
            PlotArtifact a = cmd_plot(plot_report, plot_stem);
            std::cout << a.csv.string() << "\n" << a.tex.string() << "\n";
        } else if (*sweep) {
            ExperimentConfig c = sweep_flags.resolve();
            cmd_sweep(c, parse_grid(grid_text), std::cout);
            if (fit_r) std::cout << "fitted_p2=" << fit_p2(c, *fit_r) << "\n";
        }
    } catch (const ValidationError &e) {
        return fail(kExitValidation, e.what());
    } catch (const Error &e) {
        return fail(kExitRuntime, e.what());
    } catch (const std::exception &e) {
        return fail(kExitRuntime, e.what());
    }
    return 0;
}
