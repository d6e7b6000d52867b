// SPDX-License-Identifier: Apache-2.0
//
// starnf: joint beamforming toolkit for STAR-RIS aided near-field MIMO
// Copyright (C) 2026 The starnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line driver: sweeps, single-cell traces and the acceptance checks.

#include "criteria.hpp"
#include "starnf/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace
{

std::string default_output_dir()
{
    const char *env = std::getenv("STARNF_OUTPUT_DIR");
    return env && *env ? env : "results";
}

int cmd_run(const std::string &config, const std::string &output, std::size_t jobs, bool verbose)
{
    const starnf::SystemConfig cfg = starnf::load_config(config);
    starnf::ExperimentOptions opts;
    opts.output_dir = output;
    opts.jobs = jobs;
    opts.quiet = !verbose;
    const starnf::ExperimentSummary s = starnf::run_experiment(cfg, opts);
    std::cout << "cells: " << s.cells << "\nfailures: " << s.failures << "\nresults: " << s.results_csv.string()
              << "\ndeterminism_hash: " << s.determinism_hash << '\n';
    return s.failures == 0 ? 0 : 1;
}

struct TraceArgs
{
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme, solver, setup;
    std::optional<double> p_dbm;
    std::vector<std::size_t> grid;
};

int cmd_trace(const TraceArgs &a)
{
    const starnf::SystemConfig cfg = starnf::load_config(a.config);
    const std::vector<starnf::Cell> cells = starnf::enumerate_cells(cfg);
    starnf::Cell cell = cells.empty() ? starnf::Cell{} : cells.front();
    if (a.seed)
        cell.seed = *a.seed;
    if (a.scheme)
        cell.scheme = starnf::parse_baseline_kind(*a.scheme);
    if (a.solver)
        cell.solver = starnf::parse_trc_solver(*a.solver);
    if (a.setup)
        cell.setup = starnf::parse_user_setup(*a.setup);
    if (a.p_dbm)
        cell.p_dbm = *a.p_dbm;
    if (a.grid.size() == 2)
        cell.grid = starnf::RisGrid{a.grid[0], a.grid[1]};

    const starnf::CellOutcome out = starnf::run_cell(cfg, cell);
    std::cerr << starnf::csv_header() << '\n' << starnf::csv_line(out.row) << '\n';
    if (!out.row.ok)
        return 1;
    if (a.output.empty())
        starnf::write_trace_csv(std::cout, out.trace);
    else
    {
        std::ofstream f(a.output);
        starnf::write_trace_csv(f, out.trace);
    }
    return 0;
}

int cmd_validate(const starnf::acceptance::Options &opts)
{
    bool all = true;
    for (const auto &r : starnf::acceptance::run_criteria(opts))
    {
        std::cout << starnf::acceptance::format_line(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"starnf: joint active/passive beamforming for STAR-RIS aided near-field MIMO"};
    app.require_subcommand(1);

    std::string config, output = default_output_dir();
    std::size_t jobs = 1;
    bool verbose = false;
    CLI::App *run = app.add_subcommand("run", "Run every cell of a configured sweep and write CSV results");
    run->add_option("-c,--config", config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", output, "Output directory (default $STARNF_OUTPUT_DIR or ./results)");
    run->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_flag("-v,--verbose", verbose, "Report each finished cell on stderr");

    TraceArgs ta;
    CLI::App *trace = app.add_subcommand("trace", "Run one cell and dump its per-iteration convergence trace");
    trace->add_option("-c,--config", ta.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    trace->add_option("-o,--output", ta.output, "Trace CSV file (default stdout)");
    trace->add_option("--seed", ta.seed);
    trace->add_option("--scheme", ta.scheme, "proposed, conventional-ris, uniform-es or farfield-bf");
    trace->add_option("--solver", ta.solver, "pen, ele or fixed");
    trace->add_option("--setup", ta.setup, "random or inline");
    trace->add_option("--p-dbm", ta.p_dbm);
    trace->add_option("--grid", ta.grid, "Surface grid as NY NZ")->expected(2);

    starnf::acceptance::Options va;
    bool progress = false;
    CLI::App *validate = app.add_subcommand("validate", "Run the acceptance checks and print one line per criterion");
    validate->add_flag("--quick", va.quick, "Few seeds and draws; a smoke run only");
    validate->add_option("--seeds", va.seeds, "Seeds per statistical criterion")->check(CLI::PositiveNumber);
    validate->add_option("--only", va.only, "Criterion ids to run")->check(CLI::Range(1, 10));
    validate->add_flag("-v,--verbose", progress, "Progress on stderr");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (*run)
            return cmd_run(config, output, jobs, verbose);
        if (*trace)
            return cmd_trace(ta);
        if (*validate)
        {
            if (progress)
                va.log = &std::cerr;
            return cmd_validate(va);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
