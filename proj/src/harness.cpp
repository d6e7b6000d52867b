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

#include "starnf/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace starnf
{

namespace
{

using json = nlohmann::json;

std::string fmt_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void reject_unknown(const json &j, const std::string &section, std::initializer_list<const char *> keys)
{
    if (!j.is_object())
        throw ConfigError("config: section '" + section + "' must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + section + "." + it.key() + "'");
}

template <class T> void read(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

Vec3 read_vec3(const json &j)
{
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3)
        throw ConfigError("config: positions need three coordinates");
    return Vec3(v[0], v[1], v[2]);
}

std::string csv_quote(const std::string &s)
{
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += "\"\"";
        else if (c == '\n' || c == '\r')
            out += ' ';
        else
            out += c;
    }
    return out + "\"";
}

} // namespace

const char *to_string(UserSetup s)
{
    return s == UserSetup::random ? "random" : "inline";
}

UserSetup parse_user_setup(const std::string &name)
{
    if (name == "random")
        return UserSetup::random;
    if (name == "inline")
        return UserSetup::inline_;
    throw ConfigError("unknown user setup '" + name + "'");
}

void SystemConfig::validate() const
{
    auto positive = [](double x) { return x > 0.0; };
    if (!positive(wavelength) || !positive(ris_spacing_wl) || !positive(user_spacing_wl) || !positive(d0))
        throw ConfigError("config: wavelength, spacings and reference distance must be positive");
    if (bs_antennas == 0 || user_antennas == 0 || users == 0 || paths == 0)
        throw ConfigError("config: antenna, user and path counts must be positive");
    if (transmit_users > users)
        throw ConfigError("config: more transmission-side users than users");
    if (radii.empty() || !std::all_of(radii.begin(), radii.end(), positive))
        throw ConfigError("config: user radii must be positive");
    if (!(pathloss_exponent >= 0.0))
        throw ConfigError("config: path-loss exponent must be non-negative");
    if (!weights.empty() && (weights.size() != users || !std::all_of(weights.begin(), weights.end(), positive)))
        throw ConfigError("config: one positive weight per user is required");
    for (const RisGrid &g : grids)
        if (g.elements() == 0)
            throw ConfigError("config: empty surface grid");
    bcd.validate();
}

std::vector<double> SystemConfig::user_weights() const
{
    return weights.empty() ? std::vector<double>(users, 1.0) : weights;
}

SystemConfig parse_config(const std::string &json_text)
{
    SystemConfig cfg;
    json root;
    try
    {
        root = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    try
    {
        reject_unknown(root, "", {"system", "sweep", "solver", "output"});
        if (root.contains("system"))
        {
            const json &s = root["system"];
            reject_unknown(s, "system",
                           {"wavelength", "bs_antennas", "user_antennas", "users", "transmit_users", "ris_spacing_wl",
                            "user_spacing_wl", "noise_dbm", "c0_db", "d0", "pathloss_exponent", "paths", "radii",
                            "ris_reference", "bs_position", "weights"});
            read(s, "wavelength", cfg.wavelength);
            read(s, "bs_antennas", cfg.bs_antennas);
            read(s, "user_antennas", cfg.user_antennas);
            read(s, "users", cfg.users);
            read(s, "transmit_users", cfg.transmit_users);
            read(s, "ris_spacing_wl", cfg.ris_spacing_wl);
            read(s, "user_spacing_wl", cfg.user_spacing_wl);
            read(s, "noise_dbm", cfg.noise_dbm);
            read(s, "c0_db", cfg.c0_db);
            read(s, "d0", cfg.d0);
            read(s, "pathloss_exponent", cfg.pathloss_exponent);
            read(s, "paths", cfg.paths);
            read(s, "radii", cfg.radii);
            read(s, "weights", cfg.weights);
            if (s.contains("ris_reference"))
                cfg.ris_reference = read_vec3(s["ris_reference"]);
            if (s.contains("bs_position"))
                cfg.bs_position = read_vec3(s["bs_position"]);
        }
        if (root.contains("sweep"))
        {
            const json &s = root["sweep"];
            reject_unknown(s, "sweep", {"p_dbm", "seeds", "schemes", "solvers", "setups", "grids"});
            read(s, "p_dbm", cfg.p_dbm);
            read(s, "seeds", cfg.seeds);
            if (s.contains("schemes"))
            {
                cfg.schemes.clear();
                for (const auto &n : s["schemes"].get<std::vector<std::string>>())
                    cfg.schemes.push_back(parse_baseline_kind(n));
            }
            if (s.contains("solvers"))
            {
                cfg.solvers.clear();
                for (const auto &n : s["solvers"].get<std::vector<std::string>>())
                    cfg.solvers.push_back(parse_trc_solver(n));
            }
            if (s.contains("setups"))
            {
                cfg.setups.clear();
                for (const auto &n : s["setups"].get<std::vector<std::string>>())
                    cfg.setups.push_back(parse_user_setup(n));
            }
            if (s.contains("grids"))
            {
                cfg.grids.clear();
                for (const auto &g : s["grids"].get<std::vector<std::vector<std::size_t>>>())
                {
                    if (g.size() != 2)
                        throw ConfigError("config: grids are [ny, nz] pairs");
                    cfg.grids.push_back(RisGrid{g[0], g[1]});
                }
            }
        }
        if (root.contains("solver"))
        {
            const json &s = root["solver"];
            reject_unknown(s, "solver", {"epsilon_bcd", "max_iterations", "power_bisection_tol", "pen", "ele"});
            read(s, "epsilon_bcd", cfg.bcd.epsilon_bcd);
            read(s, "max_iterations", cfg.bcd.max_iterations);
            read(s, "power_bisection_tol", cfg.bcd.power_bisection_tol);
            if (s.contains("pen"))
            {
                const json &p = s["pen"];
                reject_unknown(p, "solver.pen",
                               {"mu0_scale", "omega", "epsilon_sca", "epsilon_p", "sdp_tol", "max_inner", "max_outer",
                                "max_sdp_iterations", "max_elements"});
                read(p, "mu0_scale", cfg.bcd.pen.mu0_scale);
                read(p, "omega", cfg.bcd.pen.omega);
                read(p, "epsilon_sca", cfg.bcd.pen.epsilon_sca);
                read(p, "epsilon_p", cfg.bcd.pen.epsilon_p);
                read(p, "sdp_tol", cfg.bcd.pen.sdp_tol);
                read(p, "max_inner", cfg.bcd.pen.max_inner);
                read(p, "max_outer", cfg.bcd.pen.max_outer);
                read(p, "max_sdp_iterations", cfg.bcd.pen.max_sdp_iterations);
                read(p, "max_elements", cfg.bcd.pen.max_elements);
            }
            if (s.contains("ele"))
            {
                const json &e = s["ele"];
                reject_unknown(e, "solver.ele", {"sweeps", "bisection_tol", "rho_min", "refresh_interval"});
                read(e, "sweeps", cfg.bcd.ele.sweeps);
                read(e, "bisection_tol", cfg.bcd.ele.bisection_tol);
                read(e, "rho_min", cfg.bcd.ele.rho_min);
                read(e, "refresh_interval", cfg.bcd.ele.refresh_interval);
            }
        }
        if (root.contains("output"))
        {
            reject_unknown(root["output"], "output", {"traces"});
            read(root["output"], "traces", cfg.write_traces);
        }
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

UserLayout draw_user_layout(const SystemConfig &cfg, UserSetup setup, Rng &rng)
{
    UserLayout layout;
    const std::size_t counts[2] = {cfg.transmit_users, cfg.users - cfg.transmit_users};
    for (int side = 0; side < 2; ++side)
    {
        const double sign = side == 0 ? 1.0 : -1.0;
        double shared = 0.0;
        if (setup == UserSetup::inline_)
            shared = uniform(rng, -0.5 * pi, 0.5 * pi);
        for (std::size_t i = 0; i < counts[side]; ++i)
        {
            double psi = setup == UserSetup::inline_ ? shared : uniform(rng, -0.5 * pi, 0.5 * pi);
            // Keep the user strictly off the surface plane.
            psi = std::clamp(psi, -0.5 * pi + 1e-9, 0.5 * pi - 1e-9);
            const double r = cfg.radii[i % cfg.radii.size()];
            layout.positions.push_back(cfg.ris_reference +
                                       Vec3(sign * r * std::cos(psi), r * std::sin(psi), 0.0) -
                                       Vec3(0.0, 0.0, cfg.ris_reference.z()));
            layout.angles.push_back(psi);
        }
    }
    return layout;
}

Scenario generate_scenario(const SystemConfig &cfg, const RisGrid &grid, UserSetup setup, std::uint64_t seed,
                           double p_dbm)
{
    cfg.validate();
    Scenario sc;
    ScenarioGeometry &geom = sc.geometry;
    geom.bs_position = cfg.bs_position;
    geom.ris_reference = cfg.ris_reference;
    geom.ris_ny = grid.ny;
    geom.ris_nz = grid.nz;
    geom.ris_spacing = cfg.ris_spacing_wl * cfg.wavelength;
    geom.user_antennas = cfg.user_antennas;
    geom.user_spacing = cfg.user_spacing_wl * cfg.wavelength;
    geom.wavelength = cfg.wavelength;

    Rng user_rng(child_seed(seed, {2, std::uint64_t(setup == UserSetup::random ? 0 : 1)}));
    geom.user_positions = draw_user_layout(cfg, setup, user_rng).positions;

    Rng path_rng(child_seed(seed, {1, grid.ny, grid.nz}));
    const double beta =
        pathloss((cfg.ris_reference - cfg.bs_position).norm(), cfg.c0_db, cfg.d0, cfg.pathloss_exponent);
    const FarFieldPathSet paths = draw_farfield_paths(cfg.paths, beta, path_rng);

    sc.channels = build_channels(geom, paths, cfg.bs_antennas);
    sc.noise_power = dbm_to_watt(cfg.noise_dbm);
    sc.power_budget = dbm_to_watt(p_dbm);
    sc.weights = cfg.user_weights();
    sc.validate();
    return sc;
}

std::vector<Cell> enumerate_cells(const SystemConfig &cfg)
{
    std::vector<Cell> cells;
    for (std::uint64_t seed : cfg.seeds)
        for (UserSetup setup : cfg.setups)
            for (const RisGrid &grid : cfg.grids)
                for (BaselineKind scheme : cfg.schemes)
                    for (TrcSolver solver : cfg.solvers)
                        for (double p : cfg.p_dbm)
                        {
                            Cell c;
                            c.index = cells.size();
                            c.seed = seed;
                            c.scheme = scheme;
                            c.solver = solver;
                            c.setup = setup;
                            c.grid = grid;
                            c.p_dbm = p;
                            cells.push_back(c);
                        }
    return cells;
}

CellOutcome run_cell(const SystemConfig &cfg, const Cell &cell)
{
    const auto t0 = std::chrono::steady_clock::now();
    CellOutcome out;
    out.row.cell = cell;
    try
    {
        const Scenario sc = generate_scenario(cfg, cell.grid, cell.setup, cell.seed, cell.p_dbm);
        BcdConfig bcd = cfg.bcd;
        bcd.trc_solver = cell.solver;
        bcd.rng_seed = child_seed(cell.seed, {3, cell.grid.elements()});
        const TrcState init = random_phase_init(cell.grid.elements(), bcd.rng_seed);
        SchemeResult res = run_scheme(cell.scheme, bcd, sc, init);
        out.row.weighted_sum_rate = res.weighted_sum_rate;
        out.row.bcd_iterations = res.bcd.trace.iterations.size();
        out.row.converged = res.bcd.trace.converged;
        out.row.final_trc_violation = res.trc_violation;
        out.trace = std::move(res.bcd.trace);
    }
    catch (const std::exception &e)
    {
        out.row.ok = false;
        out.row.message = e.what();
    }
    out.row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string csv_header()
{
    return "schema_version,cell,seed,scheme,solver,setup,n_elements,p_dbm,weighted_sum_rate,bcd_iterations,"
           "converged,final_trc_violation,status,message,wall_time_s";
}

std::string csv_stable_fields(const ResultRow &row)
{
    const Cell &c = row.cell;
    std::ostringstream os;
    os << csv_schema_version << ',' << c.index << ',' << c.seed << ',' << to_string(c.scheme) << ','
       << to_string(c.solver) << ',' << to_string(c.setup) << ',' << c.grid.elements() << ',' << fmt_double(c.p_dbm)
       << ',' << fmt_double(row.weighted_sum_rate) << ',' << row.bcd_iterations << ',' << (row.converged ? 1 : 0)
       << ',' << fmt_double(row.final_trc_violation) << ',' << (row.ok ? "ok" : "error") << ','
       << csv_quote(row.message);
    return os.str();
}

std::string csv_line(const ResultRow &row)
{
    return csv_stable_fields(row) + ',' + fmt_double(row.wall_seconds);
}

std::string trace_csv_header()
{
    return "iteration,objective_before,objective_after_u,objective_after_z,objective_after_w,objective_after_phi,"
           "weighted_sum_rate,power,coupling_violation,rank_violation,trc_accepted,seconds_u,seconds_z,seconds_w,"
           "seconds_phi,wall_time_s";
}

void write_trace_csv(std::ostream &out, const RunTrace &trace)
{
    out << trace_csv_header() << '\n';
    out << 0 << ',' << fmt_double(trace.initial_objective);
    for (int b = 0; b < 4; ++b)
        out << ',' << fmt_double(trace.initial_objective);
    out << ',' << fmt_double(trace.initial_weighted_sum_rate) << ",,,,,0,0,0,0,0\n";
    for (const IterationRecord &r : trace.iterations)
    {
        out << r.iteration << ',' << fmt_double(r.objective_before);
        for (double v : r.block_objective)
            out << ',' << fmt_double(v);
        out << ',' << fmt_double(r.weighted_sum_rate) << ',' << fmt_double(r.power) << ','
            << fmt_double(r.coupling_violation) << ',' << fmt_double(r.rank_violation) << ','
            << (r.trc_accepted ? 1 : 0);
        for (double s : r.block_seconds)
            out << ',' << fmt_double(s);
        out << ',' << fmt_double(r.wall_seconds) << '\n';
    }
}

void Fnv1a::update(const std::string &bytes)
{
    for (unsigned char c : bytes)
    {
        h_ ^= c;
        h_ *= 0x100000001b3ULL;
    }
}

std::string Fnv1a::hex() const
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
}

ExperimentSummary run_experiment(const SystemConfig &cfg, const ExperimentOptions &opts)
{
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(opts.output_dir);
    const fs::path trace_dir = opts.output_dir / "traces";
    if (cfg.write_traces)
        fs::create_directories(trace_dir);

    const std::vector<Cell> cells = enumerate_cells(cfg);
    ExperimentSummary summary;
    summary.cells = cells.size();
    summary.results_csv = opts.output_dir / "results.csv";

    std::ofstream csv(summary.results_csv);
    if (!csv)
        throw std::runtime_error("cannot write " + summary.results_csv.string());
    csv << csv_header() << '\n';

    std::mutex mtx;
    std::condition_variable ready;
    std::map<std::size_t, CellOutcome> done;
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size())
                return;
            CellOutcome outcome = run_cell(cfg, cells[i]);
            {
                std::lock_guard<std::mutex> lock(mtx);
                done.emplace(i, std::move(outcome));
            }
            ready.notify_one();
        }
    };

    const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back(worker);

    Fnv1a hash;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        CellOutcome outcome;
        {
            std::unique_lock<std::mutex> lock(mtx);
            ready.wait(lock, [&] { return done.count(i) > 0; });
            outcome = std::move(done.at(i));
            done.erase(i);
        }
        const std::string stable = csv_stable_fields(outcome.row);
        hash.update(stable);
        hash.update("\n");
        csv << stable << ',' << fmt_double(outcome.row.wall_seconds) << '\n';
        csv.flush();
        if (!outcome.row.ok)
            ++summary.failures;
        if (cfg.write_traces && outcome.row.ok)
        {
            char name[32];
            std::snprintf(name, sizeof name, "cell_%05zu.csv", i);
            std::ofstream tf(trace_dir / name);
            write_trace_csv(tf, outcome.trace);
        }
        if (!opts.quiet)
            std::fprintf(stderr, "[%zu/%zu] %s %s %s N=%zu P=%g dBm: %s\n", i + 1, cells.size(),
                         to_string(outcome.row.cell.scheme), to_string(outcome.row.cell.solver),
                         to_string(outcome.row.cell.setup), outcome.row.cell.grid.elements(), outcome.row.cell.p_dbm,
                         outcome.row.ok ? fmt_double(outcome.row.weighted_sum_rate).c_str()
                                        : outcome.row.message.c_str());
    }
    for (std::thread &t : pool)
        t.join();

    summary.determinism_hash = hash.hex();
    std::ofstream(opts.output_dir / "determinism_hash.txt") << summary.determinism_hash << '\n';
    return summary;
}

std::string hash_results_csv(const std::filesystem::path &csv)
{
    std::ifstream in(csv);
    if (!in)
        throw std::runtime_error("cannot read " + csv.string());
    std::string line;
    std::getline(in, line); // header
    Fnv1a hash;
    while (std::getline(in, line))
    {
        const auto cut = line.rfind(',');
        hash.update(line.substr(0, cut));
        hash.update("\n");
    }
    return hash.hex();
}

} // namespace starnf
