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

#pragma once

#include "starnf/baselines.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace starnf
{

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

enum class UserSetup
{
    random,
    inline_
};

const char *to_string(UserSetup s);
UserSetup parse_user_setup(const std::string &name);

struct RisGrid
{
    std::size_t ny = 5;
    std::size_t nz = 8;
    std::size_t elements() const { return ny * nz; }
};

/// Physical parameters, sweep selections and solver settings of one experiment.
///
/// Lengths in meters, powers in dBm, gains in dB. Spacings are given in wavelengths. See
/// `configs/default.json` for the file layout.
struct SystemConfig
{
    double wavelength = 0.03;
    std::size_t bs_antennas = 16;
    std::size_t user_antennas = 4;
    std::size_t users = 4;
    std::size_t transmit_users = 2;
    double ris_spacing_wl = 1.0;
    double user_spacing_wl = 0.5;
    double noise_dbm = -110.0;
    double c0_db = -30.0;
    double d0 = 1.0;
    double pathloss_exponent = 2.2;
    std::size_t paths = 16;
    std::vector<double> radii{2.0, 4.0};
    Vec3 ris_reference{0.0, 50.0, 0.0};
    Vec3 bs_position{0.0, 0.0, 0.0};
    std::vector<double> weights; // empty means all ones

    std::vector<double> p_dbm{20.0, 25.0, 30.0, 35.0, 40.0};
    std::vector<std::uint64_t> seeds{1};
    std::vector<BaselineKind> schemes{BaselineKind::proposed};
    std::vector<TrcSolver> solvers{TrcSolver::ele};
    std::vector<UserSetup> setups{UserSetup::random};
    std::vector<RisGrid> grids{RisGrid{}};

    BcdConfig bcd;
    bool write_traces = true;

    void validate() const;
    std::vector<double> user_weights() const;
};

SystemConfig parse_config(const std::string &json_text);
SystemConfig load_config(const std::filesystem::path &path);

/// User positions in the XY-plane on circles around the surface reference, with the angle each was placed at.
struct UserLayout
{
    std::vector<Vec3> positions;
    std::vector<double> angles;
};

/// Transmission-side users come first (x > 0), then reflection-side users (x < 0). Within each side the radii
/// cycle through `cfg.radii`. Angles are uniform on (-pi/2, pi/2); the inline setup draws one per side.
UserLayout draw_user_layout(const SystemConfig &cfg, UserSetup setup, Rng &rng);

/// Deterministic in (cfg, grid, setup, seed); the transmit power only sets the budget.
Scenario generate_scenario(const SystemConfig &cfg, const RisGrid &grid, UserSetup setup, std::uint64_t seed,
                           double p_dbm);

inline constexpr int csv_schema_version = 1;

struct Cell
{
    std::size_t index = 0;
    std::uint64_t seed = 0;
    BaselineKind scheme = BaselineKind::proposed;
    TrcSolver solver = TrcSolver::ele;
    UserSetup setup = UserSetup::random;
    RisGrid grid;
    double p_dbm = 0.0;
};

/// Cells in the order seed, setup, grid, scheme, solver, power (last varies fastest).
std::vector<Cell> enumerate_cells(const SystemConfig &cfg);

struct ResultRow
{
    Cell cell;
    double weighted_sum_rate = 0.0;
    std::size_t bcd_iterations = 0;
    bool converged = false;
    double final_trc_violation = 0.0;
    bool ok = true;
    std::string message;
    double wall_seconds = 0.0;
};

struct CellOutcome
{
    ResultRow row;
    RunTrace trace;
};

/// Runs one cell. Failures are reported through `row.ok` and `row.message`, never thrown.
CellOutcome run_cell(const SystemConfig &cfg, const Cell &cell);

std::string csv_header();
/// Non-timing columns only; the determinism hash is computed over these.
std::string csv_stable_fields(const ResultRow &row);
std::string csv_line(const ResultRow &row);

std::string trace_csv_header();
void write_trace_csv(std::ostream &out, const RunTrace &trace);

/// Incremental 64-bit FNV-1a.
class Fnv1a
{
public:
    void update(const std::string &bytes);
    std::uint64_t value() const { return h_; }
    std::string hex() const;

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct ExperimentOptions
{
    std::filesystem::path output_dir = "results";
    std::size_t jobs = 1;
    bool quiet = true;
};

struct ExperimentSummary
{
    std::size_t cells = 0;
    std::size_t failures = 0;
    std::string determinism_hash;
    std::filesystem::path results_csv;
};

/// Runs every cell on a pool of `jobs` workers and writes `results.csv` in cell order, one trace file per cell
/// under `traces/` and the hash to `determinism_hash.txt`.
ExperimentSummary run_experiment(const SystemConfig &cfg, const ExperimentOptions &opts);

/// Hash of the stable columns of an existing results file (header excluded).
std::string hash_results_csv(const std::filesystem::path &csv);

} // namespace starnf
