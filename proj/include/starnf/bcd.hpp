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

#include "starnf/comm_model.hpp"
#include "starnf/trc_ele.hpp"
#include "starnf/trc_forms.hpp"
#include "starnf/trc_pen.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace starnf
{

enum class TrcSolver
{
    pen,
    ele,
    fixed
};

const char *to_string(TrcSolver s);
TrcSolver parse_trc_solver(const std::string &name);

struct BcdConfig
{
    double epsilon_bcd = 1e-4;
    std::size_t max_iterations = 200;
    TrcSolver trc_solver = TrcSolver::ele;
    double power_bisection_tol = 1e-9;
    std::uint64_t rng_seed = 1;
    AmplitudeMode amplitudes = AmplitudeMode::free;
    PenConfig pen;
    EleConfig ele;

    void validate() const;
};

/// Failure inside one BCD iteration; the message carries the iteration index.
class BcdError : public std::runtime_error
{
public:
    BcdError(std::size_t iteration, const std::string &what);
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

enum class Block : std::size_t
{
    combiners = 0,
    weights = 1,
    beamformers = 2,
    coefficients = 3
};

struct IterationRecord
{
    std::size_t iteration = 0;
    double objective_before = 0.0;          // surrogate entering the iteration (nats)
    std::array<double, 4> block_objective{}; // surrogate after U, Z, W, Phi (nats)
    std::array<double, 4> block_seconds{};
    double weighted_sum_rate = 0.0; // bits/s/Hz at the end of the iteration
    double power = 0.0;
    double coupling_violation = 0.0;
    double rank_violation = 0.0; // PEN relative rank gap, 0 for other solvers
    bool trc_accepted = true;
    double wall_seconds = 0.0;
};

struct RunTrace
{
    double initial_objective = 0.0;
    double initial_weighted_sum_rate = 0.0;
    std::vector<IterationRecord> iterations;
    bool converged = false;

    /// Smallest per-block change of the surrogate relative to max(|before|, 1e-12), over every recorded block.
    double min_relative_block_change() const;
    double total_seconds() const;
};

struct BcdResult
{
    BeamformerSet beamformers;
    TrcState trc;
    WmmseState wmmse;
    RunTrace trace;
    double weighted_sum_rate = 0.0; // bits/s/Hz of the returned (W, Phi)
};

/// MMSE combiners U_k = (sum_l Hbar_k W_l W_l^H Hbar_k^H + sigma^2 I)^(-1) Hbar_k W_k.
std::vector<CMatrix> update_combiners(std::span<const CMatrix> heff, const BeamformerSet &ws, double noise_power);

/// Z_k = E_k^(-1), with a 1e-12 tr(E)/M ridge when E_k is numerically singular.
std::vector<CMatrix> update_weights(std::span<const CMatrix> mse);

/// A = sum_l eta_l Hbar_l^H U_l Z_l U_l^H Hbar_l.
CMatrix beamformer_quadratic(std::span<const CMatrix> heff, const WmmseState &wmmse, std::span<const double> weights);

/// B_k = eta_k Z_k U_k^H Hbar_k.
std::vector<CMatrix> beamformer_linear(std::span<const CMatrix> heff, const WmmseState &wmmse,
                                       std::span<const double> weights);

/// sum_k tr(W_k^H A W_k) - 2 Re tr(B_k W_k).
double beamformer_objective(const CMatrix &a, std::span<const CMatrix> b, const BeamformerSet &ws);

struct BeamformerUpdate
{
    BeamformerSet beamformers;
    double multiplier = 0.0; // lambda
    double power = 0.0;
};

/// Power map p(lambda) = sum_k ||(A + lambda I)^+ B_k^H||_F^2 evaluated in A's eigenbasis.
class PowerMap
{
public:
    PowerMap(const CMatrix &a, std::span<const CMatrix> b);
    double operator()(double lambda) const;
    /// True when B has energy in A's null space, so p(lambda) -> infinity as lambda -> 0+.
    bool singular_at_zero() const { return singular_; }
    BeamformerSet beamformers(double lambda) const;
    double upper_bracket(double power) const;

private:
    HermitianEig eig_;
    std::vector<CMatrix> t_; // Q^H B_k^H
    RVector row_energy_;
    double null_threshold_ = 0.0;
    bool singular_ = false;
    double b_energy_ = 0.0;
};

BeamformerUpdate update_beamformers(const CMatrix &a, std::span<const CMatrix> b, double power, double tol);

/// Matched filters Hbar_k^H scaled to use the whole budget.
BeamformerSet matched_filter_init(std::span<const CMatrix> heff, double power);

/// Amplitudes 1/2 and phases uniform on [0, 2 pi).
TrcState random_phase_init(std::size_t elements, std::uint64_t seed);

/// Runs the cyclic U, Z, W, Phi updates from the given initial coefficients.
BcdResult run_bcd(const BcdConfig &config, const Scenario &scenario, const TrcState &initial_trc);

/// Same, starting from random_phase_init(N, config.rng_seed).
BcdResult run_bcd(const BcdConfig &config, const Scenario &scenario);

} // namespace starnf
