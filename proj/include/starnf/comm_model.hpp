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

#include "starnf/geometry.hpp"
#include "starnf/numerics.hpp"

#include <span>
#include <vector>

namespace starnf
{

inline constexpr double nats_to_bits = 1.4426950408889634; // 1 / ln 2

/// Wraps an angle into [0, 2 pi).
double wrap_phase(double angle);

/// Per-element amplitudes and phases of the two coefficient matrices (energy splitting).
struct TrcState
{
    RVector amp_t;
    RVector amp_r;
    RVector phase_t;
    RVector phase_r;

    std::size_t size() const { return static_cast<std::size_t>(amp_t.size()); }

    /// All elements at amplitude (rho_t, 1 - rho_t) with zero phases.
    static TrcState uniform(std::size_t n, double rho_t = 0.5);

    const RVector &amplitudes(Side s) const { return s == Side::transmit ? amp_t : amp_r; }
    const RVector &phases(Side s) const { return s == Side::transmit ? phase_t : phase_r; }
    RVector &amplitudes(Side s) { return s == Side::transmit ? amp_t : amp_r; }
    RVector &phases(Side s) { return s == Side::transmit ? phase_t : phase_r; }

    /// Diagonal of the coefficient matrix of side `s`: sqrt(rho_n) exp(j theta_n).
    CVector coefficients(Side s) const;

    /// max_n |rho_t + rho_r - 1|.
    double coupling_violation() const;

    /// Throws std::invalid_argument unless amplitudes lie in [0, 1] and split energy within 1e-9.
    void validate() const;
};

/// Whether the amplitude split of the surface is optimized or held at its initial value.
enum class AmplitudeMode
{
    free,
    frozen
};

struct BeamformerSet
{
    std::vector<CMatrix> w; // per user, M_b x M

    double total_power() const;
};

struct WmmseState
{
    std::vector<CMatrix> u; // combiners, M x M
    std::vector<CMatrix> z; // auxiliary weights, M x M
    std::vector<CMatrix> e; // MSE matrices, M x M
};

/// Everything a single optimization run needs about the link.
struct Scenario
{
    ScenarioGeometry geometry;
    ChannelSet channels;
    double noise_power = 1e-14;
    double power_budget = 1.0;
    std::vector<double> weights;

    std::size_t users() const { return channels.users(); }
    void validate() const;
};

/// H_k diag(v_side) G, an M x M_b matrix.
CMatrix effective_channel(const CMatrix &h, const TrcState &trc, const CMatrix &g, Side side);

std::vector<CMatrix> effective_channels(const ChannelSet &channels, const TrcState &trc);

/// J_k = sum_{l != k} Hbar_k W_l W_l^H Hbar_k^H + sigma^2 I.
CMatrix interference_covariance(std::size_t k, std::span<const CMatrix> heff, const BeamformerSet &ws,
                                double noise_power);

/// Achievable rate of user k in bits/s/Hz.
double user_rate(std::size_t k, std::span<const CMatrix> heff, const BeamformerSet &ws, double noise_power);

/// sum_k eta_k R_k in bits/s/Hz.
double weighted_sum_rate(std::span<const CMatrix> heff, const BeamformerSet &ws, double noise_power,
                         std::span<const double> weights);

/// E_k for combiner U_k.
CMatrix mse_matrix(std::size_t k, std::span<const CMatrix> heff, const BeamformerSet &ws, const CMatrix &u,
                   double noise_power);

/// sum_k eta_k (ln det Z_k - tr(Z_k E_k) + M), natural log. E_k is recomputed from the combiners.
double surrogate_objective(std::span<const CMatrix> heff, const BeamformerSet &ws, const WmmseState &wmmse,
                           double noise_power, std::span<const double> weights);

} // namespace starnf
