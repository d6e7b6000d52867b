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

#include "starnf/numerics.hpp"

#include <array>
#include <cstddef>

namespace starnf
{

/// Operator-splitting solver for the coupled two-block SDP
///
///   min  <C_t, V_t> + <C_r, V_r>
///   s.t. V_t, V_r PSD (size N+1), V_i(N, N) = 1, V_t(n, n) + V_r(n, n) = 1 for n < N.
///
/// ADMM on the split X (affine set, carries the cost) / Y (PSD cone), with over-relaxation and residual
/// balancing of the step. The affine constraints touch only the diagonal, so the X-projection is closed form.
struct CoupledSdpSettings
{
    double tol = 1e-7;
    std::size_t max_iterations = 5000;
    double relaxation = 1.6;
    double initial_step = 3e-3; // for the cost normalized to unit Frobenius norm
    std::size_t adapt_interval = 0; // 0 keeps the step fixed
};

/// Iterates kept between calls for warm starts. Empty matrices mean a cold start.
struct CoupledSdpState
{
    std::array<CMatrix, 2> x;
    std::array<CMatrix, 2> y;
    std::array<CMatrix, 2> u; // scaled dual
    double step = 0.0;
    double cost_scale = 0.0;

    bool warm() const { return y[0].size() > 0; }

    /// Primal start at `v` with a zero dual.
    void start_from(const std::array<CMatrix, 2> &v);
};

struct CoupledSdpResult
{
    std::array<CMatrix, 2> v; // PSD, diagonal constraints met exactly
    double objective = 0.0;
    std::size_t iterations = 0;
    double primal_residual = 0.0; // ||X - Y|| / max(1, ||X||, ||Y||)
    double dual_residual = 0.0;   // step ||Y - Y_prev|| / max(1, ||dual||)
    double coupling_violation = 0.0; // diagonal constraint violation of the PSD iterate before polishing
    bool converged = false;
};

/// Orthogonal projection onto the affine constraint set (diagonal only).
void project_coupled_affine(std::array<CMatrix, 2> &m);

/// Nearest PSD matrix in Frobenius norm.
CMatrix project_psd(const CMatrix &m);

/// max over diagonal constraints of |violation|.
double coupled_constraint_violation(const std::array<CMatrix, 2> &v);

CoupledSdpResult solve_coupled_sdp(const std::array<CMatrix, 2> &cost, CoupledSdpState &state,
                                   const CoupledSdpSettings &settings);

} // namespace starnf
