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

#include "starnf/sdp_admm.hpp"
#include "starnf/trc_forms.hpp"

#include <array>
#include <vector>

namespace starnf
{

/// Penalty/SCA schedule. `mu0_scale` multiplies max_i ||Fbar_i||_F to give the initial penalty;
/// `epsilon_p` bounds the relative rank gap (||V||_* - ||V||_2) / ||V||_2 of both lifted blocks.
struct PenConfig
{
    double mu0_scale = 1e-3;
    double omega = 10.0;
    double epsilon_sca = 1e-4;
    double epsilon_p = 1e-7;
    double sdp_tol = 1e-7;
    std::size_t max_inner = 50;
    std::size_t max_outer = 10;
    std::size_t max_sdp_iterations = 5000;
    std::size_t max_elements = 64;

    void validate() const;
};

/// Lifted variables V_i = vbar_i vbar_i^H with vbar_i = [v_i; sqrt(t_i)], rho[i] = real(diag(V_i)).
struct AugmentedLift
{
    std::array<CMatrix, 2> v;
    std::array<RVector, 2> rho;
};

/// Rank-one lift of a coefficient state with t_i = 1.
AugmentedLift lift_trc(const TrcState &trc);

/// Fbar_i = [[F_i, -conj(e_i)], [-e_i^T, 0]].
std::array<CMatrix, 2> build_fbar(const TrcQuadraticForm &forms);

/// ||V||_* - ||V||_2 of a Hermitian PSD matrix.
double rank_gap(const CMatrix &v);
double relative_rank_gap(const CMatrix &v);

/// Linearized penalty around v_prev: ||V||_* - ||V_prev||_2 - d^H (V - V_prev) d, d the leading eigenvector of
/// v_prev. `direction` is d.
struct ScaBound
{
    double value = 0.0;
    CVector direction;
};
ScaBound sca_upper_bound(const CMatrix &v, const CMatrix &v_prev);

/// sum_i tr(V_i Fbar_i) + mu (||V_i||_* - ||V_i||_2).
double penalized_objective(const std::array<CMatrix, 2> &fbar, const AugmentedLift &lift, double mu);

struct SdpSubproblemResult
{
    AugmentedLift lift;
    CoupledSdpResult report;
};

/// One convexified step: minimize sum_i tr(V_i Fbar_i) + mu f_SCA(V_i, prev_i) over the lifted feasible set.
SdpSubproblemResult solve_sdp_subproblem(const std::array<CMatrix, 2> &fbar, double mu, const AugmentedLift &prev,
                                         const CoupledSdpSettings &settings, CoupledSdpState &warm);
SdpSubproblemResult solve_sdp_subproblem(const std::array<CMatrix, 2> &fbar, double mu, const AugmentedLift &prev,
                                         double sdp_tol);

/// Leading-eigenpair extraction: vbar = sqrt(lambda_1) q_1 normalized so the trailing entry is 1, transmission
/// amplitudes clamped to [0, 1] and the reflection amplitudes set to the complement.
TrcState extract_trc(const AugmentedLift &lift, const TrcState &fallback);

struct PenResult
{
    TrcState trc;
    double violation = 0.0; // relative rank gap at exit
    bool converged = false; // violation <= epsilon_p within the outer cap
    bool sdp_converged = true; // every inner SDP met its tolerance
    std::size_t outer_iterations = 0;
    std::size_t inner_iterations = 0;
    std::size_t sdp_iterations = 0;
    std::vector<double> violation_history;  // one per outer iteration
    std::vector<double> penalized_history;  // one per inner iteration, value at the current penalty
    std::vector<std::size_t> outer_of_inner; // outer index of each penalized_history entry
};

/// `solver_state`, when given, seeds the embedded SDP solver and receives its final iterates, so consecutive
/// calls on slowly changing models start close to their solution.
PenResult run_pen(const TrcQuadraticForm &forms, const PenConfig &cfg, const TrcState &init,
                  CoupledSdpState *solver_state = nullptr);

} // namespace starnf
