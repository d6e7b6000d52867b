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

#include "starnf/trc_pen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starnf
{

void PenConfig::validate() const
{
    if (!(mu0_scale > 0.0) || !(omega > 1.0) || !(epsilon_sca > 0.0) || !(epsilon_p > 0.0) || !(sdp_tol > 0.0))
        throw std::invalid_argument("PenConfig: tolerances and penalty must be positive, omega > 1");
    if (max_inner == 0 || max_outer == 0 || max_sdp_iterations == 0)
        throw std::invalid_argument("PenConfig: iteration caps must be positive");
}

AugmentedLift lift_trc(const TrcState &trc)
{
    AugmentedLift lift;
    const Eigen::Index n = static_cast<Eigen::Index>(trc.size());
    for (Side side : {Side::transmit, Side::reflect})
    {
        const std::size_t i = side_index(side);
        CVector vbar(n + 1);
        vbar.head(n) = trc.coefficients(side);
        vbar(n) = 1.0;
        lift.v[i] = vbar * vbar.adjoint();
        lift.rho[i] = lift.v[i].diagonal().real();
    }
    return lift;
}

std::array<CMatrix, 2> build_fbar(const TrcQuadraticForm &forms)
{
    const Eigen::Index n = static_cast<Eigen::Index>(forms.elements());
    std::array<CMatrix, 2> fbar;
    for (std::size_t i = 0; i < 2; ++i)
    {
        fbar[i] = CMatrix::Zero(n + 1, n + 1);
        fbar[i].topLeftCorner(n, n) = forms.f[i];
        fbar[i].topRightCorner(n, 1) = -forms.e[i].conjugate();
        fbar[i].bottomLeftCorner(1, n) = -forms.e[i].transpose();
    }
    return fbar;
}

double rank_gap(const CMatrix &v)
{
    const auto [nuclear, spectral] = nuclear_and_spectral_norms(v);
    return std::max(nuclear - spectral, 0.0);
}

double relative_rank_gap(const CMatrix &v)
{
    const auto [nuclear, spectral] = nuclear_and_spectral_norms(v);
    if (!(spectral > 0.0))
        return 0.0;
    return std::max(nuclear - spectral, 0.0) / spectral;
}

ScaBound sca_upper_bound(const CMatrix &v, const CMatrix &v_prev)
{
    const HermitianEig eig_prev = hermitian_eig(v_prev, Symmetrize::yes);
    ScaBound out;
    out.direction = eig_prev.eigenvectors.col(0);
    const double nuclear = hermitian_eig(v, Symmetrize::yes).eigenvalues.cwiseAbs().sum();
    const cplx lin = out.direction.dot((v - v_prev) * out.direction);
    out.value = nuclear - eig_prev.eigenvalues(0) - lin.real();
    return out;
}

double penalized_objective(const std::array<CMatrix, 2> &fbar, const AugmentedLift &lift, double mu)
{
    double s = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        s += (fbar[i] * lift.v[i]).trace().real() + mu * rank_gap(lift.v[i]);
    return s;
}

SdpSubproblemResult solve_sdp_subproblem(const std::array<CMatrix, 2> &fbar, double mu, const AugmentedLift &prev,
                                         const CoupledSdpSettings &settings, CoupledSdpState &warm)
{
    const Eigen::Index dim = fbar[0].rows();
    std::array<CMatrix, 2> cost;
    for (std::size_t i = 0; i < 2; ++i)
    {
        // For PSD V, ||V||_* = tr V, so the linearized penalty is linear in V.
        const CVector d = hermitian_eig(prev.v[i], Symmetrize::yes).eigenvectors.col(0);
        cost[i] = hermitian_part(fbar[i]) + mu * (CMatrix::Identity(dim, dim) - d * d.adjoint());
    }

    SdpSubproblemResult out;
    out.report = solve_coupled_sdp(cost, warm, settings);
    out.lift.v = out.report.v;
    for (std::size_t i = 0; i < 2; ++i)
        out.lift.rho[i] = out.lift.v[i].diagonal().real();
    return out;
}

SdpSubproblemResult solve_sdp_subproblem(const std::array<CMatrix, 2> &fbar, double mu, const AugmentedLift &prev,
                                         double sdp_tol)
{
    CoupledSdpSettings settings;
    settings.tol = sdp_tol;
    CoupledSdpState warm;
    return solve_sdp_subproblem(fbar, mu, prev, settings, warm);
}

TrcState extract_trc(const AugmentedLift &lift, const TrcState &fallback)
{
    const Eigen::Index dim = lift.v[0].rows();
    const Eigen::Index n = dim - 1;
    std::array<CVector, 2> v;
    for (std::size_t i = 0; i < 2; ++i)
    {
        const HermitianEig eig = hermitian_eig(lift.v[i], Symmetrize::yes);
        CVector vbar = std::sqrt(std::max(eig.eigenvalues(0), 0.0)) * eig.eigenvectors.col(0);
        const cplx last = vbar(n);
        if (!(std::abs(last) > 1e-12))
            return fallback;
        // Rotating by the phase of the trailing entry and rescaling it to one.
        v[i] = vbar.head(n) / last;
    }

    TrcState out = fallback;
    for (Eigen::Index j = 0; j < n; ++j)
    {
        const double rho_t = std::clamp(std::norm(v[0](j)), 0.0, 1.0);
        out.amp_t(j) = rho_t;
        out.amp_r(j) = 1.0 - rho_t;
        if (std::abs(v[0](j)) > 0.0)
            out.phase_t(j) = wrap_phase(std::arg(v[0](j)));
        if (std::abs(v[1](j)) > 0.0)
            out.phase_r(j) = wrap_phase(std::arg(v[1](j)));
    }
    return out;
}

PenResult run_pen(const TrcQuadraticForm &forms, const PenConfig &cfg, const TrcState &init,
                  CoupledSdpState *solver_state)
{
    cfg.validate();
    init.validate();
    if (init.size() != forms.elements())
        throw std::invalid_argument("run_pen: state size does not match the quadratic model");

    const std::array<CMatrix, 2> fbar = build_fbar(forms);
    double mu = cfg.mu0_scale * std::max(fbar[0].norm(), fbar[1].norm());
    if (!(mu > 0.0))
        mu = cfg.mu0_scale;

    CoupledSdpSettings settings;
    settings.tol = cfg.sdp_tol;
    settings.max_iterations = cfg.max_sdp_iterations;
    CoupledSdpState local;
    CoupledSdpState &warm = solver_state ? *solver_state : local;

    PenResult res;
    AugmentedLift lift = lift_trc(init);
    double violation = std::max(relative_rank_gap(lift.v[0]), relative_rank_gap(lift.v[1]));

    for (std::size_t outer = 0; outer < cfg.max_outer; ++outer)
    {
        double g_prev = penalized_objective(fbar, lift, mu);
        for (std::size_t inner = 0; inner < cfg.max_inner; ++inner)
        {
            SdpSubproblemResult step = solve_sdp_subproblem(fbar, mu, lift, settings, warm);
            res.sdp_iterations += step.report.iterations;
            res.sdp_converged = res.sdp_converged && step.report.converged;
            ++res.inner_iterations;

            lift = std::move(step.lift);
            const double g = penalized_objective(fbar, lift, mu);
            res.penalized_history.push_back(g);
            res.outer_of_inner.push_back(outer);
            const double decrease = (g_prev - g) / std::max(std::abs(g_prev), 1e-300);
            g_prev = g;
            if (decrease < cfg.epsilon_sca)
                break;
        }
        ++res.outer_iterations;
        violation = std::max(relative_rank_gap(lift.v[0]), relative_rank_gap(lift.v[1]));
        res.violation_history.push_back(violation);
        if (violation <= cfg.epsilon_p)
        {
            res.converged = true;
            break;
        }
        mu *= cfg.omega;
    }

    res.violation = violation;
    res.trc = extract_trc(lift, init);
    return res;
}

} // namespace starnf
