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

#include "starnf/sdp_admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starnf
{

namespace
{

double frob(const std::array<CMatrix, 2> &m)
{
    return std::sqrt(m[0].squaredNorm() + m[1].squaredNorm());
}

double frob_diff(const std::array<CMatrix, 2> &a, const std::array<CMatrix, 2> &b)
{
    return std::sqrt((a[0] - b[0]).squaredNorm() + (a[1] - b[1]).squaredNorm());
}

// Rescales rows/columns so the diagonal lands on the constraint set; keeps PSD-ness.
void polish_diagonal(std::array<CMatrix, 2> &v)
{
    const Eigen::Index dim = v[0].rows();
    const Eigen::Index n = dim - 1;
    std::array<RVector, 2> target{RVector(dim), RVector(dim)};
    for (Eigen::Index j = 0; j < n; ++j)
    {
        const double a = std::max(v[0](j, j).real(), 0.0);
        const double b = std::max(v[1](j, j).real(), 0.0);
        double ta = 0.5;
        if (a + b > 0.0)
            ta = std::clamp(a / (a + b), 0.0, 1.0);
        target[0](j) = ta;
        target[1](j) = 1.0 - ta;
    }
    target[0](n) = 1.0;
    target[1](n) = 1.0;

    for (std::size_t i = 0; i < 2; ++i)
    {
        RVector scale(dim);
        for (Eigen::Index j = 0; j < dim; ++j)
        {
            const double actual = v[i](j, j).real();
            scale(j) = actual > 0.0 ? std::sqrt(target[i](j) / actual) : 0.0;
        }
        v[i] = scale.asDiagonal() * v[i] * scale.asDiagonal();
        for (Eigen::Index j = 0; j < dim; ++j)
            v[i](j, j) = target[i](j);
        v[i] = hermitian_part(v[i]);
    }
}

} // namespace

void project_coupled_affine(std::array<CMatrix, 2> &m)
{
    const Eigen::Index n = m[0].rows() - 1;
    for (Eigen::Index j = 0; j < n; ++j)
    {
        const double a = m[0](j, j).real();
        const double b = m[1](j, j).real();
        const double shift = 0.5 * (a + b - 1.0);
        m[0](j, j) = a - shift;
        m[1](j, j) = b - shift;
    }
    m[0](n, n) = 1.0;
    m[1](n, n) = 1.0;
}

CMatrix project_psd(const CMatrix &m)
{
    const HermitianEig eig = hermitian_eig_above(m, 0.0, Symmetrize::yes);
    const Eigen::Index keep = eig.eigenvalues.size();
    if (keep == 0)
        return CMatrix::Zero(m.rows(), m.cols());
    CMatrix out = eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.adjoint();
    return hermitian_part(out);
}

double coupled_constraint_violation(const std::array<CMatrix, 2> &v)
{
    const Eigen::Index n = v[0].rows() - 1;
    double worst = std::max(std::abs(v[0](n, n).real() - 1.0), std::abs(v[1](n, n).real() - 1.0));
    for (Eigen::Index j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(v[0](j, j).real() + v[1](j, j).real() - 1.0));
    return worst;
}

void CoupledSdpState::start_from(const std::array<CMatrix, 2> &v)
{
    x = v;
    y = v;
    for (std::size_t i = 0; i < 2; ++i)
        u[i] = CMatrix::Zero(v[i].rows(), v[i].cols());
    step = 0.0;
    cost_scale = 0.0;
}

CoupledSdpResult solve_coupled_sdp(const std::array<CMatrix, 2> &cost, CoupledSdpState &state,
                                   const CoupledSdpSettings &settings)
{
    const Eigen::Index dim = cost[0].rows();
    if (dim < 2 || cost[0].cols() != dim || cost[1].rows() != dim || cost[1].cols() != dim)
        throw NumericsError("solve_coupled_sdp: cost blocks must be square, equal-sized and at least 2x2");

    double scale = std::max(cost[0].norm(), cost[1].norm());
    if (!(scale > 0.0))
        scale = 1.0;
    const std::array<CMatrix, 2> c{hermitian_part(cost[0]) / scale, hermitian_part(cost[1]) / scale};

    if (!state.warm() || state.y[0].rows() != dim)
    {
        for (std::size_t i = 0; i < 2; ++i)
        {
            state.y[i] = CMatrix::Zero(dim, dim);
            state.y[i].diagonal().setConstant(0.5);
            state.u[i] = CMatrix::Zero(dim, dim);
        }
        project_coupled_affine(state.y);
        state.x = state.y;
        state.step = settings.initial_step;
    }
    else if (state.cost_scale > 0.0)
    {
        // Keep the unscaled dual variable continuous across a change of cost normalization.
        const double ratio = state.cost_scale / scale;
        state.u[0] *= ratio;
        state.u[1] *= ratio;
    }
    state.cost_scale = scale;
    if (!(state.step > 0.0))
        state.step = settings.initial_step;


    CoupledSdpResult res;
    std::array<CMatrix, 2> y_prev;
    std::array<CMatrix, 2> x_hat;
    const double alpha = settings.relaxation;

    for (std::size_t it = 1; it <= settings.max_iterations; ++it)
    {
        for (std::size_t i = 0; i < 2; ++i)
            state.x[i] = state.y[i] - state.u[i] - c[i] / state.step;
        project_coupled_affine(state.x);

        y_prev = state.y;
        for (std::size_t i = 0; i < 2; ++i)
        {
            x_hat[i] = alpha * state.x[i] + (1.0 - alpha) * y_prev[i];
            state.y[i] = project_psd(x_hat[i] + state.u[i]);
            state.u[i] += x_hat[i] - state.y[i];
        }

        const double r = frob_diff(state.x, state.y);
        const double s = state.step * frob_diff(state.y, y_prev);
        const double eps_pri = settings.tol * std::max({1.0, frob(state.x), frob(state.y)});
        const double eps_dual = settings.tol * std::max(1.0, state.step * frob(state.u));
        res.iterations = it;
        res.primal_residual = r / std::max({1.0, frob(state.x), frob(state.y)});
        res.dual_residual = s / std::max(1.0, state.step * frob(state.u));

        if (r <= eps_pri && s <= eps_dual)
        {
            res.coupling_violation = coupled_constraint_violation(state.y);
            if (res.coupling_violation <= settings.tol)
            {
                res.converged = true;
                break;
            }
        }

        if (settings.adapt_interval > 0 && it % settings.adapt_interval == 0)
        {
            const double rp = r / eps_pri;
            const double rd = s / eps_dual;
            if (rp > 10.0 * rd)
            {
                state.step *= 2.0;
                state.u[0] /= 2.0;
                state.u[1] /= 2.0;
            }
            else if (rd > 10.0 * rp)
            {
                state.step /= 2.0;
                state.u[0] *= 2.0;
                state.u[1] *= 2.0;
            }
        }
    }
    if (!res.converged)
        res.coupling_violation = coupled_constraint_violation(state.y);

    res.v = state.y;
    polish_diagonal(res.v);
    res.objective = (cost[0] * res.v[0]).trace().real() + (cost[1] * res.v[1]).trace().real();
    return res;
}

} // namespace starnf
