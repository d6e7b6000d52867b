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

#include "starnf/comm_model.hpp"

#include <cmath>
#include <stdexcept>

namespace starnf
{

double wrap_phase(double angle)
{
    double a = std::fmod(angle, 2.0 * pi);
    if (a < 0.0)
        a += 2.0 * pi;
    if (a >= 2.0 * pi)
        a = 0.0;
    return a;
}

TrcState TrcState::uniform(std::size_t n, double rho_t)
{
    TrcState s;
    s.amp_t = RVector::Constant(n, rho_t);
    s.amp_r = RVector::Constant(n, 1.0 - rho_t);
    s.phase_t = RVector::Zero(n);
    s.phase_r = RVector::Zero(n);
    return s;
}

CVector TrcState::coefficients(Side s) const
{
    const RVector &rho = amplitudes(s);
    const RVector &theta = phases(s);
    CVector v(rho.size());
    for (Eigen::Index n = 0; n < rho.size(); ++n)
        v(n) = std::polar(std::sqrt(std::max(rho(n), 0.0)), theta(n));
    return v;
}

double TrcState::coupling_violation() const
{
    return ((amp_t + amp_r).array() - 1.0).abs().maxCoeff();
}

void TrcState::validate() const
{
    const auto n = amp_t.size();
    if (n == 0 || amp_r.size() != n || phase_t.size() != n || phase_r.size() != n)
        throw std::invalid_argument("TrcState: inconsistent element counts");
    if (!amp_t.allFinite() || !amp_r.allFinite() || !phase_t.allFinite() || !phase_r.allFinite())
        throw std::invalid_argument("TrcState: non-finite entry");
    if (amp_t.minCoeff() < 0.0 || amp_r.minCoeff() < 0.0 || amp_t.maxCoeff() > 1.0 || amp_r.maxCoeff() > 1.0)
        throw std::invalid_argument("TrcState: amplitude outside [0, 1]");
    if (coupling_violation() > 1e-9)
        throw std::invalid_argument("TrcState: transmission and reflection amplitudes do not sum to one");
}

double BeamformerSet::total_power() const
{
    double p = 0.0;
    for (const CMatrix &wk : w)
        p += wk.squaredNorm();
    return p;
}

void Scenario::validate() const
{
    if (!(noise_power > 0.0))
        throw std::invalid_argument("Scenario: noise power must be positive");
    if (!(power_budget > 0.0))
        throw std::invalid_argument("Scenario: power budget must be positive");
    if (channels.users() == 0 || channels.sides.size() != channels.users())
        throw std::invalid_argument("Scenario: channel set has no users or missing side tags");
    if (weights.size() != channels.users())
        throw std::invalid_argument("Scenario: one weight per user is required");
    for (double w : weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("Scenario: weights must be non-negative");
    for (const CMatrix &h : channels.h)
        if (static_cast<std::size_t>(h.cols()) != channels.elements())
            throw std::invalid_argument("Scenario: user channel does not match the element count");
}

CMatrix effective_channel(const CMatrix &h, const TrcState &trc, const CMatrix &g, Side side)
{
    if (h.cols() != g.rows() || static_cast<std::size_t>(g.rows()) != trc.size())
        throw std::invalid_argument("effective_channel: dimension mismatch");
    const CVector v = trc.coefficients(side);
    CMatrix hv = h;
    for (Eigen::Index n = 0; n < hv.cols(); ++n)
        hv.col(n) *= v(n);
    return hv * g;
}

std::vector<CMatrix> effective_channels(const ChannelSet &channels, const TrcState &trc)
{
    std::vector<CMatrix> out;
    out.reserve(channels.users());
    for (std::size_t k = 0; k < channels.users(); ++k)
        out.push_back(effective_channel(channels.h[k], trc, channels.g, channels.sides[k]));
    return out;
}

CMatrix interference_covariance(std::size_t k, std::span<const CMatrix> heff, const BeamformerSet &ws,
                                double noise_power)
{
    const Eigen::Index m = heff[k].rows();
    CMatrix j = noise_power * CMatrix::Identity(m, m);
    for (std::size_t l = 0; l < ws.w.size(); ++l)
    {
        if (l == k)
            continue;
        const CMatrix t = heff[k] * ws.w[l];
        j.noalias() += t * t.adjoint();
    }
    return hermitian_part(j);
}

double user_rate(std::size_t k, std::span<const CMatrix> heff, const BeamformerSet &ws, double noise_power)
{
    const CMatrix j = interference_covariance(k, heff, ws, noise_power);
    const CMatrix t = heff[k] * ws.w[k];
    const CMatrix total = hermitian_part(j + t * t.adjoint());
    return (logdet_hpd(total) - logdet_hpd(j)) * nats_to_bits;
}

double weighted_sum_rate(std::span<const CMatrix> heff, const BeamformerSet &ws, double noise_power,
                         std::span<const double> weights)
{
    double s = 0.0;
    for (std::size_t k = 0; k < heff.size(); ++k)
        if (weights[k] != 0.0)
            s += weights[k] * user_rate(k, heff, ws, noise_power);
    return s;
}

CMatrix mse_matrix(std::size_t k, std::span<const CMatrix> heff, const BeamformerSet &ws, const CMatrix &u,
                   double noise_power)
{
    const Eigen::Index m = u.cols();
    const CMatrix uh = u.adjoint() * heff[k];
    const CMatrix d = uh * ws.w[k] - CMatrix::Identity(m, m);
    CMatrix e = d * d.adjoint() + noise_power * (u.adjoint() * u);
    for (std::size_t l = 0; l < ws.w.size(); ++l)
    {
        if (l == k)
            continue;
        const CMatrix t = uh * ws.w[l];
        e.noalias() += t * t.adjoint();
    }
    return hermitian_part(e);
}

double surrogate_objective(std::span<const CMatrix> heff, const BeamformerSet &ws, const WmmseState &wmmse,
                           double noise_power, std::span<const double> weights)
{
    double s = 0.0;
    for (std::size_t k = 0; k < heff.size(); ++k)
    {
        const CMatrix e = mse_matrix(k, heff, ws, wmmse.u[k], noise_power);
        const CMatrix &z = wmmse.z[k];
        const double m = double(z.rows());
        s += weights[k] * (logdet_hpd(z) - (z * e).trace().real() + m);
    }
    return s;
}

} // namespace starnf
