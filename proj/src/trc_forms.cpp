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

#include "starnf/trc_forms.hpp"

namespace starnf
{

TrcQuadraticForm build_trc_forms(const ChannelSet &channels, const BeamformerSet &ws, const WmmseState &wmmse,
                                 std::span<const double> weights)
{
    const Eigen::Index n = static_cast<Eigen::Index>(channels.elements());
    const Eigen::Index mb = static_cast<Eigen::Index>(channels.bs_antennas());

    CMatrix s = CMatrix::Zero(mb, mb);
    for (const CMatrix &w : ws.w)
        s.noalias() += w * w.adjoint();
    const CMatrix d = hermitian_part(channels.g * s * channels.g.adjoint());
    const CMatrix d_t = d.transpose();

    TrcQuadraticForm forms;
    for (std::size_t i = 0; i < 2; ++i)
    {
        forms.f[i] = CMatrix::Zero(n, n);
        forms.e[i] = CVector::Zero(n);
    }

    for (std::size_t k = 0; k < channels.users(); ++k)
    {
        const std::size_t i = side_index(channels.sides[k]);
        const CMatrix &h = channels.h[k];
        const CMatrix &u = wmmse.u[k];
        const CMatrix &z = wmmse.z[k];

        const CMatrix uh = u.adjoint() * h; // M x N
        const CMatrix c = weights[k] * (uh.adjoint() * z * uh);
        forms.f[i].array() += c.array() * d_t.array();

        // diag(G W Z U^H H): row n of G W times column n of Z U^H H.
        const CMatrix left = channels.g * ws.w[k];  // N x M
        const CMatrix right = z * uh;               // M x N
        forms.e[i] += weights[k] * (left.array() * right.transpose().array()).rowwise().sum().matrix();
    }
    for (std::size_t i = 0; i < 2; ++i)
        forms.f[i] = hermitian_part(forms.f[i]);
    return forms;
}

double trc_side_objective(const TrcQuadraticForm &forms, Side side, const CVector &v)
{
    const std::size_t i = side_index(side);
    const cplx quad = v.dot(forms.f[i] * v); // v^H F v
    const cplx lin = (forms.e[i].transpose() * v)(0);
    return quad.real() - 2.0 * lin.real();
}

double trc_objective(const TrcQuadraticForm &forms, const TrcState &trc)
{
    return trc_side_objective(forms, Side::transmit, trc.coefficients(Side::transmit)) +
           trc_side_objective(forms, Side::reflect, trc.coefficients(Side::reflect));
}

} // namespace starnf
