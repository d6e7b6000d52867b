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

#include <array>

namespace starnf
{

/// Quadratic model of the surrogate in the coefficient vectors, per side:
/// g_i(v) = v^H F_i v - 2 Re(e_i^T v), minimized jointly over both sides.
struct TrcQuadraticForm
{
    std::array<CMatrix, 2> f; // indexed by side_index
    std::array<CVector, 2> e;

    std::size_t elements() const { return static_cast<std::size_t>(f[0].rows()); }
};

/// Builds F_i = sum_{k in K_i} C_k (.) D^T and e_i = sum_{k in K_i} diag(LinCoeff_k) with
///   C_k = eta_k H_k^H U_k Z_k U_k^H H_k,
///   D = G (sum_l W_l W_l^H) G^H,
///   LinCoeff_k = eta_k G W_k Z_k U_k^H H_k.
TrcQuadraticForm build_trc_forms(const ChannelSet &channels, const BeamformerSet &ws, const WmmseState &wmmse,
                                 std::span<const double> weights);

double trc_side_objective(const TrcQuadraticForm &forms, Side side, const CVector &v);

double trc_objective(const TrcQuadraticForm &forms, const TrcState &trc);

} // namespace starnf
