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

#include "starnf/trc_forms.hpp"

#include <array>

namespace starnf
{

/// Single-element view of the quadratic model: g_i = |v_n|^2 a_i + 2 Re(b_i v_n) + c_i with the other
/// elements held fixed.
struct ElementCoeffs
{
    std::array<double, 2> a{};
    std::array<cplx, 2> b{};
    std::array<double, 2> c{};
};

struct EleConfig
{
    std::size_t sweeps = 1;
    double bisection_tol = 1e-9;
    double rho_min = 1e-6;
    std::size_t refresh_interval = 64; // full recompute of the running sums after this many updates
};

ElementCoeffs element_coeffs(std::size_t n, const TrcQuadraticForm &forms, const TrcState &trc);

/// theta minimizing Re(b exp(j theta)); returns `current` when b == 0.
double optimal_phase(cplx b, double current = 0.0);

/// Transmission amplitude in [rho_min, 1 - rho_min] minimizing
/// (a_t - a_r) rho - 2 sqrt(rho) |b_t| - 2 sqrt(1 - rho) |b_r|.
double optimal_amplitude(double a_t, double a_r, double babs_t, double babs_r, double tol, double rho_min = 1e-6);

/// Cyclic element-by-element minimization of the quadratic model, elements in order 0..N-1.
TrcState run_ele(const TrcQuadraticForm &forms, const TrcState &init, const EleConfig &cfg,
                 AmplitudeMode amplitudes = AmplitudeMode::free);

} // namespace starnf
