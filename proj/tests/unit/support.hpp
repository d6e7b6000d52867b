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

// Random instances shared by the unit tests.

#pragma once

#include "starnf/comm_model.hpp"
#include "starnf/numerics.hpp"

#include <random>

namespace starnf::test
{

inline CMatrix random_matrix(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m(i) = cplx(g(rng), g(rng));
    return m;
}

inline CVector random_vector(std::mt19937_64 &rng, Eigen::Index n, double scale = 1.0)
{
    return random_matrix(rng, n, 1, scale).col(0);
}

inline CMatrix random_hermitian(std::mt19937_64 &rng, Eigen::Index n)
{
    const CMatrix a = random_matrix(rng, n, n);
    return 0.5 * (a + a.adjoint());
}

inline CMatrix random_hpd(std::mt19937_64 &rng, Eigen::Index n)
{
    const CMatrix m = random_matrix(rng, n, n);
    return m.adjoint() * m + CMatrix::Identity(n, n);
}

inline CMatrix random_psd(std::mt19937_64 &rng, Eigen::Index n, Eigen::Index rank)
{
    const CMatrix m = random_matrix(rng, n, rank);
    return m * m.adjoint();
}

inline TrcState random_trc(std::mt19937_64 &rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TrcState s = TrcState::uniform(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto k = static_cast<Eigen::Index>(i);
        s.amp_t(k) = u(rng);
        s.amp_r(k) = 1.0 - s.amp_t(k);
        s.phase_t(k) = 2.0 * pi * u(rng);
        s.phase_r(k) = 2.0 * pi * u(rng);
    }
    return s;
}

} // namespace starnf::test
