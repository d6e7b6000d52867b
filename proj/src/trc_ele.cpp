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

#include "starnf/trc_ele.hpp"

#include <cmath>
#include <stdexcept>

namespace starnf
{

ElementCoeffs element_coeffs(std::size_t n, const TrcQuadraticForm &forms, const TrcState &trc)
{
    if (n >= forms.elements())
        throw std::out_of_range("element_coeffs: element index out of range");
    ElementCoeffs out;
    const Eigen::Index idx = static_cast<Eigen::Index>(n);
    for (Side side : {Side::transmit, Side::reflect})
    {
        const std::size_t i = side_index(side);
        const CMatrix &f = forms.f[i];
        const CVector v = trc.coefficients(side);
        out.a[i] = f(idx, idx).real();
        // sum_{q != n} conj(v_q) f_{q,n}
        cplx s = v.dot(f.col(idx)) - std::conj(v(idx)) * f(idx, idx);
        out.b[i] = s - forms.e[i](idx);
        const double full = trc_side_objective(forms, side, v);
        out.c[i] = full - std::norm(v(idx)) * out.a[i] - 2.0 * (out.b[i] * v(idx)).real();
    }
    return out;
}

double optimal_phase(cplx b, double current)
{
    if (b == cplx(0.0, 0.0))
        return current;
    return wrap_phase(pi - std::arg(b));
}

double optimal_amplitude(double a_t, double a_r, double babs_t, double babs_r, double tol, double rho_min)
{
    const double delta = a_t - a_r;
    auto slope = [&](double rho) { return delta - babs_t / std::sqrt(rho) + babs_r / std::sqrt(1.0 - rho); };

    double lo = rho_min;
    double hi = 1.0 - rho_min;
    if (slope(lo) >= 0.0)
        return lo;
    if (slope(hi) <= 0.0)
        return hi;
    const int iterations = static_cast<int>(std::ceil(std::log2(1.0 / tol)));
    for (int it = 0; it < iterations && hi - lo > tol; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

namespace
{

// Running sums s_i(m) = sum_q conj(v_q) f_{q,m}, so that b_i(n) = s_i(n) - conj(v_n) f_nn - e_i(n).
struct RunningSums
{
    std::array<CVector, 2> s;
    std::array<CVector, 2> v;

    void refresh(const TrcQuadraticForm &forms)
    {
        for (std::size_t i = 0; i < 2; ++i)
            s[i] = forms.f[i].transpose() * v[i].conjugate();
    }
};

double element_objective(double a, cplx b, cplx v)
{
    return std::norm(v) * a + 2.0 * (b * v).real();
}

} // namespace

TrcState run_ele(const TrcQuadraticForm &forms, const TrcState &init, const EleConfig &cfg, AmplitudeMode amplitudes)
{
    init.validate();
    const std::size_t n_el = forms.elements();
    if (init.size() != n_el)
        throw std::invalid_argument("run_ele: state size does not match the quadratic model");

    TrcState trc = init;
    RunningSums sums;
    sums.v[0] = trc.coefficients(Side::transmit);
    sums.v[1] = trc.coefficients(Side::reflect);
    sums.refresh(forms);

    std::size_t since_refresh = 0;
    for (std::size_t sweep = 0; sweep < cfg.sweeps; ++sweep)
    {
        for (std::size_t n = 0; n < n_el; ++n)
        {
            const Eigen::Index idx = static_cast<Eigen::Index>(n);
            std::array<double, 2> a{};
            std::array<cplx, 2> b{};
            for (std::size_t i = 0; i < 2; ++i)
            {
                a[i] = forms.f[i](idx, idx).real();
                b[i] = sums.s[i](idx) - std::conj(sums.v[i](idx)) * forms.f[i](idx, idx) - forms.e[i](idx);
            }

            const double theta_t = optimal_phase(b[0], trc.phase_t(idx));
            const double theta_r = optimal_phase(b[1], trc.phase_r(idx));
            double rho_t = trc.amp_t(idx);
            if (amplitudes == AmplitudeMode::free)
                rho_t = optimal_amplitude(a[0], a[1], std::abs(b[0]), std::abs(b[1]), cfg.bisection_tol, cfg.rho_min);

            const std::array<cplx, 2> v_new{std::polar(std::sqrt(rho_t), theta_t),
                                            std::polar(std::sqrt(amplitudes == AmplitudeMode::free
                                                                     ? 1.0 - rho_t
                                                                     : trc.amp_r(idx)),
                                                       theta_r)};

            // The bracket floor can exclude the incoming amplitude; keep the old element if it scores better.
            const double old_score = element_objective(a[0], b[0], sums.v[0](idx)) +
                                     element_objective(a[1], b[1], sums.v[1](idx));
            const double new_score = element_objective(a[0], b[0], v_new[0]) + element_objective(a[1], b[1], v_new[1]);
            if (!(new_score <= old_score))
                continue;

            trc.phase_t(idx) = theta_t;
            trc.phase_r(idx) = theta_r;
            if (amplitudes == AmplitudeMode::free)
            {
                trc.amp_t(idx) = rho_t;
                trc.amp_r(idx) = 1.0 - rho_t;
            }
            for (std::size_t i = 0; i < 2; ++i)
            {
                const cplx delta = v_new[i] - sums.v[i](idx);
                sums.v[i](idx) = v_new[i];
                // s(m) += conj(delta) f_{n,m}
                sums.s[i] += std::conj(delta) * forms.f[i].row(idx).transpose();
            }
            if (++since_refresh >= cfg.refresh_interval)
            {
                sums.refresh(forms);
                since_refresh = 0;
            }
        }
    }
    return trc;
}

} // namespace starnf
