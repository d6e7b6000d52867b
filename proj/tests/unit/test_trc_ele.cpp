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

#include "oracles.hpp"
#include "support.hpp"

#include "starnf/trc_ele.hpp"
#include "starnf/trc_pen.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace starnf;
using Catch::Approx;

namespace
{

TrcQuadraticForm random_forms(std::mt19937_64 &rng, Eigen::Index n, Eigen::Index rank)
{
    TrcQuadraticForm f;
    for (int i = 0; i < 2; ++i)
    {
        f.f[i] = test::random_psd(rng, n, rank);
        f.e[i] = test::random_vector(rng, n, 2.0);
    }
    return f;
}

double amplitude_objective(double at, double ar, double bt, double br, double x)
{
    return (at - ar) * x - 2.0 * std::sqrt(x) * bt - 2.0 * std::sqrt(1.0 - x) * br;
}

// Objective change when element n takes (rho_t, theta_t, theta_r) with the others fixed.
double element_value(const ElementCoeffs &c, double rho, double th_t, double th_r)
{
    const cplx vt = std::polar(std::sqrt(rho), th_t), vr = std::polar(std::sqrt(1.0 - rho), th_r);
    return rho * c.a[0] + 2.0 * (c.b[0] * vt).real() + (1.0 - rho) * c.a[1] + 2.0 * (c.b[1] * vr).real();
}

} // namespace

TEST_CASE("element coefficients", "[trc_ele]")
{
    std::mt19937_64 rng(41);
    const TrcQuadraticForm one = random_forms(rng, 1, 1);
    const ElementCoeffs c1 = element_coeffs(0, one, TrcState::uniform(1));
    for (int i = 0; i < 2; ++i)
    {
        CHECK(std::abs(c1.b[i] + one.e[i](0)) < 1e-14);
        CHECK(c1.a[i] == Approx(one.f[i](0, 0).real()));
    }

    const TrcQuadraticForm f = random_forms(rng, 7, 4);
    TrcState dormant = TrcState::uniform(7, 0.0);
    dormant.amp_r.setZero(); // only the coupling-free read of neighbours matters here
    const ElementCoeffs c3 = element_coeffs(3, f, dormant);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(c3.b[i] + f.e[i](3)) < 1e-14);

    const TrcState s = test::random_trc(rng, 7);
    for (int t = 0; t < 50; ++t)
    {
        const std::size_t n = std::size_t(t % 7);
        const ElementCoeffs c = element_coeffs(n, f, s);
        const CVector trial = test::random_vector(rng, 2);
        double full = 0.0, local = 0.0;
        for (int i = 0; i < 2; ++i)
        {
            const Side side = i == 0 ? Side::transmit : Side::reflect;
            CVector v = s.coefficients(side);
            v(Eigen::Index(n)) = trial(i);
            full += trc_side_objective(f, side, v);
            local += std::norm(trial(i)) * c.a[i] + 2.0 * (c.b[i] * trial(i)).real() + c.c[i];
        }
        CHECK(std::abs(full - local) <= 1e-10 * std::max(1.0, std::abs(full)));
    }
    CHECK_THROWS(element_coeffs(7, f, s));
}

TEST_CASE("closed-form phase", "[trc_ele]")
{
    CHECK(optimal_phase(cplx(1.0, 0.0)) == Approx(pi));
    const double th = optimal_phase(cplx(0.0, -1.0));
    CHECK(th == Approx(1.5 * pi));
    CHECK((cplx(0.0, -1.0) * std::polar(1.0, th)).real() == Approx(-1.0));
    CHECK(optimal_phase(cplx(0.0, 0.0), 1.234) == 1.234);

    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    for (int t = 0; t < 1000; ++t)
    {
        const cplx b(g(rng), g(rng));
        const double p = optimal_phase(b);
        CHECK(p >= 0.0);
        CHECK(p < 2.0 * pi);
        const double best = (b * std::polar(1.0, p)).real();
        for (int k = 0; k < 360; ++k)
            REQUIRE(best <= (b * std::polar(1.0, 2.0 * pi * k / 360.0)).real() + 1e-12);
    }
}

TEST_CASE("bisection amplitude", "[trc_ele]")
{
    const double tol = 1e-9, rmin = 1e-6;
    CHECK(optimal_amplitude(0.7, 0.7, 0.4, 0.4, tol, rmin) == Approx(0.5).margin(1e-8));
    CHECK(optimal_amplitude(0.3, 0.1, 0.5, 0.0, tol, rmin) == 1.0 - rmin);
    CHECK(optimal_amplitude(0.1, 0.3, 0.0, 0.5, tol, rmin) == rmin);
    // Both |B| zero: linear in rho, smaller diagonal wins.
    CHECK(optimal_amplitude(0.1, 0.3, 0.0, 0.0, tol, rmin) == 1.0 - rmin);
    CHECK(optimal_amplitude(0.3, 0.1, 0.0, 0.0, tol, rmin) == rmin);

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 200; ++t)
    {
        const double at = u(rng), ar = u(rng), bt = 0.05 + u(rng), br = 0.05 + u(rng);
        const double rho = optimal_amplitude(at, ar, bt, br, tol, rmin);
        auto f = [&](double x) { return amplitude_objective(at, ar, bt, br, x); };
        const double grid = oracle::grid_minimize(f, rmin, 1.0 - rmin, 1e-5);
        CHECK(std::abs(rho - grid) <= 1e-4);
        CHECK(f(rho) <= f(grid) + 10.0 * tol);
    }
}

TEST_CASE("ELE sweeps", "[trc_ele]")
{
    std::mt19937_64 rng(44);
    const TrcQuadraticForm f = random_forms(rng, 10, 6);
    const TrcState init = test::random_trc(rng, 10);
    EleConfig cfg;
    cfg.sweeps = 0;
    const TrcState same = run_ele(f, init, cfg);
    CHECK((same.amp_t - init.amp_t).norm() == 0.0);
    CHECK((same.phase_r - init.phase_r).norm() == 0.0);

    cfg.sweeps = 1;
    TrcState cur = init;
    double prev = trc_objective(f, cur);
    for (int s = 0; s < 20; ++s)
    {
        cur = run_ele(f, cur, cfg);
        const double obj = trc_objective(f, cur);
        CHECK(obj <= prev + 1e-10 * std::abs(prev));
        CHECK(cur.coupling_violation() <= 1e-15);
        prev = obj;
    }

    // The last element updated is optimal against a coarse grid given the others.
    const ElementCoeffs c = element_coeffs(9, f, cur);
    const double at_state =
        element_value(c, cur.amp_t(9), cur.phase_t(9), cur.phase_r(9));
    double grid_best = INFINITY;
    for (int a = 0; a < 64; ++a)
        for (int p = 0; p < 64; ++p)
            for (int q = 0; q < 64; ++q)
            {
                const double rho = cfg.rho_min + (1.0 - 2.0 * cfg.rho_min) * a / 63.0;
                grid_best = std::min(grid_best, element_value(c, rho, 2.0 * pi * p / 64, 2.0 * pi * q / 64));
            }
    CHECK(at_state <= grid_best + 1e-12 * std::max(1.0, std::abs(grid_best)));
}

TEST_CASE("ELE on one element reaches the global optimum", "[trc_ele]")
{
    std::mt19937_64 rng(45);
    for (int t = 0; t < 20; ++t)
    {
        const TrcQuadraticForm f = random_forms(rng, 1, 1);
        const TrcState out = run_ele(f, test::random_trc(rng, 1), EleConfig{});
        const double at = f.f[0](0, 0).real(), ar = f.f[1](0, 0).real();
        const double bt = std::abs(f.e[0](0)), br = std::abs(f.e[1](0));
        auto obj = [&](double x) { return amplitude_objective(at, ar, bt, br, x); };
        const double grid = oracle::grid_minimize(obj, 1e-6, 1.0 - 1e-6, 1e-6);
        CHECK(trc_objective(f, out) <= obj(grid) + ar + 1e-9);
    }
}

TEST_CASE("frozen amplitudes stay put", "[trc_ele]")
{
    std::mt19937_64 rng(46);
    const TrcQuadraticForm f = random_forms(rng, 6, 3);
    const TrcState init = test::random_trc(rng, 6);
    EleConfig cfg;
    cfg.sweeps = 3;
    const TrcState out = run_ele(f, init, cfg, AmplitudeMode::frozen);
    CHECK((out.amp_t - init.amp_t).norm() == 0.0);
    CHECK((out.amp_r - init.amp_r).norm() == 0.0);
    CHECK(trc_objective(f, out) <= trc_objective(f, init));
}

TEST_CASE("ELE lands near PEN on a random 16-element model", "[trc_ele]")
{
    std::mt19937_64 rng(47);
    const TrcQuadraticForm f = random_forms(rng, 16, 16);
    const TrcState init = TrcState::uniform(16);
    EleConfig cfg;
    cfg.sweeps = 5;
    const double ele = trc_objective(f, run_ele(f, init, cfg));
    const double pen = trc_objective(f, run_pen(f, PenConfig{}, init).trc);
    CHECK(std::abs(ele - pen) <= 0.02 * std::abs(pen));
}
